#include "bandits/bounds.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "bandits/adversarial.h"
#include "bandits/contextual.h"
#include "bandits/convex.h"
#include "bandits/mirror.h"
#include "bandits/stochastic.h"

namespace bandits {

double BoundArgs::scalar(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw std::invalid_argument("missing argument '" + key + "'");
  if (it->second.size() != 1) {
    throw std::invalid_argument("argument '" + key + "' must be a single number");
  }
  return it->second.front();
}

double BoundArgs::scalar(const std::string& key, double fallback) const {
  return has(key) ? scalar(key) : fallback;
}

const std::vector<double>& BoundArgs::list(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw std::invalid_argument("missing argument '" + key + "'");
  return it->second;
}

BoundArgs BoundArgs::parse(const std::vector<std::string>& tokens) {
  BoundArgs args;
  for (const auto& token : tokens) {
    const auto eq = token.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw std::invalid_argument("expected key=value, got '" + token + "'");
    }
    std::vector<double> values;
    std::stringstream ss(token.substr(eq + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(item, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != item.size()) {
        throw std::invalid_argument("not a number in '" + token + "'");
      }
      values.push_back(v);
    }
    if (values.empty()) throw std::invalid_argument("no value in '" + token + "'");
    args.set(token.substr(0, eq), std::move(values));
  }
  return args;
}

namespace {

std::size_t count_arg(const BoundArgs& args, const std::string& key) {
  const double v = args.scalar(key);
  if (!(v >= 1.0) || v != std::floor(v)) {
    throw std::invalid_argument("argument '" + key + "' must be a positive integer");
  }
  return static_cast<std::size_t>(v);
}

std::vector<double> gaps_of(const std::vector<double>& means) {
  if (means.empty()) throw std::invalid_argument("means must be non-empty");
  const double best = *std::max_element(means.begin(), means.end());
  std::vector<double> gaps;
  for (double m : means) gaps.push_back(best - m);
  return gaps;
}

ConvexBody ball_body(const BoundArgs& args) {
  const double big_r = args.scalar("R", 1.0);
  const double small_r = args.scalar("r", big_r);
  if (!(small_r > 0.0) || !(big_r >= small_r)) {
    throw std::invalid_argument("need 0 < r <= R");
  }
  return {ConvexBody::Kind::kBall, count_arg(args, "d"), big_r, small_r, big_r};
}

using Evaluator = std::function<double(const BoundArgs&)>;

struct Entry {
  BoundInfo info;
  Evaluator eval;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = {
      {{"ucb", {"n", "means"}, {"alpha"}, "alpha-UCB pseudo-regret"},
       [](const BoundArgs& a) {
         const auto gaps = gaps_of(a.list("means"));
         return ucb_bound(a.scalar("alpha", 2.5), gaps, a.scalar("n"));
       }},
      {{"kl-constant", {"means"}, {}, "sum of gap / kl over suboptimal arms"},
       [](const BoundArgs& a) { return kl_lower_bound_constant(a.list("means")); }},
      {{"kl-lower", {"n", "means"}, {}, "asymptotic lower bound constant times ln n"},
       [](const BoundArgs& a) {
         return kl_lower_bound_constant(a.list("means")) * std::log(a.scalar("n"));
       }},
      {{"exp3", {"n", "K"}, {"anytime"}, "Exp3 pseudo-regret"},
       [](const BoundArgs& a) {
         return exp3_bound(a.scalar("n"), count_arg(a, "K"),
                           a.scalar("anytime", 0.0) != 0.0);
       }},
      {{"exp3p", {"n", "K", "delta"}, {}, "Exp3.P regret with probability 1 - delta"},
       [](const BoundArgs& a) {
         return exp3p_bound(a.scalar("n"), count_arg(a, "K"), a.scalar("delta"));
       }},
      {{"minimax-lower", {"n", "K"}, {}, "minimax lower bound sqrt(nK)/20"},
       [](const BoundArgs& a) { return minimax_lower(a.scalar("n"), count_arg(a, "K")); }},
      {{"sexp3", {"n", "S", "K"}, {}, "S-Exp3 with S contexts"},
       [](const BoundArgs& a) {
         return sexp3_bound(a.scalar("n"), count_arg(a, "S"), count_arg(a, "K"));
       }},
      {{"exp4", {"n", "K", "N"}, {}, "Exp4 without mixing"},
       [](const BoundArgs& a) {
         return exp4_bound(a.scalar("n"), count_arg(a, "K"), count_arg(a, "N"));
       }},
      {{"exp4-mixing", {"n", "K", "N", "gamma"}, {}, "Exp4 with mixing"},
       [](const BoundArgs& a) {
         return exp4_mixing_bound(a.scalar("n"), count_arg(a, "K"), count_arg(a, "N"),
                                  a.scalar("gamma"));
       }},
      {{"theta", {"n", "S", "K", "theta"}, {"gamma"}, "Exp4 over S-Exp3 experts"},
       [](const BoundArgs& a) {
         const double n = a.scalar("n");
         const auto s = count_arg(a, "S");
         const auto k = count_arg(a, "K");
         const auto th = count_arg(a, "theta");
         const double g = a.scalar("gamma", theta_gamma(n, s, k, th));
         return theta_bound(n, s, k, th, g);
       }},
      {{"banditron", {"K", "n", "U"}, {"hinge"}, "Banditron expected mistakes"},
       [](const BoundArgs& a) {
         return banditron_bound(count_arg(a, "K"), a.scalar("n"), a.scalar("U"),
                                a.scalar("hinge", 0.0));
       }},
      {{"banditron-loose", {"K", "n", "U"}, {"hinge"},
        "Banditron mistakes, looser closed form"},
       [](const BoundArgs& a) {
         return banditron_bound_loose(count_arg(a, "K"), a.scalar("n"), a.scalar("U"),
                                      a.scalar("hinge", 0.0));
       }},
      {{"exp2", {"n", "d", "N"}, {}, "Exp2 with D-optimal exploration"},
       [](const BoundArgs& a) {
         return exp2_bound(a.scalar("n"), count_arg(a, "d"), count_arg(a, "N"));
       }},
      {{"osmd-negent", {"n", "d", "m"}, {}, "semi-bandit OSMD, negative entropy"},
       [](const BoundArgs& a) {
         return osmd_negent_bound(a.scalar("n"), count_arg(a, "d"), count_arg(a, "m"));
       }},
      {{"osmd-potential", {"n", "d", "m"}, {"q"}, "semi-bandit OSMD, power potential"},
       [](const BoundArgs& a) {
         return osmd_potential_bound(a.scalar("n"), count_arg(a, "d"), count_arg(a, "m"),
                                     a.scalar("q", 2.0));
       }},
      {{"osmd-ball", {"n", "d"}, {}, "OSMD on the Euclidean ball"},
       [](const BoundArgs& a) { return ball_bound(a.scalar("n"), count_arg(a, "d")); }},
      {{"osgd-2pt", {"n", "d", "G"}, {"R", "r", "delta"}, "two-point OSGD"},
       [](const BoundArgs& a) {
         const auto body = ball_body(a);
         const double n = a.scalar("n");
         const double delta = a.scalar("delta", std::min(body.r / 2.0, 1.0 / n));
         return osgd_two_point_bound(n, body, a.scalar("G"), delta);
       }},
      {{"osgd-1pt", {"n", "d", "G", "L"}, {"R", "r"}, "one-point OSGD"},
       [](const BoundArgs& a) {
         return osgd_one_point_bound(a.scalar("n"), ball_body(a), a.scalar("G"),
                                     a.scalar("L"));
       }},
      {{"sgs", {"n"}, {"C_L", "C_H"}, "stochastic golden section search"},
       [](const BoundArgs& a) {
         return sgs_bound(a.scalar("n"), a.scalar("C_L", 1.0), a.scalar("C_H", 1.0));
       }},
  };
  return table;
}

}  // namespace

const std::vector<BoundInfo>& bound_catalog() {
  static const std::vector<BoundInfo> catalog = [] {
    std::vector<BoundInfo> out;
    for (const auto& e : entries()) out.push_back(e.info);
    return out;
  }();
  return catalog;
}

double bound(const std::string& name, const BoundArgs& args) {
  for (const auto& e : entries()) {
    if (e.info.name != name) continue;
    for (const auto& [key, value] : args.values()) {
      const auto& req = e.info.required;
      const auto& opt = e.info.optional;
      if (std::find(req.begin(), req.end(), key) == req.end() &&
          std::find(opt.begin(), opt.end(), key) == opt.end()) {
        throw std::invalid_argument("bound '" + name + "' has no argument '" + key + "'");
      }
    }
    return e.eval(args);
  }
  throw std::invalid_argument("unknown bound '" + name + "'");
}

}  // namespace bandits
