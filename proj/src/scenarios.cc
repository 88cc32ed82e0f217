#include "bandits/scenarios.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "bandits/adversarial.h"
#include "bandits/bounds.h"
#include "bandits/contextual.h"
#include "bandits/convex.h"
#include "bandits/env.h"
#include "bandits/geometry.h"
#include "bandits/mirror.h"
#include "bandits/stochastic.h"

namespace bandits {

namespace {

const std::vector<std::string> kArmedEnvKeys = {"kind", "means", "arms", "eps", "seed"};
const std::vector<std::string> kConvexEnvKeys = {"family", "body", "d", "size", "scale",
                                                 "seed"};

using Overlays = std::map<std::string, Scenario::Overlay>;

Scenario::Overlay constant(double v) {
  return [v](double) { return v; };
}

// Per-round regret against a K-armed environment.
struct ArmedEnv {
  std::string kind;
  std::size_t arms = 0;
  std::vector<double> means;  // bernoulli, and lower-bound with best arm 0
  double eps = 0.0;
  std::shared_ptr<const ObliviousAdversary> matrix;

  bool stochastic() const { return !matrix; }
};

ArmedEnv make_armed_env(const ExperimentConfig& c) {
  const ParamMap& p = c.environment;
  ArmedEnv env;
  env.kind = p.str("kind", "bernoulli");
  const double n = static_cast<double>(c.horizon);
  if (env.kind == "bernoulli") {
    env.means = p.list("means");
    env.arms = env.means.size();
    for (double m : env.means) {
      if (!(m >= 0.0 && m <= 1.0)) throw std::invalid_argument("means must lie in [0,1]");
    }
  } else if (env.kind == "lower-bound") {
    env.arms = p.count("arms", 2);
    env.eps = p.num("eps", 0.25 * std::sqrt(static_cast<double>(env.arms) / std::max(n, 1.0)));
    if (!(env.eps > 0.0 && env.eps <= 1.0)) {
      throw std::invalid_argument("lower-bound environment needs eps in (0,1]");
    }
    env.means.assign(env.arms, (1.0 - env.eps) / 2.0);
    env.means[0] = (1.0 + env.eps) / 2.0;
  } else if (env.kind == "uniform") {
    env.arms = p.count("arms", 2);
    Rng rng = environment_stream(p.u64("seed", c.seed));
    std::vector<double> losses(c.horizon * env.arms);
    for (double& l : losses) l = rng.uniform();
    env.matrix = std::make_shared<ObliviousAdversary>(c.horizon, env.arms, std::move(losses));
  } else {
    throw std::invalid_argument("environment kind must be bernoulli, lower-bound or uniform");
  }
  if (env.arms < 2) throw std::invalid_argument("need at least 2 arms");
  return env;
}

std::vector<double> play_armed(Policy& policy, const ArmedEnv& env, std::size_t n,
                               Rng& rng) {
  std::vector<double> curve(n);
  if (env.matrix) {
    std::vector<double> sums(env.arms, 0.0);
    double incurred = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const std::size_t arm = policy.select(rng);
      const double loss = env.matrix->loss(t, arm);
      policy.observe(arm, loss, rng);
      incurred += loss;
      const auto row = env.matrix->row(t);
      for (std::size_t k = 0; k < env.arms; ++k) sums[k] += row[k];
      curve[t] = incurred - *std::min_element(sums.begin(), sums.end());
    }
    return curve;
  }
  const StochasticEnv e = env.kind == "lower-bound"
                              ? lower_bound_env(env.arms, env.eps, rng.index(env.arms))
                              : StochasticEnv::bernoulli(env.means);
  double regret = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t arm = policy.select(rng);
    const double reward = e.sample_reward(arm, rng);
    policy.observe(arm, 1.0 - reward, rng);
    regret += e.gap(arm);
    curve[t] = regret;
  }
  return curve;
}

void add_stochastic_overlays(Overlays& o, const ArmedEnv& env, double alpha) {
  if (!env.stochastic()) return;
  const std::vector<double> means = env.means;
  o["kl-lower"] = [means](double t) {
    return kl_lower_bound_constant(means) * std::log(std::max(t, 1.0));
  };
  if (alpha > 0.0) {
    std::vector<double> gaps;
    const double best = *std::max_element(means.begin(), means.end());
    for (double m : means) gaps.push_back(best - m);
    o["ucb"] = [gaps, alpha](double t) { return ucb_bound(alpha, gaps, std::max(t, 1.0)); };
  }
}

Scenario armed_scenario(const ExperimentConfig& c,
                        std::function<std::unique_ptr<Policy>()> factory,
                        Overlays overlays, const ArmedEnv& env) {
  factory();  // surfaces parameter errors before any replica runs
  const std::size_t n = c.horizon;
  auto shared_env = std::make_shared<const ArmedEnv>(env);
  return Scenario(
      n,
      [factory, shared_env, n](Rng& rng) {
        auto policy = factory();
        return play_armed(*policy, *shared_env, n, rng);
      },
      std::move(overlays));
}

Scenario make_ucb(const ExperimentConfig& c) {
  const ArmedEnv env = make_armed_env(c);
  const double alpha = c.policy_params.num("alpha", 2.5);
  if (!(alpha > 2.0)) throw std::invalid_argument("ucb: the regret bound needs alpha > 2");
  Overlays o;
  add_stochastic_overlays(o, env, alpha);
  const std::size_t k = env.arms;
  return armed_scenario(
      c, [k, alpha] { return std::make_unique<UcbPolicy>(k, alpha); }, std::move(o), env);
}

Scenario make_thompson(const ExperimentConfig& c) {
  const ArmedEnv env = make_armed_env(c);
  Overlays o;
  add_stochastic_overlays(o, env, 0.0);
  const std::size_t k = env.arms;
  return armed_scenario(
      c, [k] { return std::make_unique<ThompsonPolicy>(k); }, std::move(o), env);
}

Scenario make_eps_greedy(const ExperimentConfig& c) {
  const ArmedEnv env = make_armed_env(c);
  double gap = c.policy_params.num("gap", 0.0);
  if (gap <= 0.0 && env.stochastic()) {
    const double best = *std::max_element(env.means.begin(), env.means.end());
    gap = 1.0;
    for (double m : env.means) {
      if (best - m > 0.0) gap = std::min(gap, best - m);
    }
  }
  if (!(gap > 0.0 && gap <= 1.0)) {
    throw std::invalid_argument("eps-greedy: gap must be in (0,1]");
  }
  Overlays o;
  add_stochastic_overlays(o, env, 0.0);
  const std::size_t k = env.arms;
  return armed_scenario(
      c, [k, gap] { return std::make_unique<EpsGreedyPolicy>(k, gap); }, std::move(o), env);
}

Scenario make_exp3(const ExperimentConfig& c) {
  const ArmedEnv env = make_armed_env(c);
  const std::size_t k = env.arms;
  const double n = static_cast<double>(c.horizon);
  const std::string schedule = c.policy_params.str("schedule", "tuned");
  double eta = 0.0;
  bool anytime = false;
  if (schedule == "tuned") {
    eta = Exp3::tuned_eta(std::max(n, 1.0), k);
  } else if (schedule == "fixed") {
    eta = c.policy_params.num("eta");
  } else if (schedule == "anytime") {
    anytime = true;
  } else {
    throw std::invalid_argument("exp3: schedule must be tuned, fixed or anytime");
  }
  Overlays o;
  o["minimax-lower"] = constant(minimax_lower(n, k));
  if (anytime) {
    o["exp3"] = [k](double t) { return exp3_bound(t, k, true); };
  } else if (schedule == "tuned") {
    o["exp3"] = constant(exp3_bound(n, k, false));
  }
  return armed_scenario(
      c,
      [k, eta, anytime] {
        return std::make_unique<Exp3>(anytime ? Exp3::anytime(k) : Exp3::fixed(k, eta));
      },
      std::move(o), env);
}

Scenario make_exp3p(const ExperimentConfig& c) {
  const ArmedEnv env = make_armed_env(c);
  const std::size_t k = env.arms;
  const double n = static_cast<double>(std::max<std::size_t>(c.horizon, 1));
  const double delta = c.policy_params.num("delta", 0.1);
  const bool free = c.policy_params.num("delta_free", 0.0) != 0.0;
  const Exp3PParams params = exp3p_params(n, k, delta, free);
  Overlays o;
  o["exp3p"] = constant(exp3p_bound(n, k, delta));
  return armed_scenario(
      c, [k, params] { return std::make_unique<Exp3P>(k, params); }, std::move(o), env);
}

// Losses of a fixed context stream; per-round regret against the best
// context-to-arm mapping, minimized over the context columns.
class MappingComparator {
 public:
  MappingComparator(std::size_t columns, std::size_t arms)
      : arms_(arms), totals_(columns), best_(columns, 0.0) {}

  // Best total after adding round t.
  double add(const std::vector<std::string>& contexts, const std::vector<double>& losses) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < totals_.size(); ++j) {
      auto& cum = totals_[j][contexts[j]];
      if (cum.empty()) cum.assign(arms_, 0.0);
      const double before = *std::min_element(cum.begin(), cum.end());
      for (std::size_t a = 0; a < arms_; ++a) cum[a] += losses[a];
      best_[j] += *std::min_element(cum.begin(), cum.end()) - before;
      best = std::min(best, best_[j]);
    }
    return best;
  }

 private:
  std::size_t arms_;
  std::vector<std::map<std::string, std::vector<double>>> totals_;
  std::vector<double> best_;
};

std::shared_ptr<const ContextStream> context_stream(const ExperimentConfig& c,
                                                    std::size_t columns) {
  const ParamMap& p = c.environment;
  ContextStream s;
  if (p.has("path")) {
    s = load_context_stream(p.str("path", ""));
    if (s.contexts.size() < c.horizon) {
      throw std::invalid_argument("context stream has fewer rows than the horizon");
    }
  } else {
    const std::size_t values = p.count("contexts", 4);
    const std::size_t arms = p.count("arms", 3);
    if (values == 0 || arms < 2) throw std::invalid_argument("need contexts >= 1, arms >= 2");
    Rng rng = environment_stream(p.u64("seed", c.seed));
    std::vector<double> mu(values * arms);
    for (double& m : mu) m = rng.uniform();
    for (std::size_t t = 0; t < c.horizon; ++t) {
      std::vector<std::string> row;
      std::size_t first = 0;
      for (std::size_t j = 0; j < columns; ++j) {
        const std::size_t v = rng.index(values);
        if (j == 0) first = v;
        row.push_back("c" + std::to_string(v));
      }
      std::vector<double> losses(arms);
      for (std::size_t a = 0; a < arms; ++a) {
        losses[a] = rng.bernoulli(mu[first * arms + a]) ? 1.0 : 0.0;
      }
      s.contexts.push_back(std::move(row));
      s.losses.push_back(std::move(losses));
    }
  }
  if (s.contexts.empty() && c.horizon > 0) throw std::invalid_argument("empty context stream");
  return std::make_shared<const ContextStream>(std::move(s));
}

std::size_t stream_arms(const ContextStream& s) {
  return s.losses.empty() ? 0 : s.losses.front().size();
}

std::size_t distinct_contexts(const ContextStream& s, std::size_t column, std::size_t n) {
  std::map<std::string, int> seen;
  for (std::size_t t = 0; t < n; ++t) seen[s.contexts[t].at(column)] = 1;
  return std::max<std::size_t>(seen.size(), 1);
}

Scenario make_sexp3(const ExperimentConfig& c) {
  const auto stream = context_stream(c, 1);
  const std::size_t n = c.horizon;
  const std::size_t k = std::max<std::size_t>(stream_arms(*stream), 2);
  Overlays o;
  o["sexp3"] = constant(sexp3_bound(static_cast<double>(n),
                                    distinct_contexts(*stream, 0, n), k));
  return Scenario(
      n,
      [stream, n, k](Rng& rng) {
        SExp3 policy(k);
        MappingComparator best(1, k);
        std::vector<double> curve(n);
        double incurred = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
          const std::string& ctx = stream->contexts[t][0];
          const std::size_t arm = policy.select(ctx, rng);
          const double loss = stream->losses[t][arm];
          policy.observe(ctx, arm, loss);
          incurred += loss;
          curve[t] = incurred - best.add({ctx}, stream->losses[t]);
        }
        return curve;
      },
      std::move(o));
}

Scenario make_theta_exp4(const ExperimentConfig& c) {
  const std::size_t theta = c.environment.count("partitions", 3);
  if (theta == 0) throw std::invalid_argument("theta-exp4: partitions >= 1");
  const auto stream = context_stream(c, theta);
  const std::size_t n = c.horizon;
  const std::size_t k = std::max<std::size_t>(stream_arms(*stream), 2);
  const std::size_t columns = stream->contexts.empty() ? theta : stream->contexts[0].size();
  std::size_t max_s = 1;
  for (std::size_t j = 0; j < columns; ++j) {
    max_s = std::max(max_s, distinct_contexts(*stream, j, n));
  }
  const double nn = static_cast<double>(std::max<std::size_t>(n, 1));
  const double gamma = c.policy_params.num("gamma", theta_gamma(nn, max_s, k, columns));
  Overlays o;
  o["theta"] = constant(theta_bound(nn, max_s, k, columns, gamma));
  ThetaExp4 probe(columns, k, gamma);
  return Scenario(
      n,
      [stream, n, k, columns, gamma](Rng& rng) {
        ThetaExp4 policy(columns, k, gamma);
        MappingComparator best(columns, k);
        std::vector<double> curve(n);
        double incurred = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
          const std::size_t arm = policy.select(stream->contexts[t], rng);
          const double loss = stream->losses[t][arm];
          policy.observe(arm, loss);
          incurred += loss;
          curve[t] = incurred - best.add(stream->contexts[t], stream->losses[t]);
        }
        return curve;
      },
      std::move(o));
}

Scenario make_exp4(const ExperimentConfig& c) {
  const auto stream = context_stream(c, 1);
  const std::size_t n = c.horizon;
  const std::size_t k = std::max<std::size_t>(stream_arms(*stream), 2);
  const std::size_t experts = c.environment.count("experts", 8);
  if (experts < 2) throw std::invalid_argument("exp4: experts >= 2");
  // Each expert is a deterministic context-to-arm map.
  std::map<std::string, std::size_t> index;
  for (std::size_t t = 0; t < n; ++t) index.emplace(stream->contexts[t][0], index.size());
  Rng rng = environment_stream(c.environment.u64("seed", c.seed) + 1);
  auto maps = std::make_shared<std::vector<std::vector<std::size_t>>>(
      experts, std::vector<std::size_t>(index.size()));
  for (auto& m : *maps) {
    for (auto& a : m) a = rng.index(k);
  }
  auto ctx_index = std::make_shared<const std::map<std::string, std::size_t>>(std::move(index));
  const std::string schedule = c.policy_params.str("schedule", "fixed");
  const double nn = static_cast<double>(std::max<std::size_t>(n, 1));
  double gamma = 0.0;
  Overlays o;
  if (schedule == "mixing") {
    gamma = c.policy_params.num("gamma", std::min(1.0, std::sqrt(2.0 * k * std::log(experts) / nn)));
    if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("exp4: gamma in (0,1]");
    o["exp4-mixing"] = constant(exp4_mixing_bound(nn, k, experts, gamma));
  } else if (schedule == "fixed" || schedule == "anytime") {
    o["exp4"] = constant(exp4_bound(nn, k, experts));
  } else {
    throw std::invalid_argument("exp4: schedule must be fixed, anytime or mixing");
  }
  return Scenario(
      n,
      [stream, maps, ctx_index, n, k, experts, schedule, gamma](Rng& r) {
        Exp4 policy = schedule == "mixing"
                          ? Exp4::with_mixing(experts, k, gamma)
                          : Exp4(experts, k, static_cast<double>(n),
                                 schedule == "anytime" ? Exp4::Schedule::kAnytime
                                                       : Exp4::Schedule::kFixed);
        std::vector<double> expert_loss(experts, 0.0);
        std::vector<double> curve(n);
        AdviceRow advice(experts, std::vector<double>(k, 0.0));
        double incurred = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
          const std::size_t ci = ctx_index->at(stream->contexts[t][0]);
          for (std::size_t j = 0; j < experts; ++j) {
            std::fill(advice[j].begin(), advice[j].end(), 0.0);
            advice[j][(*maps)[j][ci]] = 1.0;
            expert_loss[j] += stream->losses[t][(*maps)[j][ci]];
          }
          const std::size_t arm = policy.select(advice, r);
          const double loss = stream->losses[t][arm];
          policy.observe(arm, loss);
          incurred += loss;
          curve[t] = incurred - *std::min_element(expert_loss.begin(), expert_loss.end());
        }
        return curve;
      },
      std::move(o));
}

Scenario make_banditron(const ExperimentConfig& c) {
  const ParamMap& p = c.environment;
  const std::size_t n = c.horizon;
  auto data = std::make_shared<MulticlassData>();
  double u_norm = -1.0;
  double hinge = 0.0;
  if (p.has("path")) {
    *data = load_multiclass(p.str("path", ""));
    if (static_cast<std::size_t>(data->features.rows()) < n) {
      throw std::invalid_argument("multiclass data has fewer rows than the horizon");
    }
  } else {
    const std::size_t k = p.count("classes", 9);
    const std::size_t d = p.count("dim", 20);
    const double scale = p.num("margin_scale", 2.0);
    Rng rng = environment_stream(p.u64("seed", c.seed));
    *data = make_separable_stream(k, d, n, scale, rng);
    Eigen::MatrixXd u = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k),
                                              static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < k; ++i) {
      u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = scale;
    }
    u_norm = u.norm();
    hinge = multiclass_hinge_loss(u, *data);
  }
  const std::size_t k = data->classes;
  const double nn = static_cast<double>(std::max<std::size_t>(n, 1));
  const double gamma = c.policy_params.num("gamma", Banditron::tuned_gamma(k, nn));
  Banditron probe(k, static_cast<std::size_t>(data->features.cols()), gamma);
  Overlays o;
  if (u_norm > 0.0) {
    o["banditron"] = constant(banditron_bound(k, nn, u_norm, hinge));
    o["banditron-loose"] = constant(banditron_bound_loose(k, nn, u_norm, hinge));
  }
  return Scenario(
      n,
      [data, n, k, gamma](Rng& rng) {
        const auto d = static_cast<std::size_t>(data->features.cols());
        Banditron policy(k, d, gamma);
        std::vector<double> curve(n);
        double mistakes = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
          const Eigen::VectorXd x =
              data->features.row(static_cast<Eigen::Index>(t)).transpose();
          const std::size_t y = policy.select(x, rng);
          const bool correct = y == data->labels[t];
          policy.observe(correct);
          if (!correct) mistakes += 1.0;
          curve[t] = mistakes;
        }
        return curve;
      },
      std::move(o));
}

// l_t = drift u + (1 - drift) s_t with u fixed and s_t uniform on the sphere.
std::shared_ptr<const std::vector<Eigen::VectorXd>> drifting_losses(std::size_t d,
                                                                    std::size_t n,
                                                                    double drift,
                                                                    Rng& rng) {
  if (!(drift >= 0.0 && drift <= 1.0)) throw std::invalid_argument("drift must be in [0,1]");
  const Eigen::VectorXd u = sample_sphere(d, rng);
  auto out = std::make_shared<std::vector<Eigen::VectorXd>>();
  out->reserve(n);
  for (std::size_t t = 0; t < n; ++t) {
    out->push_back(drift * u + (1.0 - drift) * sample_sphere(d, rng));
  }
  return out;
}

Scenario make_exp2(const ExperimentConfig& c) {
  const ParamMap& p = c.environment;
  const std::size_t n = c.horizon;
  const std::size_t count = p.count("points", 20);
  const std::size_t d = p.count("dim", 3);
  Rng rng = environment_stream(p.u64("seed", c.seed));
  Eigen::MatrixXd points(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < count; ++i) {
    points.row(static_cast<Eigen::Index>(i)) = sample_sphere(d, rng).transpose();
  }
  const auto losses = drifting_losses(d, n, p.num("drift", 0.5), rng);
  const double nn = static_cast<double>(std::max<std::size_t>(n, 1));
  const Exp2Params defaults = exp2_params(nn, d, count);
  const double eta = c.policy_params.num("eta", defaults.eta);
  const double gamma = c.policy_params.num("gamma", defaults.gamma);
  auto base = std::make_shared<const Exp2>(points, eta, gamma);
  Overlays o;
  o["exp2"] = constant(exp2_bound(nn, d, count));
  return Scenario(
      n,
      [base, losses, n](Rng& r) {
        Exp2 policy = *base;
        const Eigen::MatrixXd& x = policy.points();
        Eigen::VectorXd totals = Eigen::VectorXd::Zero(x.rows());
        std::vector<double> curve(n);
        double incurred = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
          const Eigen::VectorXd values = x * (*losses)[t];
          const std::size_t i = policy.select(r);
          policy.observe(i, values[static_cast<Eigen::Index>(i)]);
          incurred += values[static_cast<Eigen::Index>(i)];
          totals += values;
          curve[t] = incurred - totals.minCoeff();
        }
        return curve;
      },
      std::move(o));
}

Scenario make_osmd_msets(const ExperimentConfig& c) {
  const std::size_t n = c.horizon;
  const std::size_t d = c.environment.count("d", 6);
  const std::size_t m = c.environment.count("m", 2);
  if (m == 0 || m > d) throw std::invalid_argument("osmd-msets: need 1 <= m <= d");
  const double nn = static_cast<double>(std::max<std::size_t>(n, 1));
  const std::string potential = c.policy_params.str("potential", "power");
  const double q = c.policy_params.num("q", 2.0);
  const bool negent = potential == "negent";
  if (!negent && potential != "power") {
    throw std::invalid_argument("osmd-msets: potential must be negent or power");
  }
  if (!negent && !(q > 1.0)) throw std::invalid_argument("osmd-msets: power potential needs q > 1");
  const double eta = c.policy_params.num(
      "eta", negent ? (m < d ? osmd_negent_eta(nn, d, m) : 1.0)
                    : osmd_potential_eta(nn, d, m, q));
  Overlays o;
  if (negent) {
    o["osmd-negent"] = constant(osmd_negent_bound(nn, d, m));
  } else {
    o["osmd-potential"] = constant(osmd_potential_bound(nn, d, m, q));
  }
  return Scenario(
      n,
      [n, d, m, eta, negent, q](Rng& rng) {
        OsmdMsets policy = negent ? OsmdMsets(d, m, eta)
                                  : OsmdMsets(d, m, eta, power_potential(q));
        Eigen::VectorXd totals = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
        Eigen::VectorXd losses(static_cast<Eigen::Index>(d));
        std::vector<double> sorted(d);
        std::vector<double> curve(n);
        double incurred = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
          for (Eigen::Index i = 0; i < losses.size(); ++i) losses[i] = rng.uniform();
          const Eigen::VectorXi v = policy.select(rng);
          policy.observe(losses);
          incurred += v.cast<double>().dot(losses);
          totals += losses;
          std::copy(totals.data(), totals.data() + d, sorted.begin());
          std::partial_sort(sorted.begin(), sorted.begin() + static_cast<long>(m), sorted.end());
          double best = 0.0;
          for (std::size_t i = 0; i < m; ++i) best += sorted[i];
          curve[t] = incurred - best;
        }
        return curve;
      },
      std::move(o));
}

Scenario make_osmd_ball(const ExperimentConfig& c) {
  const std::size_t n = c.horizon;
  const std::size_t d = c.environment.count("d", 3);
  Rng rng = environment_stream(c.environment.u64("seed", c.seed));
  const auto losses = drifting_losses(d, n, c.environment.num("drift", 0.5), rng);
  const double nn = static_cast<double>(std::max<std::size_t>(n, 2));
  double eta = 0.0;
  double gamma = 0.0;
  if (c.policy_params.has("eta") || c.policy_params.has("gamma")) {
    eta = c.policy_params.num("eta");
    gamma = c.policy_params.num("gamma");
  } else {
    const BallParams bp = ball_params(nn, d);
    eta = bp.eta;
    gamma = bp.gamma;
  }
  BallOsmd probe(d, eta, gamma);
  Overlays o;
  o["osmd-ball"] = constant(ball_bound(nn, d));
  return Scenario(
      n,
      [losses, n, d, eta, gamma](Rng& r) {
        BallOsmd policy(d, eta, gamma);
        Eigen::VectorXd sum = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
        std::vector<double> curve(n);
        double incurred = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
          const BallPlay& play = policy.select(r);
          const double loss = play.point.dot((*losses)[t]);
          policy.observe(loss);
          incurred += loss;
          sum += (*losses)[t];
          curve[t] = incurred + sum.norm();
        }
        return curve;
      },
      std::move(o));
}

struct ConvexSetup {
  ConvexBody body;
  std::shared_ptr<const ConvexLossSequence> losses;
  std::shared_ptr<const std::vector<double>> best;
  double g;
  double l;
};

ConvexSetup convex_setup(const ExperimentConfig& c) {
  const ParamMap& p = c.environment;
  const std::size_t d = p.count("d", 3);
  const double size = p.num("size", 1.0);
  const std::string body_kind = p.str("body", "ball");
  ConvexBody body = body_kind == "ball"  ? ConvexBody::ball(d, size)
                    : body_kind == "box" ? ConvexBody::box(d, size)
                                         : throw std::invalid_argument("body must be ball or box");
  const std::string fam = p.str("family", "absolute");
  ConvexLossSequence::Family family;
  if (fam == "absolute") {
    family = ConvexLossSequence::Family::kAbsolute;
  } else if (fam == "linear") {
    family = ConvexLossSequence::Family::kLinear;
  } else if (fam == "quadratic") {
    family = ConvexLossSequence::Family::kQuadratic;
  } else {
    throw std::invalid_argument("family must be absolute, linear or quadratic");
  }
  Rng rng = environment_stream(p.u64("seed", c.seed));
  auto losses = std::make_shared<const ConvexLossSequence>(
      ConvexLossSequence::random(family, d, c.horizon, p.num("scale", 1.0), rng));
  auto best = std::make_shared<const std::vector<double>>(losses->best_fixed_curve(body));
  double g = losses->lipschitz(body);
  double l = losses->sup_bound(body);
  if (c.horizon == 0) g = l = 1.0;
  return {body, losses, best, g, l};
}

Scenario osgd_scenario(const ExperimentConfig& c, Osgd::Mode mode, OsgdSchedule sched,
                       const ConvexSetup& s, Overlays o) {
  const std::size_t n = c.horizon;
  Osgd probe(s.body, mode, sched);
  return Scenario(
      n,
      [s, n, mode, sched](Rng& rng) {
        Osgd policy(s.body, mode, sched);
        std::vector<double> curve(n);
        double incurred = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
          const auto f = [&](const Eigen::VectorXd& x) { return s.losses->value(t, x); };
          incurred += policy.round(f, s.g, s.l, rng).loss;
          curve[t] = incurred - (*s.best)[t];
        }
        return curve;
      },
      std::move(o));
}

Scenario make_osgd_two_point(const ExperimentConfig& c) {
  const ConvexSetup s = convex_setup(c);
  const double nn = static_cast<double>(std::max<std::size_t>(c.horizon, 1));
  OsgdSchedule sched = two_point_schedule(nn, s.body, s.g, c.policy_params.num("delta", 0.0));
  sched.eta = c.policy_params.num("eta", sched.eta);
  Overlays o;
  o["osgd-2pt"] = constant(osgd_two_point_bound(nn, s.body, s.g, sched.delta));
  return osgd_scenario(c, Osgd::Mode::kTwoPoint, sched, s, std::move(o));
}

Scenario make_osgd_one_point(const ExperimentConfig& c) {
  const ConvexSetup s = convex_setup(c);
  const double nn = static_cast<double>(std::max<std::size_t>(c.horizon, 1));
  OsgdSchedule sched = one_point_schedule(nn, s.body, s.g, s.l);
  sched.eta = c.policy_params.num("eta", sched.eta);
  sched.delta = c.policy_params.num("delta", sched.delta);
  if (!(sched.delta < s.body.r)) {
    throw std::invalid_argument("osgd-1pt: the schedule needs delta < r; increase n");
  }
  Overlays o;
  o["osgd-1pt"] = constant(osgd_one_point_bound(nn, s.body, s.g, s.l));
  return osgd_scenario(c, Osgd::Mode::kOnePoint, sched, s, std::move(o));
}

Scenario make_sgs(const ExperimentConfig& c) {
  const std::size_t n = c.horizon;
  const double minimum = c.environment.num("minimum", 0.3);
  const double center = c.environment.num("center", 0.3);
  const double slope = c.environment.num("slope", 1.0);
  const double c_l = c.policy_params.num("c_l", 1.0);
  const double c_h = c.policy_params.num("c_h", 1.0);
  const auto mu = [=](double x) {
    return std::clamp(minimum + slope * std::abs(x - center), 0.0, 1.0);
  };
  const double best = mu(std::clamp(center, 0.0, 1.0));
  const double nn = static_cast<double>(std::max<std::size_t>(n, 1));
  Overlays o;
  o["sgs"] = constant(sgs_bound(nn, c_l, c_h));
  return Scenario(
      n,
      [n, nn, c_l, mu, best](Rng& rng) {
        Sgs policy(nn, c_l);
        std::vector<double> curve(n);
        double regret = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
          const double x = policy.select();
          const double mean = mu(x);
          policy.observe(rng.bernoulli(mean) ? 1.0 : 0.0);
          regret += mean - best;
          curve[t] = regret;
        }
        return curve;
      },
      std::move(o));
}

struct Entry {
  ScenarioSchema schema;
  Scenario (*make)(const ExperimentConfig&);
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = {
      {{"ucb", "alpha-UCB with the Hoeffding psi", {"alpha"}, kArmedEnvKeys,
        {"ucb", "kl-lower"}},
       make_ucb},
      {{"thompson", "Thompson sampling with Beta(1,1) priors", {}, kArmedEnvKeys,
        {"kl-lower"}},
       make_thompson},
      {{"eps-greedy", "epsilon-greedy with eps_t = min(1, K/(d^2 t))", {"gap"},
        kArmedEnvKeys, {"kl-lower"}},
       make_eps_greedy},
      {{"exp3", "Exp3 (tuned, fixed or anytime eta)", {"schedule", "eta"}, kArmedEnvKeys,
        {"exp3", "minimax-lower"}},
       make_exp3},
      {{"exp3p", "Exp3.P high-probability variant", {"delta", "delta_free"}, kArmedEnvKeys,
        {"exp3p"}},
       make_exp3p},
      {{"sexp3", "one Exp3 per context", {}, {"path", "contexts", "arms", "seed"},
        {"sexp3"}},
       make_sexp3},
      {{"exp4", "Exp4 over deterministic experts", {"schedule", "gamma"},
        {"path", "contexts", "arms", "experts", "seed"}, {"exp4", "exp4-mixing"}},
       make_exp4},
      {{"theta-exp4", "Exp4 with mixing over S-Exp3 experts", {"gamma"},
        {"path", "contexts", "arms", "partitions", "seed"}, {"theta"}},
       make_theta_exp4},
      {{"banditron", "Banditron on a multiclass stream", {"gamma"},
        {"path", "classes", "dim", "margin_scale", "seed"}, {"banditron", "banditron-loose"}},
       make_banditron},
      {{"exp2-john", "Exp2 with D-optimal exploration", {"eta", "gamma"},
        {"points", "dim", "drift", "seed"}, {"exp2"}},
       make_exp2},
      {{"osmd-msets", "semi-bandit OSMD on m-sets", {"potential", "q", "eta"}, {"d", "m"},
        {"osmd-negent", "osmd-potential"}},
       make_osmd_msets},
      {{"osmd-ball", "OSMD on the Euclidean ball", {"eta", "gamma"}, {"d", "drift", "seed"},
        {"osmd-ball"}},
       make_osmd_ball},
      {{"osgd-2pt", "OSGD with two-point gradient estimates", {"delta", "eta"},
        kConvexEnvKeys, {"osgd-2pt"}},
       make_osgd_two_point},
      {{"osgd-1pt", "OSGD with one-point gradient estimates", {"delta", "eta"},
        kConvexEnvKeys, {"osgd-1pt"}},
       make_osgd_one_point},
      {{"sgs", "stochastic golden section search on [0,1]", {"c_l", "c_h"},
        {"minimum", "center", "slope"}, {"sgs"}},
       make_sgs},
  };
  return table;
}

}  // namespace

const std::vector<ScenarioSchema>& scenario_registry() {
  static const std::vector<ScenarioSchema> reg = [] {
    std::vector<ScenarioSchema> out;
    for (const auto& e : entries()) out.push_back(e.schema);
    return out;
  }();
  return reg;
}

const ScenarioSchema& scenario_schema(const std::string& policy) {
  for (const auto& e : entries()) {
    if (e.schema.name == policy) return e.schema;
  }
  throw std::invalid_argument("unknown policy '" + policy + "'");
}

double Scenario::overlay(const std::string& name, double t) const {
  auto it = overlays_.find(name);
  if (it == overlays_.end()) {
    throw std::invalid_argument("overlay '" + name + "' is not defined for this setup");
  }
  return it->second(t);
}

Scenario make_scenario(const ExperimentConfig& config) {
  validate_config(config);
  for (const auto& e : entries()) {
    if (e.schema.name == config.policy) {
      Scenario s = e.make(config);
      for (const auto& o : config.overlays) {
        if (!s.has_overlay(o)) {
          throw std::invalid_argument("overlay '" + o + "' is not defined for this setup");
        }
      }
      return s;
    }
  }
  throw std::invalid_argument("unknown policy '" + config.policy + "'");
}

Rng environment_stream(std::uint64_t seed) {
  return Rng(seed, std::numeric_limits<std::uint64_t>::max());
}

}  // namespace bandits
