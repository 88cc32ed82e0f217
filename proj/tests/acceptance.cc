// Acceptance runner: one PASS/FAIL line per criterion.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include "bandits/adversarial.h"
#include "bandits/bounds.h"
#include "bandits/config.h"
#include "bandits/convex.h"
#include "bandits/properties.h"
#include "bandits/rng.h"
#include "bandits/runner.h"

using namespace bandits;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

RegretReport run(const std::string& ini) { return run_experiment(parse_config(ini)); }

// mean + 2 SEM at n against the named overlay.
Outcome upper(const RegretReport& r, const std::string& overlay) {
  const double top = r.terminal_mean() + 2.0 * r.terminal_sem();
  const double b = r.overlay(overlay).values.back();
  return {top <= b, fmt("mean %.4g sem %.3g bound %.6g", r.terminal_mean(), r.terminal_sem(), b)};
}

Outcome ucb_bound() {
  const auto r = run(R"([experiment]
policy = ucb
horizon = 10000
replicas = 100
seed = 1
overlays = ucb, kl-lower
[policy]
alpha = 2.5
[environment]
kind = bernoulli
means = 0.9, 0.6
)");
  Outcome o = upper(r, "ucb");
  const double rate = r.terminal_mean() / 10000.0;
  o.pass = o.pass && rate <= 0.05;
  o.detail += fmt(", regret/n %.4f", rate);
  return o;
}

Outcome kl_constant() {
  const double c = bound("kl-constant", BoundArgs::parse({"means=0.9,0.6"}));
  return {std::abs(c - 0.9639) <= 1e-3, fmt("constant %.6f", c)};
}

Outcome exp3_oracle() {
  int worst_instance = 0;
  double worst_z = 0.0;
  bool ok = true;
  for (std::size_t n = 2; n <= 8; ++n) {
    for (int m = 0; m < 5; ++m) {
      Rng rng(1000 + n, static_cast<std::uint64_t>(m));
      std::vector<double> losses(n * 2);
      for (double& l : losses) l = rng.uniform();
      const ObliviousAdversary adv(n, 2, losses);
      const double eta = Exp3::tuned_eta(static_cast<double>(n), 2);
      const auto exact = exact_expectation_oracle(exp3_kernel(2, eta), adv, n);
      if (exact.pseudo_regret > exp3_bound(static_cast<double>(n), 2, false)) ok = false;
      const int reps = 10000;
      double sum = 0.0, sq = 0.0;
      for (int i = 0; i < reps; ++i) {
        Rng r = derive_stream(7 * n + static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(i));
        Exp3 p = Exp3::fixed(2, eta);
        double total = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
          const auto a = p.select(r);
          p.observe(a, adv.loss(t, a), r);
          total += adv.loss(t, a);
        }
        sum += total;
        sq += total * total;
      }
      const double mean = sum / reps;
      const double sem = std::sqrt((sq - reps * mean * mean) / (reps - 1.0) / reps);
      const double z = std::abs(mean - exact.expected_loss) / sem;
      if (z > worst_z) {
        worst_z = z;
        worst_instance = static_cast<int>(n * 10 + static_cast<std::size_t>(m));
      }
      if (z > 3.0) ok = false;
    }
  }
  return {ok, fmt("35 instances, worst |MC - exact| = %.2f SEM (n=%g, matrix %g)", worst_z,
                  worst_instance / 10, worst_instance % 10)};
}

Outcome exp3p_high_probability() {
  const auto r = run(R"([experiment]
policy = exp3p
horizon = 1000
replicas = 300
seed = 1
overlays = exp3p
[policy]
delta = 0.1
[environment]
kind = uniform
arms = 3
seed = 7
)");
  const double b = r.overlay("exp3p").values.back();
  const auto bad = std::count_if(r.terminal.begin(), r.terminal.end(), [&](double v) { return v > b; });
  const double frac = static_cast<double>(bad) / static_cast<double>(r.terminal.size());
  return {frac <= 0.16, fmt("violations %.4f of replicas, max regret %.4g, bound %.6g", frac,
                            *std::max_element(r.terminal.begin(), r.terminal.end()), b)};
}

Outcome minimax_lower_bound() {
  const auto r = run(R"([experiment]
policy = exp3
horizon = 400
replicas = 2000
seed = 1
overlays = minimax-lower
[policy]
schedule = tuned
[environment]
kind = lower-bound
arms = 2
)");
  const double target = minimax_lower(400, 2);
  return {r.terminal_mean() >= target - 3.0 * r.terminal_sem(),
          fmt("estimate %.4f sem %.3g, sqrt(nK)/20 = %.6f", r.terminal_mean(), r.terminal_sem(),
              target)};
}

Outcome semibandit() {
  const std::string head = R"([experiment]
policy = osmd-msets
horizon = 5000
replicas = 50
seed = 1
)";
  const auto q2 = run(head + "overlays = osmd-potential\n[policy]\npotential = power\nq = 2\n"
                             "[environment]\nd = 6\nm = 2\n");
  const auto ne = run(head + "overlays = osmd-negent\n[policy]\npotential = negent\n"
                             "[environment]\nd = 6\nm = 2\n");
  const Outcome a = upper(q2, "osmd-potential");
  const Outcome b = upper(ne, "osmd-negent");
  return {a.pass && b.pass, "q=2: " + a.detail + "; negentropy: " + b.detail};
}

Outcome ball() {
  return upper(run(R"([experiment]
policy = osmd-ball
horizon = 4000
replicas = 50
seed = 1
overlays = osmd-ball
[environment]
d = 3
drift = 0.5
seed = 13
)"),
               "osmd-ball");
}

Outcome exp2() {
  return upper(run(R"([experiment]
policy = exp2-john
horizon = 4000
replicas = 50
seed = 1
overlays = exp2
[environment]
points = 20
dim = 3
drift = 0.5
seed = 11
)"),
               "exp2");
}

const char* kOsgdEnv = R"(
[environment]
family = absolute
body = ball
d = 3
size = 1
seed = 17
)";

Outcome osgd_two_point() {
  return upper(run(std::string(R"([experiment]
policy = osgd-2pt
horizon = 2500
replicas = 50
seed = 1
overlays = osgd-2pt
[policy]
delta = 0.001
)") + kOsgdEnv),
               "osgd-2pt");
}

Outcome osgd_one_point() {
  return upper(run(std::string(R"([experiment]
policy = osgd-1pt
horizon = 2500
replicas = 50
seed = 1
overlays = osgd-1pt
)") + kOsgdEnv),
               "osgd-1pt");
}

Outcome golden_search() {
  const std::size_t n = 100000;
  const int reps = 20;
  const auto mu = [](double x) { return std::clamp(0.3 + std::abs(x - 0.3), 0.0, 1.0); };
  int contained = 0;
  double regret_sum = 0.0;
  for (int i = 0; i < reps; ++i) {
    Rng rng = derive_stream(1, static_cast<std::uint64_t>(i));
    Sgs s(static_cast<double>(n), 1.0);
    double regret = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const double x = s.select();
      const double m = mu(x);
      s.observe(rng.bernoulli(m) ? 1.0 : 0.0);
      regret += m - 0.3;
    }
    regret_sum += regret;
    if (s.bracket().a <= 0.3 && 0.3 <= s.bracket().c) ++contained;
  }
  const double mean = regret_sum / reps;
  const double b = sgs_bound(static_cast<double>(n), 1.0, 1.0);
  return {contained >= 17 && mean <= b,
          fmt("bracket holds x* in %g/20 replicas, mean regret %.6g, bound %.6g", contained,
              mean, b)};
}

Outcome banditron() {
  const std::size_t n = 100000;
  const auto r = run(R"([experiment]
policy = banditron
horizon = 100000
replicas = 4
seed = 1
overlays = banditron-loose
[environment]
classes = 9
dim = 20
margin_scale = 2
seed = 5
)");
  const double b = r.overlay("banditron-loose").values.back();
  const double tail = (r.mean[n - 1] - r.mean[n - 10001]) / 10000.0;
  const double gamma = std::cbrt(9.0 / static_cast<double>(n));
  return {r.terminal_mean() <= b && tail <= 2.0 * gamma,
          fmt("mistakes %.6g bound %.6g, tail rate %.4f vs 2 gamma %.4f", r.terminal_mean(), b,
              tail, 2.0 * gamma)};
}

Outcome property_suites() {
  bool ok = true;
  std::string failed;
  const auto results = run_property_suites(1);
  for (const auto& p : results) {
    if (!p.passed) {
      ok = false;
      failed += " " + p.name;
    }
  }
  return {ok, fmt("%g suites", static_cast<double>(results.size())) +
                  (ok ? std::string(" passed") : " failed:" + failed)};
}

struct Criterion {
  const char* name;
  std::function<Outcome()> check;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {"alpha-UCB regret bound", ucb_bound},
      {"kl lower-bound constant", kl_constant},
      {"Exp3 exact expectation oracle", exp3_oracle},
      {"Exp3.P high-probability bound", exp3p_high_probability},
      {"minimax lower-bound construction", minimax_lower_bound},
      {"semi-bandit OSMD on m-sets", semibandit},
      {"Euclidean-ball OSMD", ball},
      {"Exp2 with design exploration", exp2},
      {"two-point OSGD", osgd_two_point},
      {"one-point OSGD", osgd_one_point},
      {"stochastic golden search", golden_search},
      {"Banditron mistakes", banditron},
      {"property suites", property_suites},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0) only = std::atoi(argv[i + 1]);
  }
  const auto& all = criteria();
  if (only < 0 || only > static_cast<int>(all.size())) {
    std::fprintf(stderr, "criterion must be in 1..%zu\n", all.size());
    return 2;
  }
  int failures = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (only != 0 && static_cast<int>(i) + 1 != only) continue;
    Outcome o;
    try {
      o = all[i].check();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, all[i].name,
                o.detail.c_str());
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
