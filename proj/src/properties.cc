#include "bandits/properties.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bandits/adversarial.h"
#include "bandits/contextual.h"
#include "bandits/convex.h"
#include "bandits/geometry.h"
#include "bandits/mirror.h"
#include "bandits/rng.h"

namespace bandits {

namespace {

std::vector<double> random_simplex(std::size_t k, Rng& rng) {
  std::vector<double> p(k);
  double sum = 0.0;
  for (double& v : p) {
    v = 0.05 + rng.uniform();
    sum += v;
  }
  for (double& v : p) v /= sum;
  return p;
}

// Random fractional point of the capped simplex with sum m.
Eigen::VectorXd random_capped(std::size_t d, std::size_t m, Rng& rng) {
  Eigen::VectorXd w(static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = 0.05 + rng.uniform();
  return project_capped_simplex_negent(w, static_cast<double>(m));
}

PropertyResult finish(const std::string& name, double worst, double tol,
                      const std::string& what) {
  std::ostringstream d;
  d << what << ": worst " << worst << " (tol " << tol << ")";
  return {name, worst <= tol, worst, d.str()};
}

PropertyResult exp3_unbiased(Rng& rng) {
  double worst = 0.0;
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t k = 2 + rng.index(5);
    const auto p = random_simplex(k, rng);
    std::vector<double> loss(k);
    for (double& l : loss) l = rng.uniform();
    std::vector<double> mean(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
      const auto est = importance_loss_estimate(p, i, loss[i]);
      for (std::size_t j = 0; j < k; ++j) mean[j] += p[i] * est[j];
    }
    for (std::size_t j = 0; j < k; ++j) worst = std::max(worst, std::abs(mean[j] - loss[j]));
  }
  return finish("exp3-estimator-unbiased", worst, 1e-12, "E[l~] - l");
}

PropertyResult exp3p_unbiased(Rng& rng) {
  double worst = 0.0;
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t k = 2 + rng.index(5);
    const auto p = random_simplex(k, rng);
    const double beta = 0.1 * rng.uniform();
    std::vector<double> gain(k);
    for (double& g : gain) g = rng.uniform();
    std::vector<double> mean(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
      const auto est = exp3p_gain_estimate(p, i, gain[i], beta);
      for (std::size_t j = 0; j < k; ++j) mean[j] += p[i] * est[j];
    }
    for (std::size_t j = 0; j < k; ++j) {
      worst = std::max(worst, std::abs(mean[j] - (gain[j] + beta / p[j])));
    }
  }
  return finish("exp3p-estimator-bias", worst, 1e-12, "E[g~_i] - (g_i + beta/p_i)");
}

PropertyResult exp4_unbiased(Rng& rng) {
  double worst = 0.0;
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t k = 2 + rng.index(4);
    const std::size_t n_exp = 2 + rng.index(4);
    AdviceRow advice;
    for (std::size_t j = 0; j < n_exp; ++j) advice.push_back(random_simplex(k, rng));
    const auto q = random_simplex(n_exp, rng);
    const double gamma = 0.5 * rng.uniform();
    const auto p = exp4_arm_probs(q, advice, gamma);
    std::vector<double> loss(k);
    for (double& l : loss) l = rng.uniform();
    std::vector<double> mean(n_exp, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
      const auto y = expert_loss_estimates(advice, importance_loss_estimate(p, i, loss[i]));
      for (std::size_t j = 0; j < n_exp; ++j) mean[j] += p[i] * y[j];
    }
    for (std::size_t j = 0; j < n_exp; ++j) {
      double truth = 0.0;
      for (std::size_t i = 0; i < k; ++i) truth += advice[j][i] * loss[i];
      worst = std::max(worst, std::abs(mean[j] - truth));
    }
  }
  return finish("exp4-estimator-unbiased", worst, 1e-12, "E[y~_j] - <xi_j, l>");
}

PropertyResult semibandit_unbiased(Rng& rng) {
  double worst = 0.0;
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t d = 2 + rng.index(5);
    const std::size_t m = 1 + rng.index(d - 1);
    const Eigen::VectorXd x = random_capped(d, m, rng);
    Eigen::VectorXd loss(x.size());
    for (Eigen::Index i = 0; i < loss.size(); ++i) loss[i] = rng.uniform();
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(x.size());
    for (const auto& o : madow_outcomes(x)) {
      mean += o.probability * semibandit_estimate(x, o.subset, loss);
    }
    worst = std::max(worst, (mean - loss).cwiseAbs().maxCoeff());
  }
  return finish("semibandit-estimator-unbiased", worst, 1e-12, "E[l~] - l over Madow draws");
}

PropertyResult ball_unbiased(Rng& rng) {
  double worst = 0.0;
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t d = 2 + rng.index(4);
    const Eigen::VectorXd x = 0.95 * rng.uniform() * sample_sphere(d, rng);
    const Eigen::VectorXd l = rng.uniform() * sample_sphere(d, rng);
    const double norm = x.norm();
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(x.size());
    if (norm > 0.0) {
      BallPlay play{x / norm, true};
      mean += norm * ball_estimate(x, play, play.point.dot(l));
    }
    for (std::size_t i = 0; i < d; ++i) {
      for (int s : {-1, 1}) {
        BallPlay play{Eigen::VectorXd::Zero(x.size()), false};
        play.point[static_cast<Eigen::Index>(i)] = s;
        const double prob = (1.0 - norm) / (2.0 * static_cast<double>(d));
        mean += prob * ball_estimate(x, play, play.point.dot(l));
      }
    }
    worst = std::max(worst, (mean - l).cwiseAbs().maxCoeff());
  }
  return finish("ball-estimator-unbiased", worst, 1e-12, "E[l~] - l over the ball sampler");
}

PropertyResult legendre_inverse(Rng& rng) {
  double worst = 0.0;
  const std::vector<LegendreSpec> specs = {negentropy_capped(1.0),
                                           potential_capped(exp_potential(), 1.0),
                                           potential_capped(power_potential(2.0), 1.0),
                                           potential_capped(power_potential(3.0), 1.0),
                                           euclidean_ball(1.0), ball_barrier(0.9)};
  for (const auto& spec : specs) {
    const bool ball = spec.name == "euclidean" || spec.name == "ball-barrier";
    for (int rep = 0; rep < 500; ++rep) {
      const std::size_t d = 1 + rng.index(6);
      Eigen::VectorXd x(static_cast<Eigen::Index>(d));
      if (ball) {
        x = 0.999 * rng.uniform() * sample_sphere(d, rng);
      } else {
        for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = 1e-3 + 2.0 * rng.uniform();
      }
      const Eigen::VectorXd back = spec.grad_f_star(spec.grad_f(x));
      worst = std::max(worst, (back - x).cwiseAbs().maxCoeff() / std::max(1.0, x.norm()));
    }
  }
  return finish("legendre-gradient-inverse", worst, 1e-9, "|grad F*(grad F(x)) - x|");
}

PropertyResult pythagorean(Rng& rng) {
  double worst = 0.0;
  for (int rep = 0; rep < 1000; ++rep) {
    const std::size_t d = 2 + rng.index(6);
    const std::size_t m = 1 + rng.index(d - 1);
    LegendreSpec spec;
    Eigen::VectorXd x, y;
    switch (rep % 4) {
      case 0:
      case 1:
        spec = rep % 4 == 0 ? negentropy_capped(static_cast<double>(m))
                            : potential_capped(power_potential(2.0), static_cast<double>(m));
        x = random_capped(d, m, rng);
        y.resize(static_cast<Eigen::Index>(d));
        for (Eigen::Index i = 0; i < y.size(); ++i) y[i] = 1e-2 + 2.0 * rng.uniform();
        break;
      case 2:
        spec = euclidean_ball(0.7);
        x = 0.7 * rng.uniform() * sample_sphere(d, rng);
        y = 3.0 * rng.uniform() * sample_sphere(d, rng);
        break;
      default:
        spec = ball_barrier(0.7);
        x = 0.7 * rng.uniform() * sample_sphere(d, rng);
        y = 0.999 * rng.uniform() * sample_sphere(d, rng);
        break;
    }
    const Eigen::VectorXd proj = bregman_project(spec, y);
    const double lhs = bregman(spec, x, proj) + bregman(spec, proj, y);
    const double rhs = bregman(spec, x, y);
    worst = std::max(worst, (lhs - rhs) / std::max(1.0, std::abs(rhs)));
  }
  return finish("generalized-pythagorean", worst, 1e-9,
                "D(x,P(y)) + D(P(y),y) - D(x,y) over 1000 instances");
}

PropertyResult kiefer_wolfowitz(Rng& rng) {
  double worst = 0.0;
  double low = 0.0;
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t d = 2 + rng.index(4);
    const std::size_t n = d + 2 + rng.index(20);
    Eigen::MatrixXd pts(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < n; ++i) {
      pts.row(static_cast<Eigen::Index>(i)) =
          (0.2 + rng.uniform()) * sample_sphere(d, rng).transpose();
    }
    const DesignWeights w = doptimal_design(pts, 1e-3);
    const double lev = w.max_leverage(pts);
    const double dd = static_cast<double>(d);
    worst = std::max(worst, lev / dd - 1.0);
    low = std::max(low, dd - lev);
  }
  const bool ok = worst <= 1e-3 && low <= 1e-9;
  std::ostringstream d;
  d << "max leverage / d - 1: worst " << worst << " (tol 1e-3), d - max leverage: " << low;
  return {"kiefer-wolfowitz-certificate", ok, std::max(worst, low), d.str()};
}

PropertyResult madow_exact(Rng& rng) {
  double worst = 0.0;
  for (int rep = 0; rep < 300; ++rep) {
    const std::size_t d = 2 + rng.index(5);
    const std::size_t m = 1 + rng.index(d - 1);
    const Eigen::VectorXd x = random_capped(d, m, rng);
    worst = std::max(worst, (madow_inclusion_probabilities(x) - x).cwiseAbs().maxCoeff());
    Eigen::VectorXd marg = Eigen::VectorXd::Zero(x.size());
    double total = 0.0;
    for (const auto& o : madow_outcomes(x)) {
      marg += o.probability * o.subset.cast<double>();
      total += o.probability;
      if (o.subset.sum() != static_cast<int>(m)) worst = 1.0;
    }
    worst = std::max(worst, (marg - x).cwiseAbs().maxCoeff());
    worst = std::max(worst, std::abs(total - 1.0));
  }
  return finish("madow-inclusion-exact", worst, 1e-12, "|P(i in S) - x_i| for d <= 6");
}

PropertyResult exp3_omd_agreement(Rng& rng) {
  std::size_t mismatches = 0;
  double generic = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t k = 2 + rng.index(5);
    const double eta = 0.01 + rng.uniform();
    Exp3 exp3 = Exp3::fixed(k, eta);
    NegentropySimplexOmd omd(k, eta);
    const LegendreSpec spec = negentropy_capped(1.0);
    Eigen::VectorXd x = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(k), 1.0 / k);
    for (int t = 0; t < 100; ++t) {
      const std::size_t arm = rng.categorical(exp3.probabilities());
      const auto est = importance_loss_estimate(exp3.probabilities(), arm, rng.uniform());
      exp3.apply_estimate(est);
      const Eigen::VectorXd g = Eigen::Map<const Eigen::VectorXd>(est.data(), est.size());
      omd.step(g);
      if (omd.point() != exp3.probabilities()) ++mismatches;
      x = omd_step(spec, x, g, eta);
      for (std::size_t i = 0; i < k; ++i) {
        generic = std::max(generic,
                           std::abs(x[static_cast<Eigen::Index>(i)] - exp3.probabilities()[i]));
      }
    }
  }
  std::ostringstream d;
  d << "bitwise mismatches " << mismatches << " of 5000 rounds; generic OMD step max gap "
    << generic << " (tol 1e-12)";
  return {"exp3-omd-bitwise", mismatches == 0 && generic <= 1e-12, generic, d.str()};
}

PropertyResult sgs_golden(Rng& rng) {
  double worst = 0.0;
  for (int rep = 0; rep < 10; ++rep) {
    Sgs sgs(1e6, 1.0);
    for (std::size_t stage = 1; stage <= 5; ++stage) {
      const auto& p = sgs.points();
      const double len = p[3] - p[0];
      const double expect = std::pow(kPhi, -static_cast<double>(stage - 1));
      worst = std::max(worst, std::abs(len - expect));
      // Inner points sit at 1/phi^2 and 1/phi of the bracket.
      worst = std::max(worst, std::abs((p[1] - p[0]) / len - 1.0 / (kPhi * kPhi)));
      worst = std::max(worst, std::abs((p[2] - p[0]) / len - 1.0 / kPhi));
      std::array<double, 4> totals{};
      for (double& t : totals) t = rng.uniform();
      const SgsBracket next = sgs_eliminate(p, totals);
      worst = std::max(worst, std::abs((next.c - next.a) / len - 1.0 / kPhi));
      // Drive the live object through the same elimination.
      const std::size_t plays = sgs_stage_plan(stage, 1.0, 1e6).plays_per_point;
      const std::size_t best = static_cast<std::size_t>(
          std::min_element(totals.begin(), totals.end()) - totals.begin());
      for (std::size_t k = 0; k < 4 * plays; ++k) {
        const std::size_t slot = k % 4;
        sgs.select();
        sgs.observe(slot == best ? 0.0 : 1.0);
      }
      worst = std::max(worst, std::abs(sgs.bracket().a - next.a));
      worst = std::max(worst, std::abs(sgs.bracket().c - next.c));
    }
  }
  return finish("sgs-golden-ratios", worst, 1e-12, "bracket length and ratio identities");
}

}  // namespace

std::vector<PropertyResult> run_property_suites(std::uint64_t seed) {
  Rng rng(seed, 0x5e1f7e57ULL);
  return {exp3_unbiased(rng),   exp3p_unbiased(rng),   exp4_unbiased(rng),
          semibandit_unbiased(rng), ball_unbiased(rng), legendre_inverse(rng),
          pythagorean(rng),     kiefer_wolfowitz(rng), madow_exact(rng),
          exp3_omd_agreement(rng), sgs_golden(rng)};
}

}  // namespace bandits
