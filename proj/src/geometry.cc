#include "bandits/geometry.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace bandits {
namespace {

Eigen::VectorXd leverages(const Eigen::MatrixXd& points,
                          const Eigen::MatrixXd& design) {
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(design);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
    throw std::domain_error("design matrix is singular");
  }
  const Eigen::MatrixXd solved = ldlt.solve(points.transpose());
  return (points.transpose().array() * solved.array()).colwise().sum().transpose();
}

Eigen::MatrixXd design_matrix(const Eigen::MatrixXd& points,
                              const Eigen::VectorXd& w) {
  return points.transpose() * w.asDiagonal() * points;
}

void check_m(double m, Eigen::Index d) {
  if (!(m > 0.0) || m > static_cast<double>(d) + 1e-12) {
    throw std::invalid_argument("capped simplex: need 0 < m <= d");
  }
}

}  // namespace

Eigen::VectorXd sample_sphere(std::size_t d, Rng& rng) {
  if (d == 0) throw std::invalid_argument("sample_sphere: d >= 1");
  Eigen::VectorXd s(static_cast<Eigen::Index>(d));
  for (;;) {
    for (Eigen::Index i = 0; i < s.size(); ++i) s[i] = rng.normal();
    const double norm = s.norm();
    if (norm > 1e-300) return s / norm;
  }
}

void check_point_set(const Eigen::MatrixXd& points) {
  if (points.rows() == 0 || points.cols() == 0) {
    throw std::invalid_argument("point set is empty");
  }
  if (!points.allFinite()) throw std::invalid_argument("point set has NaN/inf");
  Eigen::FullPivLU<Eigen::MatrixXd> lu(points);
  if (lu.rank() != points.cols()) {
    throw std::invalid_argument("point set does not span R^d");
  }
}

double DesignWeights::max_leverage(const Eigen::MatrixXd& points) const {
  return leverages(points, design).maxCoeff();
}

DesignWeights doptimal_design(const Eigen::MatrixXd& points, double tol,
                              std::size_t max_iter) {
  check_point_set(points);
  const Eigen::Index n = points.rows();
  const double d = static_cast<double>(points.cols());
  Eigen::VectorXd w = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    const Eigen::MatrixXd p = design_matrix(points, w);
    const Eigen::VectorXd kappa = leverages(points, p);
    Eigen::Index up = 0;
    const double kmax = kappa.maxCoeff(&up);
    if (kmax <= d * (1.0 + tol)) return {w, p};
    Eigen::Index down = -1;
    double kmin = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (w[i] > 0.0 && kappa[i] < kmin) {
        kmin = kappa[i];
        down = i;
      }
    }
    const double gain_up = kmax / d - 1.0;
    const double gain_down = 1.0 - kmin / d;
    if (gain_up >= gain_down || down < 0 || w[down] >= 1.0) {
      const double lambda = (kmax - d) / (d * (kmax - 1.0));
      w *= 1.0 - lambda;
      w[up] += lambda;
    } else {
      const double lambda_max = w[down] / (1.0 - w[down]);
      double lambda = lambda_max;
      if (kmin > 1.0) lambda = std::min(lambda_max, (d - kmin) / (d * (kmin - 1.0)));
      w *= 1.0 + lambda;
      w[down] -= lambda;
      if (lambda == lambda_max) w[down] = 0.0;
    }
    w /= w.sum();
  }
  throw std::runtime_error("doptimal_design: no convergence");
}

Ellipsoid mvee(const Eigen::MatrixXd& points, double tol) {
  check_point_set(points);
  const Eigen::VectorXd center = points.colwise().mean().transpose();
  const Eigen::MatrixXd centered = points.rowwise() - center.transpose();
  const double scale = std::max(1.0, centered.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < centered.rows(); ++i) {
    bool mirrored = false;
    for (Eigen::Index j = 0; j < centered.rows() && !mirrored; ++j) {
      mirrored = (centered.row(i) + centered.row(j)).cwiseAbs().maxCoeff() <=
                 1e-9 * scale;
    }
    if (!mirrored) {
      throw std::invalid_argument("mvee: point set is not centrally symmetric");
    }
  }
  const DesignWeights design = doptimal_design(centered, tol);
  return {center, static_cast<double>(points.cols()) * design.design,
          design.weights};
}

PotentialSpec exp_potential() {
  PotentialSpec p;
  p.psi = [](double x) { return std::exp(x); };
  p.psi_prime = [](double x) { return std::exp(x); };
  p.psi_inv = [](double y) { return std::log(y); };
  p.psi_inv_integral = [](double x) {
    return x > 0.0 ? x * std::log(x) - x : 0.0;
  };
  p.psi_integral = [](double x) { return std::exp(x); };
  p.name = "exp";
  return p;
}

PotentialSpec power_potential(double q) {
  if (!(q > 1.0)) throw std::invalid_argument("power potential needs q > 1");
  PotentialSpec p;
  p.psi = [q](double x) {
    if (!(x < 0.0)) throw std::domain_error("power potential: x must be < 0");
    return std::pow(-x, -q);
  };
  p.psi_prime = [q](double x) {
    if (!(x < 0.0)) throw std::domain_error("power potential: x must be < 0");
    return q * std::pow(-x, -q - 1.0);
  };
  p.psi_inv = [q](double y) {
    if (!(y > 0.0)) throw std::domain_error("power potential: y must be > 0");
    return -std::pow(y, -1.0 / q);
  };
  p.psi_inv_integral = [q](double x) {
    return x > 0.0 ? -(q / (q - 1.0)) * std::pow(x, (q - 1.0) / q) : 0.0;
  };
  p.psi_integral = [q](double x) {
    if (!(x < 0.0)) throw std::domain_error("power potential: x must be < 0");
    return std::pow(-x, 1.0 - q) / (q - 1.0);
  };
  p.name = "power";
  p.q = q;
  return p;
}

double potential_bregman(const PotentialSpec& psi, const Eigen::VectorXd& y,
                         const Eigen::VectorXd& x) {
  double d = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    d += psi.psi_inv_integral(y[i]) - psi.psi_inv_integral(x[i]) -
         psi.psi_inv(x[i]) * (y[i] - x[i]);
  }
  return d;
}

Eigen::VectorXd project_capped_simplex_negent_log(const Eigen::VectorXd& log_w,
                                                  double m) {
  const Eigen::Index d = log_w.size();
  check_m(m, d);
  if (!log_w.allFinite()) {
    throw std::invalid_argument("negentropy projection: weights must be > 0");
  }
  if (m >= static_cast<double>(d)) return Eigen::VectorXd::Ones(d);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index a, Eigen::Index b) { return log_w[a] > log_w[b]; });
  // Log-sum-exp of the suffix starting at each sorted position.
  std::vector<double> suffix(static_cast<std::size_t>(d) + 1,
                             -std::numeric_limits<double>::infinity());
  for (Eigen::Index k = d - 1; k >= 0; --k) {
    const double a = suffix[static_cast<std::size_t>(k) + 1];
    const double b = log_w[order[static_cast<std::size_t>(k)]];
    const double hi = std::max(a, b);
    suffix[static_cast<std::size_t>(k)] =
        hi + std::log(std::exp(a - hi) + std::exp(b - hi));
  }
  double log_c = 0.0;
  for (Eigen::Index k = 0; k < d; ++k) {
    const double left = m - static_cast<double>(k);
    if (left <= 0.0) break;
    log_c = std::log(left) - suffix[static_cast<std::size_t>(k)];
    if (log_w[order[static_cast<std::size_t>(k)]] + log_c <= 0.0) break;
  }
  Eigen::VectorXd x(d);
  for (Eigen::Index i = 0; i < d; ++i) x[i] = std::min(1.0, std::exp(log_w[i] + log_c));
  return x;
}

Eigen::VectorXd project_capped_simplex_negent(const Eigen::VectorXd& w,
                                              double m) {
  if ((w.array() <= 0.0).any()) {
    throw std::invalid_argument("negentropy projection: weights must be > 0");
  }
  return project_capped_simplex_negent_log(w.array().log().matrix(), m);
}

Eigen::VectorXd project_capped_simplex_dual(const Eigen::VectorXd& u, double m,
                                            const PotentialSpec& psi) {
  const Eigen::Index d = u.size();
  check_m(m, d);
  if (!u.allFinite()) throw std::invalid_argument("dual point is not finite");
  if (m >= static_cast<double>(d)) return Eigen::VectorXd::Ones(d);
  const double cap = psi.psi_inv(1.0);
  auto fill = [&](double lambda, Eigen::VectorXd& x) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) {
      const double z = u[i] - lambda;
      x[i] = z >= cap ? 1.0 : psi.psi(z);
      total += x[i];
    }
    return total;
  };
  double lo = u.minCoeff() - cap;
  double hi = u.maxCoeff() - psi.psi_inv(m / static_cast<double>(d));
  Eigen::VectorXd x(d);
  if (fill(lo, x) < m - 1e-12 || fill(hi, x) > m + 1e-9) {
    throw std::runtime_error("capped projection: no root in bracket");
  }
  for (int iter = 0; iter < 400; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (fill(mid, x) > m) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  // Pick the bracket end with the smaller residual.
  Eigen::VectorXd x_lo(d);
  const double r_lo = std::abs(fill(lo, x_lo) - m);
  const double r_hi = std::abs(fill(hi, x) - m);
  return r_lo < r_hi ? x_lo : x;
}

Eigen::VectorXd project_capped_simplex_potential(const Eigen::VectorXd& w,
                                                 double m,
                                                 const PotentialSpec& psi) {
  Eigen::VectorXd u(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) u[i] = psi.psi_inv(w[i]);
  return project_capped_simplex_dual(u, m, psi);
}

Eigen::VectorXi madow_select(const Eigen::VectorXd& x, double u) {
  const Eigen::Index d = x.size();
  const double total = x.sum();
  const auto m = static_cast<Eigen::Index>(std::llround(total));
  if (std::abs(total - static_cast<double>(m)) > 1e-6 ||
      (x.array() < -1e-12).any() || (x.array() > 1.0 + 1e-12).any()) {
    throw std::invalid_argument("madow: x must lie in [0,1]^d with integer sum");
  }
  Eigen::VectorXi v = Eigen::VectorXi::Zero(d);
  Eigen::Index i = 0;
  double upper = std::max(0.0, x[0]);
  double lower = 0.0;
  Eigen::Index last = -1;
  for (Eigen::Index k = 0; k < m; ++k) {
    const double point = u + static_cast<double>(k);
    while (i + 1 < d && upper <= point) {
      lower = upper;
      ++i;
      upper = lower + std::max(0.0, x[i]);
    }
    Eigen::Index pick = i;
    while (pick <= last && pick + 1 < d) ++pick;
    while (pick < d && v[pick] == 1) ++pick;
    if (pick >= d) {
      pick = 0;
      while (v[pick] == 1) ++pick;
    }
    v[pick] = 1;
    last = pick;
  }
  return v;
}

Eigen::VectorXi madow_sample(const Eigen::VectorXd& x, Rng& rng) {
  return madow_select(x, rng.uniform());
}

std::vector<WeightedSubset> madow_outcomes(const Eigen::VectorXd& x) {
  std::vector<double> cuts = {0.0, 1.0};
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    s += x[i];
    cuts.push_back(s - std::floor(s));
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<WeightedSubset> out;
  for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
    const double len = cuts[j + 1] - cuts[j];
    if (len <= 0.0) continue;
    const Eigen::VectorXi v = madow_select(x, cuts[j] + 0.5 * len);
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const WeightedSubset& o) { return o.subset == v; });
    if (it == out.end()) {
      out.push_back({v, len});
    } else {
      it->probability += len;
    }
  }
  return out;
}

Eigen::VectorXd madow_inclusion_probabilities(const Eigen::VectorXd& x) {
  Eigen::VectorXd p = Eigen::VectorXd::Zero(x.size());
  for (const auto& o : madow_outcomes(x)) p += o.probability * o.subset.cast<double>();
  return p;
}

}  // namespace bandits
