#include "bandits/mirror.h"

#include <cmath>
#include <stdexcept>

#include "bandits/adversarial.h"

namespace bandits {
namespace {

Eigen::VectorXd radial(const Eigen::VectorXd& w, double radius) {
  const double norm = w.norm();
  return norm > radius ? Eigen::VectorXd(w * (radius / norm)) : w;
}

void check_capped(double m, std::size_t d) {
  if (d == 0 || m < 1.0 || m > static_cast<double>(d)) {
    throw std::invalid_argument("m-sets need 1 <= m <= d");
  }
}

}  // namespace

double bregman(const LegendreSpec& spec, const Eigen::VectorXd& y,
               const Eigen::VectorXd& x) {
  return spec.f(y) - spec.f(x) - spec.grad_f(x).dot(y - x);
}

Eigen::VectorXd bregman_project(const LegendreSpec& spec,
                                const Eigen::VectorXd& w) {
  return spec.project_dual(spec.grad_f(w));
}

LegendreSpec negentropy_capped(double m) {
  LegendreSpec s;
  s.f = [](const Eigen::VectorXd& x) {
    double v = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (x[i] > 0.0) v += x[i] * std::log(x[i]);
      v -= x[i];
    }
    return v;
  };
  s.grad_f = [](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return x.array().log().matrix();
  };
  s.grad_f_star = [](const Eigen::VectorXd& u) -> Eigen::VectorXd {
    return u.array().exp().matrix();
  };
  s.in_dual_domain = [](const Eigen::VectorXd& u) { return u.allFinite(); };
  s.project_dual = [m](const Eigen::VectorXd& u) {
    return project_capped_simplex_negent_log(u, m);
  };
  s.name = "negentropy";
  return s;
}

LegendreSpec potential_capped(const PotentialSpec& psi, double m) {
  LegendreSpec s;
  s.f = [psi](const Eigen::VectorXd& x) {
    double v = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) v += psi.psi_inv_integral(x[i]);
    return v;
  };
  s.grad_f = [psi](const Eigen::VectorXd& x) {
    Eigen::VectorXd u(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) u[i] = psi.psi_inv(x[i]);
    return u;
  };
  s.grad_f_star = [psi](const Eigen::VectorXd& u) {
    Eigen::VectorXd x(u.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) x[i] = psi.psi(u[i]);
    return x;
  };
  const bool negative_only = psi.q > 0.0;
  s.in_dual_domain = [negative_only](const Eigen::VectorXd& u) {
    return u.allFinite() && (!negative_only || (u.array() < 0.0).all());
  };
  s.project_dual = [psi, m](const Eigen::VectorXd& u) {
    return project_capped_simplex_dual(u, m, psi);
  };
  s.name = "potential-" + psi.name;
  return s;
}

LegendreSpec euclidean_ball(double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("ball radius must be > 0");
  LegendreSpec s;
  s.f = [](const Eigen::VectorXd& x) { return 0.5 * x.squaredNorm(); };
  s.grad_f = [](const Eigen::VectorXd& x) { return x; };
  s.grad_f_star = [](const Eigen::VectorXd& u) { return u; };
  s.in_dual_domain = [](const Eigen::VectorXd& u) { return u.allFinite(); };
  s.project_dual = [radius](const Eigen::VectorXd& u) { return radial(u, radius); };
  s.name = "euclidean";
  return s;
}

Eigen::VectorXd ball_grad(const Eigen::VectorXd& x) {
  const double norm = x.norm();
  if (!(norm < 1.0)) throw std::domain_error("ball_grad: |x| must be < 1");
  return x / (1.0 - norm);
}

Eigen::VectorXd ball_grad_star(const Eigen::VectorXd& u) {
  return u / (1.0 + u.norm());
}

LegendreSpec ball_barrier(double radius) {
  if (!(radius > 0.0 && radius < 1.0)) {
    throw std::invalid_argument("ball barrier radius must be in (0,1)");
  }
  LegendreSpec s;
  s.f = [](const Eigen::VectorXd& x) {
    const double norm = x.norm();
    if (!(norm < 1.0)) throw std::domain_error("ball barrier: |x| must be < 1");
    return -std::log1p(-norm) - norm;
  };
  s.grad_f = ball_grad;
  s.grad_f_star = ball_grad_star;
  s.in_dual_domain = [](const Eigen::VectorXd& u) { return u.allFinite(); };
  s.project_dual = [radius](const Eigen::VectorXd& u) {
    return radial(ball_grad_star(u), radius);
  };
  s.name = "ball-barrier";
  return s;
}

Eigen::VectorXd omd_step(const LegendreSpec& spec, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& gradient, double eta) {
  if (gradient.size() != x.size()) {
    throw std::invalid_argument("omd_step: gradient has wrong dimension");
  }
  const Eigen::VectorXd u = spec.grad_f(x) - eta * gradient;
  if (!spec.in_dual_domain(u)) {
    throw std::domain_error("omd_step: consistency condition violated");
  }
  return spec.project_dual(u);
}

NegentropySimplexOmd::NegentropySimplexOmd(std::size_t dim, double eta)
    : eta_(eta),
      gradient_sum_(dim, 0.0),
      x_(dim, 1.0 / static_cast<double>(dim)) {
  if (dim == 0) throw std::invalid_argument("simplex OMD: dim >= 1");
  if (!(eta > 0.0)) throw std::invalid_argument("simplex OMD: eta > 0");
}

void NegentropySimplexOmd::step(const Eigen::VectorXd& gradient) {
  if (static_cast<std::size_t>(gradient.size()) != gradient_sum_.size()) {
    throw std::invalid_argument("simplex OMD: gradient has wrong dimension");
  }
  for (std::size_t i = 0; i < gradient_sum_.size(); ++i) {
    gradient_sum_[i] += gradient[static_cast<Eigen::Index>(i)];
  }
  x_ = exp3_probs(gradient_sum_, eta_);
}

Exp2Params exp2_params(double n, std::size_t dim, std::size_t points) {
  const double eta = std::sqrt(std::log(static_cast<double>(points)) /
                               (3.0 * n * static_cast<double>(dim)));
  return {eta, eta * static_cast<double>(dim)};
}

Exp2::Exp2(Eigen::MatrixXd points, double eta, double gamma, double design_tol)
    : points_(std::move(points)),
      eta_(eta),
      gamma_(gamma),
      design_(doptimal_design(points_, design_tol)),
      cumulative_(Eigen::VectorXd::Zero(points_.cols())) {
  if (!(eta >= 0.0)) throw std::invalid_argument("Exp2: eta must be >= 0");
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("Exp2: gamma must be in (0,1]");
  }
  probs_ = probabilities();
}

Eigen::VectorXd Exp2::probabilities() const {
  const Eigen::VectorXd scores = -eta_ * (points_ * cumulative_);
  const double top = scores.maxCoeff();
  Eigen::VectorXd p = (scores.array() - top).exp().matrix();
  p /= p.sum();
  return (1.0 - gamma_) * p + gamma_ * design_.weights;
}

Eigen::MatrixXd Exp2::design_matrix() const {
  return points_.transpose() * probs_.asDiagonal() * points_;
}

Eigen::VectorXd Exp2::estimate(std::size_t played, double scalar_loss) const {
  if (played >= size()) throw std::out_of_range("Exp2: played index");
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(design_matrix());
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
    throw std::domain_error("Exp2: singular design matrix");
  }
  const Eigen::VectorXd x = points_.row(static_cast<Eigen::Index>(played)).transpose();
  return ldlt.solve(x) * scalar_loss;
}

std::size_t Exp2::select(Rng& rng) {
  return rng.categorical(std::span<const double>(probs_.data(), probs_.size()));
}

void Exp2::observe(std::size_t played, double scalar_loss) {
  cumulative_ += estimate(played, scalar_loss);
  probs_ = probabilities();
}

Eigen::VectorXd semibandit_estimate(const Eigen::VectorXd& x,
                                    const Eigen::VectorXi& v,
                                    const Eigen::VectorXd& losses,
                                    double floor) {
  if (x.size() != v.size() || x.size() != losses.size()) {
    throw std::invalid_argument("semibandit_estimate: dimension mismatch");
  }
  Eigen::VectorXd est = Eigen::VectorXd::Zero(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (v[i] == 0) continue;
    if (x[i] < floor) {
      throw std::domain_error("semibandit_estimate: active coordinate below floor");
    }
    est[i] = losses[i] / x[i];
  }
  return est;
}

double osmd_negent_eta(double n, std::size_t d, std::size_t m) {
  const double dd = static_cast<double>(d);
  const double mm = static_cast<double>(m);
  return std::sqrt(2.0 * mm / (n * dd) * std::log(dd / mm));
}

double osmd_potential_eta(double n, std::size_t d, std::size_t m, double q) {
  const double ratio = static_cast<double>(m) / static_cast<double>(d);
  return std::sqrt(2.0 / ((q - 1.0) * n) * std::pow(ratio, 1.0 - 2.0 / q));
}

OsmdMsets::OsmdMsets(std::size_t d, std::size_t m, double eta)
    : m_(m), eta_(eta), negentropy_(true) {
  check_capped(static_cast<double>(m), d);
  if (!(eta >= 0.0)) throw std::invalid_argument("OSMD: eta must be >= 0");
  x_ = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(d),
                                 static_cast<double>(m) / static_cast<double>(d));
}

OsmdMsets::OsmdMsets(std::size_t d, std::size_t m, double eta, PotentialSpec psi)
    : OsmdMsets(d, m, eta) {
  negentropy_ = false;
  psi_ = std::move(psi);
}

Eigen::VectorXi OsmdMsets::select(Rng& rng) {
  v_ = madow_sample(x_, rng);
  return v_;
}

void OsmdMsets::observe(const Eigen::VectorXd& losses) {
  if (v_.size() != x_.size()) throw std::logic_error("OSMD: observe before select");
  if ((losses.array() < 0.0).any()) {
    throw std::invalid_argument("OSMD: losses must be non-negative");
  }
  if (m_ == static_cast<std::size_t>(x_.size())) return;
  const Eigen::VectorXd est = semibandit_estimate(x_, v_, losses);
  const double m = static_cast<double>(m_);
  if (negentropy_) {
    x_ = project_capped_simplex_negent_log(x_.array().log().matrix() - eta_ * est, m);
  } else {
    Eigen::VectorXd u(x_.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      u[i] = psi_.psi_inv(x_[i]) - eta_ * est[i];
    }
    x_ = project_capped_simplex_dual(u, m, psi_);
  }
  x_ = x_.cwiseMax(1e-12);
}

BallParams ball_params(double n, std::size_t d) {
  const double dd = static_cast<double>(d);
  BallParams p{1.0 / std::sqrt(n), std::sqrt(std::log(n) / (2.0 * n * dd))};
  if (p.eta * dd > 0.5) {
    throw std::invalid_argument(
        "ball OSMD: eta * d must not exceed 1/2 for the regret guarantee");
  }
  return p;
}

Eigen::VectorXd ball_estimate(const Eigen::VectorXd& x, const BallPlay& play,
                              double scalar_loss) {
  if (play.xi) return Eigen::VectorXd::Zero(x.size());
  const double norm = x.norm();
  if (!(norm < 1.0)) throw std::domain_error("ball_estimate: |x| must be < 1");
  return static_cast<double>(x.size()) * scalar_loss / (1.0 - norm) * play.point;
}

BallOsmd::BallOsmd(std::size_t d, double eta, double gamma)
    : eta_(eta),
      spec_(ball_barrier(1.0 - gamma)),
      x_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d))) {
  if (d == 0) throw std::invalid_argument("ball OSMD: d >= 1");
  if (!(eta > 0.0) || eta * static_cast<double>(d) > 0.5) {
    throw std::invalid_argument("ball OSMD: need eta > 0 and eta * d <= 1/2");
  }
}

const BallPlay& BallOsmd::select(Rng& rng) {
  const double norm = x_.norm();
  play_.xi = rng.bernoulli(norm);
  if (play_.xi) {
    play_.point = x_ / norm;
  } else {
    play_.point = Eigen::VectorXd::Zero(x_.size());
    const auto i = static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(x_.size())));
    play_.point[i] = rng.rademacher();
  }
  return play_;
}

void BallOsmd::observe(double scalar_loss) {
  if (play_.point.size() != x_.size()) {
    throw std::logic_error("ball OSMD: observe before select");
  }
  x_ = omd_step(spec_, x_, ball_estimate(x_, play_, scalar_loss), eta_);
}

double exp2_bound(double n, std::size_t d, std::size_t points) {
  return 2.0 * std::sqrt(3.0 * n * static_cast<double>(d) *
                         std::log(static_cast<double>(points)));
}

double osmd_negent_bound(double n, std::size_t d, std::size_t m) {
  const double dd = static_cast<double>(d);
  const double mm = static_cast<double>(m);
  return std::sqrt(2.0 * mm * dd * n * std::log(dd / mm));
}

double osmd_potential_bound(double n, std::size_t d, std::size_t m, double q) {
  return q * std::sqrt(2.0 / (q - 1.0) * static_cast<double>(m) *
                       static_cast<double>(d) * n);
}

double ball_bound(double n, std::size_t d) {
  return 3.0 * std::sqrt(static_cast<double>(d) * n * std::log(n));
}

}  // namespace bandits
