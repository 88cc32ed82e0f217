#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "bandits/geometry.h"
#include "bandits/rng.h"

namespace bandits {

// Legendre function together with the Bregman projection onto one fixed
// constraint set. The projection takes the dual point u = grad F(w).
struct LegendreSpec {
  std::function<double(const Eigen::VectorXd&)> f;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> grad_f;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> grad_f_star;
  std::function<bool(const Eigen::VectorXd&)> in_dual_domain;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> project_dual;
  std::string name;
};

double bregman(const LegendreSpec& spec, const Eigen::VectorXd& y,
               const Eigen::VectorXd& x);
// argmin over the constraint set of D_F(., w).
Eigen::VectorXd bregman_project(const LegendreSpec& spec, const Eigen::VectorXd& w);

// sum x ln x - x on {x in [0,1]^d : sum x = m}.
LegendreSpec negentropy_capped(double m);
// F_psi on {x in [0,1]^d : sum x = m}.
LegendreSpec potential_capped(const PotentialSpec& psi, double m);
// 1/2 |x|^2 on the ball of the given radius.
LegendreSpec euclidean_ball(double radius);
// -ln(1 - |x|) - |x| on the ball of the given radius (< 1).
LegendreSpec ball_barrier(double radius);

// grad F(x) = x / (1 - |x|), requires |x| < 1.
Eigen::VectorXd ball_grad(const Eigen::VectorXd& x);
// grad F*(u) = u / (1 + |u|).
Eigen::VectorXd ball_grad_star(const Eigen::VectorXd& u);

// x' = project(grad F(x) - eta g). Throws std::domain_error when the dual
// point leaves the dual domain.
Eigen::VectorXd omd_step(const LegendreSpec& spec, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& gradient, double eta);

// Negative-entropy OMD on the simplex with constant eta. The dual iterate is
// kept as -eta times the running gradient sum, which differs from grad F(x_t)
// only by a normal-cone constant, so x_t = softmax(-eta G_t).
class NegentropySimplexOmd {
 public:
  NegentropySimplexOmd(std::size_t dim, double eta);

  void step(const Eigen::VectorXd& gradient);
  const std::vector<double>& point() const { return x_; }

 private:
  double eta_;
  std::vector<double> gradient_sum_;
  std::vector<double> x_;
};

struct Exp2Params {
  double eta;
  double gamma;
};

// eta = sqrt(ln N / (3 n d)), gamma = eta d.
Exp2Params exp2_params(double n, std::size_t dim, std::size_t points);

// Exponential weights over a finite point set with D-optimal exploration.
class Exp2 {
 public:
  Exp2(Eigen::MatrixXd points, double eta, double gamma,
       double design_tol = 1e-7);

  std::size_t size() const { return static_cast<std::size_t>(points_.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(points_.cols()); }
  const Eigen::MatrixXd& points() const { return points_; }
  const DesignWeights& exploration() const { return design_; }

  // (1 - gamma) softmax(-eta <x, L>) + gamma mu.
  Eigen::VectorXd probabilities() const;
  // P_t^{-1} x (x^T l) for the played row and the observed scalar loss.
  Eigen::VectorXd estimate(std::size_t played, double scalar_loss) const;
  Eigen::MatrixXd design_matrix() const;

  std::size_t select(Rng& rng);
  void observe(std::size_t played, double scalar_loss);

 private:
  Eigen::MatrixXd points_;
  double eta_;
  double gamma_;
  DesignWeights design_;
  Eigen::VectorXd cumulative_;
  Eigen::VectorXd probs_;
};

// l_i v_i / x_i; zero where v_i = 0. Throws when an active x_i is below floor.
Eigen::VectorXd semibandit_estimate(const Eigen::VectorXd& x,
                                    const Eigen::VectorXi& v,
                                    const Eigen::VectorXd& losses,
                                    double floor = 1e-12);

// eta = sqrt((2m / (n d)) ln(d / m)).
double osmd_negent_eta(double n, std::size_t d, std::size_t m);
// eta = sqrt(2 / ((q - 1) n) (m / d)^{1 - 2/q}).
double osmd_potential_eta(double n, std::size_t d, std::size_t m, double q);

// OSMD on the convex hull of m-subsets of [d] with semi-bandit feedback.
class OsmdMsets {
 public:
  // Negative entropy.
  OsmdMsets(std::size_t d, std::size_t m, double eta);
  // 0-potential psi.
  OsmdMsets(std::size_t d, std::size_t m, double eta, PotentialSpec psi);

  std::size_t dim() const { return static_cast<std::size_t>(x_.size()); }
  std::size_t m() const { return m_; }
  const Eigen::VectorXd& point() const { return x_; }

  Eigen::VectorXi select(Rng& rng);
  // Losses are read only on the active coordinates of the last selection.
  void observe(const Eigen::VectorXd& losses);

 private:
  std::size_t m_;
  double eta_;
  bool negentropy_;
  PotentialSpec psi_;
  Eigen::VectorXd x_;
  Eigen::VectorXi v_;
};

struct BallParams {
  double gamma;
  double eta;
};

// gamma = 1/sqrt(n), eta = sqrt(ln n / (2 n d)); throws if eta d > 1/2.
BallParams ball_params(double n, std::size_t d);

struct BallPlay {
  Eigen::VectorXd point;
  bool xi;
};

// d (1 - xi) (x~^T l) / (1 - |x|) x~.
Eigen::VectorXd ball_estimate(const Eigen::VectorXd& x, const BallPlay& play,
                              double scalar_loss);

// OSMD on the shrunken ball (1 - gamma) B with F = -ln(1 - |x|) - |x|.
class BallOsmd {
 public:
  BallOsmd(std::size_t d, double eta, double gamma);

  const Eigen::VectorXd& point() const { return x_; }
  // Draws xi ~ Bernoulli(|x|) and plays x/|x| or eps e_I.
  const BallPlay& select(Rng& rng);
  void observe(double scalar_loss);

 private:
  double eta_;
  LegendreSpec spec_;
  Eigen::VectorXd x_;
  BallPlay play_;
};

double exp2_bound(double n, std::size_t d, std::size_t points);
double osmd_negent_bound(double n, std::size_t d, std::size_t m);
double osmd_potential_bound(double n, std::size_t d, std::size_t m, double q);
double ball_bound(double n, std::size_t d);

}  // namespace bandits
