#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "bandits/rng.h"

namespace bandits {

// Uniform on the unit sphere of R^d.
Eigen::VectorXd sample_sphere(std::size_t d, Rng& rng);

// Rows are points. Throws unless the rows span R^d and contain no NaN.
void check_point_set(const Eigen::MatrixXd& points);

struct DesignWeights {
  Eigen::VectorXd weights;
  Eigen::MatrixXd design;  // P = sum_x w_x x x^T

  // max_x x^T P^{-1} x over the rows of `points`.
  double max_leverage(const Eigen::MatrixXd& points) const;
};

// D-optimal design by Frank-Wolfe with away steps. Stops once
// max_x x^T P^{-1} x <= d (1 + tol).
DesignWeights doptimal_design(const Eigen::MatrixXd& points, double tol = 1e-7,
                              std::size_t max_iter = 100000);

struct Ellipsoid {
  Eigen::VectorXd center;
  Eigen::MatrixXd shape;  // {x : (x-c)^T E^{-1} (x-c) <= 1}
  Eigen::VectorXd weights;
};

// Minimum-volume enclosing ellipsoid of a centrally symmetric point set
// (symmetric about its centroid). Asymmetric input is rejected.
Ellipsoid mvee(const Eigen::MatrixXd& points, double tol = 1e-7);

// Increasing bijection psi onto (0, inf) with its derivative and inverse. The
// associated Legendre function is F(x) = sum_i int_0^{x_i} psi^{-1}(s) ds.
struct PotentialSpec {
  std::function<double(double)> psi;
  std::function<double(double)> psi_prime;
  std::function<double(double)> psi_inv;
  // Antiderivative of psi^{-1} vanishing at 0.
  std::function<double(double)> psi_inv_integral;
  // Antiderivative of psi, so that F*(u) = sum_i of it at u_i.
  std::function<double(double)> psi_integral;
  std::string name;
  double q = 0.0;  // power exponent, 0 for exp
};

PotentialSpec exp_potential();
// psi(x) = (-x)^{-q} on x < 0, q > 1.
PotentialSpec power_potential(double q);

// Bregman divergence of F_psi between nonnegative vectors.
double potential_bregman(const PotentialSpec& psi, const Eigen::VectorXd& y,
                         const Eigen::VectorXd& x);

// argmin over {x in [0,1]^d : sum x = m} of the negative-entropy divergence to
// w, i.e. x_i = min(1, c w_i).
Eigen::VectorXd project_capped_simplex_negent(const Eigen::VectorXd& w, double m);
// Same with w given as log-weights.
Eigen::VectorXd project_capped_simplex_negent_log(const Eigen::VectorXd& log_w,
                                                  double m);

// Bregman projection for F_psi of the point with dual coordinates u
// (w = psi(u)): x_i = min(1, psi(u_i - lambda)) with sum x = m.
Eigen::VectorXd project_capped_simplex_dual(const Eigen::VectorXd& u, double m,
                                            const PotentialSpec& psi);
Eigen::VectorXd project_capped_simplex_potential(const Eigen::VectorXd& w,
                                                 double m,
                                                 const PotentialSpec& psi);

// Systematic sampling with start u in [0,1): index i is taken when some
// u + k falls in [S_{i-1}, S_i), S the cumulative sums of x scaled to total m.
Eigen::VectorXi madow_select(const Eigen::VectorXd& x, double u);
Eigen::VectorXi madow_sample(const Eigen::VectorXd& x, Rng& rng);
// Exact inclusion probabilities by integrating over the start value.
Eigen::VectorXd madow_inclusion_probabilities(const Eigen::VectorXd& x);

// Each distinct m-set the sampler can return, with its probability.
struct WeightedSubset {
  Eigen::VectorXi subset;
  double probability;
};
std::vector<WeightedSubset> madow_outcomes(const Eigen::VectorXd& x);

}  // namespace bandits
