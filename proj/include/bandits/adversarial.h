#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "bandits/env.h"
#include "bandits/policy.h"
#include "bandits/rng.h"

namespace bandits {

// p_i proportional to exp(-eta L_i), shifted by min L for stability.
std::vector<double> exp3_probs(std::span<const double> cumulative, double eta);

// loss / p_chosen at the chosen arm, zero elsewhere.
std::vector<double> importance_loss_estimate(std::span<const double> p,
                                             std::size_t chosen, double loss);

struct Exp3PParams {
  double beta;
  double eta;
  double gamma;
};

// With delta_free the confidence-free beta = sqrt(ln K / (nK)) is used.
Exp3PParams exp3p_params(double n, std::size_t arms, double delta,
                         bool delta_free = false);

// (g 1{I=i} + beta) / p_i for every arm.
std::vector<double> exp3p_gain_estimate(std::span<const double> p,
                                        std::size_t chosen, double gain,
                                        double beta);

// (1 - gamma) softmax(eta G) + gamma / K.
std::vector<double> exp3p_probs(std::span<const double> cumulative_gains,
                                double eta, double gamma);

double exp3_bound(double n, std::size_t arms, bool anytime);
double exp3p_bound(double n, std::size_t arms, double delta);
double minimax_lower(double n, std::size_t arms);

class Exp3 : public Policy {
 public:
  // Constant eta.
  static Exp3 fixed(std::size_t arms, double eta);
  // eta_t = sqrt(ln K / (t K)).
  static Exp3 anytime(std::size_t arms);
  // The horizon-tuned eta = sqrt(2 ln K / (n K)).
  static double tuned_eta(double n, std::size_t arms);

  std::size_t arms() const override { return probs_.size(); }
  std::size_t select(Rng& rng) override;
  void observe(std::size_t arm, double loss, Rng& rng) override;

  // Adds an externally built estimate to the cumulative losses and moves to
  // the next round.
  void apply_estimate(std::span<const double> estimate);

  const std::vector<double>& probabilities() const { return probs_; }
  const std::vector<double>& cumulative() const { return cumulative_; }
  std::size_t round() const { return round_; }
  double eta(std::size_t t) const;

 private:
  Exp3(std::size_t arms, double eta, bool anytime);

  std::vector<double> cumulative_;
  std::vector<double> probs_;
  double eta_;
  bool anytime_;
  std::size_t round_ = 0;
};

// Gain-native internally; observe() converts losses with g = 1 - l.
class Exp3P : public Policy {
 public:
  Exp3P(std::size_t arms, Exp3PParams params);

  std::size_t arms() const override { return probs_.size(); }
  std::size_t select(Rng& rng) override;
  void observe(std::size_t arm, double loss, Rng& rng) override;

  const std::vector<double>& probabilities() const { return probs_; }
  const std::vector<double>& cumulative_gains() const { return gains_; }
  const Exp3PParams& params() const { return params_; }

 private:
  Exp3PParams params_;
  std::vector<double> gains_;
  std::vector<double> probs_;
};

// Conditional distribution of the next action given the actions played so
// far and the losses observed for them.
using PolicyKernel = std::function<std::vector<double>(
    std::span<const std::size_t> actions, std::span<const double> losses)>;

PolicyKernel exp3_kernel(std::size_t arms, double eta);

struct OracleResult {
  double expected_loss;
  double pseudo_regret;
};

// Enumerates all K^n action paths (n <= 10, K <= 3) over the first `rounds`
// rows of the matrix.
OracleResult exact_expectation_oracle(const PolicyKernel& kernel,
                                      const ObliviousAdversary& adversary,
                                      std::size_t rounds);

}  // namespace bandits
