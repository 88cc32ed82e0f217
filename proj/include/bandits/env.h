#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "bandits/rng.h"

namespace bandits {

// Finite-support distribution on [0,1]. Bernoulli(mu) is {0,1} with
// probabilities {1-mu, mu}.
struct DiscreteDistribution {
  std::vector<double> values;
  std::vector<double> probabilities;

  static DiscreteDistribution bernoulli(double mean);
  double mean() const;
};

// K reward distributions on [0,1]. Rewards are reported as drawn; policies
// receive losses 1 - reward through the harness.
class StochasticEnv {
 public:
  explicit StochasticEnv(std::vector<DiscreteDistribution> arms);
  static StochasticEnv bernoulli(std::vector<double> means);

  std::size_t arms() const { return arms_.size(); }
  double mean(std::size_t arm) const { return means_.at(arm); }
  const std::vector<double>& means() const { return means_; }
  double best_mean() const { return best_mean_; }
  std::size_t best_arm() const { return best_arm_; }
  double gap(std::size_t arm) const { return best_mean_ - means_.at(arm); }

  double sample_reward(std::size_t arm, Rng& rng) const;

 private:
  std::vector<DiscreteDistribution> arms_;
  std::vector<double> means_;
  double best_mean_ = 0.0;
  std::size_t best_arm_ = 0;
};

// n x K loss matrix, every entry in [0,1]. Row t holds the losses of round t.
class ObliviousAdversary {
 public:
  ObliviousAdversary(std::size_t rounds, std::size_t arms,
                     std::vector<double> losses);
  static ObliviousAdversary from_rows(
      const std::vector<std::vector<double>>& rows);

  std::size_t rounds() const { return rounds_; }
  std::size_t arms() const { return arms_; }
  double loss(std::size_t round, std::size_t arm) const {
    return losses_[round * arms_ + arm];
  }
  std::span<const double> row(std::size_t round) const {
    return {losses_.data() + round * arms_, arms_};
  }
  // Cumulative loss of each fixed arm over the first `rounds` rounds.
  std::vector<double> column_sums(std::size_t rounds) const;

 private:
  std::size_t rounds_;
  std::size_t arms_;
  std::vector<double> losses_;
};

// Adaptive adversary: sees the forecaster's past actions only.
class NonObliviousAdversary {
 public:
  using LossFn =
      std::function<std::vector<double>(std::span<const std::size_t> history)>;

  NonObliviousAdversary(std::size_t arms, LossFn fn);

  std::size_t arms() const { return arms_; }
  // Validated loss vector for the next round.
  std::vector<double> losses(std::span<const std::size_t> history) const;

 private:
  std::size_t arms_;
  LossFn fn_;
};

struct RunTrace {
  explicit RunTrace(std::size_t arms) : counts(arms, 0) {}

  void record(std::size_t arm, double loss);
  std::size_t rounds() const { return actions.size(); }

  std::vector<std::size_t> actions;
  std::vector<double> losses;
  std::vector<std::size_t> counts;
};

double sample_reward(const StochasticEnv& env, std::size_t arm, Rng& rng);

// Sum_i Delta_i T_i(n) from the trace counts and the true means.
double pseudo_regret_stochastic(const RunTrace& trace, const StochasticEnv& env);

// Realized regret against the best fixed arm of the matrix on the trace's
// rounds: sum_t l_{I_t,t} - min_k sum_t l_{k,t}.
double pseudo_regret_oblivious(const RunTrace& trace,
                               const ObliviousAdversary& adversary);

// All arms Bernoulli((1-eps)/2) except `best`, which is Bernoulli((1+eps)/2).
StochasticEnv lower_bound_env(std::size_t arms, double eps, std::size_t best);

}  // namespace bandits
