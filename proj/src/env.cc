#include "bandits/env.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace bandits {
namespace {

void check_unit(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " must lie in [0,1], got " +
                                std::to_string(v));
  }
}

}  // namespace

DiscreteDistribution DiscreteDistribution::bernoulli(double mean) {
  check_unit(mean, "Bernoulli mean");
  return {{0.0, 1.0}, {1.0 - mean, mean}};
}

double DiscreteDistribution::mean() const {
  double m = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    m += values[i] * probabilities[i];
  }
  return m;
}

StochasticEnv::StochasticEnv(std::vector<DiscreteDistribution> arms)
    : arms_(std::move(arms)) {
  if (arms_.empty()) throw std::invalid_argument("StochasticEnv: no arms");
  for (const auto& a : arms_) {
    if (a.values.empty() || a.values.size() != a.probabilities.size()) {
      throw std::invalid_argument("StochasticEnv: malformed distribution");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
      check_unit(a.values[i], "reward value");
      if (a.probabilities[i] < 0.0) {
        throw std::invalid_argument("StochasticEnv: negative probability");
      }
      total += a.probabilities[i];
    }
    if (std::abs(total - 1.0) > 1e-9) {
      throw std::invalid_argument("StochasticEnv: probabilities must sum to 1");
    }
    means_.push_back(std::clamp(a.mean(), 0.0, 1.0));
  }
  best_arm_ = static_cast<std::size_t>(
      std::max_element(means_.begin(), means_.end()) - means_.begin());
  best_mean_ = means_[best_arm_];
}

StochasticEnv StochasticEnv::bernoulli(std::vector<double> means) {
  std::vector<DiscreteDistribution> arms;
  arms.reserve(means.size());
  for (double m : means) arms.push_back(DiscreteDistribution::bernoulli(m));
  return StochasticEnv(std::move(arms));
}

double StochasticEnv::sample_reward(std::size_t arm, Rng& rng) const {
  if (arm >= arms_.size()) throw std::out_of_range("sample_reward: arm index");
  const auto& a = arms_[arm];
  if (a.values.size() == 2 && a.values[0] == 0.0 && a.values[1] == 1.0) {
    return rng.bernoulli(a.probabilities[1]) ? 1.0 : 0.0;
  }
  return a.values[rng.categorical(a.probabilities)];
}

ObliviousAdversary::ObliviousAdversary(std::size_t rounds, std::size_t arms,
                                       std::vector<double> losses)
    : rounds_(rounds), arms_(arms), losses_(std::move(losses)) {
  if (arms_ == 0) throw std::invalid_argument("ObliviousAdversary: no arms");
  if (losses_.size() != rounds_ * arms_) {
    throw std::invalid_argument("ObliviousAdversary: matrix size mismatch");
  }
  for (double l : losses_) check_unit(l, "loss");
}

ObliviousAdversary ObliviousAdversary::from_rows(
    const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw std::invalid_argument("ObliviousAdversary: no rows");
  const std::size_t k = rows.front().size();
  std::vector<double> flat;
  flat.reserve(rows.size() * k);
  for (const auto& r : rows) {
    if (r.size() != k) throw std::invalid_argument("ragged loss matrix");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return ObliviousAdversary(rows.size(), k, std::move(flat));
}

std::vector<double> ObliviousAdversary::column_sums(std::size_t rounds) const {
  std::vector<double> sums(arms_, 0.0);
  for (std::size_t t = 0; t < std::min(rounds, rounds_); ++t) {
    for (std::size_t i = 0; i < arms_; ++i) sums[i] += loss(t, i);
  }
  return sums;
}

NonObliviousAdversary::NonObliviousAdversary(std::size_t arms, LossFn fn)
    : arms_(arms), fn_(std::move(fn)) {
  if (arms_ == 0) throw std::invalid_argument("NonObliviousAdversary: no arms");
}

std::vector<double> NonObliviousAdversary::losses(
    std::span<const std::size_t> history) const {
  auto v = fn_(history);
  if (v.size() != arms_) {
    throw std::logic_error("adversary returned a loss vector of wrong length");
  }
  for (double l : v) check_unit(l, "adversary loss");
  return v;
}

void RunTrace::record(std::size_t arm, double loss) {
  if (arm >= counts.size()) throw std::out_of_range("RunTrace: arm index");
  actions.push_back(arm);
  losses.push_back(loss);
  ++counts[arm];
}

double sample_reward(const StochasticEnv& env, std::size_t arm, Rng& rng) {
  return env.sample_reward(arm, rng);
}

double pseudo_regret_stochastic(const RunTrace& trace,
                                const StochasticEnv& env) {
  if (trace.counts.size() != env.arms()) {
    throw std::invalid_argument("trace and environment disagree on K");
  }
  double r = 0.0;
  for (std::size_t i = 0; i < env.arms(); ++i) {
    r += env.gap(i) * static_cast<double>(trace.counts[i]);
  }
  return r;
}

double pseudo_regret_oblivious(const RunTrace& trace,
                               const ObliviousAdversary& adversary) {
  const std::size_t n = trace.rounds();
  if (n > adversary.rounds()) {
    throw std::invalid_argument("trace longer than the loss matrix");
  }
  double incurred = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    incurred += adversary.loss(t, trace.actions[t]);
  }
  const auto sums = adversary.column_sums(n);
  return incurred - *std::min_element(sums.begin(), sums.end());
}

StochasticEnv lower_bound_env(std::size_t arms, double eps, std::size_t best) {
  if (!(eps >= 0.0 && eps < 1.0)) {
    throw std::invalid_argument("lower_bound_env: eps must be in [0,1)");
  }
  if (best >= arms) throw std::out_of_range("lower_bound_env: best arm");
  std::vector<double> means(arms, (1.0 - eps) / 2.0);
  means[best] = (1.0 + eps) / 2.0;
  return StochasticEnv::bernoulli(std::move(means));
}

}  // namespace bandits
