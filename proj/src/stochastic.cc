#include "bandits/stochastic.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bandits {
namespace {

std::size_t first_untried(const std::vector<std::size_t>& counts) {
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] == 0) return i;
  }
  return counts.size();
}

void running_mean(std::vector<std::size_t>& counts, std::vector<double>& means,
                  std::size_t arm, double reward) {
  if (arm >= counts.size()) throw std::out_of_range("update: arm index");
  ++counts[arm];
  means[arm] += (reward - means[arm]) / static_cast<double>(counts[arm]);
}

}  // namespace

double hoeffding_psi_star_inv(double x) {
  if (x < 0.0) throw std::domain_error("hoeffding_psi_star_inv: negative input");
  return std::sqrt(x / 2.0);
}

PsiSpec hoeffding_psi() { return {hoeffding_psi_star_inv, "hoeffding"}; }

UcbState::UcbState(std::size_t arms, double alpha_)
    : counts(arms, 0), means(arms, 0.0), alpha(alpha_) {
  if (arms == 0) throw std::invalid_argument("UcbState: no arms");
}

void UcbState::update(std::size_t arm, double reward) {
  running_mean(counts, means, arm, reward);
}

std::size_t ucb_select(const UcbState& state, const PsiSpec& psi) {
  const std::size_t untried = first_untried(state.counts);
  if (untried < state.counts.size()) return untried;
  const double log_t = std::log(state.t);
  std::size_t best = 0;
  double best_index = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < state.counts.size(); ++i) {
    const double index =
        state.means[i] +
        psi.psi_star_inv(state.alpha * log_t /
                         static_cast<double>(state.counts[i]));
    if (index > best_index) {
      best_index = index;
      best = i;
    }
  }
  return best;
}

double kl_bernoulli(double p, double q) {
  if (!(q > 0.0 && q < 1.0)) throw std::domain_error("kl_bernoulli: q in (0,1)");
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("kl_bernoulli: p in [0,1]");
  double kl = 0.0;
  if (p > 0.0) kl += p * std::log(p / q);
  if (p < 1.0) kl += (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
  return std::max(kl, 0.0);
}

double kl_lower_bound_constant(std::span<const double> means) {
  if (means.empty()) throw std::invalid_argument("no means");
  const double best = *std::max_element(means.begin(), means.end());
  if (best <= 0.0 || best >= 1.0) {
    throw std::domain_error("kl_lower_bound_constant: best mean must be in (0,1)");
  }
  double c = 0.0;
  for (double mu : means) {
    const double gap = best - mu;
    if (gap > 0.0) c += gap / kl_bernoulli(mu, best);
  }
  return c;
}

double ucb_bound(double alpha, std::span<const double> gaps, double n) {
  if (!(alpha > 2.0)) throw std::invalid_argument("ucb_bound: alpha must exceed 2");
  double sum = 0.0;
  bool any = false;
  for (double g : gaps) {
    if (g > 0.0) {
      sum += 2.0 * alpha / g * std::log(n);
      any = true;
    }
  }
  return any ? sum + alpha / (alpha - 2.0) : 0.0;
}

std::size_t thompson_step(const ThompsonState& state, Rng& rng) {
  std::size_t best = 0;
  double best_theta = -1.0;
  for (std::size_t i = 0; i < state.alpha.size(); ++i) {
    const double theta = rng.beta(state.alpha[i], state.beta[i]);
    if (theta > best_theta) {
      best_theta = theta;
      best = i;
    }
  }
  return best;
}

void thompson_update(ThompsonState& state, std::size_t arm, int reward) {
  if (arm >= state.alpha.size()) throw std::out_of_range("thompson_update: arm");
  if (reward == 1) {
    state.alpha[arm] += 1.0;
  } else if (reward == 0) {
    state.beta[arm] += 1.0;
  } else {
    throw std::invalid_argument("thompson_update: reward must be 0 or 1");
  }
}

EpsGreedyState::EpsGreedyState(std::size_t arms, double d)
    : counts(arms, 0), means(arms, 0.0), d_gap(d) {
  if (arms == 0) throw std::invalid_argument("EpsGreedyState: no arms");
  if (!(d > 0.0 && d < 1.0)) {
    throw std::invalid_argument("EpsGreedyState: d_gap must be in (0,1)");
  }
}

void EpsGreedyState::update(std::size_t arm, double reward) {
  running_mean(counts, means, arm, reward);
  ++t;
}

double eps_greedy_epsilon(std::size_t arms, double d_gap, std::size_t t) {
  if (t == 0) throw std::invalid_argument("eps_greedy_epsilon: t >= 1");
  return std::min(1.0, static_cast<double>(arms) /
                           (d_gap * d_gap * static_cast<double>(t)));
}

std::size_t eps_greedy_step(const EpsGreedyState& state, Rng& rng) {
  const std::size_t untried = first_untried(state.counts);
  if (untried < state.counts.size()) return untried;
  const std::size_t k = state.counts.size();
  if (rng.bernoulli(eps_greedy_epsilon(k, state.d_gap, state.t))) {
    return rng.index(k);
  }
  return static_cast<std::size_t>(
      std::max_element(state.means.begin(), state.means.end()) -
      state.means.begin());
}

UcbPolicy::UcbPolicy(std::size_t arms, double alpha, PsiSpec psi)
    : state_(arms, alpha), psi_(std::move(psi)) {
  if (!(alpha > 2.0)) throw std::invalid_argument("UCB: alpha must exceed 2");
}

std::size_t UcbPolicy::select(Rng&) {
  std::size_t played = 0;
  for (std::size_t c : state_.counts) played += c;
  state_.t = static_cast<double>(played + 1);
  return ucb_select(state_, psi_);
}

void UcbPolicy::observe(std::size_t arm, double loss, Rng&) {
  state_.update(arm, 1.0 - loss);
}

std::size_t ThompsonPolicy::select(Rng& rng) { return thompson_step(state_, rng); }

void ThompsonPolicy::observe(std::size_t arm, double loss, Rng& rng) {
  const double reward = 1.0 - loss;
  int bit;
  if (reward == 0.0 || reward == 1.0) {
    bit = static_cast<int>(reward);
  } else {
    bit = rng.bernoulli(reward) ? 1 : 0;
  }
  thompson_update(state_, arm, bit);
}

std::size_t EpsGreedyPolicy::select(Rng& rng) {
  return eps_greedy_step(state_, rng);
}

void EpsGreedyPolicy::observe(std::size_t arm, double loss, Rng&) {
  state_.update(arm, 1.0 - loss);
}

}  // namespace bandits
