#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "bandits/policy.h"
#include "bandits/rng.h"

namespace bandits {

struct PsiSpec {
  // Inverse of the Legendre-Fenchel transform psi*.
  std::function<double(double)> psi_star_inv;
  std::string name;
};

// psi*(e) = 2e^2, so (psi*)^{-1}(x) = sqrt(x/2).
double hoeffding_psi_star_inv(double x);
PsiSpec hoeffding_psi();

struct UcbState {
  explicit UcbState(std::size_t arms, double alpha = 2.5);

  std::vector<std::size_t> counts;
  std::vector<double> means;
  // Current time; the exploration term uses ln t.
  double t = 1.0;
  double alpha;

  void update(std::size_t arm, double reward);
};

// Untried arms first (lowest index), otherwise argmax of
// mean_i + psi_star_inv(alpha ln t / T_i) with lowest index on ties.
std::size_t ucb_select(const UcbState& state, const PsiSpec& psi);

// Bernoulli KL with the 0 ln 0 = 0 convention.
double kl_bernoulli(double p, double q);
// Sum over suboptimal arms of gap / kl(mu_i, mu*).
double kl_lower_bound_constant(std::span<const double> means);
// sum_{gap>0} (2 alpha / gap) ln n + alpha / (alpha - 2).
double ucb_bound(double alpha, std::span<const double> gaps, double n);

struct ThompsonState {
  explicit ThompsonState(std::size_t arms)
      : alpha(arms, 1.0), beta(arms, 1.0) {}

  std::vector<double> alpha;
  std::vector<double> beta;

  double posterior_mean(std::size_t arm) const {
    return alpha[arm] / (alpha[arm] + beta[arm]);
  }
};

std::size_t thompson_step(const ThompsonState& state, Rng& rng);
void thompson_update(ThompsonState& state, std::size_t arm, int reward);

struct EpsGreedyState {
  EpsGreedyState(std::size_t arms, double d_gap);

  std::vector<std::size_t> counts;
  std::vector<double> means;
  double d_gap;
  std::size_t t = 1;

  void update(std::size_t arm, double reward);
};

// min{1, K / (d^2 t)}.
double eps_greedy_epsilon(std::size_t arms, double d_gap, std::size_t t);
std::size_t eps_greedy_step(const EpsGreedyState& state, Rng& rng);

class UcbPolicy : public Policy {
 public:
  UcbPolicy(std::size_t arms, double alpha, PsiSpec psi = hoeffding_psi());

  std::size_t arms() const override { return state_.counts.size(); }
  std::size_t select(Rng& rng) override;
  void observe(std::size_t arm, double loss, Rng& rng) override;
  const UcbState& state() const { return state_; }

 private:
  UcbState state_;
  PsiSpec psi_;
};

// Rewards in [0,1] are binarized with an auxiliary Bernoulli(reward) draw.
class ThompsonPolicy : public Policy {
 public:
  explicit ThompsonPolicy(std::size_t arms) : state_(arms) {}

  std::size_t arms() const override { return state_.alpha.size(); }
  std::size_t select(Rng& rng) override;
  void observe(std::size_t arm, double loss, Rng& rng) override;
  const ThompsonState& state() const { return state_; }

 private:
  ThompsonState state_;
};

class EpsGreedyPolicy : public Policy {
 public:
  EpsGreedyPolicy(std::size_t arms, double d_gap) : state_(arms, d_gap) {}

  std::size_t arms() const override { return state_.counts.size(); }
  std::size_t select(Rng& rng) override;
  void observe(std::size_t arm, double loss, Rng& rng) override;
  const EpsGreedyState& state() const { return state_; }

 private:
  EpsGreedyState state_;
};

}  // namespace bandits
