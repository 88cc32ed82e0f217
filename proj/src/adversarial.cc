#include "bandits/adversarial.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bandits {
namespace {

void check_distribution(std::span<const double> p, std::size_t chosen) {
  if (chosen >= p.size()) throw std::out_of_range("chosen arm out of range");
  if (!(p[chosen] > 0.0)) {
    throw std::domain_error("chosen arm has zero probability");
  }
}

std::vector<double> softmax(std::span<const double> scores) {
  const double top = *std::max_element(scores.begin(), scores.end());
  std::vector<double> p(scores.size());
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    p[i] = std::exp(scores[i] - top);
    total += p[i];
  }
  for (double& v : p) v /= total;
  return p;
}

}  // namespace

std::vector<double> exp3_probs(std::span<const double> cumulative, double eta) {
  if (cumulative.empty()) throw std::invalid_argument("exp3_probs: no arms");
  if (!(eta > 0.0)) throw std::invalid_argument("exp3_probs: eta must be > 0");
  std::vector<double> scores(cumulative.size());
  for (std::size_t i = 0; i < cumulative.size(); ++i) {
    scores[i] = -eta * cumulative[i];
  }
  return softmax(scores);
}

std::vector<double> importance_loss_estimate(std::span<const double> p,
                                             std::size_t chosen, double loss) {
  check_distribution(p, chosen);
  std::vector<double> est(p.size(), 0.0);
  est[chosen] = loss / p[chosen];
  return est;
}

Exp3PParams exp3p_params(double n, std::size_t arms, double delta,
                         bool delta_free) {
  if (n < 1.0) throw std::invalid_argument("exp3p_params: n >= 1");
  if (arms < 2) throw std::invalid_argument("exp3p_params: K >= 2");
  if (!delta_free && !(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("exp3p_params: delta must be in (0,1)");
  }
  const double k = static_cast<double>(arms);
  const double lnk = std::log(k);
  Exp3PParams p;
  p.beta = delta_free ? std::sqrt(lnk / (n * k))
                      : std::sqrt(std::log(k / delta) / (n * k));
  p.eta = 0.95 * std::sqrt(lnk / (n * k));
  p.gamma = 1.05 * std::sqrt(k * lnk / n);
  return p;
}

std::vector<double> exp3p_gain_estimate(std::span<const double> p,
                                        std::size_t chosen, double gain,
                                        double beta) {
  check_distribution(p, chosen);
  if (beta > 1.0) throw std::invalid_argument("exp3p_gain_estimate: beta <= 1");
  std::vector<double> est(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] > 0.0)) throw std::domain_error("zero probability arm");
    est[i] = ((i == chosen ? gain : 0.0) + beta) / p[i];
  }
  return est;
}

std::vector<double> exp3p_probs(std::span<const double> cumulative_gains,
                                double eta, double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("exp3p_probs: gamma must be in [0,1]");
  }
  std::vector<double> scores(cumulative_gains.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    scores[i] = eta * cumulative_gains[i];
  }
  auto p = softmax(scores);
  const double floor = gamma / static_cast<double>(p.size());
  for (double& v : p) v = (1.0 - gamma) * v + floor;
  return p;
}

double exp3_bound(double n, std::size_t arms, bool anytime) {
  const double k = static_cast<double>(arms);
  const double fixed = std::sqrt(2.0 * n * k * std::log(k));
  return anytime ? std::sqrt(2.0) * fixed : fixed;
}

double exp3p_bound(double n, std::size_t arms, double delta) {
  const double k = static_cast<double>(arms);
  return 5.15 * std::sqrt(n * k * std::log(k / delta));
}

double minimax_lower(double n, std::size_t arms) {
  return std::sqrt(n * static_cast<double>(arms)) / 20.0;
}

Exp3::Exp3(std::size_t arms, double eta, bool anytime)
    : cumulative_(arms, 0.0),
      probs_(arms, 1.0 / static_cast<double>(arms)),
      eta_(eta),
      anytime_(anytime) {
  if (arms == 0) throw std::invalid_argument("Exp3: no arms");
}

Exp3 Exp3::fixed(std::size_t arms, double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("Exp3: eta must be > 0");
  return Exp3(arms, eta, false);
}

Exp3 Exp3::anytime(std::size_t arms) {
  if (arms < 2) throw std::invalid_argument("anytime Exp3 needs K >= 2");
  return Exp3(arms, 0.0, true);
}

double Exp3::tuned_eta(double n, std::size_t arms) {
  const double k = static_cast<double>(arms);
  return std::sqrt(2.0 * std::log(k) / (n * k));
}

double Exp3::eta(std::size_t t) const {
  if (!anytime_) return eta_;
  const double k = static_cast<double>(probs_.size());
  return std::sqrt(std::log(k) / (static_cast<double>(t) * k));
}

std::size_t Exp3::select(Rng& rng) { return rng.categorical(probs_); }

void Exp3::observe(std::size_t arm, double loss, Rng&) {
  apply_estimate(importance_loss_estimate(probs_, arm, loss));
}

void Exp3::apply_estimate(std::span<const double> estimate) {
  if (estimate.size() != cumulative_.size()) {
    throw std::invalid_argument("Exp3: estimate has wrong length");
  }
  for (std::size_t i = 0; i < cumulative_.size(); ++i) {
    cumulative_[i] += estimate[i];
  }
  ++round_;
  probs_ = exp3_probs(cumulative_, eta(round_));
}

Exp3P::Exp3P(std::size_t arms, Exp3PParams params)
    : params_(params),
      gains_(arms, 0.0),
      probs_(arms, 1.0 / static_cast<double>(arms)) {
  if (arms == 0) throw std::invalid_argument("Exp3P: no arms");
  if (!(params.gamma >= 0.0 && params.gamma <= 1.0) || params.beta > 1.0 ||
      !(params.eta > 0.0)) {
    throw std::invalid_argument("Exp3P: invalid parameters");
  }
}

std::size_t Exp3P::select(Rng& rng) { return rng.categorical(probs_); }

void Exp3P::observe(std::size_t arm, double loss, Rng&) {
  const auto est = exp3p_gain_estimate(probs_, arm, 1.0 - loss, params_.beta);
  for (std::size_t i = 0; i < gains_.size(); ++i) gains_[i] += est[i];
  probs_ = exp3p_probs(gains_, params_.eta, params_.gamma);
}

PolicyKernel exp3_kernel(std::size_t arms, double eta) {
  if (arms == 0) throw std::invalid_argument("exp3_kernel: no arms");
  return [arms, eta](std::span<const std::size_t> actions,
                     std::span<const double> losses) {
    std::vector<double> cumulative(arms, 0.0);
    std::vector<double> p(arms, 1.0 / static_cast<double>(arms));
    for (std::size_t s = 0; s < actions.size(); ++s) {
      cumulative[actions[s]] += losses[s] / p[actions[s]];
      p = exp3_probs(cumulative, eta);
    }
    return p;
  };
}

namespace {

struct PathWalker {
  const PolicyKernel& kernel;
  const ObliviousAdversary& adversary;
  std::size_t rounds;
  std::vector<std::size_t> actions;
  std::vector<double> losses;

  // Expected loss still to come, given the current path.
  double walk() {
    const std::size_t t = actions.size();
    if (t == rounds) return 0.0;
    const auto p = kernel(actions, losses);
    if (p.size() != adversary.arms()) {
      throw std::logic_error("kernel returned wrong number of arms");
    }
    double expected = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] == 0.0) continue;
      const double l = adversary.loss(t, i);
      actions.push_back(i);
      losses.push_back(l);
      expected += p[i] * (l + walk());
      actions.pop_back();
      losses.pop_back();
    }
    return expected;
  }
};

}  // namespace

OracleResult exact_expectation_oracle(const PolicyKernel& kernel,
                                      const ObliviousAdversary& adversary,
                                      std::size_t rounds) {
  if (rounds > 10 || adversary.arms() > 3) {
    throw std::invalid_argument("oracle instance too large (n <= 10, K <= 3)");
  }
  if (rounds > adversary.rounds()) {
    throw std::invalid_argument("oracle: more rounds than loss rows");
  }
  PathWalker walker{kernel, adversary, rounds, {}, {}};
  const double expected = walker.walk();
  const auto sums = adversary.column_sums(rounds);
  const double best = rounds == 0 ? 0.0 : *std::min_element(sums.begin(), sums.end());
  return {expected, expected - best};
}

}  // namespace bandits
