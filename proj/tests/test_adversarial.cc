#include "doctest.h"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "bandits/adversarial.h"

using namespace bandits;

namespace {
double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }
}  // namespace

TEST_CASE("exp3 probabilities") {
  const std::vector<double> eq{3.0, 3.0, 3.0};
  for (double p : exp3_probs(eq, 0.7)) CHECK(p == doctest::Approx(1.0 / 3.0));
  const std::vector<double> l{0.0, std::log(2.0)};
  const auto p = exp3_probs(l, 1.0);
  CHECK(p[0] == doctest::Approx(2.0 / 3.0));
  CHECK(p[1] == doctest::Approx(1.0 / 3.0));
  const std::vector<double> shifted{50.0, 50.0 + std::log(2.0)};
  const auto q = exp3_probs(shifted, 1.0);
  CHECK(q[0] == doctest::Approx(p[0]).epsilon(1e-12));
  const std::vector<double> huge{0.0, 1e6};
  const auto r = exp3_probs(huge, 1.0);
  CHECK(r[0] == 1.0);
  CHECK(r[1] == 0.0);
  CHECK_THROWS(exp3_probs(l, 0.0));
}

TEST_CASE("importance-weighted loss estimate") {
  const std::vector<double> p{0.25, 0.75};
  const auto e = importance_loss_estimate(p, 0, 0.5);
  CHECK(e[0] == doctest::Approx(2.0));
  CHECK(e[1] == 0.0);
  const auto z = importance_loss_estimate(p, 1, 0.0);
  CHECK(z[0] == 0.0);
  CHECK(z[1] == 0.0);
  const std::vector<double> zero{0.0, 1.0};
  CHECK_THROWS_AS(importance_loss_estimate(zero, 0, 0.5), std::domain_error);
}

TEST_CASE("Exp3.P parameters") {
  const auto p = exp3p_params(1e4, 10, 0.1);
  CHECK(p.beta == doctest::Approx(0.006786140).epsilon(1e-8));
  CHECK(p.eta == doctest::Approx(0.004558600).epsilon(1e-6));
  CHECK(p.gamma == doctest::Approx(0.050384522).epsilon(1e-8));
  const auto free = exp3p_params(1e4, 10, 0.1, true);
  CHECK(free.beta == doctest::Approx(std::sqrt(std::log(10.0) / 1e5)));
  const auto near_one = exp3p_params(1e4, 10, 1.0 - 1e-12);
  CHECK(near_one.beta == doctest::Approx(free.beta).epsilon(1e-9));
  CHECK(exp3p_params(4e4, 10, 0.1).gamma == doctest::Approx(p.gamma / 2));
  CHECK_THROWS(exp3p_params(100, 2, 0.0));
  CHECK_THROWS(exp3p_params(100, 2, 1.5));
}

TEST_CASE("Exp3.P gain estimate") {
  const std::vector<double> p{0.5, 0.5};
  const auto g = exp3p_gain_estimate(p, 0, 1.0, 0.1);
  CHECK(g[0] == doctest::Approx(2.2));
  CHECK(g[1] == doctest::Approx(0.2));
  const auto plain = exp3p_gain_estimate(p, 1, 0.6, 0.0);
  CHECK(plain[0] == 0.0);
  CHECK(plain[1] == doctest::Approx(1.2));
}

TEST_CASE("Exp3.P gain estimate has bias beta/p_i") {
  const std::vector<double> p{0.2, 0.3, 0.5};
  const std::vector<double> gain{0.9, 0.1, 0.4};
  const double beta = 0.05;
  double weighted_sum = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    double mean = 0.0;
    for (std::size_t j = 0; j < 3; ++j) {
      const auto g = exp3p_gain_estimate(p, j, gain[j], beta);
      mean += p[j] * g[i];
      weighted_sum += p[j] * p[i] * g[i];
    }
    CHECK(mean == doctest::Approx(gain[i] + beta / p[i]).epsilon(1e-12));
  }
  // E_{i~p} g~_i summed over the draw equals E g_I + beta K.
  double expected_gain = 0.0;
  for (std::size_t j = 0; j < 3; ++j) expected_gain += p[j] * gain[j];
  CHECK(weighted_sum == doctest::Approx(expected_gain + beta * 3).epsilon(1e-12));
}

TEST_CASE("Exp3.P mixture probabilities") {
  const std::vector<double> eq{1.0, 1.0};
  for (double p : exp3p_probs(eq, 0.3, 0.2)) CHECK(p == doctest::Approx(0.5));
  const std::vector<double> g{std::log(2.0), 0.0};
  for (double p : exp3p_probs(g, 5.0, 1.0)) CHECK(p == doctest::Approx(0.5));
  const auto p = exp3p_probs(g, 1.0, 0.1);
  CHECK(p[0] == doctest::Approx(0.65));
  CHECK(p[1] == doctest::Approx(0.35));
}

TEST_CASE("bound calculators") {
  CHECK(exp3_bound(100, 2, false) == doctest::Approx(16.651092).epsilon(1e-7));
  CHECK(exp3_bound(100, 2, true) / exp3_bound(100, 2, false) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(minimax_lower(400, 2) == doctest::Approx(1.414214).epsilon(1e-6));
  CHECK(exp3p_bound(1000, 3, 0.1) == doctest::Approx(5.15 * std::sqrt(3000 * std::log(30.0))));
}

TEST_CASE("Exp3 and Exp3.P keep valid distributions") {
  Rng rng(21, 0);
  Exp3 e = Exp3::anytime(4);
  Exp3P x(4, exp3p_params(1e5, 4, 0.1));
  const double floor = x.params().gamma / 4;
  for (int t = 0; t < 100000; ++t) {
    const auto a = e.select(rng);
    e.observe(a, rng.uniform(), rng);
    const auto b = x.select(rng);
    x.observe(b, rng.uniform(), rng);
    if (t % 1000 == 0) {
      CHECK(std::abs(sum(e.probabilities()) - 1.0) < 1e-12);
      CHECK(std::abs(sum(x.probabilities()) - 1.0) < 1e-12);
      for (double p : x.probabilities()) CHECK(p >= floor * (1 - 1e-12));
    }
  }
  CHECK(e.round() == 100000);
}

TEST_CASE("anytime eta schedule") {
  Exp3 e = Exp3::anytime(3);
  CHECK(e.eta(4) == doctest::Approx(std::sqrt(std::log(3.0) / 12.0)));
  CHECK(Exp3::tuned_eta(100, 2) == doctest::Approx(std::sqrt(std::log(2.0) / 100.0)));
}

TEST_CASE("exact oracle on tiny instances") {
  const auto one = ObliviousAdversary::from_rows({{0.2, 0.6}});
  const auto r1 = exact_expectation_oracle(exp3_kernel(2, 1.0), one, 1);
  CHECK(r1.expected_loss == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(r1.pseudo_regret == doctest::Approx(0.2).epsilon(1e-15));

  const auto flat = ObliviousAdversary::from_rows({{0.3, 0.3}, {0.7, 0.7}, {0.1, 0.1}});
  CHECK(exact_expectation_oracle(exp3_kernel(2, 0.5), flat, 3).pseudo_regret ==
        doctest::Approx(0.0).epsilon(1e-15));

  // Round 1 is uniform. Path (0): estimate (2,0), p2 = (1,e^2)/(1+e^2).
  // Path (1): estimate (0,0), p2 uniform. Expected loss = 1/2 + 1/2 p2_0 + 1/4.
  const auto adv = ObliviousAdversary::from_rows({{1, 0}, {1, 0}});
  const auto r = exact_expectation_oracle(exp3_kernel(2, 1.0), adv, 2);
  const double hand = 0.5 + 0.5 / (1.0 + std::exp(2.0)) + 0.25;
  CHECK(r.expected_loss == doctest::Approx(hand).epsilon(1e-15));
  CHECK(r.expected_loss == doctest::Approx(0.8096014610110587).epsilon(1e-15));
  CHECK(r.pseudo_regret == doctest::Approx(0.8096014610110587).epsilon(1e-15));

  std::vector<double> big(11 * 2, 0.5);
  CHECK_THROWS(exact_expectation_oracle(exp3_kernel(2, 1.0), ObliviousAdversary(11, 2, big), 11));
}

TEST_CASE("probabilities depend only on differences of cumulative losses") {
  Exp3 a = Exp3::fixed(3, 0.4);
  Exp3 b = Exp3::fixed(3, 0.4);
  const std::vector<double> e1{0.5, 1.0, 0.0};
  const std::vector<double> e2{1.5, 2.0, 1.0};
  a.apply_estimate(e1);
  b.apply_estimate(e2);
  for (int i = 0; i < 3; ++i) {
    CHECK(a.probabilities()[i] == doctest::Approx(b.probabilities()[i]).epsilon(1e-14));
  }
}

TEST_CASE("gain view and loss view agree for Exp3") {
  // Adding the same constant to every arm leaves the softmax unchanged.
  Exp3 loss_view = Exp3::fixed(3, 0.05);
  std::vector<double> gains(3, 0.0);
  for (int t = 0; t < 30; ++t) {
    const std::size_t a = static_cast<std::size_t>(t % 3);
    const double loss = 0.1 * static_cast<double>(a + 1);
    const auto est = importance_loss_estimate(loss_view.probabilities(), a, loss);
    for (int i = 0; i < 3; ++i) gains[i] += 1.0 - est[i];
    loss_view.apply_estimate(est);
    std::vector<double> neg(3);
    for (int i = 0; i < 3; ++i) neg[i] = -gains[i];
    const auto p = exp3_probs(neg, 0.05);
    for (int i = 0; i < 3; ++i) {
      CHECK(loss_view.probabilities()[i] == doctest::Approx(p[i]).epsilon(1e-12));
    }
  }
}
