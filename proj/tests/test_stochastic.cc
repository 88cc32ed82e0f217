#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "bandits/stochastic.h"

using namespace bandits;

TEST_CASE("Hoeffding psi inverse") {
  CHECK(hoeffding_psi_star_inv(0.0) == 0.0);
  CHECK(hoeffding_psi_star_inv(2.0) == doctest::Approx(1.0));
  CHECK(hoeffding_psi_star_inv(0.5) == doctest::Approx(0.5));
  CHECK_THROWS_AS(hoeffding_psi_star_inv(-1.0), std::domain_error);
}

TEST_CASE("UCB forces untried arms and breaks ties low") {
  UcbState s(2, 2.5);
  s.counts = {0, 5};
  s.means = {0.0, 0.9};
  s.t = 6;
  CHECK(ucb_select(s, hoeffding_psi()) == 0);

  UcbState tie(2, 2.5);
  tie.counts = {3, 3};
  tie.means = {0.4, 0.4};
  tie.t = 7;
  CHECK(ucb_select(tie, hoeffding_psi()) == 0);
}

TEST_CASE("UCB index evaluation") {
  UcbState s(2, 2.0);
  s.counts = {4, 4};
  s.means = {0.5, 0.9};
  s.t = std::exp(1.0);
  // mu + sqrt(alpha ln t / (2 T)) = mu + 0.5
  CHECK(ucb_select(s, hoeffding_psi()) == 1);
}

TEST_CASE("UCB argmax is invariant under a uniform shift of the means") {
  UcbState s(3, 2.5);
  s.counts = {3, 7, 2};
  s.means = {0.4, 0.6, 0.3};
  s.t = 12;
  const auto a = ucb_select(s, hoeffding_psi());
  for (double& m : s.means) m += 0.2;
  CHECK(ucb_select(s, hoeffding_psi()) == a);
}

TEST_CASE("Bernoulli KL values") {
  CHECK(kl_bernoulli(0.3, 0.3) == doctest::Approx(0.0));
  CHECK(kl_bernoulli(0.5, 0.75) == doctest::Approx(0.143841036).epsilon(1e-8));
  CHECK(kl_bernoulli(0.6, 0.9) == doctest::Approx(0.311238680).epsilon(1e-8));
  CHECK(kl_bernoulli(0.6, 0.9) >= 2 * 0.3 * 0.3);
  CHECK(kl_bernoulli(0.0, 0.5) == doctest::Approx(std::log(2.0)));
  CHECK_THROWS_AS(kl_bernoulli(0.5, 0.0), std::domain_error);
  CHECK_THROWS_AS(kl_bernoulli(0.5, 1.0), std::domain_error);
}

TEST_CASE("KL sandwich bounds on a grid") {
  for (int i = 0; i <= 20; ++i) {
    for (int j = 1; j < 20; ++j) {
      const double p = i / 20.0, q = j / 20.0;
      const double kl = kl_bernoulli(p, q);
      CHECK(kl >= 2 * (p - q) * (p - q) - 1e-12);
      CHECK(kl <= (p - q) * (p - q) / (q * (1 - q)) + 1e-12);
    }
  }
}

TEST_CASE("lower-bound constant") {
  const std::vector<double> m{0.9, 0.6};
  CHECK(kl_lower_bound_constant(m) == doctest::Approx(0.963890479).epsilon(1e-8));
  const std::vector<double> eq{0.4, 0.4};
  CHECK(kl_lower_bound_constant(eq) == 0.0);
  const std::vector<double> three{0.5, 0.5, 0.9};
  CHECK(kl_lower_bound_constant(three) ==
        doctest::Approx(2 * 0.4 / kl_bernoulli(0.5, 0.9)));
  CHECK(kl_lower_bound_constant(three) == doctest::Approx(1.566092151).epsilon(1e-8));
  const std::vector<double> top{1.0, 0.5};
  CHECK_THROWS_AS(kl_lower_bound_constant(top), std::domain_error);
}

TEST_CASE("UCB bound formula") {
  const std::vector<double> none{0.0, 0.0};
  CHECK(ucb_bound(2.5, none, 1e4) == 0.0);
  const std::vector<double> g{0.3};
  CHECK(ucb_bound(2.5, g, 1e4) == doctest::Approx(158.505673).epsilon(1e-8));
  CHECK(ucb_bound(2.5, g, 2e4) - ucb_bound(2.5, g, 1e4) ==
        doctest::Approx(5.0 / 0.3 * std::log(2.0)));
  CHECK_THROWS(ucb_bound(2.0, g, 10));
}

TEST_CASE("Thompson posterior bookkeeping") {
  ThompsonState s(2);
  CHECK(s.alpha[0] == 1.0);
  CHECK(s.beta[1] == 1.0);
  thompson_update(s, 0, 1);
  CHECK(s.posterior_mean(0) == doctest::Approx(2.0 / 3.0));
  ThompsonState t(1);
  for (int i = 0; i < 4; ++i) thompson_update(t, 0, 1);
  for (int i = 0; i < 6; ++i) thompson_update(t, 0, 0);
  CHECK(t.posterior_mean(0) == (4.0 + 1.0) / (10.0 + 2.0));
  Rng rng(1, 0);
  for (int i = 0; i < 100; ++i) CHECK(thompson_step(s, rng) < 2);
}

TEST_CASE("epsilon-greedy schedule") {
  CHECK(eps_greedy_epsilon(2, 0.1, 10) == 1.0);
  CHECK(eps_greedy_epsilon(2, 0.1, 10000) == doctest::Approx(0.02));
  EpsGreedyState s(2, 0.5);
  s.counts = {10, 10};
  s.means = {0.2, 0.7};
  s.t = 1000000;
  Rng rng(4, 0);
  int ones = 0;
  for (int i = 0; i < 1000; ++i) ones += eps_greedy_step(s, rng) == 1;
  CHECK(ones > 990);
}

TEST_CASE("UCB and epsilon-greedy pull every arm once first") {
  Rng rng(9, 0);
  UcbPolicy ucb(4, 2.5);
  EpsGreedyPolicy eg(4, 0.2);
  std::vector<int> seen_u(4, 0), seen_e(4, 0);
  for (int t = 0; t < 4; ++t) {
    const auto a = ucb.select(rng);
    ++seen_u[a];
    ucb.observe(a, 0.5, rng);
    const auto b = eg.select(rng);
    ++seen_e[b];
    eg.observe(b, 0.5, rng);
  }
  for (int i = 0; i < 4; ++i) {
    CHECK(seen_u[i] == 1);
    CHECK(seen_e[i] == 1);
  }
}

TEST_CASE("UCB policy rejects alpha <= 2") {
  CHECK_THROWS(UcbPolicy(2, 2.0));
}
