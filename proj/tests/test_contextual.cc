#include "doctest.h"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "bandits/contextual.h"

using namespace bandits;

TEST_CASE("Exp4 arm distribution") {
  const AdviceRow advice{{0.2, 0.8}, {0.5, 0.5}};
  const std::vector<double> q{1.0, 0.0};
  const auto p = exp4_arm_probs(q, advice, 0.1);
  CHECK(p[0] == doctest::Approx(0.23));
  CHECK(p[1] == doctest::Approx(0.77));
  const AdviceRow bad{{0.2, 0.7}};
  CHECK_THROWS(validate_advice(bad, 2));
  const AdviceRow neg{{-0.2, 1.2}};
  CHECK_THROWS(validate_advice(neg, 2));
}

TEST_CASE("expert loss estimates") {
  const AdviceRow advice{{0.5, 0.5}, {0.0, 1.0}};
  const std::vector<double> est{2.0, 0.0};
  const auto y = expert_loss_estimates(advice, est);
  CHECK(y[0] == doctest::Approx(1.0));
  CHECK(y[1] == doctest::Approx(0.0));
}

TEST_CASE("Exp4 update") {
  Exp4 e = Exp4::custom(2, 2, 1.0, 0.0);
  const std::vector<double> y{std::log(2.0), 0.0};
  e.apply_expert_estimates(y);
  CHECK(e.expert_distribution()[0] == doctest::Approx(1.0 / 3.0));
  CHECK(e.expert_distribution()[1] == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("Exp4 with identical experts reproduces the expert") {
  Rng rng(4, 0);
  Exp4 e(3, 3, 500, Exp4::Schedule::kFixed);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> xi{rng.uniform() + 0.01, rng.uniform() + 0.01, rng.uniform() + 0.01};
    const double s = xi[0] + xi[1] + xi[2];
    for (double& v : xi) v /= s;
    const AdviceRow advice(3, xi);
    const auto a = e.select(advice, rng);
    for (int i = 0; i < 3; ++i) CHECK(e.arm_distribution()[i] == doctest::Approx(xi[i]).epsilon(1e-12));
    for (double q : e.expert_distribution()) CHECK(q == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    e.observe(a, rng.uniform());
  }
}

TEST_CASE("Exp4 estimates are unbiased by enumeration") {
  const AdviceRow advice{{0.1, 0.6, 0.3}, {1.0, 0.0, 0.0}};
  const std::vector<double> loss{0.4, 0.9, 0.2};
  const std::vector<double> q{0.3, 0.7};
  const auto p = exp4_arm_probs(q, advice, 0.2);
  for (std::size_t j = 0; j < 2; ++j) {
    double mean = 0.0;
    for (std::size_t a = 0; a < 3; ++a) {
      const auto est = importance_loss_estimate(p, a, loss[a]);
      mean += p[a] * expert_loss_estimates(advice, est)[j];
    }
    double truth = 0.0;
    for (std::size_t a = 0; a < 3; ++a) truth += advice[j][a] * loss[a];
    CHECK(mean == doctest::Approx(truth).epsilon(1e-12));
  }
}

TEST_CASE("Exp3 under external sampling") {
  Exp3 e = Exp3::fixed(2, 0.5);
  const std::vector<double> q{0.5, 0.5};
  exp3_external_step(e, q, 0, 1.0, 0.0);
  CHECK(e.cumulative()[0] == doctest::Approx(2.0));
  CHECK(e.cumulative()[1] == 0.0);
  const std::vector<double> low{0.01, 0.99};
  CHECK_THROWS_AS(exp3_external_step(e, low, 1, 1.0, 0.05), std::domain_error);
}

TEST_CASE("S-Exp3 keeps one instance per context") {
  SExp3 s(3);
  Rng rng(2, 0);
  for (int t = 0; t < 30; ++t) {
    const std::string ctx = t % 2 ? "a" : "b";
    const auto a = s.select(ctx, rng);
    s.observe(ctx, a, a == 0 ? 0.0 : 1.0);
  }
  CHECK(s.contexts() == 2);
  for (double p : s.probabilities("unseen")) CHECK(p == doctest::Approx(1.0 / 3.0));
  CHECK(s.probabilities("a")[0] > 1.0 / 3.0);
}

TEST_CASE("S-Exp3 Jensen step over random partitions") {
  Rng rng(9, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t contexts = 1 + rng.index(10);
    const std::size_t k = 2 + rng.index(5);
    std::vector<double> counts(contexts);
    double n = 0.0;
    for (double& c : counts) {
      c = static_cast<double>(rng.index(1000));
      n += c;
    }
    double split = 0.0;
    for (double c : counts) split += std::sqrt(2.0 * c * k * std::log(static_cast<double>(k)));
    CHECK(split <= sexp3_bound(n, contexts, k) * (1 + 1e-12));
  }
}

TEST_CASE("theta composition parameters") {
  CHECK(theta_gamma(1000, 4, 2, 2) == doctest::Approx(0.147361674).epsilon(1e-8));
  CHECK(theta_gamma(1000, 4, 2, 1) == doctest::Approx(theta_gamma(1000, 4, 2, 2) / std::sqrt(std::log(2.0))));
  CHECK(theta_gamma(1, 100, 10, 100) == 0.5);
  CHECK_THROWS(theta_gamma(1000, 4, 2, 0));
}

TEST_CASE("theta composition with one partition mixes the S-Exp3 advice") {
  ThetaExp4 c(1, 3, 0.3);
  Rng rng(5, 0);
  for (int t = 0; t < 50; ++t) {
    const std::vector<std::string> ctx{t % 3 == 0 ? "x" : "y"};
    const auto a = c.select(ctx, rng);
    const auto& adv = c.advice()[0];
    for (int i = 0; i < 3; ++i) {
      CHECK(c.arm_distribution()[i] == doctest::Approx(0.7 * adv[i] + 0.1).epsilon(1e-12));
    }
    c.observe(a, a == 1 ? 0.0 : 1.0);
  }
}

TEST_CASE("Banditron distribution") {
  const auto p = banditron_probs(1, 0.2, 4);
  CHECK(p[0] == doctest::Approx(0.05));
  CHECK(p[1] == doctest::Approx(0.85));
  CHECK(p[2] == doctest::Approx(0.05));
  CHECK(p[3] == doctest::Approx(0.05));
  CHECK(Banditron::tuned_gamma(8, 1000) == doctest::Approx(0.2));
}

TEST_CASE("Banditron update") {
  const auto p = banditron_probs(1, 0.2, 4);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(4, 2);
  Eigen::VectorXd x(2);
  x << 1.0, 0.0;

  SUBCASE("incorrect guess only penalizes the predicted row") {
    const auto u = banditron_update(w, x, 1, 2, false, p);
    CHECK(u(1, 0) == doctest::Approx(-1.0));
    CHECK(u.row(2).norm() == 0.0);
    CHECK(u.row(0).norm() == 0.0);
  }
  SUBCASE("correct guess on the predicted row") {
    const auto u = banditron_update(w, x, 1, 1, true, p);
    CHECK(u(1, 0) == doctest::Approx(1.0 / 0.85 - 1.0));
    CHECK(u(1, 0) == doctest::Approx(0.1765).epsilon(1e-3));
    CHECK(u(1, 1) == 0.0);
  }
  SUBCASE("zero input leaves W unchanged") {
    Eigen::MatrixXd w1 = Eigen::MatrixXd::Random(4, 2);
    const auto u = banditron_update(w1, Eigen::VectorXd::Zero(2), 1, 0, true, p);
    CHECK((u - w1).norm() == 0.0);
  }
}

TEST_CASE("Banditron update is unbiased for the Perceptron update") {
  Rng rng(13, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t k = 2 + rng.index(5);
    Eigen::VectorXd x(3);
    x << rng.normal(), rng.normal(), rng.normal();
    const std::size_t yhat = rng.index(k);
    const std::size_t y = rng.index(k);
    const auto p = banditron_probs(yhat, 0.1 + 0.5 * rng.uniform(), k);
    const Eigen::MatrixXd w = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), 3);
    Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), 3);
    for (std::size_t played = 0; played < k; ++played) {
      mean += p[played] * banditron_update(w, x, yhat, played, played == y, p);
    }
    Eigen::MatrixXd perceptron = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), 3);
    perceptron.row(static_cast<Eigen::Index>(y)) += x.transpose();
    perceptron.row(static_cast<Eigen::Index>(yhat)) -= x.transpose();
    CHECK((mean - perceptron).norm() < 1e-12);
  }
}

TEST_CASE("Banditron prediction breaks ties toward the lowest index") {
  Banditron b(3, 2, 0.1);
  Eigen::VectorXd x(2);
  x << 1.0, 1.0;
  CHECK(b.predict(x) == 0);
}

TEST_CASE("Banditron bounds") {
  CHECK(banditron_bound(9, 1e5, 6.0, 0.0) == doctest::Approx(19509.19).epsilon(1e-6));
  CHECK(banditron_bound_loose(9, 1e5, 6.0, 0.0) == doctest::Approx(57535.17).epsilon(1e-6));
}

TEST_CASE("separable stream has zero hinge loss for its comparator") {
  Rng rng(3, 0);
  const double c = 2.0;
  const auto data = make_separable_stream(4, 6, 500, c, rng);
  CHECK(data.labels.size() == 500);
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(4, 6);
  for (int i = 0; i < 4; ++i) u(i, i) = c;
  CHECK(multiclass_hinge_loss(u, data) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(u.norm() == doctest::Approx(4.0));
}

TEST_CASE("mixing bounds") {
  CHECK(exp4_bound(100, 2, 4) == doctest::Approx(std::sqrt(400 * std::log(4.0))));
  CHECK(exp4_mixing_bound(100, 2, 4, 0.2) == doctest::Approx(10 + 2 * std::log(4.0) / 0.2));
}
