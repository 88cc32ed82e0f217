#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "bandits/adversarial.h"
#include "bandits/mirror.h"

using namespace bandits;

TEST_CASE("OMD steps") {
  SUBCASE("negative entropy on the simplex") {
    const auto spec = negentropy_capped(1.0);
    const Eigen::VectorXd x{{0.5, 0.5}};
    const auto y = omd_step(spec, x, Eigen::VectorXd{{1.0, 0.0}}, std::log(2.0));
    CHECK(y[0] == doctest::Approx(1.0 / 3.0));
    CHECK(y[1] == doctest::Approx(2.0 / 3.0));
    const auto same = omd_step(spec, x, Eigen::VectorXd::Zero(2), 0.7);
    CHECK((same - x).norm() < 1e-12);
  }
  SUBCASE("Euclidean ball") {
    const auto spec = euclidean_ball(1.0);
    const auto y = omd_step(spec, Eigen::VectorXd::Zero(2), Eigen::VectorXd{{1.0, 0.0}}, 0.1);
    CHECK(y[0] == doctest::Approx(-0.1));
    CHECK(y[1] == doctest::Approx(0.0));
    const auto far = omd_step(spec, Eigen::VectorXd::Zero(2), Eigen::VectorXd{{30.0, 40.0}}, 1.0);
    CHECK(far.norm() == doctest::Approx(1.0));
  }
}

TEST_CASE("ball gradient maps") {
  CHECK(ball_grad(Eigen::VectorXd::Zero(3)).norm() == 0.0);
  const auto v = ball_grad_star(Eigen::VectorXd{{3.0, 4.0}});
  CHECK(v[0] == doctest::Approx(0.5));
  CHECK(v[1] == doctest::Approx(4.0 / 6.0));
  CHECK_THROWS(ball_grad(Eigen::VectorXd{{0.6, 0.8}}));
  Rng rng(1, 0);
  for (int i = 0; i < 100; ++i) {
    Eigen::VectorXd x(3);
    for (int j = 0; j < 3; ++j) x[j] = rng.normal();
    x *= 0.99 * rng.uniform() / x.norm();
    CHECK((ball_grad_star(ball_grad(x)) - x).norm() < 1e-12);
  }
}

TEST_CASE("simplex OMD matches Exp3 bit for bit") {
  Rng rng(3, 0);
  const double eta = 0.37;
  NegentropySimplexOmd omd(4, eta);
  std::vector<double> cumulative(4, 0.0);
  for (int t = 0; t < 500; ++t) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(4);
    const auto a = rng.index(4);
    g[static_cast<Eigen::Index>(a)] = rng.uniform() * 4;
    omd.step(g);
    cumulative[a] += g[static_cast<Eigen::Index>(a)];
    const auto p = exp3_probs(cumulative, eta);
    for (int i = 0; i < 4; ++i) CHECK(omd.point()[i] == p[i]);
  }
}

TEST_CASE("Exp2 distribution and estimate") {
  const Eigen::MatrixXd basis = Eigen::MatrixXd::Identity(3, 3);
  SUBCASE("eta 0 mixes uniform with the design") {
    Eigen::MatrixXd pts(4, 2);
    pts << 1, 0, 0, 1, 1, 1, 0.2, 0.1;
    Exp2 e(pts, 0.0, 0.3);
    const auto p = e.probabilities();
    const auto& mu = e.exploration().weights;
    for (int i = 0; i < 4; ++i) CHECK(p[i] == doctest::Approx(0.7 * 0.25 + 0.3 * mu[i]));
  }
  SUBCASE("canonical basis recovers the coordinate estimator") {
    Exp2 e(basis, 0.0, 0.5);
    CHECK((e.design_matrix() - basis / 3.0).norm() < 1e-9);
    const auto est = e.estimate(1, 0.4);
    CHECK(est[0] == doctest::Approx(0.0));
    CHECK(est[1] == doctest::Approx(1.2));
    CHECK(est[2] == doctest::Approx(0.0));
  }
  SUBCASE("unbiased over three points in the plane") {
    Eigen::MatrixXd pts(3, 2);
    pts << 1, 0, 0, 1, -0.5, 0.8;
    Exp2 e(pts, 0.4, 0.2);
    const Eigen::Vector2d loss(0.3, -0.6);
    e.observe(2, pts.row(2).dot(loss));
    const auto p = e.probabilities();
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(2);
    for (int i = 0; i < 3; ++i) mean += p[i] * e.estimate(static_cast<std::size_t>(i), pts.row(i).dot(loss));
    CHECK((mean - loss).norm() < 1e-12);
  }
  const auto par = exp2_params(4000, 3, 20);
  CHECK(par.gamma == doctest::Approx(3 * par.eta));
}

TEST_CASE("semi-bandit estimate") {
  const Eigen::VectorXd x{{0.25, 0.75, 0.5, 0.5}};
  const Eigen::VectorXi v{{1, 0, 1, 0}};
  const Eigen::VectorXd l{{0.5, 0.9, 0.2, 0.4}};
  const auto est = semibandit_estimate(x, v, l);
  CHECK(est[0] == doctest::Approx(2.0));
  CHECK(est[1] == 0.0);
  CHECK(est[2] == doctest::Approx(0.4));
  CHECK(est[3] == 0.0);
  const Eigen::VectorXd zero{{0.0, 1.0}};
  CHECK_THROWS(semibandit_estimate(zero, Eigen::VectorXi{{1, 0}}, Eigen::VectorXd{{1.0, 1.0}}));

  // Exact unbiasedness over the sampler's outcomes.
  const Eigen::VectorXd y{{0.3, 0.9, 0.4, 0.4}};
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(4);
  for (const auto& o : madow_outcomes(y)) mean += o.probability * semibandit_estimate(y, o.subset, l);
  CHECK((mean - l).norm() < 1e-12);
}

TEST_CASE("OSMD on m-sets") {
  CHECK(osmd_negent_eta(1000, 6, 2) == doctest::Approx(std::sqrt(4.0 / 6000 * std::log(3.0))));
  CHECK(osmd_potential_eta(1.0, 6, 2, 2.0) == doctest::Approx(std::sqrt(2.0)));
  CHECK(osmd_potential_bound(5000, 6, 2, 2.0) == doctest::Approx(692.820323).epsilon(1e-8));
  CHECK(osmd_negent_bound(1000, 4, 4) == 0.0);

  Rng rng(2, 0);
  for (bool negent : {true, false}) {
    OsmdMsets full = negent ? OsmdMsets(4, 4, 0.1) : OsmdMsets(4, 4, 0.1, power_potential(2.0));
    OsmdMsets part = negent ? OsmdMsets(6, 2, 0.1) : OsmdMsets(6, 2, 0.1, power_potential(2.0));
    for (int t = 0; t < 200; ++t) {
      const auto v = full.select(rng);
      CHECK(v.sum() == 4);
      Eigen::VectorXd l(4);
      for (int i = 0; i < 4; ++i) l[i] = rng.uniform();
      full.observe(l);
      CHECK((full.point() - Eigen::VectorXd::Ones(4)).norm() < 1e-9);

      const auto w = part.select(rng);
      CHECK(w.sum() == 2);
      Eigen::VectorXd l6(6);
      for (int i = 0; i < 6; ++i) l6[i] = rng.uniform();
      part.observe(l6);
      CHECK(part.point().sum() == doctest::Approx(2.0));
      CHECK(part.point().maxCoeff() <= 1.0 + 1e-12);
      CHECK(part.point().minCoeff() > 0.0);
    }
  }
}

TEST_CASE("q-potential divergence bound") {
  Rng rng(6, 0);
  const auto psi = power_potential(2.0);
  for (int trial = 0; trial < 500; ++trial) {
    double lhs = 0.0, rhs = 0.0;
    for (int i = 0; i < 4; ++i) {
      const double v = -0.1 - 3 * rng.uniform();
      const double u = v - 2 * rng.uniform();
      lhs += psi.psi_integral(u) - psi.psi_integral(v) - psi.psi(v) * (u - v);
      rhs += 0.5 * psi.psi_prime(v) * (u - v) * (u - v);
    }
    CHECK(lhs <= rhs + 1e-12);
  }
}

TEST_CASE("Euclidean ball strategy") {
  const auto p = ball_params(4000, 3);
  CHECK(p.gamma == doctest::Approx(1.0 / std::sqrt(4000.0)));
  CHECK(p.eta == doctest::Approx(std::sqrt(std::log(4000.0) / 24000.0)));
  CHECK_THROWS(ball_params(2, 3));
  CHECK(ball_bound(4000, 3) == doctest::Approx(946.444590).epsilon(1e-8));
  CHECK(exp2_bound(4000, 3, 20) == doctest::Approx(656.799397).epsilon(1e-8));

  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(2);
  const BallPlay explore{Eigen::VectorXd{{1.0, 0.0}}, false};
  const auto est = ball_estimate(zero, explore, 0.3);
  CHECK(est[0] == doctest::Approx(0.6));
  CHECK(est[1] == doctest::Approx(0.0));
  const Eigen::VectorXd x{{0.3, -0.4}};
  const BallPlay exploit{x / x.norm(), true};
  CHECK(ball_estimate(x, exploit, 0.9).norm() == 0.0);

  // Enumerate (xi, I, eps) at d = 2.
  const Eigen::VectorXd loss{{0.3, 0.7}};
  Eigen::VectorXd mean_play = x * 1.0 * 0.0;
  Eigen::VectorXd mean_est = Eigen::VectorXd::Zero(2);
  const double r = x.norm();
  mean_play += r * (x / r);
  mean_est += r * ball_estimate(x, exploit, (x / r).dot(loss));
  for (int i = 0; i < 2; ++i) {
    for (double eps : {-1.0, 1.0}) {
      Eigen::VectorXd pt = Eigen::VectorXd::Zero(2);
      pt[i] = eps;
      const double w = (1 - r) * 0.5 * 0.5;
      mean_play += w * pt;
      mean_est += w * ball_estimate(x, BallPlay{pt, false}, pt.dot(loss));
    }
  }
  CHECK((mean_play - x).norm() < 1e-12);
  CHECK((mean_est - loss).norm() < 1e-12);

  Rng rng(8, 0);
  BallOsmd b(3, p.eta, p.gamma);
  for (int t = 0; t < 2000; ++t) {
    const auto& play = b.select(rng);
    CHECK(play.point.norm() <= 1.0 + 1e-12);
    b.observe(play.point.dot(Eigen::Vector3d(0.5, -0.5, 0.2)));
    CHECK(b.point().norm() <= 1.0 - p.gamma + 1e-12);
  }
}

TEST_CASE("ball projection satisfies the Pythagorean inequality") {
  Rng rng(10, 0);
  const auto spec = ball_barrier(0.9);
  for (int trial = 0; trial < 1000; ++trial) {
    Eigen::VectorXd w(3), y(3);
    for (int j = 0; j < 3; ++j) {
      w[j] = rng.normal();
      y[j] = rng.normal();
    }
    w *= 0.999 * rng.uniform() / w.norm();
    y *= 0.9 * rng.uniform() / y.norm();
    const auto z = bregman_project(spec, w);
    CHECK(z.norm() <= 0.9 + 1e-12);
    CHECK(bregman(spec, y, w) >= bregman(spec, y, z) + bregman(spec, z, w) - 1e-9);
  }
}
