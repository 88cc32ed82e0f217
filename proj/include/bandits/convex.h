#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

#include "bandits/rng.h"

namespace bandits {

// Centered ball of radius `size` or box [-size, size]^d, with r B in K in R B.
struct ConvexBody {
  enum class Kind { kBall, kBox };

  static ConvexBody ball(std::size_t d, double radius);
  static ConvexBody box(std::size_t d, double half_width);

  Kind kind;
  std::size_t d;
  double size;
  double r;
  double R;

  // Euclidean projection onto scale * K.
  Eigen::VectorXd project(const Eigen::VectorXd& x, double scale = 1.0) const;
  bool contains(const Eigen::VectorXd& x, double slack = 1e-12) const;
};

// Oblivious sequence of convex losses l_t(x) of one family.
class ConvexLossSequence {
 public:
  enum class Family { kLinear, kAbsolute, kQuadratic };

  ConvexLossSequence(Family family, std::vector<Eigen::VectorXd> centers);
  // n loss vectors drawn uniformly on the unit sphere (or scaled for
  // quadratic centers inside the body).
  static ConvexLossSequence random(Family family, std::size_t d, std::size_t n,
                                   double scale, Rng& rng);

  Family family() const { return family_; }
  std::size_t rounds() const { return centers_.size(); }
  double value(std::size_t t, const Eigen::VectorXd& x) const;
  // Lipschitz constant and sup bound over the given body.
  double lipschitz(const ConvexBody& body) const;
  double sup_bound(const ConvexBody& body) const;
  // min over K of sum_{t < rounds} l_t(x), exact for the built-in families.
  double best_fixed(const ConvexBody& body, std::size_t rounds) const;
  // best_fixed for every prefix length 1..rounds() in one pass.
  std::vector<double> best_fixed_curve(const ConvexBody& body) const;

 private:
  Family family_;
  std::vector<Eigen::VectorXd> centers_;
};

// (d / 2 delta) (f+ - f-) S.
Eigen::VectorXd two_point_estimate(double f_plus, double f_minus,
                                   const Eigen::VectorXd& s, double delta);
// (d / delta) f S.
Eigen::VectorXd one_point_estimate(double f_val, const Eigen::VectorXd& s,
                                   double delta);

struct OsgdSchedule {
  double eta;
  double delta;
};

// eta = R / (G d sqrt n); delta defaults to min(r/2, 1/n).
OsgdSchedule two_point_schedule(double n, const ConvexBody& body, double g,
                                double delta = 0.0);
OsgdSchedule one_point_schedule(double n, const ConvexBody& body, double g,
                                double l);

struct OsgdRound {
  Eigen::VectorXd played;
  double loss;
  Eigen::VectorXd estimate;
};

// OSGD on (1 - delta/r) K with one- or two-point gradient estimates.
class Osgd {
 public:
  enum class Mode { kOnePoint, kTwoPoint };

  Osgd(ConvexBody body, Mode mode, OsgdSchedule schedule);

  const Eigen::VectorXd& point() const { return x_; }
  double shrink() const { return shrink_; }

  // One round against f; checks query feasibility and estimate norms
  // (against `g` for two-point, `l` for one-point).
  OsgdRound round(const std::function<double(const Eigen::VectorXd&)>& f,
                  double g, double l, Rng& rng);

 private:
  ConvexBody body_;
  Mode mode_;
  OsgdSchedule schedule_;
  double shrink_;
  Eigen::VectorXd x_;
};

double osgd_two_point_bound(double n, const ConvexBody& body, double g,
                            double delta);
double osgd_one_point_bound(double n, const ConvexBody& body, double g,
                            double l);

extern const double kPhi;

// Fourth query point inside the larger gap.
double sgs_next_query(double a, double b, double c);

struct SgsStagePlan {
  double eps;
  std::size_t plays_per_point;
};

// eps_s = C_L phi^{-(s+3)}, plays = ceil((2 / eps^2) ln(6n)).
SgsStagePlan sgs_stage_plan(std::size_t s, double c_l, double n);

struct SgsBracket {
  double a;
  double b;
  double c;
};

// points are the four sorted queries, totals their stage losses. Keeps
// [p0, p2] when the lowest total is at p0 or p1, else [p1, p3].
SgsBracket sgs_eliminate(const std::array<double, 4>& points,
                         const std::array<double, 4>& totals);

class Sgs {
 public:
  Sgs(double n, double c_l);

  // Next point to play (round-robin over the stage's four points).
  double select();
  void observe(double loss);

  const SgsBracket& bracket() const { return bracket_; }
  std::size_t stage() const { return stage_; }
  std::size_t completed_stages() const { return stage_ - 1; }
  const std::array<double, 4>& points() const { return points_; }

 private:
  void start_stage();

  double n_;
  double c_l_;
  SgsBracket bracket_{0.0, 0.0, 1.0};
  std::size_t stage_ = 0;
  std::array<double, 4> points_{};
  std::array<double, 4> totals_{};
  std::size_t plays_per_point_ = 0;
  std::size_t played_in_stage_ = 0;
  std::size_t current_ = 0;
};

double sgs_bound(double n, double c_l, double c_h);

}  // namespace bandits
