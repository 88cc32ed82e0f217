#include "bandits/convex.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bandits/geometry.h"

namespace bandits {

const double kPhi = (1.0 + std::sqrt(5.0)) / 2.0;

ConvexBody ConvexBody::ball(std::size_t d, double radius) {
  if (d == 0 || !(radius > 0.0)) throw std::invalid_argument("ball: d >= 1, radius > 0");
  return {Kind::kBall, d, radius, radius, radius};
}

ConvexBody ConvexBody::box(std::size_t d, double half_width) {
  if (d == 0 || !(half_width > 0.0)) {
    throw std::invalid_argument("box: d >= 1, half width > 0");
  }
  return {Kind::kBox, d, half_width, half_width,
          half_width * std::sqrt(static_cast<double>(d))};
}

Eigen::VectorXd ConvexBody::project(const Eigen::VectorXd& x, double scale) const {
  const double s = size * scale;
  if (kind == Kind::kBox) return x.cwiseMax(-s).cwiseMin(s);
  const double norm = x.norm();
  return norm > s ? Eigen::VectorXd(x * (s / norm)) : x;
}

bool ConvexBody::contains(const Eigen::VectorXd& x, double slack) const {
  if (kind == Kind::kBox) return x.cwiseAbs().maxCoeff() <= size + slack;
  return x.norm() <= size + slack;
}

ConvexLossSequence::ConvexLossSequence(Family family,
                                       std::vector<Eigen::VectorXd> centers)
    : family_(family), centers_(std::move(centers)) {}

ConvexLossSequence ConvexLossSequence::random(Family family, std::size_t d,
                                              std::size_t n, double scale,
                                              Rng& rng) {
  std::vector<Eigen::VectorXd> c;
  c.reserve(n);
  for (std::size_t t = 0; t < n; ++t) c.push_back(scale * sample_sphere(d, rng));
  return ConvexLossSequence(family, std::move(c));
}

double ConvexLossSequence::value(std::size_t t, const Eigen::VectorXd& x) const {
  const Eigen::VectorXd& c = centers_.at(t);
  switch (family_) {
    case Family::kLinear:
      return c.dot(x);
    case Family::kAbsolute:
      return std::abs(c.dot(x));
    case Family::kQuadratic:
      return (x - c).squaredNorm();
  }
  return 0.0;
}

double ConvexLossSequence::lipschitz(const ConvexBody& body) const {
  double g = 0.0;
  for (const auto& c : centers_) {
    g = std::max(g, family_ == Family::kQuadratic ? 2.0 * (body.R + c.norm())
                                                  : c.norm());
  }
  return g;
}

double ConvexLossSequence::sup_bound(const ConvexBody& body) const {
  double l = 0.0;
  for (const auto& c : centers_) {
    l = std::max(l, family_ == Family::kQuadratic
                        ? (body.R + c.norm()) * (body.R + c.norm())
                        : c.norm() * body.R);
  }
  return l;
}

namespace {

// min over K of sum_{s<t} l_s(x) from the running sums S = sum c_s and
// Q = sum |c_s|^2.
double prefix_minimum(ConvexLossSequence::Family family, const ConvexBody& body,
                      const Eigen::VectorXd& sum, double sq_sum, double t) {
  switch (family) {
    case ConvexLossSequence::Family::kAbsolute:
      return 0.0;  // attained at the origin
    case ConvexLossSequence::Family::kLinear:
      return body.kind == ConvexBody::Kind::kBall ? -body.size * sum.norm()
                                                  : -body.size * sum.lpNorm<1>();
    case ConvexLossSequence::Family::kQuadratic: {
      const Eigen::VectorXd x = body.project(sum / t);
      return t * x.squaredNorm() - 2.0 * x.dot(sum) + sq_sum;
    }
  }
  return 0.0;
}

}  // namespace

double ConvexLossSequence::best_fixed(const ConvexBody& body,
                                      std::size_t rounds) const {
  rounds = std::min(rounds, centers_.size());
  if (rounds == 0) return 0.0;
  return best_fixed_curve(body)[rounds - 1];
}

std::vector<double> ConvexLossSequence::best_fixed_curve(const ConvexBody& body) const {
  std::vector<double> out;
  if (centers_.empty()) return out;
  out.reserve(centers_.size());
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(centers_.front().size());
  double sq_sum = 0.0;
  for (std::size_t t = 0; t < centers_.size(); ++t) {
    sum += centers_[t];
    sq_sum += centers_[t].squaredNorm();
    out.push_back(prefix_minimum(family_, body, sum, sq_sum, static_cast<double>(t + 1)));
  }
  return out;
}

Eigen::VectorXd two_point_estimate(double f_plus, double f_minus,
                                   const Eigen::VectorXd& s, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("two_point_estimate: delta > 0");
  return static_cast<double>(s.size()) / (2.0 * delta) * (f_plus - f_minus) * s;
}

Eigen::VectorXd one_point_estimate(double f_val, const Eigen::VectorXd& s,
                                   double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("one_point_estimate: delta > 0");
  return static_cast<double>(s.size()) / delta * f_val * s;
}

OsgdSchedule two_point_schedule(double n, const ConvexBody& body, double g,
                                double delta) {
  const double d = static_cast<double>(body.d);
  if (delta <= 0.0) delta = std::min(body.r / 2.0, 1.0 / n);
  return {body.R / (g * d * std::sqrt(n)), delta};
}

OsgdSchedule one_point_schedule(double n, const ConvexBody& body, double g,
                                double l) {
  const double d = static_cast<double>(body.d);
  const double k = 3.0 + body.R / body.r;
  const double delta = std::pow(2.0 * n, -0.25) * std::sqrt(body.R * d * l / (k * g));
  const double eta = std::pow(2.0 * n, -0.75) *
                     std::sqrt(body.R * body.R * body.R / (d * l * k * g));
  return {eta, delta};
}

Osgd::Osgd(ConvexBody body, Mode mode, OsgdSchedule schedule)
    : body_(body),
      mode_(mode),
      schedule_(schedule),
      shrink_(1.0 - schedule.delta / body.r),
      x_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(body.d))) {
  if (!(schedule.eta > 0.0) || !(schedule.delta > 0.0)) {
    throw std::invalid_argument("OSGD: eta and delta must be > 0");
  }
  if (!(schedule.delta < body.r)) {
    throw std::invalid_argument("OSGD: delta must be smaller than r");
  }
}

OsgdRound Osgd::round(const std::function<double(const Eigen::VectorXd&)>& f,
                      double g, double l, Rng& rng) {
  const Eigen::VectorXd s = sample_sphere(body_.d, rng);
  const double delta = schedule_.delta;
  const double d = static_cast<double>(body_.d);
  OsgdRound out;
  if (mode_ == Mode::kTwoPoint) {
    const Eigen::VectorXd plus = x_ + delta * s;
    const Eigen::VectorXd minus = x_ - delta * s;
    if (!body_.contains(plus, 1e-9) || !body_.contains(minus, 1e-9)) {
      throw std::logic_error("OSGD: query point outside K");
    }
    const double fp = f(plus);
    const double fm = f(minus);
    out.estimate = two_point_estimate(fp, fm, s, delta);
    if (out.estimate.norm() > g * d * (1.0 + 1e-9) + 1e-12) {
      throw std::logic_error("OSGD: two-point estimate exceeds G d");
    }
    const bool take_plus = rng.bernoulli(0.5);
    out.played = take_plus ? plus : minus;
    out.loss = take_plus ? fp : fm;
  } else {
    out.played = x_ + delta * s;
    if (!body_.contains(out.played, 1e-9)) {
      throw std::logic_error("OSGD: query point outside K");
    }
    out.loss = f(out.played);
    out.estimate = one_point_estimate(out.loss, s, delta);
    if (out.estimate.norm() > d * l / delta * (1.0 + 1e-9) + 1e-12) {
      throw std::logic_error("OSGD: one-point estimate exceeds dL/delta");
    }
  }
  x_ = body_.project(x_ - schedule_.eta * out.estimate, shrink_);
  return out;
}

double osgd_two_point_bound(double n, const ConvexBody& body, double g,
                            double delta) {
  const double d = static_cast<double>(body.d);
  return 2.0 * body.R * g * d * std::sqrt(n) +
         delta * (3.0 + body.R / body.r) * g * n;
}

double osgd_one_point_bound(double n, const ConvexBody& body, double g,
                            double l) {
  const double d = static_cast<double>(body.d);
  return 4.0 * std::pow(n, 0.75) *
         std::sqrt(body.R * d * l * (3.0 + body.R / body.r) * g);
}

double sgs_next_query(double a, double b, double c) {
  if (!(a < b && b < c)) throw std::invalid_argument("sgs: need a < b < c");
  const double inv_phi2 = 1.0 / (kPhi * kPhi);
  if (b - a > c - b) return b - inv_phi2 * (b - a);
  return b + inv_phi2 * (c - b);
}

SgsStagePlan sgs_stage_plan(std::size_t s, double c_l, double n) {
  if (s == 0 || !(n >= 1.0) || !(c_l > 0.0)) {
    throw std::invalid_argument("sgs_stage_plan: s >= 1, n >= 1, C_L > 0");
  }
  const double eps = c_l * std::pow(kPhi, -static_cast<double>(s + 3));
  const double plays = std::ceil(2.0 / (eps * eps) * std::log(6.0 * n));
  return {eps, static_cast<std::size_t>(plays)};
}

SgsBracket sgs_eliminate(const std::array<double, 4>& p,
                         const std::array<double, 4>& totals) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < 4; ++i) {
    if (totals[i] < totals[best]) best = i;
  }
  if (best <= 1) return {p[0], p[1], p[2]};
  return {p[1], p[2], p[3]};
}

Sgs::Sgs(double n, double c_l) : n_(n), c_l_(c_l) {
  if (!(n >= 1.0) || !(c_l > 0.0)) throw std::invalid_argument("SGS: n >= 1, C_L > 0");
  bracket_.b = 1.0 / (kPhi * kPhi);
  start_stage();
}

void Sgs::start_stage() {
  ++stage_;
  const double q = sgs_next_query(bracket_.a, bracket_.b, bracket_.c);
  const double lo = std::min(bracket_.b, q);
  const double hi = std::max(bracket_.b, q);
  points_ = {bracket_.a, lo, hi, bracket_.c};
  totals_ = {0.0, 0.0, 0.0, 0.0};
  plays_per_point_ = sgs_stage_plan(stage_, c_l_, n_).plays_per_point;
  played_in_stage_ = 0;
  current_ = 0;
}

double Sgs::select() { return points_[current_]; }

void Sgs::observe(double loss) {
  totals_[current_] += loss;
  current_ = (current_ + 1) % 4;
  if (++played_in_stage_ == 4 * plays_per_point_) {
    bracket_ = sgs_eliminate(points_, totals_);
    start_stage();
  }
}

double sgs_bound(double n, double c_l, double c_h) {
  const double x = 1.0 + c_l * c_l * n;
  const double log_phi = std::log(x) / std::log(kPhi);
  return c_h / (c_l * c_l) * 8.0 * std::pow(kPhi, 6) * std::log(6.0 * n) *
         (2.0 * kPhi / (kPhi - 1.0) * std::sqrt(x) + 0.25 * log_phi * log_phi);
}

}  // namespace bandits
