#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "bandits/adversarial.h"
#include "bandits/rng.h"

namespace bandits {

// One round of advice: N probability vectors over K arms.
using AdviceRow = std::vector<std::vector<double>>;

void validate_advice(const AdviceRow& advice, std::size_t arms);

// (1 - gamma) E_{j~q} xi^j + gamma / K.
std::vector<double> exp4_arm_probs(std::span<const double> q,
                                   const AdviceRow& advice, double gamma);

// y_j = <xi^j, estimate>.
std::vector<double> expert_loss_estimates(const AdviceRow& advice,
                                          std::span<const double> estimate);

class Exp4 {
 public:
  enum class Schedule { kFixed, kAnytime };

  // Without mixing: eta = sqrt(2 ln N / (nK)) (fixed) or sqrt(ln N / (tK)).
  Exp4(std::size_t experts, std::size_t arms, double horizon, Schedule schedule);
  // With mixing coefficient gamma and eta = gamma / K.
  static Exp4 with_mixing(std::size_t experts, std::size_t arms, double gamma);
  // Arbitrary constant eta and mixing.
  static Exp4 custom(std::size_t experts, std::size_t arms, double eta,
                     double gamma);

  std::size_t experts() const { return q_.size(); }
  std::size_t arms() const { return arms_; }
  double gamma() const { return gamma_; }

  // Arm distribution for this round's advice; remembered for observe().
  const std::vector<double>& distribute(const AdviceRow& advice);
  std::size_t select(const AdviceRow& advice, Rng& rng);
  void observe(std::size_t arm, double loss);
  // Applies pre-computed expert loss estimates (eta_t, then next q).
  void apply_expert_estimates(std::span<const double> y);

  const std::vector<double>& expert_distribution() const { return q_; }
  const std::vector<double>& arm_distribution() const { return p_; }

 private:
  Exp4(std::size_t experts, std::size_t arms, double eta, double gamma,
       bool anytime);
  double eta_at(std::size_t t) const;

  std::size_t arms_;
  double eta_;
  double gamma_;
  bool anytime_;
  std::vector<double> cumulative_;
  std::vector<double> q_;
  std::vector<double> p_;
  AdviceRow advice_;
  std::size_t round_ = 0;
};

// Exp3 driven by plays drawn from an external distribution q: the estimate is
// loss / q_chosen. Throws if any q_i is below `floor`.
void exp3_external_step(Exp3& exp3, std::span<const double> q,
                        std::size_t chosen, double loss, double floor);

// One anytime Exp3 per context, created on first sight.
class SExp3 {
 public:
  explicit SExp3(std::size_t arms) : arms_(arms) {}

  std::size_t arms() const { return arms_; }
  std::size_t contexts() const { return instances_.size(); }

  // Uniform for unseen contexts.
  std::vector<double> probabilities(const std::string& context) const;
  std::size_t select(const std::string& context, Rng& rng);
  void observe(const std::string& context, std::size_t arm, double loss);
  void observe_external(const std::string& context, std::span<const double> q,
                        std::size_t arm, double loss, double floor);

 private:
  Exp3& instance(const std::string& context);

  std::size_t arms_;
  std::unordered_map<std::string, Exp3> instances_;
};

// n^{-1/3} (maxS K ln K)^{1/3} sqrt(ln |Theta|), clamped to 1/2. For a single
// context set the sqrt(ln |Theta|) factor vanishes, so it is dropped.
double theta_gamma(double n, std::size_t max_context_set, std::size_t arms,
                   std::size_t theta_count);

// Exp4 with mixing over S-Exp3 experts, one per context set.
class ThetaExp4 {
 public:
  ThetaExp4(std::size_t theta_count, std::size_t arms, double gamma);

  std::size_t arms() const { return exp4_.arms(); }
  std::size_t theta_count() const { return experts_.size(); }

  // contexts[theta] is this round's context under partition theta.
  std::size_t select(const std::vector<std::string>& contexts, Rng& rng);
  void observe(std::size_t arm, double loss);

  const std::vector<double>& arm_distribution() const {
    return exp4_.arm_distribution();
  }
  const AdviceRow& advice() const { return advice_; }

 private:
  Exp4 exp4_;
  std::vector<SExp3> experts_;
  std::vector<std::string> contexts_;
  AdviceRow advice_;
};

std::vector<double> banditron_probs(std::size_t predicted, double gamma,
                                    std::size_t classes);

// W + X~ with X~_{ij} = x_j (1{Y=y} 1{Y=i} / p_i - 1{yhat=i}).
Eigen::MatrixXd banditron_update(const Eigen::MatrixXd& w,
                                 const Eigen::VectorXd& x,
                                 std::size_t predicted, std::size_t played,
                                 bool correct, std::span<const double> p);

class Banditron {
 public:
  Banditron(std::size_t classes, std::size_t dim, double gamma);
  static double tuned_gamma(std::size_t classes, double n);

  // Argmax of Wx, lowest index on ties.
  std::size_t predict(const Eigen::VectorXd& x) const;
  // Draws Y_t; returns it and keeps yhat and p for observe().
  std::size_t select(const Eigen::VectorXd& x, Rng& rng);
  void observe(bool correct);

  const Eigen::MatrixXd& weights() const { return w_; }
  double gamma() const { return gamma_; }

 private:
  Eigen::MatrixXd w_;
  double gamma_;
  Eigen::VectorXd x_;
  std::size_t predicted_ = 0;
  std::size_t played_ = 0;
  std::vector<double> p_;
};

double sexp3_bound(double n, std::size_t contexts, std::size_t arms);
// sqrt(2 n K ln N).
double exp4_bound(double n, std::size_t arms, std::size_t experts);
// gamma n / 2 + K ln N / gamma.
double exp4_mixing_bound(double n, std::size_t arms, std::size_t experts,
                         double gamma);
// Pseudo-regret bound of the Theta composition for the given gamma.
double theta_bound(double n, std::size_t max_context_set, std::size_t arms,
                   std::size_t theta_count, double gamma);
// E M_n bound with the average hinge loss term.
double banditron_bound(std::size_t classes, double n, double u_norm,
                       double hinge_loss);
// Looser variant: L + (1 + sqrt2 |U|) K^{1/3} n^{2/3} + ...
double banditron_bound_loose(std::size_t classes, double n, double u_norm,
                             double hinge_loss);

struct ContextStream {
  // contexts[t][c] is column c of round t.
  std::vector<std::vector<std::string>> contexts;
  std::vector<std::vector<double>> losses;
};

// CSV with header; columns named ctx* hold contexts, loss* the loss vector.
ContextStream load_context_stream(const std::string& path);

struct MulticlassData {
  Eigen::MatrixXd features;  // n x d, one example per row
  std::vector<std::size_t> labels;
  std::size_t classes = 0;
};

// CSV with header; columns named x_* are features, `label` is the class.
MulticlassData load_multiclass(const std::string& path);

// Linearly separable stream: x = normalize(c e_y + noise), kept only when
// x_y - max_{i != y} x_i >= 1/c, so U = c [e_1 ... e_K] has hinge loss 0.
MulticlassData make_separable_stream(std::size_t classes, std::size_t dim,
                                     std::size_t n, double c, Rng& rng);

// Multiclass hinge loss sum_t max(0, 1 - (Ux)_y + max_{i != y} (Ux)_i).
double multiclass_hinge_loss(const Eigen::MatrixXd& u, const MulticlassData& data);

}  // namespace bandits
