#include "bandits/contextual.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bandits {
namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    cells.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_number(const std::string& s, const std::string& path,
                    std::size_t row) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) {
    throw std::invalid_argument(path + ": row " + std::to_string(row) +
                                ": not a number: '" + s + "'");
  }
  return v;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  CsvTable table;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto cells = split_csv_line(line);
    if (table.header.empty()) {
      table.header = std::move(cells);
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw std::invalid_argument(path + ": row " +
                                  std::to_string(table.rows.size() + 1) +
                                  " has the wrong number of columns");
    }
    table.rows.push_back(std::move(cells));
  }
  if (table.header.empty()) throw std::invalid_argument(path + ": empty file");
  return table;
}

bool starts_with(const std::string& s, const char* prefix) {
  return s.rfind(prefix, 0) == 0;
}

}  // namespace

void validate_advice(const AdviceRow& advice, std::size_t arms) {
  if (advice.empty()) throw std::invalid_argument("advice: no experts");
  for (const auto& xi : advice) {
    if (xi.size() != arms) {
      throw std::invalid_argument("advice: vector length differs from K");
    }
    double total = 0.0;
    for (double v : xi) {
      if (v < 0.0) throw std::invalid_argument("advice: negative entry");
      total += v;
    }
    if (std::abs(total - 1.0) > 1e-12 * static_cast<double>(arms)) {
      throw std::invalid_argument("advice: vector does not sum to 1");
    }
  }
}

std::vector<double> exp4_arm_probs(std::span<const double> q,
                                   const AdviceRow& advice, double gamma) {
  if (q.size() != advice.size()) {
    throw std::invalid_argument("exp4_arm_probs: q and advice sizes differ");
  }
  const std::size_t k = advice.front().size();
  std::vector<double> p(k, 0.0);
  for (std::size_t j = 0; j < q.size(); ++j) {
    for (std::size_t i = 0; i < k; ++i) p[i] += q[j] * advice[j][i];
  }
  const double floor = gamma / static_cast<double>(k);
  for (double& v : p) v = (1.0 - gamma) * v + floor;
  return p;
}

std::vector<double> expert_loss_estimates(const AdviceRow& advice,
                                          std::span<const double> estimate) {
  std::vector<double> y(advice.size(), 0.0);
  for (std::size_t j = 0; j < advice.size(); ++j) {
    if (advice[j].size() != estimate.size()) {
      throw std::invalid_argument("expert_loss_estimates: dimension mismatch");
    }
    for (std::size_t i = 0; i < estimate.size(); ++i) {
      y[j] += advice[j][i] * estimate[i];
    }
  }
  return y;
}

Exp4::Exp4(std::size_t experts, std::size_t arms, double eta, double gamma,
           bool anytime)
    : arms_(arms),
      eta_(eta),
      gamma_(gamma),
      anytime_(anytime),
      cumulative_(experts, 0.0),
      q_(experts, 1.0 / static_cast<double>(experts)) {
  if (experts == 0 || arms == 0) {
    throw std::invalid_argument("Exp4: need at least one expert and one arm");
  }
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("Exp4: gamma must be in [0,1]");
  }
}

Exp4::Exp4(std::size_t experts, std::size_t arms, double horizon,
           Schedule schedule)
    : Exp4(experts, arms,
           std::sqrt(2.0 * std::log(static_cast<double>(experts)) /
                     (horizon * static_cast<double>(arms))),
           0.0, schedule == Schedule::kAnytime) {}

Exp4 Exp4::with_mixing(std::size_t experts, std::size_t arms, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("Exp4: gamma must be > 0");
  return Exp4(experts, arms, gamma / static_cast<double>(arms), gamma, false);
}

Exp4 Exp4::custom(std::size_t experts, std::size_t arms, double eta,
                  double gamma) {
  return Exp4(experts, arms, eta, gamma, false);
}

double Exp4::eta_at(std::size_t t) const {
  if (!anytime_) return eta_;
  return std::sqrt(std::log(static_cast<double>(q_.size())) /
                   (static_cast<double>(t) * static_cast<double>(arms_)));
}

const std::vector<double>& Exp4::distribute(const AdviceRow& advice) {
  validate_advice(advice, arms_);
  if (advice.size() != q_.size()) {
    throw std::invalid_argument("Exp4: wrong number of experts in advice");
  }
  advice_ = advice;
  p_ = exp4_arm_probs(q_, advice_, gamma_);
  return p_;
}

std::size_t Exp4::select(const AdviceRow& advice, Rng& rng) {
  return rng.categorical(distribute(advice));
}

void Exp4::observe(std::size_t arm, double loss) {
  if (p_.empty()) throw std::logic_error("Exp4: observe before select");
  const auto est = importance_loss_estimate(p_, arm, loss);
  apply_expert_estimates(expert_loss_estimates(advice_, est));
}

void Exp4::apply_expert_estimates(std::span<const double> y) {
  if (y.size() != cumulative_.size()) {
    throw std::invalid_argument("Exp4: estimate has wrong length");
  }
  for (std::size_t j = 0; j < y.size(); ++j) cumulative_[j] += y[j];
  ++round_;
  const double eta = eta_at(round_);
  if (eta > 0.0) {
    q_ = exp3_probs(cumulative_, eta);
  }
}

void exp3_external_step(Exp3& exp3, std::span<const double> q,
                        std::size_t chosen, double loss, double floor) {
  if (q.size() != exp3.arms()) {
    throw std::invalid_argument("external distribution has wrong length");
  }
  for (double v : q) {
    if (v < floor) {
      throw std::domain_error("external distribution violates its floor");
    }
  }
  exp3.apply_estimate(importance_loss_estimate(q, chosen, loss));
}

std::vector<double> SExp3::probabilities(const std::string& context) const {
  const auto it = instances_.find(context);
  if (it == instances_.end()) {
    return std::vector<double>(arms_, 1.0 / static_cast<double>(arms_));
  }
  return it->second.probabilities();
}

Exp3& SExp3::instance(const std::string& context) {
  auto it = instances_.find(context);
  if (it == instances_.end()) {
    it = instances_.emplace(context, Exp3::anytime(arms_)).first;
  }
  return it->second;
}

std::size_t SExp3::select(const std::string& context, Rng& rng) {
  return instance(context).select(rng);
}

void SExp3::observe(const std::string& context, std::size_t arm, double loss) {
  Rng unused(0, 0);
  instance(context).observe(arm, loss, unused);
}

void SExp3::observe_external(const std::string& context,
                             std::span<const double> q, std::size_t arm,
                             double loss, double floor) {
  exp3_external_step(instance(context), q, arm, loss, floor);
}

double theta_gamma(double n, std::size_t max_context_set, std::size_t arms,
                   std::size_t theta_count) {
  if (theta_count == 0) throw std::invalid_argument("theta_gamma: empty Theta");
  const double k = static_cast<double>(arms);
  double g = std::pow(n, -1.0 / 3.0) *
             std::cbrt(static_cast<double>(max_context_set) * k * std::log(k));
  if (theta_count > 1) g *= std::sqrt(std::log(static_cast<double>(theta_count)));
  return std::min(g, 0.5);
}

ThetaExp4::ThetaExp4(std::size_t theta_count, std::size_t arms, double gamma)
    : exp4_(Exp4::with_mixing(theta_count == 0 ? 1 : theta_count, arms, gamma)),
      experts_(theta_count, SExp3(arms)) {
  if (theta_count == 0) throw std::invalid_argument("ThetaExp4: empty Theta");
}

std::size_t ThetaExp4::select(const std::vector<std::string>& contexts,
                              Rng& rng) {
  if (contexts.size() != experts_.size()) {
    throw std::invalid_argument("ThetaExp4: one context per theta required");
  }
  contexts_ = contexts;
  advice_.resize(experts_.size());
  for (std::size_t th = 0; th < experts_.size(); ++th) {
    advice_[th] = experts_[th].probabilities(contexts_[th]);
  }
  return exp4_.select(advice_, rng);
}

void ThetaExp4::observe(std::size_t arm, double loss) {
  const std::vector<double> p = exp4_.arm_distribution();
  const double floor = exp4_.gamma() / static_cast<double>(exp4_.arms());
  exp4_.observe(arm, loss);
  for (std::size_t th = 0; th < experts_.size(); ++th) {
    experts_[th].observe_external(contexts_[th], p, arm, loss,
                                  floor * (1.0 - 1e-12));
  }
}

std::vector<double> banditron_probs(std::size_t predicted, double gamma,
                                    std::size_t classes) {
  if (predicted >= classes) throw std::out_of_range("banditron_probs: class");
  std::vector<double> p(classes, gamma / static_cast<double>(classes));
  p[predicted] += 1.0 - gamma;
  return p;
}

Eigen::MatrixXd banditron_update(const Eigen::MatrixXd& w,
                                 const Eigen::VectorXd& x,
                                 std::size_t predicted, std::size_t played,
                                 bool correct, std::span<const double> p) {
  const auto k = static_cast<std::size_t>(w.rows());
  if (static_cast<Eigen::Index>(x.size()) != w.cols() || p.size() != k ||
      predicted >= k || played >= k) {
    throw std::invalid_argument("banditron_update: inconsistent dimensions");
  }
  Eigen::MatrixXd out = w;
  if (correct) out.row(static_cast<Eigen::Index>(played)) += x.transpose() / p[played];
  out.row(static_cast<Eigen::Index>(predicted)) -= x.transpose();
  return out;
}

Banditron::Banditron(std::size_t classes, std::size_t dim, double gamma)
    : w_(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(classes),
                               static_cast<Eigen::Index>(dim))),
      gamma_(gamma) {
  if (classes < 2 || dim == 0) {
    throw std::invalid_argument("Banditron: need K >= 2 and d >= 1");
  }
  if (!(gamma > 0.0 && gamma < 0.5)) {
    throw std::invalid_argument("Banditron: gamma must be in (0, 1/2)");
  }
}

double Banditron::tuned_gamma(std::size_t classes, double n) {
  return std::cbrt(static_cast<double>(classes) / n);
}

std::size_t Banditron::predict(const Eigen::VectorXd& x) const {
  const Eigen::VectorXd scores = w_ * x;
  std::size_t best = 0;
  for (Eigen::Index i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[static_cast<Eigen::Index>(best)]) {
      best = static_cast<std::size_t>(i);
    }
  }
  return best;
}

std::size_t Banditron::select(const Eigen::VectorXd& x, Rng& rng) {
  if (x.size() != w_.cols()) throw std::invalid_argument("Banditron: x size");
  x_ = x;
  predicted_ = predict(x);
  p_ = banditron_probs(predicted_, gamma_, static_cast<std::size_t>(w_.rows()));
  played_ = rng.categorical(p_);
  return played_;
}

void Banditron::observe(bool correct) {
  if (p_.empty()) throw std::logic_error("Banditron: observe before select");
  w_ = banditron_update(w_, x_, predicted_, played_, correct, p_);
}

double sexp3_bound(double n, std::size_t contexts, std::size_t arms) {
  const double k = static_cast<double>(arms);
  return std::sqrt(2.0 * n * static_cast<double>(contexts) * k * std::log(k));
}

double exp4_bound(double n, std::size_t arms, std::size_t experts) {
  return std::sqrt(2.0 * n * static_cast<double>(arms) *
                   std::log(static_cast<double>(experts)));
}

double exp4_mixing_bound(double n, std::size_t arms, std::size_t experts,
                         double gamma) {
  return gamma * n / 2.0 + static_cast<double>(arms) *
                               std::log(static_cast<double>(experts)) / gamma;
}

double theta_bound(double n, std::size_t max_context_set, std::size_t arms,
                   std::size_t theta_count, double gamma) {
  const double k = static_cast<double>(arms);
  const double eps = gamma / k;
  return std::sqrt(2.0 * n / eps * static_cast<double>(max_context_set) *
                   std::log(k)) +
         exp4_mixing_bound(n, arms, theta_count, gamma);
}

double banditron_bound(std::size_t classes, double n, double u_norm,
                       double hinge_loss) {
  const double k = static_cast<double>(classes);
  return hinge_loss +
         (1.0 + u_norm * std::sqrt(2.0 * hinge_loss / n)) * std::cbrt(k) *
             std::pow(n, 2.0 / 3.0) +
         2.0 * u_norm * u_norm * std::pow(k, 2.0 / 3.0) * std::cbrt(n) +
         std::sqrt(2.0) * u_norm * std::pow(k, 1.0 / 6.0) * std::cbrt(n);
}

double banditron_bound_loose(std::size_t classes, double n, double u_norm,
                             double hinge_loss) {
  const double k = static_cast<double>(classes);
  return hinge_loss +
         (1.0 + std::sqrt(2.0) * u_norm) * std::cbrt(k) * std::pow(n, 2.0 / 3.0) +
         2.0 * u_norm * u_norm * std::pow(k, 2.0 / 3.0) * std::cbrt(n) +
         std::sqrt(2.0) * u_norm * std::pow(k, 1.0 / 6.0) * std::cbrt(n);
}

ContextStream load_context_stream(const std::string& path) {
  const auto table = read_csv(path);
  std::vector<std::size_t> ctx_cols, loss_cols;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (starts_with(table.header[c], "ctx")) {
      ctx_cols.push_back(c);
    } else if (starts_with(table.header[c], "loss")) {
      loss_cols.push_back(c);
    } else {
      throw std::invalid_argument(path + ": unknown column '" +
                                  table.header[c] + "'");
    }
  }
  if (loss_cols.empty()) throw std::invalid_argument(path + ": no loss columns");
  ContextStream s;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    std::vector<std::string> ctx;
    for (auto c : ctx_cols) ctx.push_back(table.rows[r][c]);
    std::vector<double> loss;
    for (auto c : loss_cols) {
      const double v = parse_number(table.rows[r][c], path, r + 1);
      if (v < 0.0 || v > 1.0) {
        throw std::invalid_argument(path + ": loss outside [0,1]");
      }
      loss.push_back(v);
    }
    s.contexts.push_back(std::move(ctx));
    s.losses.push_back(std::move(loss));
  }
  return s;
}

MulticlassData load_multiclass(const std::string& path) {
  const auto table = read_csv(path);
  std::vector<std::size_t> feat_cols;
  std::size_t label_col = table.header.size();
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (starts_with(table.header[c], "x_")) {
      feat_cols.push_back(c);
    } else if (table.header[c] == "label") {
      label_col = c;
    } else {
      throw std::invalid_argument(path + ": unknown column '" +
                                  table.header[c] + "'");
    }
  }
  if (feat_cols.empty() || label_col == table.header.size()) {
    throw std::invalid_argument(path + ": need x_* columns and a label column");
  }
  MulticlassData data;
  data.features.resize(static_cast<Eigen::Index>(table.rows.size()),
                       static_cast<Eigen::Index>(feat_cols.size()));
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    for (std::size_t j = 0; j < feat_cols.size(); ++j) {
      data.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) =
          parse_number(table.rows[r][feat_cols[j]], path, r + 1);
    }
    const double label = parse_number(table.rows[r][label_col], path, r + 1);
    if (label < 0.0 || label != std::floor(label)) {
      throw std::invalid_argument(path + ": labels must be non-negative integers");
    }
    data.labels.push_back(static_cast<std::size_t>(label));
    data.classes = std::max(data.classes, data.labels.back() + 1);
  }
  return data;
}

MulticlassData make_separable_stream(std::size_t classes, std::size_t dim,
                                     std::size_t n, double c, Rng& rng) {
  if (classes < 2 || dim < classes) {
    throw std::invalid_argument("separable stream needs 2 <= K <= d");
  }
  if (!(c > 0.0)) throw std::invalid_argument("separable stream: c > 0");
  constexpr double kNoise = 0.5;
  MulticlassData data;
  data.classes = classes;
  data.features.resize(static_cast<Eigen::Index>(n),
                       static_cast<Eigen::Index>(dim));
  data.labels.resize(n);
  const auto k = static_cast<Eigen::Index>(classes);
  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t y = rng.index(classes);
    const auto yi = static_cast<Eigen::Index>(y);
    Eigen::VectorXd x(static_cast<Eigen::Index>(dim));
    for (;;) {
      for (Eigen::Index j = 0; j < x.size(); ++j) x[j] = kNoise * rng.normal();
      x[yi] += c;
      x.normalize();
      double rival = -1e300;
      for (Eigen::Index i = 0; i < k; ++i) {
        if (i != yi) rival = std::max(rival, x[i]);
      }
      if (x[yi] - rival >= 1.0 / c) break;
    }
    data.features.row(static_cast<Eigen::Index>(t)) = x.transpose();
    data.labels[t] = y;
  }
  return data;
}

double multiclass_hinge_loss(const Eigen::MatrixXd& u,
                             const MulticlassData& data) {
  double total = 0.0;
  for (Eigen::Index t = 0; t < data.features.rows(); ++t) {
    const Eigen::VectorXd s = u * data.features.row(t).transpose();
    const auto y = static_cast<Eigen::Index>(data.labels[static_cast<std::size_t>(t)]);
    double rival = -1e300;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      if (i != y) rival = std::max(rival, s[i]);
    }
    total += std::max(0.0, 1.0 - s[y] + rival);
  }
  return total;
}

}  // namespace bandits
