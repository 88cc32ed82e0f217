#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace bandits {

inline constexpr int kReportSchemaVersion = 1;

struct OverlayCurve {
  std::string name;
  std::vector<double> values;  // one per round
};

struct RegretReport {
  std::string policy;
  std::size_t horizon = 0;
  std::size_t replicas = 0;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> policy_params;
  std::map<std::string, std::string> environment;
  std::vector<double> mean;      // mean cumulative regret after rounds 1..n
  std::vector<double> sem;       // sd / sqrt(replicas), sd with n - 1
  std::vector<double> terminal;  // per-replica regret at round n
  std::vector<OverlayCurve> overlays;
  double wall_clock_seconds = 0.0;

  double terminal_mean() const { return mean.empty() ? 0.0 : mean.back(); }
  double terminal_sem() const { return sem.empty() ? 0.0 : sem.back(); }
  const OverlayCurve& overlay(const std::string& name) const;
};

// Exact mean and standard error over equal-length curves in replica order.
void aggregate_curves(const std::vector<std::vector<double>>& curves,
                      std::vector<double>& mean, std::vector<double>& sem);

// Header comment, then round,mean_regret,sem,overlay_<name>... every
// `stride` rounds plus the last round. No timing data.
std::string to_csv(const RegretReport& report, std::size_t stride = 1);
std::string to_json(const RegretReport& report);
RegretReport report_from_json(const std::string& text);
// Self-contained line chart of the mean curve and overlays.
std::string to_svg(const RegretReport& report, std::size_t max_points = 2000);

// Writes the report in the given format (csv|json|svg) to path. Throws
// std::runtime_error when the file cannot be written.
void emit(const RegretReport& report, const std::string& format,
          const std::string& path, std::size_t stride = 1);

}  // namespace bandits
