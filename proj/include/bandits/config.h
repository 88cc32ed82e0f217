#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace bandits {

// String parameters of one config section with typed accessors.
class ParamMap {
 public:
  ParamMap() = default;
  explicit ParamMap(std::map<std::string, std::string> values)
      : values_(std::move(values)) {}

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
  std::string str(const std::string& key, const std::string& fallback) const;
  double num(const std::string& key, double fallback) const;
  double num(const std::string& key) const;
  std::size_t count(const std::string& key, std::size_t fallback) const;
  std::uint64_t u64(const std::string& key, std::uint64_t fallback) const;
  std::vector<double> list(const std::string& key) const;
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

// Sections [experiment], [policy], [environment], [output].
struct ExperimentConfig {
  std::string policy;
  std::size_t horizon = 1000;
  std::size_t replicas = 10;
  std::uint64_t seed = 1;
  std::size_t threads = 0;  // 0 picks the hardware concurrency
  std::vector<std::string> overlays;
  ParamMap policy_params;
  ParamMap environment;
  std::string out_dir = ".";
  std::string format = "csv";
  std::string name;
  std::size_t stride = 1;
};

// Parses INI text and validates it against the scenario schema of the named
// policy. Unknown sections and keys are rejected.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
void validate_config(const ExperimentConfig& config);
std::string to_ini(const ExperimentConfig& config);

// Sets "section.key" (experiment, policy, environment, output) to a value.
void set_config_value(ExperimentConfig& config, const std::string& dotted_key,
                      const std::string& value);

}  // namespace bandits
