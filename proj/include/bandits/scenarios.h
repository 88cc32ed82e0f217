#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "bandits/config.h"
#include "bandits/rng.h"

namespace bandits {

struct ScenarioSchema {
  std::string name;
  std::string summary;
  std::vector<std::string> policy_keys;
  std::vector<std::string> environment_keys;
  std::vector<std::string> overlays;
};

const std::vector<ScenarioSchema>& scenario_registry();
// Throws std::invalid_argument for unknown policy names.
const ScenarioSchema& scenario_schema(const std::string& policy);

// A configured policy/environment pair. Shared data is built once and is
// read-only afterwards, so run() may be called from several threads.
class Scenario {
 public:
  // Cumulative regret after rounds 1..n for one replica.
  using Runner = std::function<std::vector<double>(Rng&)>;
  // Bound value as a function of the round t >= 1.
  using Overlay = std::function<double(double)>;

  Scenario(std::size_t horizon, Runner runner, std::map<std::string, Overlay> overlays)
      : horizon_(horizon), runner_(std::move(runner)), overlays_(std::move(overlays)) {}

  std::size_t horizon() const { return horizon_; }
  std::vector<double> run(Rng& rng) const { return runner_(rng); }
  bool has_overlay(const std::string& name) const { return overlays_.count(name) > 0; }
  double overlay(const std::string& name, double t) const;

 private:
  std::size_t horizon_;
  Runner runner_;
  std::map<std::string, Overlay> overlays_;
};

// Builds the scenario; infeasible parameter combinations throw
// std::invalid_argument naming the violated condition.
Scenario make_scenario(const ExperimentConfig& config);

// Stream used for environment randomness shared by all replicas.
Rng environment_stream(std::uint64_t seed);

}  // namespace bandits
