#pragma once

#include <string>
#include <vector>

#include "bandits/config.h"
#include "bandits/report.h"

namespace bandits {

// Runs config.replicas replicas on streams derive_stream(seed, i) and reduces
// them in replica order, so the thread count never changes the result.
RegretReport run_experiment(const ExperimentConfig& config);

// One report per value of "section.key"; every cell reuses the master seed.
std::vector<RegretReport> sweep(const ExperimentConfig& config,
                                const std::string& dotted_key,
                                const std::vector<std::string>& values);

}  // namespace bandits
