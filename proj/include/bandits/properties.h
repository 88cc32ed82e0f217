#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bandits {

struct PropertyResult {
  std::string name;
  bool passed;
  double worst;  // largest violation seen (suite specific units)
  std::string detail;
};

// Exact-enumeration and identity checks over randomly drawn instances.
std::vector<PropertyResult> run_property_suites(std::uint64_t seed = 1);

}  // namespace bandits
