#pragma once

#include <map>
#include <string>
#include <vector>

namespace bandits {

// Named arguments of a bound; scalars are one-element lists.
class BoundArgs {
 public:
  BoundArgs() = default;
  BoundArgs(std::initializer_list<std::pair<const std::string, std::vector<double>>> init)
      : values_(init) {}

  void set(const std::string& key, double value) { values_[key] = {value}; }
  void set(const std::string& key, std::vector<double> values) {
    values_[key] = std::move(values);
  }
  bool has(const std::string& key) const { return values_.count(key) > 0; }
  double scalar(const std::string& key) const;
  double scalar(const std::string& key, double fallback) const;
  const std::vector<double>& list(const std::string& key) const;
  const std::map<std::string, std::vector<double>>& values() const {
    return values_;
  }

  // "n=100 K=2 means=0.9,0.6" style tokens.
  static BoundArgs parse(const std::vector<std::string>& tokens);

 private:
  std::map<std::string, std::vector<double>> values_;
};

struct BoundInfo {
  std::string name;
  std::vector<std::string> required;
  std::vector<std::string> optional;
  std::string summary;
};

const std::vector<BoundInfo>& bound_catalog();

// Evaluates the named regret bound. Throws std::invalid_argument for unknown
// names, missing arguments and unknown argument keys.
double bound(const std::string& name, const BoundArgs& args);

}  // namespace bandits
