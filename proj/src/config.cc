#include "bandits/config.h"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "bandits/scenarios.h"

namespace bandits {

namespace {

double parse_number(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw std::invalid_argument("'" + key + "' is not a number: '" + text + "'");
  }
  return v;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    if (!text.empty() && text.front() != '-') v = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw std::invalid_argument("'" + key + "' is not a non-negative integer: '" +
                                text + "'");
  }
  return v;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? "," : "") + items[i];
  return out;
}

void apply_experiment(ExperimentConfig& c, const std::string& key,
                      const std::string& value) {
  if (key == "policy") {
    c.policy = value;
  } else if (key == "horizon") {
    c.horizon = parse_unsigned(key, value);
  } else if (key == "replicas") {
    c.replicas = parse_unsigned(key, value);
  } else if (key == "seed") {
    c.seed = parse_unsigned(key, value);
  } else if (key == "threads") {
    c.threads = parse_unsigned(key, value);
  } else if (key == "overlays") {
    c.overlays = split_list(value);
  } else {
    throw std::invalid_argument("unknown key [experiment] " + key);
  }
}

void apply_output(ExperimentConfig& c, const std::string& key,
                  const std::string& value) {
  if (key == "dir") {
    c.out_dir = value;
  } else if (key == "format") {
    c.format = value;
  } else if (key == "name") {
    c.name = value;
  } else if (key == "stride") {
    c.stride = parse_unsigned(key, value);
  } else {
    throw std::invalid_argument("unknown key [output] " + key);
  }
}

}  // namespace

std::string ParamMap::str(const std::string& key, const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double ParamMap::num(const std::string& key, double fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_number(key, it->second);
}

double ParamMap::num(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw std::invalid_argument("missing parameter '" + key + "'");
  return parse_number(key, it->second);
}

std::size_t ParamMap::count(const std::string& key, std::size_t fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_unsigned(key, it->second);
}

std::uint64_t ParamMap::u64(const std::string& key, std::uint64_t fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_unsigned(key, it->second);
}

std::vector<double> ParamMap::list(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw std::invalid_argument("missing parameter '" + key + "'");
  std::vector<double> out;
  for (const auto& item : split_list(it->second)) out.push_back(parse_number(key, item));
  if (out.empty()) throw std::invalid_argument("empty list for '" + key + "'");
  return out;
}

ExperimentConfig parse_config(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  ExperimentConfig c;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw std::invalid_argument("config: key '" + section + "' outside a section");
    }
    for (const auto& [key, node] : body) {
      const std::string value = node.get_value<std::string>();
      if (section == "experiment") {
        apply_experiment(c, key, value);
      } else if (section == "output") {
        apply_output(c, key, value);
      } else if (section == "policy") {
        c.policy_params.set(key, value);
      } else if (section == "environment") {
        c.environment.set(key, value);
      } else {
        throw std::invalid_argument("config: unknown section [" + section + "]");
      }
    }
  }
  validate_config(c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void validate_config(const ExperimentConfig& c) {
  if (c.policy.empty()) throw std::invalid_argument("config: [experiment] policy is required");
  const ScenarioSchema& schema = scenario_schema(c.policy);
  auto check = [&](const ParamMap& params, const std::vector<std::string>& allowed,
                   const char* section) {
    for (const auto& [key, value] : params.values()) {
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        throw std::invalid_argument(std::string("config: unknown key [") + section +
                                    "] " + key + " for policy " + c.policy);
      }
    }
  };
  check(c.policy_params, schema.policy_keys, "policy");
  check(c.environment, schema.environment_keys, "environment");
  for (const auto& o : c.overlays) {
    if (std::find(schema.overlays.begin(), schema.overlays.end(), o) ==
        schema.overlays.end()) {
      throw std::invalid_argument("config: overlay '" + o + "' not available for " +
                                  c.policy);
    }
  }
  if (c.replicas == 0) throw std::invalid_argument("config: replicas must be >= 1");
  if (c.stride == 0) throw std::invalid_argument("config: stride must be >= 1");
  if (c.format != "csv" && c.format != "json" && c.format != "svg") {
    throw std::invalid_argument("config: format must be csv, json or svg");
  }
}

std::string to_ini(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "[experiment]\n"
      << "policy = " << c.policy << "\n"
      << "horizon = " << c.horizon << "\n"
      << "replicas = " << c.replicas << "\n"
      << "seed = " << c.seed << "\n"
      << "threads = " << c.threads << "\n";
  if (!c.overlays.empty()) out << "overlays = " << join(c.overlays) << "\n";
  out << "\n[policy]\n";
  for (const auto& [k, v] : c.policy_params.values()) out << k << " = " << v << "\n";
  out << "\n[environment]\n";
  for (const auto& [k, v] : c.environment.values()) out << k << " = " << v << "\n";
  out << "\n[output]\n"
      << "dir = " << c.out_dir << "\n"
      << "format = " << c.format << "\n";
  if (!c.name.empty()) out << "name = " << c.name << "\n";
  out << "stride = " << c.stride << "\n";
  return out.str();
}

void set_config_value(ExperimentConfig& c, const std::string& dotted_key,
                      const std::string& value) {
  const auto dot = dotted_key.find('.');
  if (dot == std::string::npos) {
    throw std::invalid_argument("expected section.key, got '" + dotted_key + "'");
  }
  const std::string section = dotted_key.substr(0, dot);
  const std::string key = dotted_key.substr(dot + 1);
  if (section == "experiment") {
    apply_experiment(c, key, value);
  } else if (section == "output") {
    apply_output(c, key, value);
  } else if (section == "policy") {
    c.policy_params.set(key, value);
  } else if (section == "environment") {
    c.environment.set(key, value);
  } else {
    throw std::invalid_argument("unknown section '" + section + "'");
  }
  validate_config(c);
}

}  // namespace bandits
