#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bandits/adversarial.h"
#include "bandits/bounds.h"
#include "bandits/config.h"
#include "bandits/env.h"
#include "bandits/properties.h"
#include "bandits/report.h"
#include "bandits/rng.h"
#include "bandits/runner.h"

namespace {

using namespace bandits;

struct RunFlags {
  std::string config;
  std::string out;
  std::string format;
  std::size_t replicas = 0;
  std::uint64_t seed = 0;
  std::size_t threads = 0;
  bool assert_bounds = false;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--config", f.config, "experiment config (INI)")->required();
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--format", f.format, "csv, json or svg")
      ->check(CLI::IsMember({"csv", "json", "svg"}));
  cmd->add_option("--replicas", f.replicas, "override replica count");
  cmd->add_option("--seed", f.seed, "override master seed");
  cmd->add_option("--threads", f.threads, "worker threads (0 = all cores)");
  cmd->add_flag("--assert-bounds", f.assert_bounds,
                "exit nonzero if mean + 2 SEM exceeds an upper-bound overlay at n");
}

ExperimentConfig resolve(const RunFlags& f, CLI::App* cmd) {
  ExperimentConfig c = load_config(f.config);
  if (cmd->count("--out")) c.out_dir = f.out;
  if (cmd->count("--format")) c.format = f.format;
  if (cmd->count("--replicas")) c.replicas = f.replicas;
  if (cmd->count("--seed")) c.seed = f.seed;
  if (cmd->count("--threads")) c.threads = f.threads;
  validate_config(c);
  return c;
}

bool is_lower_bound(const std::string& overlay) {
  return overlay == "kl-lower" || overlay == "minimax-lower";
}

// Prints the summary line; returns false if an asserted bound fails.
bool summarize(const RegretReport& r, bool assert_bounds) {
  const double top = r.terminal_mean() + 2.0 * r.terminal_sem();
  std::cout << r.policy << ": n=" << r.horizon << " replicas=" << r.replicas
            << " mean=" << r.terminal_mean() << " sem=" << r.terminal_sem();
  bool ok = true;
  for (const auto& o : r.overlays) {
    const double v = o.values.empty() ? 0.0 : o.values.back();
    std::cout << " " << o.name << "=" << v;
    if (assert_bounds && !is_lower_bound(o.name) && !o.values.empty() && top > v) {
      ok = false;
      std::cout << "(VIOLATED)";
    }
  }
  std::cout << "\n";
  return ok;
}

std::string output_path(const ExperimentConfig& c, const std::string& suffix) {
  std::filesystem::create_directories(c.out_dir);
  const std::string stem = c.name.empty() ? c.policy : c.name;
  return (std::filesystem::path(c.out_dir) / (stem + suffix + "." + c.format)).string();
}

int cmd_selftest() {
  int failed = 0;
  for (const auto& r : run_property_suites()) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << "  " << r.detail << "\n";
    if (!r.passed) ++failed;
  }
  return failed ? 1 : 0;
}

int cmd_oracle(std::size_t arms, std::size_t rounds, double eta, std::uint64_t seed,
               std::size_t mc) {
  Rng rng(seed, 0);
  std::vector<double> losses(rounds * arms);
  for (double& l : losses) l = rng.uniform();
  const ObliviousAdversary adv(rounds, arms, losses);
  const OracleResult exact = exact_expectation_oracle(exp3_kernel(arms, eta), adv, rounds);
  std::cout << "exact expected loss " << exact.expected_loss << "\n"
            << "exact pseudo-regret " << exact.pseudo_regret << "\n"
            << "sqrt(2 n K ln K)    " << exp3_bound(static_cast<double>(rounds), arms, false)
            << "\n";
  if (mc == 0) return 0;
  double sum = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < mc; ++i) {
    Rng r = derive_stream(seed, i + 1);
    Exp3 p = Exp3::fixed(arms, eta);
    double total = 0.0;
    for (std::size_t t = 0; t < rounds; ++t) {
      const std::size_t a = p.select(r);
      p.observe(a, adv.loss(t, a), r);
      total += adv.loss(t, a);
    }
    sum += total;
    sq += total * total;
  }
  const double m = sum / static_cast<double>(mc);
  const double sem =
      std::sqrt(std::max(0.0, sq / static_cast<double>(mc) - m * m) / static_cast<double>(mc));
  const double z = sem > 0.0 ? std::abs(m - exact.expected_loss) / sem : 0.0;
  std::cout << "monte carlo loss    " << m << " (sem " << sem << ", " << z << " sem from exact)\n";
  return z <= 3.0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bandit algorithms, regret experiments and bound calculators"};
  app.require_subcommand(1);

  RunFlags run_flags;
  auto* run = app.add_subcommand("run", "run one experiment config");
  add_run_flags(run, run_flags);

  RunFlags sweep_flags;
  std::string sweep_key;
  std::vector<std::string> sweep_values;
  auto* sw = app.add_subcommand("sweep", "run a config over a grid of one parameter");
  add_run_flags(sw, sweep_flags);
  sw->add_option("--param", sweep_key, "section.key to vary")->required();
  sw->add_option("--values", sweep_values, "grid values")->required()->delimiter(',');

  std::string bound_name;
  std::vector<std::string> bound_tokens;
  bool bound_list = false;
  auto* bnd = app.add_subcommand("bound", "evaluate a regret bound, e.g. exp3 n=100 K=2");
  bnd->add_option("name", bound_name, "bound name");
  bnd->add_option("args", bound_tokens, "key=value arguments");
  bnd->add_flag("--list", bound_list, "list bound names and arguments");

  std::size_t oracle_k = 2, oracle_n = 4, oracle_mc = 0;
  double oracle_eta = 0.5;
  std::uint64_t oracle_seed = 1;
  auto* orc = app.add_subcommand("oracle", "exact expected loss of Exp3 on a random matrix");
  orc->add_option("--arms", oracle_k, "K (<= 3)");
  orc->add_option("--rounds", oracle_n, "n (<= 10)");
  orc->add_option("--eta", oracle_eta, "learning rate");
  orc->add_option("--seed", oracle_seed, "matrix and Monte Carlo seed");
  orc->add_option("--replicas", oracle_mc, "Monte Carlo replicas to compare (0 = none)");

  app.add_subcommand("selftest", "run the property suites");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const ExperimentConfig c = resolve(run_flags, run);
      const RegretReport r = run_experiment(c);
      const std::string path = output_path(c, "");
      emit(r, c.format, path, c.stride);
      const bool ok = summarize(r, run_flags.assert_bounds);
      std::cout << "wrote " << path << "\n";
      return ok ? 0 : 2;
    }
    if (sw->parsed()) {
      const ExperimentConfig c = resolve(sweep_flags, sw);
      const auto reports = sweep(c, sweep_key, sweep_values);
      bool ok = true;
      for (std::size_t i = 0; i < reports.size(); ++i) {
        const std::string path = output_path(c, "_" + sweep_values[i]);
        emit(reports[i], c.format, path, c.stride);
        std::cout << sweep_key << "=" << sweep_values[i] << " ";
        ok = summarize(reports[i], sweep_flags.assert_bounds) && ok;
      }
      return ok ? 0 : 2;
    }
    if (bnd->parsed()) {
      if (bound_list || bound_name.empty()) {
        for (const auto& b : bound_catalog()) {
          std::cout << b.name << "  required:";
          for (const auto& k : b.required) std::cout << " " << k;
          if (!b.optional.empty()) {
            std::cout << "  optional:";
            for (const auto& k : b.optional) std::cout << " " << k;
          }
          std::cout << "  (" << b.summary << ")\n";
        }
        return 0;
      }
      std::cout.precision(10);
      std::cout << bound(bound_name, BoundArgs::parse(bound_tokens)) << "\n";
      return 0;
    }
    if (orc->parsed()) {
      return cmd_oracle(oracle_k, oracle_n, oracle_eta, oracle_seed, oracle_mc);
    }
    return cmd_selftest();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
