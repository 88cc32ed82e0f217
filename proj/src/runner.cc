#include "bandits/runner.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "bandits/rng.h"
#include "bandits/scenarios.h"

namespace bandits {

RegretReport run_experiment(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const Scenario scenario = make_scenario(config);
  const std::size_t replicas = config.replicas;
  std::vector<std::vector<double>> curves(replicas);

  std::size_t threads = config.threads;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, replicas);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= replicas) return;
      try {
        Rng rng = derive_stream(config.seed, i);
        curves[i] = scenario.run(rng);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = replicas;
        return;
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  RegretReport report;
  report.policy = config.policy;
  report.horizon = config.horizon;
  report.replicas = replicas;
  report.seed = config.seed;
  report.policy_params = config.policy_params.values();
  report.environment = config.environment.values();
  aggregate_curves(curves, report.mean, report.sem);
  for (const auto& c : curves) report.terminal.push_back(c.empty() ? 0.0 : c.back());
  for (const auto& name : config.overlays) {
    OverlayCurve o{name, {}};
    o.values.reserve(config.horizon);
    for (std::size_t t = 1; t <= config.horizon; ++t) {
      o.values.push_back(scenario.overlay(name, static_cast<double>(t)));
    }
    report.overlays.push_back(std::move(o));
  }
  report.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::vector<RegretReport> sweep(const ExperimentConfig& config, const std::string& dotted_key,
                                const std::vector<std::string>& values) {
  if (values.empty()) throw std::invalid_argument("sweep: empty grid");
  std::vector<RegretReport> out;
  for (const auto& v : values) {
    ExperimentConfig cell = config;
    set_config_value(cell, dotted_key, v);
    out.push_back(run_experiment(cell));
  }
  return out;
}

}  // namespace bandits
