#include "doctest.h"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <cmath>
#include <filesystem>
#include <sstream>
#include <stdexcept>

#include "bandits/bounds.h"
#include "bandits/config.h"
#include "bandits/report.h"
#include "bandits/runner.h"

using namespace bandits;

namespace {

const char* kUcb = R"([experiment]
policy = ucb
horizon = 200
replicas = 8
seed = 3
overlays = ucb, kl-lower

[policy]
alpha = 2.5

[environment]
kind = bernoulli
means = 0.9, 0.6
)";

ExperimentConfig ucb_config() { return parse_config(kUcb); }

}  // namespace

TEST_CASE("config parsing") {
  const auto c = ucb_config();
  CHECK(c.policy == "ucb");
  CHECK(c.horizon == 200);
  CHECK(c.replicas == 8);
  CHECK(c.overlays.size() == 2);
  CHECK(c.environment.list("means").size() == 2);
  CHECK(c.policy_params.num("alpha") == 2.5);

  const auto again = parse_config(to_ini(c));
  CHECK(again.horizon == c.horizon);
  CHECK(again.environment.values() == c.environment.values());
}

TEST_CASE("config rejects unknown input") {
  CHECK_THROWS(parse_config(std::string(kUcb) + "\n[extra]\nx = 1\n"));
  CHECK_THROWS(parse_config(std::string(kUcb) + "\n[output]\ncolour = red\n"));
  std::string bad_policy_key = kUcb;
  bad_policy_key.replace(bad_policy_key.find("alpha"), 5, "alpah");
  CHECK_THROWS(parse_config(bad_policy_key));
  std::string bad_policy = kUcb;
  bad_policy.replace(bad_policy.find("= ucb\n"), 6, "= nope\n");
  CHECK_THROWS(parse_config(bad_policy));
  auto c = ucb_config();
  c.replicas = 0;
  CHECK_THROWS(validate_config(c));
  c = ucb_config();
  c.overlays.push_back("exp3");
  CHECK_THROWS(validate_config(c));
  CHECK_THROWS(set_config_value(c, "policy", "1"));
  CHECK_THROWS(load_config("/nonexistent/path.ini"));
}

TEST_CASE("zero horizon gives empty curves") {
  auto c = ucb_config();
  c.horizon = 0;
  const auto r = run_experiment(c);
  CHECK(r.mean.empty());
  CHECK(r.sem.empty());
  const std::string csv = to_csv(r);
  std::istringstream in(csv);
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') ++rows;
  }
  CHECK(rows == 1);
  CHECK(csv.find("round,mean_regret,sem,overlay_ucb,overlay_kl-lower") != std::string::npos);
}

TEST_CASE("runs are reproducible and thread-count independent") {
  auto c = ucb_config();
  c.threads = 1;
  const auto a = run_experiment(c);
  const auto b = run_experiment(c);
  CHECK(to_csv(a) == to_csv(b));
  c.threads = 4;
  const auto d = run_experiment(c);
  CHECK(to_csv(a) == to_csv(d));
  CHECK(a.terminal == d.terminal);
  c.seed = 4;
  CHECK(to_csv(run_experiment(c)) != to_csv(a));
}

TEST_CASE("aggregation") {
  const std::vector<std::vector<double>> curves{{1, 2}, {3, 6}, {5, 10}};
  std::vector<double> mean, sem;
  aggregate_curves(curves, mean, sem);
  CHECK(mean[0] == 3.0);
  CHECK(mean[1] == 6.0);
  CHECK(sem[0] == doctest::Approx(2.0 / std::sqrt(3.0)));
  aggregate_curves({{4, 5}}, mean, sem);
  CHECK(sem[1] == 0.0);
  CHECK_THROWS(aggregate_curves({{1, 2}, {1}}, mean, sem));

  auto c = ucb_config();
  const auto r = run_experiment(c);
  double sum = 0.0;
  for (double t : r.terminal) sum += t;
  CHECK(r.terminal_mean() == doctest::Approx(sum / 8.0).epsilon(1e-14));
}

TEST_CASE("report formats") {
  auto c = ucb_config();
  const auto r = run_experiment(c);

  const auto back = report_from_json(to_json(r));
  CHECK(back.policy == r.policy);
  CHECK(back.horizon == r.horizon);
  CHECK(back.seed == r.seed);
  CHECK(back.mean == r.mean);
  CHECK(back.sem == r.sem);
  CHECK(back.terminal == r.terminal);
  CHECK(back.overlay("ucb").values == r.overlay("ucb").values);
  CHECK(back.environment == r.environment);
  CHECK_THROWS(r.overlay("missing"));

  const std::string csv = to_csv(r, 50);
  CHECK(csv.rfind("# bandits regret report v1", 0) == 0);
  CHECK(csv.find("overlay_ucb") != std::string::npos);
  CHECK(csv.find("\n200,") != std::string::npos);
  CHECK(csv.find("\n50,") != std::string::npos);
  CHECK(csv.find("\n51,") == std::string::npos);

  std::istringstream svg(to_svg(r));
  boost::property_tree::ptree tree;
  CHECK_NOTHROW(boost::property_tree::read_xml(svg, tree));
  CHECK(tree.count("svg") == 1);

  CHECK_THROWS_AS(emit(r, "csv", "/nonexistent/dir/out.csv"), std::runtime_error);
  CHECK_THROWS(emit(r, "xml", "out.xml"));
  const auto path = std::filesystem::temp_directory_path() / "bandits_report_test.json";
  emit(r, "json", path.string());
  CHECK(std::filesystem::file_size(path) > 0);
  std::filesystem::remove(path);
}

TEST_CASE("sweeps") {
  auto c = ucb_config();
  c.horizon = 50;
  CHECK_THROWS(sweep(c, "policy.alpha", {}));
  const auto rs = sweep(c, "policy.alpha", {"2.5", "4"});
  REQUIRE(rs.size() == 2);
  CHECK(rs[0].policy_params.at("alpha") == "2.5");
  CHECK(rs[1].policy_params.at("alpha") == "4");
  CHECK(rs[0].seed == rs[1].seed);
  c.policy_params.set("alpha", "2.5");
  CHECK(to_csv(rs[0]) == to_csv(run_experiment(c)));
}

TEST_CASE("bound dispatcher") {
  CHECK(bound("exp3", {{"n", {100}}, {"K", {2}}}) == doctest::Approx(16.651092).epsilon(1e-7));
  CHECK(bound("ucb", BoundArgs::parse({"n=10000", "means=0.9,0.6"})) ==
        doctest::Approx(158.505673).epsilon(1e-8));
  CHECK(bound("minimax-lower", {{"n", {400}}, {"K", {2}}}) == doctest::Approx(1.414214).epsilon(1e-6));
  CHECK(bound("osmd-ball", {{"n", {4000}}, {"d", {3}}}) == doctest::Approx(946.444590).epsilon(1e-8));
  CHECK_THROWS_AS(bound("nope", {}), std::invalid_argument);
  CHECK_THROWS_AS(bound("exp3", {{"n", {100}}}), std::invalid_argument);
  CHECK_THROWS_AS(bound("exp3", {{"n", {100}}, {"K", {2}}, {"z", {1}}}), std::invalid_argument);
  CHECK(bound_catalog().size() >= 18);
}

TEST_CASE("ball strategy rejects a horizon too short for its step size") {
  auto c = parse_config(R"([experiment]
policy = osmd-ball
horizon = 2
replicas = 1
overlays = osmd-ball

[environment]
d = 3
)");
  CHECK_THROWS(run_experiment(c));
}

TEST_CASE("every shipped config validates") {
  const std::filesystem::path dir = std::filesystem::path(BANDITS_SOURCE_DIR) / "configs";
  int seen = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.path().extension() != ".ini") continue;
    CHECK_NOTHROW(validate_config(load_config(e.path().string())));
    ++seen;
  }
  CHECK(seen >= 10);
}
