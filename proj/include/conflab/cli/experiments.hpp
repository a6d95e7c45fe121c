#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace conflab::cli {

using nlohmann::json;

struct Check {
  std::string name;
  double value = 0;
  double tol = 0;
  bool pass = false;
};

struct Report {
  std::string name;
  int mesh_level = 0;
  json residuals = json::object();
  json constants = json::object();
  std::vector<Check> checks;
  bool pass = true;
  json config_echo = json::object();
  double wall_ms = 0;  // kept out of report.json so reports are byte-stable
  // extra artifacts (csv/obj payloads) written next to report.json
  std::vector<std::pair<std::string, std::string>> artifacts;

  json to_json() const;  // no timing inside
};

// valid experiment names, in the dispatch order
const std::vector<std::string>& experiment_names();

// run one experiment; throws std::invalid_argument on unknown names/keys
Report run_experiment(const json& config);

// fast = reduced levels with documented (scaled) tolerances, full = the
// acceptance levels and tolerances exactly
std::vector<Report> run_suite(const std::string& which, unsigned seed, const std::string& outdir);

// write report.json (+ timing.json) and experiment CSV artifacts
void write_report(const Report& report, const std::string& outdir);

json default_config(const std::string& experiment);

}  // namespace conflab::cli
