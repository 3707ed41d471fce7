#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace specwig {

// Named experiments reproducing the limit statements at desk scale.
extern const std::vector<std::string> kExperimentNames;

struct ExperimentConfig {
  std::string experiment;
  nlohmann::json measure;     // density + atoms spec, see make_measure
  std::vector<int> n_values;  // matrix sizes, each >= 8
  int truncation_n = 16;
  int trials = 4;
  std::uint64_t seed = 20240808;
  std::string out_dir;  // empty: keep the report in memory only
  int threads = 1;
};

struct ExperimentReport {
  std::string experiment;
  nlohmann::json config_echo;
  nlohmann::json per_n = nlohmann::json::array();
  nlohmann::json theory = nlohmann::json::object();
  bool pass = false;
  double runtime_seconds = 0.0;
  std::int64_t started_unix = 0;
  // pooled raw eigenvalues per N, in trial order, for the CSV sidecars
  std::vector<std::pair<int, std::vector<double>>> eigenvalues;

  nlohmann::json to_json() const;
};

// Baseline config for an experiment (pinned seeds and measures); any field
// present in `overrides` replaces the default.
nlohmann::json default_config(const std::string& experiment);

ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config_file(const std::string& path);

ExperimentReport run(const ExperimentConfig& cfg);

// report.json plus one eigenvalue CSV per N under out_dir.
void emit_report(const ExperimentReport& r, const std::string& out_dir);

// Combinatorial and oracle property suites; prints one line per check.
bool selftest(std::ostream& log);

}  // namespace specwig
