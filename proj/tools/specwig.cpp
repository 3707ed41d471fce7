#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "specwig/experiment.hpp"
#include "specwig/kernels.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Random-matrix spectral laboratory for stationary Gaussian fields"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int threads = 0;
  auto* run_cmd = app.add_subcommand(
      "run", "Run a named experiment from a JSON config and write the report");
  run_cmd->add_option("--config", config_path, "Path to the experiment config")
      ->required();
  run_cmd->add_option("--out", out_dir,
                      "Output directory (overrides the config's 'out')");
  run_cmd->add_option("--threads", threads, "Worker threads for the trials");

  auto* selftest_cmd = app.add_subcommand(
      "selftest", "Run the combinatorial and oracle property suites");

  CLI11_PARSE(app, argc, argv);

  try {
    if (selftest_cmd->parsed()) {
      bool ok = specwig::selftest(std::cout);
      std::cout << (ok ? "selftest passed" : "selftest FAILED") << "\n";
      return ok ? 0 : 1;
    }
    if (run_cmd->parsed()) {
      specwig::ExperimentConfig cfg = specwig::load_config_file(config_path);
      if (!out_dir.empty()) cfg.out_dir = out_dir;
      if (threads > 0) cfg.threads = threads;
      std::cerr << "kernels: "
                << specwig::kernels::backend_name(specwig::kernels::active())
                << "\n";
      specwig::ExperimentReport report = specwig::run(cfg);
      std::cout << report.to_json().dump(2) << "\n";
      return report.pass ? 0 : 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
