#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "esld/config.hpp"
#include "esld/experiments.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kDiverged = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extremum-seeking learning-dynamics experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "Experiment file (key = value lines)");
  app.add_option("--out", out_path, "CSV output path (default: output.path, else stdout)");
  app.add_option("--set", overrides, "Override one key, key=value (repeatable)");

  auto* simulate = app.add_subcommand("simulate", "Simulated learning dynamics per period");
  auto* compare = app.add_subcommand("compare", "Simulation against the recursion");
  auto* landscape = app.add_subcommand("landscape", "Reconstructed effective objective");
  auto* verify = app.add_subcommand("verify", "Dither, STM, needle and quadrature checks");
  for (auto* sub : {simulate, compare, landscape, verify}) {
    sub->fallthrough();
  }

  CLI11_PARSE(app, argc, argv);

  esld::CommandResult result;
  try {
    esld::ExperimentConfig cfg =
        config_path.empty() ? esld::ExperimentConfig{} : esld::load_config(config_path);
    for (const auto& assignment : overrides) {
      esld::apply_override(cfg, assignment);
    }
    if (!out_path.empty()) {
      cfg.output_path = out_path;
    }
    if (*simulate) {
      result = esld::cmd_simulate(cfg);
    } else if (*compare) {
      result = esld::cmd_compare(cfg);
    } else if (*landscape) {
      result = esld::cmd_landscape(cfg);
    } else {
      result = esld::cmd_verify(cfg);
    }
    if (cfg.output_path.empty()) {
      result.main.write(std::cout);
      for (const auto& [suffix, report] : result.extras) {
        if (suffix == "trajectory") continue;
        std::cout << '\n';
        report.write(std::cout);
      }
    } else {
      esld::save_result(result, cfg.output_path);
    }
  } catch (const esld::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }
  if (result.diverged) {
    std::cerr << "warning: at least one run diverged\n";
    return kDiverged;
  }
  return kOk;
}
