#pragma once

// Experiment configuration: `key = value` lines, `#` comments.

#include <optional>
#include <string>
#include <vector>

namespace vacflow::config {

enum class ReferenceMode { characteristics, fine_solver };

struct ExperimentConfig {
  std::string scenario = "viscous-relaxation";
  double a = 1.0;
  double gamma = 1.4;
  double nu = 0.1;
  double x_min = 0.0;
  double x_max = 1.0;
  int n_cells = 100;
  std::optional<double> dt;  // fixed step; otherwise cfl * stable_dt
  double cfl = 0.9;
  double t_end = 0.1;
  ReferenceMode reference = ReferenceMode::fine_solver;
  std::vector<double> epsilons{1e-2, 5e-3, 2.5e-3, 1.25e-3};
  std::string output_dir = ".";
  double alpha = 3.0;         // polynomial decay rate
  double perturbation = 0.0;  // relative size of the perturbation of the initial data
  int rungs = 3;              // refinement ladder length
};

/// Throws ConfigError naming the key and the allowed range.
ExperimentConfig parse_config(const std::string& text);

std::string to_string(ReferenceMode m);

/// Scenario names understood by the runner.
const std::vector<std::string>& scenario_names();

}  // namespace vacflow::config
