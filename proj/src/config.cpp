#include "vacflow/config.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vacflow/errors.hpp"

namespace vacflow::config {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& key, const std::string& range, const std::string& value) {
  throw ConfigError("config key '" + key + "' = '" + value + "' outside allowed range " + range);
}

double to_double(const std::string& key, const std::string& value, const std::string& range) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    fail(key, range, value);
  }
  if (used != value.size() || !std::isfinite(v)) fail(key, range, value);
  return v;
}

int to_int(const std::string& key, const std::string& value, const std::string& range) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(value, &used);
  } catch (const std::exception&) {
    fail(key, range, value);
  }
  if (used != value.size() || v > 100000000L || v < -100000000L) fail(key, range, value);
  return static_cast<int>(v);
}

}  // namespace

std::string to_string(ReferenceMode m) {
  return m == ReferenceMode::characteristics ? "characteristics" : "fine-solver";
}

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{"rest",         "viscous-relaxation", "gaussian-pulse",
                                              "equilibrium",  "compact-support",    "polynomial-decay",
                                              "inflow-channel", "same-data"};
  return names;
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "scenario") {
      const auto& names = scenario_names();
      if (std::find(names.begin(), names.end(), value) == names.end()) {
        std::string all;
        for (const auto& n : names) all += (all.empty() ? "" : "|") + n;
        fail(key, "{" + all + "}", value);
      }
      c.scenario = value;
    } else if (key == "a") {
      c.a = to_double(key, value, "(0,inf)");
      if (!(c.a > 0.0)) fail(key, "(0,inf)", value);
    } else if (key == "gamma") {
      c.gamma = to_double(key, value, "(1,2]");
      if (!(c.gamma > 1.0 && c.gamma <= 2.0)) fail(key, "(1,2]", value);
    } else if (key == "nu") {
      c.nu = to_double(key, value, "(0,inf)");
      if (!(c.nu > 0.0)) fail(key, "(0,inf)", value);
    } else if (key == "x_min") {
      c.x_min = to_double(key, value, "(-inf,x_max)");
    } else if (key == "x_max") {
      c.x_max = to_double(key, value, "(x_min,inf)");
    } else if (key == "n_cells") {
      c.n_cells = to_int(key, value, "[4,1e8]");
      if (c.n_cells < 4) fail(key, "[4,1e8]", value);
    } else if (key == "dt") {
      c.dt = to_double(key, value, "(0,inf)");
      if (!(*c.dt > 0.0)) fail(key, "(0,inf)", value);
    } else if (key == "cfl") {
      c.cfl = to_double(key, value, "(0,1]");
      if (!(c.cfl > 0.0 && c.cfl <= 1.0)) fail(key, "(0,1]", value);
    } else if (key == "t_end") {
      c.t_end = to_double(key, value, "[0,inf)");
      if (!(c.t_end >= 0.0)) fail(key, "[0,inf)", value);
    } else if (key == "reference") {
      if (value == "characteristics") {
        c.reference = ReferenceMode::characteristics;
      } else if (value == "fine-solver") {
        c.reference = ReferenceMode::fine_solver;
      } else {
        fail(key, "{characteristics|fine-solver}", value);
      }
    } else if (key == "epsilons") {
      const std::string range = "comma-separated list of >= 3 values in (0,1)";
      std::vector<double> eps;
      std::istringstream items(value);
      std::string item;
      while (std::getline(items, item, ',')) {
        const double e = to_double(key, trim(item), range);
        if (!(e > 0.0 && e < 1.0)) fail(key, range, value);
        eps.push_back(e);
      }
      if (eps.size() < 3) fail(key, range, value);
      c.epsilons = eps;
    } else if (key == "output_dir") {
      if (value.empty()) fail(key, "non-empty path", value);
      c.output_dir = value;
    } else if (key == "alpha") {
      c.alpha = to_double(key, value, "(1,inf)");
      if (!(c.alpha > 1.0)) fail(key, "(1,inf)", value);
    } else if (key == "perturbation") {
      c.perturbation = to_double(key, value, "[0,0.5]");
      if (!(c.perturbation >= 0.0 && c.perturbation <= 0.5)) fail(key, "[0,0.5]", value);
    } else if (key == "rungs") {
      c.rungs = to_int(key, value, "[2,6]");
      if (c.rungs < 2 || c.rungs > 6) fail(key, "[2,6]", value);
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  if (!(c.x_max > c.x_min)) {
    throw ConfigError("config keys 'x_min' < 'x_max' required, got x_min = " + std::to_string(c.x_min) +
                      ", x_max = " + std::to_string(c.x_max));
  }
  return c;
}

}  // namespace vacflow::config
