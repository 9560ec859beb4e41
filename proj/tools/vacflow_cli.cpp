#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "vacflow/config.hpp"
#include "vacflow/errors.hpp"
#include "vacflow/scenarios.hpp"

int main(int argc, char** argv) {
  CLI::App app{"vacflow: barotropic compressible flow near vacuum, relative energy certification"};
  std::string command;
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  app.add_option("command", command, "simulate | characteristics | rel-energy | certify | sweep | predicates")
      ->required();
  app.add_option("--config", config_path, "key = value configuration file");
  app.add_option("--out", out_dir, "output directory (overrides output_dir)");
  app.add_option("--seed", seed, "seed recorded for randomized runs");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  std::string text;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "configuration error: cannot read '" << config_path << "'\n";
      return 2;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  vacflow::config::ExperimentConfig cfg;
  try {
    cfg = vacflow::config::parse_config(text);
  } catch (const vacflow::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  }
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  return vacflow::scenarios::run_scenario(command, cfg, seed, std::cout, std::cerr);
}
