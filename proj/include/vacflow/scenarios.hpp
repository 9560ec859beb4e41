#pragma once

// Scenario presets and the experiment runner behind the command-line tool.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "vacflow/config.hpp"
#include "vacflow/constitutive.hpp"
#include "vacflow/relenergy.hpp"
#include "vacflow/solver1d.hpp"
#include "vacflow/transport.hpp"

namespace vacflow::scenarios {

struct Scenario {
  std::string name;
  solver1d::Grid1D grid;
  solver1d::BoundaryData bc;
  constitutive::PressureLaw law;
  double nu;
  /// Unperturbed initial density (physical coordinates) and velocity.
  transport::DensityProfile rho0;
  std::function<double(double)> u0;
  /// Initial data with the configured perturbation applied.
  solver1d::FluidState1D initial;
  /// Prescribed field used by the transport and characteristics paths.
  transport::VelocityFieldSpec field;
  bool touches_vacuum = false;
};

/// `n_cells` overrides the configured resolution when positive.
Scenario build_scenario(const config::ExperimentConfig& cfg, int n_cells = 0);

/// Configured dt, or cfl times the step allowed by the invariant-region speed bound,
/// shrunk so that t_end is a whole number of steps.
double choose_dt(const Scenario& s, const config::ExperimentConfig& cfg);

/// Reference pair for the relative energy commands; `dt` is the step of the run
/// it will be compared with.
relenergy::ReferencePair build_reference(const Scenario& s, const config::ExperimentConfig& cfg, double dt);

struct CertifyOutcome {
  relenergy::RelativeEnergyTrace trace;
  relenergy::Certificate certificate;
};

CertifyOutcome certify(const config::ExperimentConfig& cfg, int n_cells = 0);

/// Runs a subcommand, writing CSV files into cfg.output_dir and messages to
/// `out` / `err`. Returns 0 certified or success, 1 certificate failed,
/// 2 configuration error, 3 numerical failure.
int run_scenario(const std::string& command, const config::ExperimentConfig& cfg, std::uint64_t seed,
                 std::ostream& out, std::ostream& err);

}  // namespace vacflow::scenarios
