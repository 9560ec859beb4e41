#pragma once

// One-dimensional finite-volume solver for the barotropic compressible
// Navier-Stokes system: local Lax-Friedrichs convection (explicit) and a
// backward-Euler viscous stress S = nu u_x, with an energy ledger and
// evaluators for the weak-form residuals of continuity and momentum.

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "vacflow/constitutive.hpp"
#include "vacflow/kernels.hpp"

namespace vacflow::solver1d {

struct Grid1D {
  double x_min = 0.0;
  double x_max = 1.0;
  int n_cells = 4;

  Grid1D() = default;
  Grid1D(double lo, double hi, int n);

  double length() const { return x_max - x_min; }
  double dx() const { return (x_max - x_min) / n_cells; }
  double center(int i) const { return x_min + (i + 0.5) * dx(); }
  double face(int f) const { return x_min + f * dx(); }
  std::vector<double> centers() const;
};

struct FluidState1D {
  std::vector<double> rho;
  std::vector<double> mom;
  double t = 0.0;

  std::size_t size() const { return rho.size(); }
  /// u = mom / rho, zero below the relative vacuum floor.
  std::vector<double> velocity() const;
  double mass(const Grid1D& grid) const;
  double momentum(const Grid1D& grid) const;
};

/// Relative vacuum floor: cells with rho < kVacuumFloor * max(rho) carry no momentum.
inline constexpr double kVacuumFloor = 1e-14;

struct BoundarySide {
  double u_b = 0.0;
  double rho_b = 0.0;
  bool inflow = false;
};

struct BoundaryData {
  bool periodic = false;
  BoundarySide left;
  BoundarySide right;

  static BoundaryData periodic_domain();
  static BoundaryData walls();
  /// Velocity u_in > 0 entering at the left with density rho_in, leaving at the right.
  static BoundaryData channel(double u_in, double rho_in);

  /// Inflow flags must match the sign of u_B . n and carry rho_B > 0.
  void validate() const;
  /// Affine extension of the boundary velocities (zero when periodic).
  double lift(const Grid1D& grid, double x) const;
  double lift_slope(const Grid1D& grid) const;
};

FluidState1D make_state(const Grid1D& grid, const std::function<double(double)>& rho,
                        const std::function<double(double)>& u, double t = 0.0);

/// min(0.4 dx / (max|u| + max c), 0.25 dx^2 / nu).
double stable_dt(const FluidState1D& state, const Grid1D& grid, const BoundaryData& bc,
                 const constitutive::PressureLaw& law, double nu);

/// Fluxes of one step, consumed by the energy ledger.
struct StepRecord {
  std::vector<double> flux_rho;   // n+1 faces
  std::vector<double> flux_mom;
  std::vector<double> face_speed;
  std::vector<double> stress;     // nu u_x at faces, new time level
  std::vector<double> face_weight;  // dx interior, dx/2 at Dirichlet boundaries
};

FluidState1D step(const FluidState1D& state, const Grid1D& grid, const BoundaryData& bc,
                  const constitutive::PressureLaw& law, double nu, double dt,
                  kernels::Exec exec = kernels::Exec::parallel, StepRecord* record = nullptr);

struct LedgerEntry {
  double t;
  double energy;       // sum [1/2 rho |u - u_lift|^2 + P(rho)] dx
  double dissipation;  // cumulative int int nu u_x^2
  double boundary;     // cumulative boundary potential-energy terms
  double rhs;          // cumulative right-hand side of the energy inequality
  double defect;       // rhs - (energy - energy(0) + dissipation + boundary)
  double mass;
  double mass_boundary_flux;  // cumulative inflow - outflow of mass
};

struct EnergyLedger {
  double dx = 0.0;
  double dt = 0.0;
  std::vector<LedgerEntry> entries;
  /// Cumulative per-cell energy-balance residual (energy units).
  std::vector<double> cell_residual;
};

struct Trajectory {
  Grid1D grid;
  std::vector<FluidState1D> frames;
};

struct RunOptions {
  int record_every = 1;
  kernels::Exec exec = kernels::Exec::parallel;
};

struct RunResult {
  Trajectory trajectory;
  EnergyLedger ledger;
};

/// Fixed-step run to t_end; the last step is shortened to land on t_end.
RunResult run(const FluidState1D& initial, const Grid1D& grid, const BoundaryData& bc,
              const constitutive::PressureLaw& law, double nu, double t_end, double dt, RunOptions options = {});

double discrete_energy(const FluidState1D& state, const Grid1D& grid, const BoundaryData& bc,
                       const constitutive::PressureLaw& law);

struct DefectSeries {
  std::vector<double> t;
  std::vector<double> defect;
  double min_defect = 0.0;
  /// max(0, -min_defect) / (dx + dt).
  double constant = 0.0;
};

DefectSeries energy_inequality_residual(const EnergyLedger& ledger);

/// Scalar test function phi(t, x); derivatives are taken as differences of
/// phi between frames and between cell faces.
using TestFunction = std::function<double(double, double)>;

double weak_form_residual_continuity(const Trajectory& traj, const BoundaryData& bc, const TestFunction& phi);

/// `reynolds` holds a cellwise (time-independent) defect; empty means zero.
double weak_form_residual_momentum(const Trajectory& traj, const BoundaryData& bc,
                                   const constitutive::PressureLaw& law, double nu, const TestFunction& phi,
                                   const std::vector<double>& reynolds = {});

/// Continuity equation alone with a prescribed velocity field (upwind flux,
/// forward Euler), zero-gradient ghosts.
std::vector<double> transport_run(std::vector<double> rho, const Grid1D& grid,
                                  const std::function<double(double, double)>& velocity, double t_end, double dt,
                                  kernels::Exec exec = kernels::Exec::parallel);

/// CSV with header `t,x_center,rho,u`, one row per cell per frame.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
/// CSV with header `t,energy,dissipation,boundary,rhs,defect,mass`.
void write_ledger_csv(std::ostream& os, const EnergyLedger& ledger);

}  // namespace vacflow::solver1d
