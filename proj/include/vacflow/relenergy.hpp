#pragma once

// Relative energy between a (numerical) weak solution and a smooth reference
// pair, term-by-term evaluation of the relative energy inequality, the
// epsilon-shift study near vacuum, and the Gronwall certificate.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vacflow/constitutive.hpp"
#include "vacflow/solver1d.hpp"
#include "vacflow/transport.hpp"

namespace vacflow::relenergy {

using solver1d::BoundaryData;
using solver1d::FluidState1D;
using solver1d::Grid1D;
using solver1d::Trajectory;

/// Reference fields and first derivatives at one point.
struct RefPoint {
  double rho = 0.0;
  double u = 0.0;
  double u_t = 0.0;
  double u_x = 0.0;
  double rho_t = 0.0;
  double rho_x = 0.0;
};

struct ReferenceSnapshot {
  double t = 0.0;
  std::vector<RefPoint> cells;
};

enum class Provenance : std::uint8_t { characteristics_built, fine_solver_run, analytic };

std::string to_string(Provenance p);

struct RegularityInfo {
  double continuity_residual = 0.0;  // max |d_t rho + d_x(rho u)| measured
  double tolerance = 0.0;            // declared bound
};

/// Smooth reference (rho~, u~) sampled at cell centers on demand.
struct ReferencePair {
  Provenance provenance = Provenance::analytic;
  std::function<ReferenceSnapshot(const Grid1D&, double)> sample;
  std::optional<RegularityInfo> regularity;
  bool differentiable = true;
  double shift = 0.0;  // accumulated epsilon shift
};

struct AnalyticFields {
  std::function<double(double, double)> rho, u, u_t, u_x, rho_t, rho_x;
};

ReferencePair analytic_reference(AnalyticFields fields);

/// rho~ from characteristics of `flow`, u~ the flow's velocity. Derivatives of
/// rho~ by central differences of the characteristic density. The continuity
/// residual on `check_grid` at t = horizon/2 must not exceed `tolerance`.
ReferencePair characteristics_reference(transport::DensityProfile rho0, transport::CharacteristicFlow flow,
                                        const Grid1D& check_grid, double tolerance);

/// Reference from a run on a grid `factor` times finer than the one it will be
/// sampled on; frames must include every sample time. Velocity gradients use the
/// same boundary ghosts as the weak solution.
ReferencePair fine_solver_reference(Trajectory fine, int factor, const BoundaryData& bc = {});

/// Density rho~ + epsilon, velocity unchanged.
ReferencePair epsilon_shift(const ReferencePair& ref, double epsilon);

double relative_energy(const FluidState1D& state, const Grid1D& grid, const ReferenceSnapshot& ref,
                       const constitutive::PressureLaw& law);
double relative_energy(const FluidState1D& state, const Grid1D& grid, const ReferencePair& ref,
                       const constitutive::PressureLaw& law, double t);

/// b = d_t u~ + u~ d_x u~ + d_x P'(rho~) per cell.
std::vector<double> strong_residual(const ReferenceSnapshot& ref, const constitutive::PressureLaw& law);
std::vector<double> strong_residual(const ReferencePair& ref, const constitutive::PressureLaw& law,
                                    const Grid1D& grid, double t);

struct EpsilonScaling {
  std::vector<double> epsilons;
  std::vector<double> initial_term;     // |int P(rho0) + eps P'(rho0) - P(rho0 + eps)|
  std::vector<double> divergence_term;  // |eps int int p'(rho~ + eps) div u~|
  std::vector<double> density_term;     // || eps rho p'(rho~+eps)/(rho~+eps) ||_{L^gamma(space-time)}
  std::optional<double> initial_slope;
  std::optional<double> divergence_slope;
  std::optional<double> density_slope;
  bool density_slope_ok = false;  // within 10% of gamma - 1
};

EpsilonScaling epsilon_vanishing_terms(const Trajectory& weak, const ReferencePair& ref,
                                       const constitutive::PressureLaw& law, const std::vector<double>& epsilons);

/// Optional defect measures carried by the weak solution (cellwise, constant in time).
struct DefectInput {
  std::vector<double> energy;    // E_h per cell
  std::vector<double> reynolds;  // R_h per cell (1-D)
};

struct RelativeEnergyTrace {
  std::vector<double> tau;
  std::vector<double> energy;  // int E(rho, u | rho~, u~)
  std::vector<double> lhs;
  std::vector<double> rhs;
  std::vector<double> chi;          // 2 ||u~_x||_inf + ||b||_q
  std::vector<double> residual;     // accumulated residual fed to Gronwall
  std::vector<double> b_norm;
  // Cumulative terms of the inequality.
  std::vector<double> dissipation_block;  // int int [F(u_x) + F*(S) - S u~_x]
  std::vector<double> boundary;
  std::vector<double> defect_mass;
  std::vector<double> kinetic;
  std::vector<double> pressure;
  std::vector<double> strong;
  std::vector<double> continuity;
  std::vector<double> reynolds;
  std::vector<double> forcing;
  double max_violation = 0.0;     // max(lhs - rhs, 0)
  double violation_constant = 0.0;  // max_violation / (dx + dt)
  Provenance provenance = Provenance::analytic;
};

struct ReiOptions {
  std::optional<DefectInput> defects;
  std::function<double(double, double)> forcing;  // f(t, x); empty means zero
  double c1 = 2.0;
  double c2 = 1.0;
};

/// Every term of the relative energy inequality at each frame of `weak`.
RelativeEnergyTrace rei_terms(const Trajectory& weak, const ReferencePair& ref, const constitutive::PressureLaw& law,
                              double nu, const BoundaryData& bc, const ReiOptions& options = {});

struct DensitySplit {
  double rho_bar;
  double q;      // 2 gamma / (gamma - 1)
  double delta;
  double convexity;  // c(rho_bar)
  double b_norm;
  // rho >= rho_bar
  double high_part;
  double high_holder;
  double high_energy_ratio;  // high_holder / (||b||_q int E), the measured constant
  // rho < rho_bar
  double low_part;
  double low_holder;
  double low_young;
  double low_l2_gap;      // ||1_{rho<=rho_bar}(rho - rho~)||_2^2
  double low_l2_bound;    // int E / c(rho_bar)
  bool all_hold;
};

DensitySplit density_split_bound(const FluidState1D& state, const Grid1D& grid, const ReferenceSnapshot& ref,
                                 const constitutive::PressureLaw& law, double rho_bar, double delta = 0.5);

struct Certificate {
  bool pass = true;
  double margin = 0.0;  // min over tau > 0 of bound - E
  std::optional<double> first_violation;
  std::vector<double> bound;
  Provenance mode = Provenance::analytic;
};

/// E(tau) <= (E(0) + R(tau)) exp(int_0^tau chi).
Certificate gronwall_monitor(const RelativeEnergyTrace& trace);

/// CSV `tau,E,lhs,rhs,margin,chi`.
void write_certificate_csv(std::ostream& os, const RelativeEnergyTrace& trace, const Certificate& cert);

struct KornPair {
  double lhs;  // sum over faces of the two-sided coercivity gaps
  double rhs;  // sum over faces of |d_x (u - u~)|^2
};

KornPair korn_identity_1d(const std::vector<double>& u, const std::vector<double>& u_tilde, const Grid1D& grid,
                          double nu);

}  // namespace vacflow::relenergy
