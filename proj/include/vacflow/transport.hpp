#pragma once

// Density transport along characteristics of a prescribed velocity field.

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "vacflow/constitutive.hpp"

namespace vacflow::transport {

using Point = std::array<double, 3>;
using Gradient = std::array<std::array<double, 3>, 3>;

/// Domain described by a level set: x is inside iff phi(x) < 0. The boundary
/// normal is the normalized gradient of phi (computed by central differences).
struct Domain {
  std::function<double(const Point&)> phi;
  bool has_boundary = false;

  static Domain whole_space();
  /// (lo, hi) on the line; either end may be infinite.
  static Domain interval(double lo, double hi);

  bool inside(const Point& x) const { return !has_boundary || phi(x) < 0.0; }
  Point outer_normal(const Point& x, int dim) const;
};

/// Analytic velocity field u(t, x) with its gradient and divergence.
struct VelocityFieldSpec {
  int dim = 1;
  double horizon = 1.0;
  std::function<Point(double, const Point&)> value;
  std::function<Gradient(double, const Point&)> gradient;
  std::function<double(double, const Point&)> divergence;
  Domain domain = Domain::whole_space();
  /// Radius outside of which the field vanishes, when declared.
  std::optional<double> support_radius;

  /// Velocity at (t, x) projected on the first `dim` components.
  Point velocity(double t, const Point& x) const { return value(t, x); }
};

// Presets used throughout tests and scenarios (1-D unless noted).
VelocityFieldSpec constant_field(double c, double horizon = 10.0);
/// u(x) = k x, div u = k.
VelocityFieldSpec linear_field(double k, double horizon = 10.0);
/// u(x) = A (1 - s^2)^2 s with s = x / R on |x| < R, zero outside; C^1 with compact support.
VelocityFieldSpec compact_bump_field(double amplitude, double radius, double horizon = 10.0);

/// Fixed-step fourth-order Runge-Kutta integrator of dX/dt = u(t, X).
class CharacteristicFlow {
 public:
  CharacteristicFlow(VelocityFieldSpec spec, double dt);

  const VelocityFieldSpec& spec() const { return spec_; }
  double dt() const { return dt_; }

  struct Forward {
    Point x;
    bool exited = false;  // left the domain; x is the last inside state
    double exit_time = 0.0;
  };
  struct Backward {
    Point x0;
    double entry_time = 0.0;  // tau; 0 when the characteristic starts inside at t = 0
    double divergence_integral = 0.0;  // int_tau^t div u(s, X(s)) ds
  };

  /// X(t, x0).
  Forward forward(const Point& x0, double t) const;
  /// Foot point of the backward characteristic through (t, x) and its entry
  /// time. Throws NumericalFailure when the characteristic grazes the boundary.
  Backward backward(const Point& x, double t) const;

 private:
  struct State {
    Point x;
    double integral;
  };
  State rk4(const State& s, double t, double h) const;

  VelocityFieldSpec spec_;
  double dt_;
};

Point flow_forward(const CharacteristicFlow& flow, const Point& x0, double t);
CharacteristicFlow::Backward flow_backward(const CharacteristicFlow& flow, const Point& x, double t);

/// rho0(x) >= 0 with an optional declared decay exponent and support radius.
struct DensityProfile {
  std::function<double(const Point&)> rho;
  std::optional<double> alpha;
  std::optional<double> support_radius;

  double operator()(const Point& x) const;
};

DensityProfile gaussian_profile(double amplitude = 1.0, double width = 1.0, double center = 0.0);
/// rho0^(gamma-1) = (1 - x^2)_+^2 scaled to [-radius, radius]; compact support
/// with Lipschitz rho0^(gamma-1).
DensityProfile compact_profile(const constitutive::PressureLaw& law, double radius, double height = 1.0);
/// rho0^(gamma-1) = 1 / (1 + |x|^(alpha-1)), so |grad rho0^(gamma-1)| <~ 1/(1+|x|^alpha).
DensityProfile polynomial_decay_profile(double alpha, const constitutive::PressureLaw& law);

using BoundaryDensity = std::function<double(const Point&)>;

/// Density from characteristics: rho0(x0) exp(-int_0^t div u) when the backward
/// characteristic reaches t = 0 inside the domain, rhoB(x_tau) exp(-int_tau^t div u)
/// otherwise.
double density_from_characteristics(const DensityProfile& rho0, const std::optional<BoundaryDensity>& rho_b,
                                    const CharacteristicFlow& flow, double t, const Point& x);

/// Densities at many points; evaluations are independent.
std::vector<double> density_on_points(const DensityProfile& rho0, const std::optional<BoundaryDensity>& rho_b,
                                      const CharacteristicFlow& flow, double t, const std::vector<double>& xs,
                                      bool parallel = true);

/// Max over interior nodes of |d_t rho + d_x(rho u)| by centered differences
/// with spacings (dx, dt). `nodes` must have at least 3 entries.
double continuity_residual(const std::function<double(double, double)>& rho, const VelocityFieldSpec& spec,
                           const std::vector<double>& nodes, double dt, double t);

struct RegularityReport {
  double q;
  std::vector<double> times;
  std::vector<double> norms;  // discrete L^q norm of d_x (rho^(gamma-1))
  double initial_norm;
  double sup_norm;
  double measured_constant;  // sup_norm / (1 + initial_norm)
};

/// Discrete L^q norm of d_x(rho^(gamma-1)) over the given nodes at each time.
/// Inflow boundaries are rejected.
RegularityReport regularity_propagation_check(const DensityProfile& rho0, const CharacteristicFlow& flow,
                                              const constitutive::PressureLaw& law, double q,
                                              const std::vector<double>& times, const std::vector<double>& nodes);

struct DecayReport {
  double alpha;
  double expected_exponent;  // (alpha - 1)/(gamma - 1)
  double initial_exponent;   // fitted on rho0
  double fitted_exponent;    // fitted on rho(t)
  double fit_r_min;
  double fit_r_max;
  bool within_tolerance;     // |fitted - expected| <= 10% expected
};

/// Least-squares fit of the tail exponent of rho(t, .) on |x| in [R, 2R] with
/// R beyond the velocity support.
DecayReport decay_propagation_check(const DensityProfile& rho0, const CharacteristicFlow& flow,
                                    const constitutive::PressureLaw& law, double t, double r_fit,
                                    int samples = 64);

/// rho = (P')^{-1}([G + c]_+), solving grad P'(rho) = grad G where positive.
DensityProfile equilibrium_profile(std::function<double(const Point&)> potential,
                                   const constitutive::PressureLaw& law, double mass_constant);

double mass_threshold(double gamma);
/// alpha > max{2, 3 gamma - 2}.
bool mass_criterion(double alpha, double gamma);

}  // namespace vacflow::transport
