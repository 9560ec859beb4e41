#include "vacflow/transport.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>

#include "vacflow/errors.hpp"

namespace vacflow::transport {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Point axpy(const Point& x, double a, const Point& v) {
  return {x[0] + a * v[0], x[1] + a * v[1], x[2] + a * v[2]};
}

double dot(const Point& a, const Point& b, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) s += a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(i)];
  return s;
}

Gradient scalar_gradient(double g) {
  Gradient m{};
  m[0][0] = g;
  return m;
}

// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

// ---------------------------------------------------------------------------
// Domain

Domain Domain::whole_space() {
  Domain d;
  d.phi = [](const Point&) { return -1.0; };
  d.has_boundary = false;
  return d;
}

Domain Domain::interval(double lo, double hi) {
  if (!(lo < hi)) throw DomainError("interval domain needs lo < hi");
  Domain d;
  d.has_boundary = std::isfinite(lo) || std::isfinite(hi);
  d.phi = [lo, hi](const Point& x) {
    double v = -kInf;
    if (std::isfinite(lo)) v = std::max(v, lo - x[0]);
    if (std::isfinite(hi)) v = std::max(v, x[0] - hi);
    return std::isfinite(v) ? v : -1.0;
  };
  return d;
}

Point Domain::outer_normal(const Point& x, int dim) const {
  Point n{};
  const double h = 1e-7 * std::max(1.0, std::abs(x[0]) + std::abs(x[1]) + std::abs(x[2]));
  double norm = 0.0;
  for (int i = 0; i < dim; ++i) {
    Point xp = x, xm = x;
    xp[static_cast<std::size_t>(i)] += h;
    xm[static_cast<std::size_t>(i)] -= h;
    n[static_cast<std::size_t>(i)] = (phi(xp) - phi(xm)) / (2.0 * h);
    norm += n[static_cast<std::size_t>(i)] * n[static_cast<std::size_t>(i)];
  }
  norm = std::sqrt(norm);
  if (norm > 0.0) {
    for (double& c : n) c /= norm;
  }
  return n;
}

// ---------------------------------------------------------------------------
// Presets

VelocityFieldSpec constant_field(double c, double horizon) {
  VelocityFieldSpec s;
  s.dim = 1;
  s.horizon = horizon;
  s.value = [c](double, const Point&) { return Point{c, 0.0, 0.0}; };
  s.gradient = [](double, const Point&) { return scalar_gradient(0.0); };
  s.divergence = [](double, const Point&) { return 0.0; };
  if (c == 0.0) s.support_radius = 0.0;
  return s;
}

VelocityFieldSpec linear_field(double k, double horizon) {
  VelocityFieldSpec s;
  s.dim = 1;
  s.horizon = horizon;
  s.value = [k](double, const Point& x) { return Point{k * x[0], 0.0, 0.0}; };
  s.gradient = [k](double, const Point&) { return scalar_gradient(k); };
  s.divergence = [k](double, const Point&) { return k; };
  return s;
}

VelocityFieldSpec compact_bump_field(double amplitude, double radius, double horizon) {
  VelocityFieldSpec s;
  s.dim = 1;
  s.horizon = horizon;
  s.support_radius = radius;
  s.value = [amplitude, radius](double, const Point& x) {
    const double r = x[0] / radius;
    if (std::abs(r) >= 1.0) return Point{};
    const double w = 1.0 - r * r;
    return Point{amplitude * w * w * r, 0.0, 0.0};
  };
  s.divergence = [amplitude, radius](double, const Point& x) {
    const double r = x[0] / radius;
    if (std::abs(r) >= 1.0) return 0.0;
    return amplitude / radius * (1.0 - r * r) * (1.0 - 5.0 * r * r);
  };
  s.gradient = [div = s.divergence](double t, const Point& x) { return scalar_gradient(div(t, x)); };
  return s;
}

// ---------------------------------------------------------------------------
// CharacteristicFlow

CharacteristicFlow::CharacteristicFlow(VelocityFieldSpec spec, double dt) : spec_(std::move(spec)), dt_(dt) {
  if (!(dt > 0.0)) throw DomainError("integrator step dt must be positive");
  if (!spec_.value || !spec_.divergence) throw DomainError("velocity field needs value and divergence");
}

CharacteristicFlow::State CharacteristicFlow::rk4(const State& s, double t, double h) const {
  auto rhs = [this](double tt, const Point& x, Point& dx, double& di) {
    dx = spec_.value(tt, x);
    di = spec_.divergence(tt, x);
  };
  Point k1, k2, k3, k4;
  double i1, i2, i3, i4;
  rhs(t, s.x, k1, i1);
  rhs(t + 0.5 * h, axpy(s.x, 0.5 * h, k1), k2, i2);
  rhs(t + 0.5 * h, axpy(s.x, 0.5 * h, k2), k3, i3);
  rhs(t + h, axpy(s.x, h, k3), k4, i4);
  State out;
  for (std::size_t c = 0; c < 3; ++c) out.x[c] = s.x[c] + h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
  out.integral = s.integral + h / 6.0 * (i1 + 2.0 * i2 + 2.0 * i3 + i4);
  return out;
}

CharacteristicFlow::Forward CharacteristicFlow::forward(const Point& x0, double t) const {
  if (t < 0.0 || t > spec_.horizon * (1.0 + 1e-12)) throw DomainError("time outside [0, T]");
  Forward out{x0, false, 0.0};
  if (t == 0.0) return out;
  const int n = static_cast<int>(std::ceil(t / dt_ - 1e-9));
  const double h = t / n;
  State s{x0, 0.0};
  for (int k = 0; k < n; ++k) {
    const double s_time = k * h;
    State next = rk4(s, s_time, h);
    if (!spec_.domain.inside(next.x)) {
      double lo = 0.0, hi = h;
      while (hi - lo > dt_ * 1e-3) {
        const double mid = 0.5 * (lo + hi);
        if (spec_.domain.inside(rk4(s, s_time, mid).x)) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      out.x = rk4(s, s_time, lo).x;
      out.exited = true;
      out.exit_time = s_time + lo;
      return out;
    }
    s = next;
  }
  out.x = s.x;
  return out;
}

CharacteristicFlow::Backward CharacteristicFlow::backward(const Point& x, double t) const {
  if (t < 0.0 || t > spec_.horizon * (1.0 + 1e-12)) throw DomainError("time outside [0, T]");
  if (!spec_.domain.inside(x)) throw DomainError("point outside the domain");
  Backward out{x, 0.0, 0.0};
  if (t == 0.0) return out;
  const int n = static_cast<int>(std::ceil(t / dt_ - 1e-9));
  const double h = t / n;
  State s{x, 0.0};
  for (int k = 0; k < n; ++k) {
    const double s_time = t - k * h;
    State next = rk4(s, s_time, -h);
    if (!std::isfinite(next.x[0]) || !std::isfinite(next.integral)) {
      std::ostringstream os;
      os << "characteristic integration failed at t = " << s_time << ", last valid x = " << s.x[0];
      throw NumericalFailure(os.str());
    }
    if (!spec_.domain.inside(next.x)) {
      double lo = 0.0, hi = h;
      while (hi - lo > dt_ * 1e-3) {
        const double mid = 0.5 * (lo + hi);
        if (spec_.domain.inside(rk4(s, s_time, -mid).x)) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      const double eta = 0.5 * (lo + hi);
      const State foot = rk4(s, s_time, -eta);
      const double tau = s_time - eta;
      const Point normal = spec_.domain.outer_normal(foot.x, spec_.dim);
      const Point u = spec_.value(tau, foot.x);
      const double un = dot(u, normal, spec_.dim);
      const double speed = std::sqrt(dot(u, u, spec_.dim));
      if (std::abs(un) <= 1e-6 * std::max(1.0, speed)) {
        std::ostringstream os;
        os << "characteristic grazes the boundary at t = " << tau << " (normal speed " << un << ")";
        throw NumericalFailure(os.str());
      }
      out.x0 = foot.x;
      out.entry_time = tau;
      out.divergence_integral = -foot.integral;
      return out;
    }
    s = next;
  }
  out.x0 = s.x;
  out.entry_time = 0.0;
  out.divergence_integral = -s.integral;
  return out;
}

Point flow_forward(const CharacteristicFlow& flow, const Point& x0, double t) { return flow.forward(x0, t).x; }

CharacteristicFlow::Backward flow_backward(const CharacteristicFlow& flow, const Point& x, double t) {
  return flow.backward(x, t);
}

// ---------------------------------------------------------------------------
// Densities

double DensityProfile::operator()(const Point& x) const {
  if (support_radius && std::abs(x[0]) >= *support_radius) return 0.0;
  return rho(x);
}

DensityProfile gaussian_profile(double amplitude, double width, double center) {
  DensityProfile p;
  p.rho = [amplitude, width, center](const Point& x) {
    const double z = (x[0] - center) / width;
    return amplitude * std::exp(-z * z);
  };
  return p;
}

DensityProfile compact_profile(const constitutive::PressureLaw& law, double radius, double height) {
  DensityProfile p;
  const double expo = 1.0 / (law.gamma() - 1.0);
  p.rho = [radius, height, expo](const Point& x) {
    const double r = x[0] / radius;
    if (std::abs(r) >= 1.0) return 0.0;
    const double w = 1.0 - r * r;
    return std::pow(height * w * w, expo);
  };
  p.support_radius = radius;
  return p;
}

DensityProfile polynomial_decay_profile(double alpha, const constitutive::PressureLaw& law) {
  if (!(alpha > 1.0)) throw DomainError("decay exponent alpha must exceed 1");
  DensityProfile p;
  const double expo = 1.0 / (law.gamma() - 1.0);
  p.rho = [alpha, expo](const Point& x) {
    return std::pow(1.0 + std::pow(std::abs(x[0]), alpha - 1.0), -expo);
  };
  p.alpha = alpha;
  return p;
}

double density_from_characteristics(const DensityProfile& rho0, const std::optional<BoundaryDensity>& rho_b,
                                    const CharacteristicFlow& flow, double t, const Point& x) {
  const auto foot = flow.backward(x, t);
  double source = 0.0;
  if (foot.entry_time > 0.0) {
    if (!rho_b) throw DomainError("characteristic enters through the inflow boundary but no boundary density was supplied");
    source = (*rho_b)(foot.x0);
  } else {
    source = rho0(foot.x0);
  }
  if (source < 0.0) throw DomainError("negative source density");
  return source * std::exp(-foot.divergence_integral);
}

std::vector<double> density_on_points(const DensityProfile& rho0, const std::optional<BoundaryDensity>& rho_b,
                                      const CharacteristicFlow& flow, double t, const std::vector<double>& xs,
                                      bool parallel) {
  std::vector<double> out(xs.size());
  std::exception_ptr error;
  const auto n = static_cast<long>(xs.size());
#pragma omp parallel for schedule(static) if (parallel)
  for (long i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] =
          density_from_characteristics(rho0, rho_b, flow, t, Point{xs[static_cast<std::size_t>(i)], 0.0, 0.0});
    } catch (...) {
#pragma omp critical(vacflow_transport_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

double continuity_residual(const std::function<double(double, double)>& rho, const VelocityFieldSpec& spec,
                           const std::vector<double>& nodes, double dt, double t) {
  if (nodes.size() < 3) throw DomainError("continuity residual needs at least 3 grid nodes");
  if (!(dt > 0.0)) throw DomainError("time spacing must be positive");
  const std::size_t n = nodes.size();
  std::vector<double> flux(n);
  for (std::size_t i = 0; i < n; ++i) flux[i] = rho(t, nodes[i]) * spec.value(t, Point{nodes[i], 0.0, 0.0})[0];
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double dtr = (rho(t + dt, nodes[i]) - rho(t - dt, nodes[i])) / (2.0 * dt);
    const double dxf = (flux[i + 1] - flux[i - 1]) / (nodes[i + 1] - nodes[i - 1]);
    worst = std::max(worst, std::abs(dtr + dxf));
  }
  return worst;
}

RegularityReport regularity_propagation_check(const DensityProfile& rho0, const CharacteristicFlow& flow,
                                              const constitutive::PressureLaw& law, double q,
                                              const std::vector<double>& times, const std::vector<double>& nodes) {
  if (nodes.size() < 3) throw DomainError("regularity check needs at least 3 grid nodes");
  if (!(q >= 1.0)) throw DomainError("exponent q must be >= 1");
  const double g1 = law.gamma() - 1.0;
  auto norm_at = [&](double t) {
    const std::size_t n = nodes.size();
    std::vector<double> f(n);
    std::exception_ptr error;
#pragma omp parallel for schedule(static)
    for (long i = 0; i < static_cast<long>(n); ++i) {
      try {
        const auto k = static_cast<std::size_t>(i);
        const auto foot = flow.backward(Point{nodes[k], 0.0, 0.0}, t);
        if (foot.entry_time > 0.0) {
          throw Unsupported("regularity propagation is only supported without inflow boundaries");
        }
        const double rho = rho0(foot.x0) * std::exp(-foot.divergence_integral);
        f[k] = std::pow(rho, g1);
      } catch (...) {
#pragma omp critical(vacflow_regularity_error)
        if (!error) error = std::current_exception();
      }
    }
    if (error) std::rethrow_exception(error);
    double sum = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double w = 0.5 * (nodes[i + 1] - nodes[i - 1]);
      const double d = (f[i + 1] - f[i - 1]) / (nodes[i + 1] - nodes[i - 1]);
      sum += std::pow(std::abs(d), q) * w;
    }
    return std::pow(sum, 1.0 / q);
  };
  RegularityReport rep;
  rep.q = q;
  rep.times = times;
  rep.initial_norm = norm_at(0.0);
  rep.sup_norm = rep.initial_norm;
  for (double t : times) {
    rep.norms.push_back(norm_at(t));
    rep.sup_norm = std::max(rep.sup_norm, rep.norms.back());
  }
  rep.measured_constant = rep.sup_norm / (1.0 + rep.initial_norm);
  return rep;
}

DecayReport decay_propagation_check(const DensityProfile& rho0, const CharacteristicFlow& flow,
                                    const constitutive::PressureLaw& law, double t, double r_fit, int samples) {
  if (!rho0.alpha) throw DomainError("decay check needs a declared decay exponent alpha");
  if (samples < 8) throw DomainError("tail grid too short: need at least 8 samples");
  const auto& spec = flow.spec();
  if (spec.support_radius && r_fit <= *spec.support_radius) {
    std::ostringstream os;
    os << "tail window start " << r_fit << " must lie beyond the velocity support radius " << *spec.support_radius;
    throw DomainError(os.str());
  }
  std::vector<double> log_r, log_rho0, log_rho;
  for (int side : {-1, 1}) {
    for (int k = 0; k < samples; ++k) {
      const double r = r_fit * std::pow(2.0, static_cast<double>(k) / (samples - 1));
      const Point x{side * r, 0.0, 0.0};
      const double initial = rho0(x);
      const double now = density_from_characteristics(rho0, std::nullopt, flow, t, x);
      if (!(initial > 0.0) || !(now > 0.0)) throw NumericalFailure("density underflow in the tail window");
      log_r.push_back(std::log(r));
      log_rho0.push_back(std::log(initial));
      log_rho.push_back(std::log(now));
    }
  }
  DecayReport rep;
  rep.alpha = *rho0.alpha;
  rep.expected_exponent = (rep.alpha - 1.0) / (law.gamma() - 1.0);
  rep.initial_exponent = -fit_slope(log_r, log_rho0);
  rep.fitted_exponent = -fit_slope(log_r, log_rho);
  rep.fit_r_min = r_fit;
  rep.fit_r_max = 2.0 * r_fit;
  rep.within_tolerance = std::abs(rep.fitted_exponent - rep.expected_exponent) <= 0.1 * rep.expected_exponent;
  return rep;
}

DensityProfile equilibrium_profile(std::function<double(const Point&)> potential,
                                   const constitutive::PressureLaw& law, double mass_constant) {
  DensityProfile p;
  p.rho = [potential = std::move(potential), law, mass_constant](const Point& x) {
    return law.potential_derivative_inverse(potential(x) + mass_constant);
  };
  return p;
}

double mass_threshold(double gamma) { return std::max(2.0, 3.0 * gamma - 2.0); }

bool mass_criterion(double alpha, double gamma) {
  if (!(gamma > 1.0 && gamma <= 2.0)) throw DomainError("gamma must lie in (1, 2]");
  return alpha > mass_threshold(gamma);
}

}  // namespace vacflow::transport
