#include "vacflow/solver1d.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "vacflow/errors.hpp"

namespace vacflow::solver1d {

using constitutive::PressureLaw;
using kernels::Exec;

namespace {

double vacuum_threshold(const std::vector<double>& rho) {
  const double peak = rho.empty() ? 0.0 : *std::max_element(rho.begin(), rho.end());
  return kVacuumFloor * peak;
}

struct Extended {
  std::vector<double> rho;
  std::vector<double> u;
};

// Cell values with one ghost per side.
Extended extend(const FluidState1D& s, const BoundaryData& bc) {
  const std::size_t n = s.size();
  Extended e{std::vector<double>(n + 2), std::vector<double>(n + 2)};
  const std::vector<double> u = s.velocity();
  for (std::size_t i = 0; i < n; ++i) {
    e.rho[i + 1] = s.rho[i];
    e.u[i + 1] = u[i];
  }
  if (bc.periodic) {
    e.rho[0] = s.rho[n - 1];
    e.u[0] = u[n - 1];
    e.rho[n + 1] = s.rho[0];
    e.u[n + 1] = u[0];
    return e;
  }
  if (bc.left.inflow) {
    e.rho[0] = bc.left.rho_b;
    e.u[0] = bc.left.u_b;
  } else {
    e.rho[0] = s.rho[0];
    e.u[0] = 2.0 * bc.left.u_b - u[0];
  }
  if (bc.right.inflow) {
    e.rho[n + 1] = bc.right.rho_b;
    e.u[n + 1] = bc.right.u_b;
  } else {
    e.rho[n + 1] = s.rho[n - 1];
    e.u[n + 1] = 2.0 * bc.right.u_b - u[n - 1];
  }
  return e;
}

// Solves a tridiagonal system in place (Thomas); lower[0] and upper[n-1] unused.
std::vector<double> solve_tridiagonal(std::vector<double> lower, std::vector<double> diag, std::vector<double> upper,
                                      std::vector<double> rhs) {
  const std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double w = lower[i] / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  std::vector<double> x(n);
  x[n - 1] = rhs[n - 1] / diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = (rhs[i] - upper[i] * x[i + 1]) / diag[i];
  (void)lower;
  return x;
}

// Cyclic tridiagonal system with corner entries `corner` (Sherman-Morrison).
std::vector<double> solve_cyclic(const std::vector<double>& lower, std::vector<double> diag,
                                 const std::vector<double>& upper, const std::vector<double>& rhs, double corner) {
  const std::size_t n = diag.size();
  const double gamma = -diag[0];
  diag[0] -= gamma;
  diag[n - 1] -= corner * corner / gamma;
  std::vector<double> x = solve_tridiagonal(lower, diag, upper, rhs);
  std::vector<double> v(n, 0.0);
  v[0] = gamma;
  v[n - 1] = corner;
  std::vector<double> z = solve_tridiagonal(lower, diag, upper, v);
  const double fact = (x[0] + corner * x[n - 1] / gamma) / (1.0 + z[0] + corner * z[n - 1] / gamma);
  for (std::size_t i = 0; i < n; ++i) x[i] -= fact * z[i];
  return x;
}

double cell_stress(const std::vector<double>& u, std::size_t i, const BoundaryData& bc, double nu, double dx) {
  const std::size_t n = u.size();
  double ul, ur;
  if (bc.periodic) {
    ul = u[(i + n - 1) % n];
    ur = u[(i + 1) % n];
  } else {
    ul = i == 0 ? 2.0 * bc.left.u_b - u[0] : u[i - 1];
    ur = i + 1 == n ? 2.0 * bc.right.u_b - u[n - 1] : u[i + 1];
  }
  return nu * (ur - ul) / (2.0 * dx);
}

// Boundary mass flux weights rho [u.n]^+ + rho_B [u.n]^- at (left, right).
std::pair<double, double> boundary_mass_terms(const FluidState1D& s, const BoundaryData& bc) {
  if (bc.periodic) return {0.0, 0.0};
  auto side = [](double rho_trace, const BoundarySide& b, double un) {
    double v = rho_trace * std::max(un, 0.0);
    if (b.inflow) v += b.rho_b * std::min(un, 0.0);
    return v;
  };
  return {side(s.rho.front(), bc.left, -bc.left.u_b), side(s.rho.back(), bc.right, bc.right.u_b)};
}

}  // namespace

// ---------------------------------------------------------------------------

Grid1D::Grid1D(double lo, double hi, int n) : x_min(lo), x_max(hi), n_cells(n) {
  if (n < 4) throw DomainError("grid needs at least 4 cells");
  if (!(hi > lo)) throw DomainError("grid needs x_max > x_min");
}

std::vector<double> Grid1D::centers() const {
  std::vector<double> c(static_cast<std::size_t>(n_cells));
  for (int i = 0; i < n_cells; ++i) c[static_cast<std::size_t>(i)] = center(i);
  return c;
}

std::vector<double> FluidState1D::velocity() const {
  const double floor = vacuum_threshold(rho);
  std::vector<double> u(rho.size(), 0.0);
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (rho[i] > floor && rho[i] > 0.0) u[i] = mom[i] / rho[i];
  }
  return u;
}

double FluidState1D::mass(const Grid1D& grid) const {
  double m = 0.0;
  for (double r : rho) m += r;
  return m * grid.dx();
}

double FluidState1D::momentum(const Grid1D& grid) const {
  double m = 0.0;
  for (double v : mom) m += v;
  return m * grid.dx();
}

BoundaryData BoundaryData::periodic_domain() {
  BoundaryData bc;
  bc.periodic = true;
  return bc;
}

BoundaryData BoundaryData::walls() { return BoundaryData{}; }

BoundaryData BoundaryData::channel(double u_in, double rho_in) {
  BoundaryData bc;
  bc.left = {u_in, rho_in, true};
  bc.right = {u_in, 0.0, false};
  bc.validate();
  return bc;
}

void BoundaryData::validate() const {
  if (periodic) return;
  auto check = [](const BoundarySide& s, double un, const char* name) {
    if (s.inflow) {
      if (!(un < 0.0)) throw DomainError(std::string(name) + " boundary flagged inflow but u_B . n >= 0");
      if (!(s.rho_b > 0.0)) {
        throw DomainError(std::string(name) + " inflow boundary density must be bounded away from vacuum");
      }
    } else if (un < 0.0) {
      throw DomainError(std::string(name) + " boundary has u_B . n < 0 but no inflow density");
    }
  };
  check(left, -left.u_b, "left");
  check(right, right.u_b, "right");
}

double BoundaryData::lift(const Grid1D& grid, double x) const {
  if (periodic) return 0.0;
  return left.u_b + (right.u_b - left.u_b) * (x - grid.x_min) / grid.length();
}

double BoundaryData::lift_slope(const Grid1D& grid) const {
  if (periodic) return 0.0;
  return (right.u_b - left.u_b) / grid.length();
}

FluidState1D make_state(const Grid1D& grid, const std::function<double(double)>& rho,
                        const std::function<double(double)>& u, double t) {
  FluidState1D s;
  s.t = t;
  s.rho.resize(static_cast<std::size_t>(grid.n_cells));
  s.mom.resize(s.rho.size());
  for (int i = 0; i < grid.n_cells; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const double x = grid.center(i);
    s.rho[k] = rho(x);
    if (s.rho[k] < 0.0) throw DomainError("initial density must be nonnegative");
  }
  const double floor = vacuum_threshold(s.rho);
  for (int i = 0; i < grid.n_cells; ++i) {
    const auto k = static_cast<std::size_t>(i);
    s.mom[k] = s.rho[k] > floor ? s.rho[k] * u(grid.center(i)) : 0.0;
  }
  return s;
}

double stable_dt(const FluidState1D& state, const Grid1D& grid, const BoundaryData& bc, const PressureLaw& law,
                 double nu) {
  const Extended e = extend(state, bc);
  const double a = kernels::max_wave_speed(e.rho, e.u, law, Exec::serial);
  const double dx = grid.dx();
  double dt = a > 0.0 ? 0.4 * dx / a : std::numeric_limits<double>::infinity();
  if (nu > 0.0) dt = std::min(dt, 0.25 * dx * dx / nu);
  return dt;
}

FluidState1D step(const FluidState1D& state, const Grid1D& grid, const BoundaryData& bc, const PressureLaw& law,
                  double nu, double dt, Exec exec, StepRecord* record) {
  if (!(nu > 0.0)) throw DomainError("viscosity nu must be positive");
  if (!(dt > 0.0)) throw DomainError("time step must be positive");
  if (state.size() != static_cast<std::size_t>(grid.n_cells)) throw DimensionMismatch("state does not match grid");
  const std::size_t n = state.size();
  const double dx = grid.dx();

  const Extended e = extend(state, bc);
  const double a = kernels::max_wave_speed(e.rho, e.u, law, exec);
  const double dt_conv = a > 0.0 ? 0.4 * dx / a : std::numeric_limits<double>::infinity();
  const double dt_visc = 0.25 * dx * dx / nu;
  if (dt > std::min(dt_conv, dt_visc) * (1.0 + 1e-9)) {
    std::ostringstream os;
    os << std::setprecision(6) << "CFL violation: dt = " << dt << " exceeds ";
    if (dt_conv <= dt_visc) {
      os << "0.4 dx / a = " << dt_conv << " with limiting wave speed a = max|u| + c = " << a;
    } else {
      os << "the viscous bound 0.25 dx^2 / nu = " << dt_visc;
    }
    throw CflViolation(os.str(), a, std::min(dt_conv, dt_visc));
  }

  StepRecord local;
  StepRecord& rec = record ? *record : local;
  rec.flux_rho.assign(n + 1, 0.0);
  rec.flux_mom.assign(n + 1, 0.0);
  rec.face_speed.assign(n + 1, 0.0);
  kernels::llf_fluxes(e.rho, e.u, law, rec.flux_rho, rec.flux_mom, rec.face_speed, exec);

  FluidState1D out;
  out.t = state.t + dt;
  out.rho.resize(n);
  std::vector<double> mom_star(n);
  kernels::conservative_update(state.rho, rec.flux_rho, dt / dx, out.rho, exec);
  kernels::conservative_update(state.mom, rec.flux_mom, dt / dx, mom_star, exec);

  const double peak = *std::max_element(out.rho.begin(), out.rho.end());
  for (std::size_t i = 0; i < n; ++i) {
    if (out.rho[i] < 0.0) {
      if (out.rho[i] < -1e-12 * std::max(peak, 1e-300)) {
        std::ostringstream os;
        os << "negative density " << out.rho[i] << " in cell " << i << " at t = " << out.t;
        throw NumericalFailure(os.str());
      }
      out.rho[i] = 0.0;
    }
  }

  // Backward-Euler viscous stress: rho u - dt d_x(nu d_x u) = mom*.
  const double k = dt * nu / (dx * dx);
  std::vector<double> lower(n, -k), diag(n), upper(n, -k), rhs = mom_star;
  for (std::size_t i = 0; i < n; ++i) diag[i] = out.rho[i] + 2.0 * k;
  std::vector<double> u;
  if (bc.periodic) {
    u = solve_cyclic(lower, diag, upper, rhs, -k);
  } else {
    diag[0] += k;
    diag[n - 1] += k;
    rhs[0] += 2.0 * k * bc.left.u_b;
    rhs[n - 1] += 2.0 * k * bc.right.u_b;
    u = solve_tridiagonal(lower, diag, upper, rhs);
  }

  const double floor = kVacuumFloor * peak;
  out.mom.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.mom[i] = out.rho[i] > floor ? out.rho[i] * u[i] : 0.0;

  rec.stress.assign(n + 1, 0.0);
  rec.face_weight.assign(n + 1, dx);
  for (std::size_t f = 1; f < n; ++f) rec.stress[f] = nu * (u[f] - u[f - 1]) / dx;
  if (bc.periodic) {
    rec.stress[0] = nu * (u[0] - u[n - 1]) / dx;
    rec.stress[n] = rec.stress[0];
    rec.face_weight[n] = 0.0;
  } else {
    rec.stress[0] = nu * (u[0] - bc.left.u_b) / (0.5 * dx);
    rec.stress[n] = nu * (bc.right.u_b - u[n - 1]) / (0.5 * dx);
    rec.face_weight[0] = 0.5 * dx;
    rec.face_weight[n] = 0.5 * dx;
  }
  return out;
}

double discrete_energy(const FluidState1D& state, const Grid1D& grid, const BoundaryData& bc,
                       const PressureLaw& law) {
  const std::vector<double> u = state.velocity();
  double e = 0.0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    const double w = u[i] - bc.lift(grid, grid.center(static_cast<int>(i)));
    e += 0.5 * state.rho[i] * w * w + law.potential(state.rho[i]);
  }
  return e * grid.dx();
}

RunResult run(const FluidState1D& initial, const Grid1D& grid, const BoundaryData& bc, const PressureLaw& law,
              double nu, double t_end, double dt, RunOptions options) {
  bc.validate();
  if (!(t_end >= initial.t)) throw DomainError("t_end precedes the initial time");
  if (options.record_every < 1) throw DomainError("record_every must be >= 1");
  const std::size_t n = initial.size();
  const double dx = grid.dx();
  const double slope = bc.lift_slope(grid);

  RunResult res;
  res.trajectory.grid = grid;
  res.trajectory.frames.push_back(initial);
  res.ledger.dx = dx;
  res.ledger.dt = dt;
  res.ledger.cell_residual.assign(n, 0.0);

  const double e0 = discrete_energy(initial, grid, bc, law);
  LedgerEntry cur{initial.t, e0, 0.0, 0.0, 0.0, 0.0, initial.mass(grid), 0.0};
  res.ledger.entries.push_back(cur);

  auto cell_energy = [&law](const FluidState1D& s, const std::vector<double>& u) {
    std::vector<double> e(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) e[i] = 0.5 * s.rho[i] * u[i] * u[i] + law.potential(s.rho[i]);
    return e;
  };

  FluidState1D state = initial;
  long steps = 0;
  while (state.t < t_end - 1e-12 * std::max(1.0, t_end)) {
    const double h = std::min(dt, t_end - state.t);
    StepRecord rec;
    const Extended ext = extend(state, bc);
    const std::vector<double> u_old = state.velocity();
    const std::vector<double> e_old = cell_energy(state, u_old);
    FluidState1D next = step(state, grid, bc, law, nu, h, options.exec, &rec);
    if (state.t + h >= t_end - 1e-12 * std::max(1.0, t_end)) next.t = t_end;
    const std::vector<double> u_new = next.velocity();
    const std::vector<double> e_new = cell_energy(next, u_new);

    // Global (energy-inequality) bookkeeping at the new time level.
    double diss = 0.0;
    std::vector<double> face_diss(n + 1);
    for (std::size_t f = 0; f <= n; ++f) {
      face_diss[f] = rec.stress[f] * rec.stress[f] / nu * rec.face_weight[f];
      diss += face_diss[f];
    }
    double bdry = 0.0;
    double rhs = 0.0;
    double mass_flux = 0.0;
    if (!bc.periodic) {
      auto side = [&](double rho_trace, const BoundarySide& b, double un) {
        double v = law.potential(rho_trace) * std::max(un, 0.0);
        if (b.inflow) v += law.potential(b.rho_b) * std::min(un, 0.0);
        return v;
      };
      bdry = side(next.rho.front(), bc.left, -bc.left.u_b) + side(next.rho.back(), bc.right, bc.right.u_b);
      for (std::size_t i = 0; i < n; ++i) {
        const double x = grid.center(static_cast<int>(i));
        const double s_cell = 0.5 * (rec.stress[i] + rec.stress[i + 1]);
        const double r = next.rho[i];
        rhs += (-(r * u_new[i] * u_new[i] + law.pressure(r)) * slope + r * u_new[i] * bc.lift(grid, x) * slope +
                s_cell * slope) *
               dx;
      }
      mass_flux = rec.flux_rho[0] - rec.flux_rho[n];
    }
    cur.t = next.t;
    cur.energy = discrete_energy(next, grid, bc, law);
    cur.dissipation += h * diss;
    cur.boundary += h * bdry;
    cur.rhs += h * rhs;
    cur.defect = cur.rhs - (cur.energy - e0 + cur.dissipation + cur.boundary);
    cur.mass = next.mass(grid);
    cur.mass_boundary_flux += h * mass_flux;
    res.ledger.entries.push_back(cur);

    // Cellwise energy balance with a consistent LLF energy flux.
    std::vector<double> g(n + 1);
    for (std::size_t f = 0; f <= n; ++f) {
      const double rl = ext.rho[f], rr = ext.rho[f + 1];
      const double ul = ext.u[f], ur = ext.u[f + 1];
      const double el = 0.5 * rl * ul * ul + law.potential(rl);
      const double er = 0.5 * rr * ur * ur + law.potential(rr);
      const double gl = (el + law.pressure(rl)) * ul;
      const double gr = (er + law.pressure(rr)) * ur;
      double uf;
      if (bc.periodic) {
        uf = 0.5 * (u_new[(f + n - 1) % n] + u_new[f % n]);
      } else if (f == 0) {
        uf = bc.left.u_b;
      } else if (f == n) {
        uf = bc.right.u_b;
      } else {
        uf = 0.5 * (u_new[f - 1] + u_new[f]);
      }
      g[f] = 0.5 * (gl + gr) - 0.5 * rec.face_speed[f] * (er - el) - rec.stress[f] * uf;
    }
    for (std::size_t i = 0; i < n; ++i) {
      double d_left = face_diss[i];
      double d_right = face_diss[i + 1];
      if (bc.periodic) {
        if (i == 0) d_left = 0.5 * face_diss[0];
        if (i + 1 == n) d_right = 0.5 * face_diss[0];
        if (i > 0) d_left *= 0.5;
        if (i + 1 < n) d_right *= 0.5;
      } else {
        if (i > 0) d_left *= 0.5;
        if (i + 1 < n) d_right *= 0.5;
      }
      res.ledger.cell_residual[i] += -(e_new[i] - e_old[i]) * dx - h * (g[i + 1] - g[i]) - h * (d_left + d_right);
    }

    state = std::move(next);
    ++steps;
    if (steps % options.record_every == 0 || state.t >= t_end) res.trajectory.frames.push_back(state);
  }
  if (res.trajectory.frames.back().t != state.t) res.trajectory.frames.push_back(state);
  return res;
}

DefectSeries energy_inequality_residual(const EnergyLedger& ledger) {
  DefectSeries out;
  for (const auto& e : ledger.entries) {
    out.t.push_back(e.t);
    out.defect.push_back(e.defect);
    out.min_defect = std::min(out.min_defect, e.defect);
  }
  out.constant = std::max(0.0, -out.min_defect) / (ledger.dx + ledger.dt);
  return out;
}

// ---------------------------------------------------------------------------
// Weak-form residuals

namespace {

struct PhiSamples {
  std::vector<double> cell;  // phi at centers
  std::vector<double> grad;  // face difference / dx
  double left;
  double right;
};

PhiSamples sample_phi(const TestFunction& phi, const Grid1D& grid, double t) {
  const auto n = static_cast<std::size_t>(grid.n_cells);
  PhiSamples s{std::vector<double>(n), std::vector<double>(n), phi(t, grid.x_min), phi(t, grid.x_max)};
  double prev = s.left;
  for (std::size_t i = 0; i < n; ++i) {
    const double next = phi(t, grid.face(static_cast<int>(i) + 1));
    s.cell[i] = phi(t, grid.center(static_cast<int>(i)));
    s.grad[i] = (next - prev) / grid.dx();
    prev = next;
  }
  return s;
}

}  // namespace

double weak_form_residual_continuity(const Trajectory& traj, const BoundaryData& bc, const TestFunction& phi) {
  const auto& frames = traj.frames;
  if (frames.empty()) throw DomainError("empty trajectory");
  const Grid1D& grid = traj.grid;
  const double dx = grid.dx();
  const std::size_t n = static_cast<std::size_t>(grid.n_cells);

  auto flux_term = [&](const FluidState1D& s, const PhiSamples& p) {
    double q = 0.0;
    for (std::size_t i = 0; i < n; ++i) q += s.mom[i] * p.grad[i];
    return q * dx;
  };
  auto boundary_term = [&](const FluidState1D& s, const PhiSamples& p) {
    const auto [l, r] = boundary_mass_terms(s, bc);
    return p.left * l + p.right * r;
  };

  PhiSamples prev = sample_phi(phi, grid, frames.front().t);
  double lhs_time = 0.0;
  for (std::size_t i = 0; i < n; ++i) lhs_time -= frames.front().rho[i] * prev.cell[i] * dx;
  double integral = 0.0;
  double boundary = 0.0;
  for (std::size_t k = 1; k < frames.size(); ++k) {
    const FluidState1D& a = frames[k - 1];
    const FluidState1D& b = frames[k];
    const PhiSamples cur = sample_phi(phi, grid, b.t);
    const double h = b.t - a.t;
    for (std::size_t i = 0; i < n; ++i) integral += b.rho[i] * (cur.cell[i] - prev.cell[i]) * dx;
    integral += h * 0.5 * (flux_term(a, prev) + flux_term(b, cur));
    boundary += h * 0.5 * (boundary_term(a, prev) + boundary_term(b, cur));
    prev = cur;
  }
  for (std::size_t i = 0; i < n; ++i) lhs_time += frames.back().rho[i] * prev.cell[i] * dx;
  return lhs_time + boundary - integral;
}

double weak_form_residual_momentum(const Trajectory& traj, const BoundaryData& bc, const PressureLaw& law, double nu,
                                   const TestFunction& phi, const std::vector<double>& reynolds) {
  const auto& frames = traj.frames;
  if (frames.empty()) throw DomainError("empty trajectory");
  const Grid1D& grid = traj.grid;
  const double dx = grid.dx();
  const std::size_t n = static_cast<std::size_t>(grid.n_cells);
  if (!reynolds.empty() && reynolds.size() != n) throw DimensionMismatch("Reynolds defect does not match grid");

  auto flux_term = [&](const FluidState1D& s, const PhiSamples& p) {
    if (!bc.periodic && (std::abs(p.left) > 1e-12 || std::abs(p.right) > 1e-12)) {
      throw DomainError("momentum test function must vanish on the boundary");
    }
    const std::vector<double> u = s.velocity();
    double q = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double stress = cell_stress(u, i, bc, nu, dx);
      const double defect = reynolds.empty() ? 0.0 : reynolds[i];
      q += (s.mom[i] * u[i] + law.pressure(s.rho[i]) - stress + defect) * p.grad[i];
    }
    return q * dx;
  };

  PhiSamples prev = sample_phi(phi, grid, frames.front().t);
  double lhs_time = 0.0;
  for (std::size_t i = 0; i < n; ++i) lhs_time -= frames.front().mom[i] * prev.cell[i] * dx;
  double integral = 0.0;
  double prev_flux = flux_term(frames.front(), prev);
  for (std::size_t k = 1; k < frames.size(); ++k) {
    const FluidState1D& a = frames[k - 1];
    const FluidState1D& b = frames[k];
    const PhiSamples cur = sample_phi(phi, grid, b.t);
    const double h = b.t - a.t;
    for (std::size_t i = 0; i < n; ++i) integral += b.mom[i] * (cur.cell[i] - prev.cell[i]) * dx;
    const double cur_flux = flux_term(b, cur);
    integral += h * 0.5 * (prev_flux + cur_flux);
    prev_flux = cur_flux;
    prev = cur;
  }
  for (std::size_t i = 0; i < n; ++i) lhs_time += frames.back().mom[i] * prev.cell[i] * dx;
  return lhs_time - integral;
}

std::vector<double> transport_run(std::vector<double> rho, const Grid1D& grid,
                                  const std::function<double(double, double)>& velocity, double t_end, double dt,
                                  Exec exec) {
  const std::size_t n = rho.size();
  if (n != static_cast<std::size_t>(grid.n_cells)) throw DimensionMismatch("density does not match grid");
  const double dx = grid.dx();
  std::vector<double> ext(n + 2), v(n + 1), flux(n + 1), next(n);
  double t = 0.0;
  while (t < t_end - 1e-12 * std::max(1.0, t_end)) {
    const double h = std::min(dt, t_end - t);
    double vmax = 0.0;
    for (std::size_t f = 0; f <= n; ++f) {
      v[f] = velocity(t, grid.face(static_cast<int>(f)));
      vmax = std::max(vmax, std::abs(v[f]));
    }
    if (h * vmax > dx * (1.0 + 1e-9)) {
      std::ostringstream os;
      os << "CFL violation in transport: dt = " << h << " with limiting velocity " << vmax;
      throw CflViolation(os.str(), vmax, dx / vmax);
    }
    std::copy(rho.begin(), rho.end(), ext.begin() + 1);
    ext.front() = rho.front();
    ext.back() = rho.back();
    kernels::upwind_fluxes(ext, v, flux, exec);
    kernels::conservative_update(rho, flux, h / dx, next, exec);
    rho.swap(next);
    t += h;
  }
  return rho;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "t,x_center,rho,u\n";
  os << std::setprecision(17);
  for (const auto& frame : traj.frames) {
    const std::vector<double> u = frame.velocity();
    for (std::size_t i = 0; i < frame.size(); ++i) {
      os << frame.t << ',' << traj.grid.center(static_cast<int>(i)) << ',' << frame.rho[i] << ',' << u[i] << '\n';
    }
  }
}

void write_ledger_csv(std::ostream& os, const EnergyLedger& ledger) {
  os << "t,energy,dissipation,boundary,rhs,defect,mass\n";
  os << std::setprecision(17);
  for (const auto& e : ledger.entries) {
    os << e.t << ',' << e.energy << ',' << e.dissipation << ',' << e.boundary << ',' << e.rhs << ',' << e.defect
       << ',' << e.mass << '\n';
  }
}

}  // namespace vacflow::solver1d
