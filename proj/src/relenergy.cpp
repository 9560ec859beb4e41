#include "vacflow/relenergy.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <iomanip>
#include <limits>
#include <memory>
#include <ostream>
#include <sstream>

#include "vacflow/errors.hpp"

namespace vacflow::relenergy {

using constitutive::PressureLaw;

namespace {

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

std::optional<double> log_slope(const std::vector<double>& eps, const std::vector<double>& values) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(values[i] > 1e-300) || !std::isfinite(values[i])) return std::nullopt;
    lx.push_back(std::log(eps[i]));
    ly.push_back(std::log(values[i]));
  }
  return fit_slope(lx, ly);
}

double lq_norm(const std::vector<double>& f, double q, double dx) {
  double s = 0.0;
  for (double v : f) s += std::pow(std::abs(v), q);
  return std::pow(s * dx, 1.0 / q);
}

// Weak-solution velocity gradient at cell centers (centered, with boundary ghosts).
std::vector<double> cell_gradient(const std::vector<double>& u, const BoundaryData& bc, double dx) {
  const std::size_t n = u.size();
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    double ul, ur;
    if (bc.periodic) {
      ul = u[(i + n - 1) % n];
      ur = u[(i + 1) % n];
    } else {
      ul = i == 0 ? 2.0 * bc.left.u_b - u[0] : u[i - 1];
      ur = i + 1 == n ? 2.0 * bc.right.u_b - u[n - 1] : u[i + 1];
    }
    g[i] = (ur - ul) / (2.0 * dx);
  }
  return g;
}

double checked_bregman(const PressureLaw& law, double rho, double r) {
  try {
    return constitutive::bregman_pressure(law, rho, r);
  } catch (const DomainError&) {
    throw DomainError("reference density vanishes with gamma < 2; apply epsilon_shift to the reference first");
  }
}

std::vector<ReferenceSnapshot> sample_frames(const Trajectory& traj, const ReferencePair& ref) {
  std::vector<ReferenceSnapshot> out;
  out.reserve(traj.frames.size());
  for (const auto& f : traj.frames) out.push_back(ref.sample(traj.grid, f.t));
  return out;
}

}  // namespace

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::characteristics_built:
      return "characteristics";
    case Provenance::fine_solver_run:
      return "fine-solver";
    case Provenance::analytic:
      return "analytic";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Reference builders

ReferencePair analytic_reference(AnalyticFields fields) {
  ReferencePair ref;
  ref.provenance = Provenance::analytic;
  ref.regularity = RegularityInfo{0.0, 0.0};
  auto shared = std::make_shared<AnalyticFields>(std::move(fields));
  ref.sample = [shared](const Grid1D& grid, double t) {
    ReferenceSnapshot s;
    s.t = t;
    s.cells.resize(static_cast<std::size_t>(grid.n_cells));
    for (int i = 0; i < grid.n_cells; ++i) {
      const double x = grid.center(i);
      auto& c = s.cells[static_cast<std::size_t>(i)];
      c.rho = shared->rho(t, x);
      c.u = shared->u(t, x);
      c.u_t = shared->u_t ? shared->u_t(t, x) : 0.0;
      c.u_x = shared->u_x ? shared->u_x(t, x) : 0.0;
      c.rho_t = shared->rho_t ? shared->rho_t(t, x) : 0.0;
      c.rho_x = shared->rho_x ? shared->rho_x(t, x) : 0.0;
    }
    return s;
  };
  return ref;
}

ReferencePair characteristics_reference(transport::DensityProfile rho0, transport::CharacteristicFlow flow,
                                        const Grid1D& check_grid, double tolerance) {
  auto rho0_ptr = std::make_shared<transport::DensityProfile>(std::move(rho0));
  auto flow_ptr = std::make_shared<transport::CharacteristicFlow>(std::move(flow));
  auto density = [rho0_ptr, flow_ptr](double t, double x) {
    return transport::density_from_characteristics(*rho0_ptr, std::nullopt, *flow_ptr, t, {x, 0.0, 0.0});
  };

  ReferencePair ref;
  ref.provenance = Provenance::characteristics_built;
  ref.sample = [flow_ptr, density](const Grid1D& grid, double t) {
    const auto& spec = flow_ptr->spec();
    const double horizon = spec.horizon;
    const double ht = 1e-4;
    ReferenceSnapshot s;
    s.t = t;
    const auto n = static_cast<std::size_t>(grid.n_cells);
    s.cells.resize(n);
    std::exception_ptr error;
#pragma omp parallel for schedule(static)
    for (long i = 0; i < static_cast<long>(n); ++i) {
      try {
        const double x = grid.center(static_cast<int>(i));
        const double hx = 1e-4 * std::max(1.0, std::abs(x));
        auto& c = s.cells[static_cast<std::size_t>(i)];
        c.rho = density(t, x);
        c.rho_x = (density(t, x + hx) - density(t, x - hx)) / (2.0 * hx);
        const transport::Point p{x, 0.0, 0.0};
        c.u = spec.value(t, p)[0];
        c.u_x = spec.gradient ? spec.gradient(t, p)[0][0] : spec.divergence(t, p);
        if (t - ht < 0.0) {
          c.rho_t = (-3.0 * c.rho + 4.0 * density(t + ht, x) - density(t + 2.0 * ht, x)) / (2.0 * ht);
          c.u_t = (-3.0 * c.u + 4.0 * spec.value(t + ht, p)[0] - spec.value(t + 2.0 * ht, p)[0]) / (2.0 * ht);
        } else if (t + ht > horizon) {
          c.rho_t = (3.0 * c.rho - 4.0 * density(t - ht, x) + density(t - 2.0 * ht, x)) / (2.0 * ht);
          c.u_t = (3.0 * c.u - 4.0 * spec.value(t - ht, p)[0] + spec.value(t - 2.0 * ht, p)[0]) / (2.0 * ht);
        } else {
          c.rho_t = (density(t + ht, x) - density(t - ht, x)) / (2.0 * ht);
          c.u_t = (spec.value(t + ht, p)[0] - spec.value(t - ht, p)[0]) / (2.0 * ht);
        }
      } catch (...) {
#pragma omp critical(vacflow_reference_error)
        if (!error) error = std::current_exception();
      }
    }
    if (error) std::rethrow_exception(error);
    return s;
  };

  const double t_check = 0.5 * flow_ptr->spec().horizon;
  const double dt_check = std::min(check_grid.dx(), 0.5 * t_check);
  const double residual =
      transport::continuity_residual(density, flow_ptr->spec(), check_grid.centers(), dt_check, t_check);
  if (residual > tolerance) {
    std::ostringstream os;
    os << "characteristics-built reference violates continuity: residual " << residual << " > tolerance "
       << tolerance;
    throw NumericalFailure(os.str());
  }
  ref.regularity = RegularityInfo{residual, tolerance};
  return ref;
}

ReferencePair fine_solver_reference(Trajectory fine, int factor, const BoundaryData& bc) {
  if (factor < 1) throw DomainError("refinement factor must be >= 1");
  auto traj = std::make_shared<const Trajectory>(std::move(fine));
  ReferencePair ref;
  ref.provenance = Provenance::fine_solver_run;
  ref.regularity = RegularityInfo{0.0, std::numeric_limits<double>::infinity()};
  ref.sample = [traj, factor, bc](const Grid1D& grid, double t) {
    if (traj->grid.n_cells != factor * grid.n_cells || std::abs(traj->grid.x_min - grid.x_min) > 1e-12 ||
        std::abs(traj->grid.x_max - grid.x_max) > 1e-12) {
      throw DimensionMismatch("fine reference grid is not a refinement of the sampling grid");
    }
    const auto& frames = traj->frames;
    std::size_t k = frames.size();
    for (std::size_t j = 0; j < frames.size(); ++j) {
      if (std::abs(frames[j].t - t) <= 1e-9 * std::max(1.0, std::abs(t))) {
        k = j;
        break;
      }
    }
    if (k == frames.size()) {
      std::ostringstream os;
      os << "fine reference has no frame at t = " << t;
      throw NumericalFailure(os.str());
    }
    const auto n = static_cast<std::size_t>(grid.n_cells);
    auto average = [&](const FluidState1D& f) {
      std::vector<double> rho(n, 0.0), mom(n, 0.0), u(n, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        for (int s = 0; s < factor; ++s) {
          rho[i] += f.rho[i * static_cast<std::size_t>(factor) + static_cast<std::size_t>(s)];
          mom[i] += f.mom[i * static_cast<std::size_t>(factor) + static_cast<std::size_t>(s)];
        }
        rho[i] /= factor;
        mom[i] /= factor;
      }
      const double peak = *std::max_element(rho.begin(), rho.end());
      for (std::size_t i = 0; i < n; ++i) u[i] = rho[i] > solver1d::kVacuumFloor * peak ? mom[i] / rho[i] : 0.0;
      return std::pair{rho, u};
    };
    const auto [rho, u] = average(frames[k]);
    const std::size_t ka = k == 0 ? 0 : k - 1;
    const std::size_t kb = k + 1 < frames.size() ? k + 1 : k;
    const auto [rho_a, u_a] = average(frames[ka]);
    const auto [rho_b, u_b] = average(frames[kb]);
    const double span = frames[kb].t - frames[ka].t;
    const double dx = grid.dx();
    ReferenceSnapshot s;
    s.t = t;
    s.cells.resize(n);
    const std::vector<double> ux = cell_gradient(u, bc, dx);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t il = i == 0 ? 0 : i - 1;
      std::size_t ir = i + 1 < n ? i + 1 : i;
      double w = (static_cast<double>(ir) - static_cast<double>(il)) * dx;
      if (bc.periodic) {
        il = (i + n - 1) % n;
        ir = (i + 1) % n;
        w = 2.0 * dx;
      }
      auto& c = s.cells[i];
      c.rho = rho[i];
      c.u = u[i];
      c.rho_x = (rho[ir] - rho[il]) / w;
      c.u_x = ux[i];
      c.rho_t = span > 0.0 ? (rho_b[i] - rho_a[i]) / span : 0.0;
      c.u_t = span > 0.0 ? (u_b[i] - u_a[i]) / span : 0.0;
    }
    return s;
  };
  return ref;
}

ReferencePair epsilon_shift(const ReferencePair& ref, double epsilon) {
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  ReferencePair out = ref;
  out.shift = ref.shift + epsilon;
  out.sample = [inner = ref.sample, epsilon](const Grid1D& grid, double t) {
    ReferenceSnapshot s = inner(grid, t);
    for (auto& c : s.cells) c.rho += epsilon;
    return s;
  };
  return out;
}

// ---------------------------------------------------------------------------

double relative_energy(const FluidState1D& state, const Grid1D& grid, const ReferenceSnapshot& ref,
                       const PressureLaw& law) {
  if (ref.cells.size() != state.size()) throw DimensionMismatch("reference does not match state");
  const std::vector<double> u = state.velocity();
  double e = 0.0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    const double w = u[i] - ref.cells[i].u;
    e += 0.5 * state.rho[i] * w * w + checked_bregman(law, state.rho[i], ref.cells[i].rho);
  }
  return e * grid.dx();
}

double relative_energy(const FluidState1D& state, const Grid1D& grid, const ReferencePair& ref,
                       const PressureLaw& law, double t) {
  return relative_energy(state, grid, ref.sample(grid, t), law);
}

std::vector<double> strong_residual(const ReferenceSnapshot& ref, const PressureLaw& law) {
  std::vector<double> b(ref.cells.size());
  for (std::size_t i = 0; i < ref.cells.size(); ++i) {
    const auto& c = ref.cells[i];
    double grad_potential = 0.0;
    if (c.rho > 0.0 || law.gamma() == 2.0) {
      grad_potential = law.potential_second_derivative(c.rho) * c.rho_x;
    } else if (c.rho_x != 0.0) {
      throw DomainError("d_x P'(rho~) is singular at vacuum: reference is not differentiable there");
    }
    b[i] = c.u_t + c.u * c.u_x + grad_potential;
  }
  return b;
}

std::vector<double> strong_residual(const ReferencePair& ref, const PressureLaw& law, const Grid1D& grid,
                                    double t) {
  if (!ref.differentiable) throw DomainError("strong residual needs a differentiable reference");
  return strong_residual(ref.sample(grid, t), law);
}

// ---------------------------------------------------------------------------

EpsilonScaling epsilon_vanishing_terms(const Trajectory& weak, const ReferencePair& ref, const PressureLaw& law,
                                       const std::vector<double>& epsilons) {
  if (epsilons.size() < 3) throw DomainError("epsilon study needs at least 3 epsilons");
  for (double e : epsilons) {
    if (!(e > 0.0)) throw DomainError("epsilons must be positive");
  }
  if (weak.frames.empty()) throw DomainError("empty trajectory");
  const double dx = weak.grid.dx();
  const double g = law.gamma();
  const std::vector<ReferenceSnapshot> snaps = sample_frames(weak, ref);

  EpsilonScaling out;
  out.epsilons = epsilons;
  for (double eps : epsilons) {
    double initial = 0.0;
    for (double r0 : weak.frames.front().rho) {
      initial += law.potential(r0) + eps * law.potential_derivative(r0) - law.potential(r0 + eps);
    }
    out.initial_term.push_back(std::abs(initial * dx));

    auto div_at = [&](std::size_t k) {
      double s = 0.0;
      for (const auto& c : snaps[k].cells) s += law.pressure_derivative(c.rho + eps) * c.u_x;
      return eps * s * dx;
    };
    auto dens_at = [&](std::size_t k) {
      double s = 0.0;
      const auto& f = weak.frames[k];
      for (std::size_t i = 0; i < f.size(); ++i) {
        const double r = snaps[k].cells[i].rho + eps;
        const double v = eps * f.rho[i] * law.pressure_derivative(r) / r;
        s += std::pow(std::abs(v), g);
      }
      return s * dx;
    };
    double div_int = 0.0;
    double dens_int = 0.0;
    if (weak.frames.size() == 1) {
      dens_int = dens_at(0);
    }
    for (std::size_t k = 1; k < weak.frames.size(); ++k) {
      const double h = weak.frames[k].t - weak.frames[k - 1].t;
      div_int += 0.5 * h * (div_at(k - 1) + div_at(k));
      dens_int += 0.5 * h * (dens_at(k - 1) + dens_at(k));
    }
    out.divergence_term.push_back(std::abs(div_int));
    out.density_term.push_back(std::pow(dens_int, 1.0 / g));
  }
  out.initial_slope = log_slope(epsilons, out.initial_term);
  out.divergence_slope = log_slope(epsilons, out.divergence_term);
  out.density_slope = log_slope(epsilons, out.density_term);
  out.density_slope_ok = out.density_slope && std::abs(*out.density_slope - (g - 1.0)) <= 0.1 * (g - 1.0);
  return out;
}

// ---------------------------------------------------------------------------

RelativeEnergyTrace rei_terms(const Trajectory& weak, const ReferencePair& ref, const PressureLaw& law, double nu,
                              const BoundaryData& bc, const ReiOptions& options) {
  if (!ref.regularity) throw DomainError("reference carries no regularity report");
  if (weak.frames.empty()) throw DomainError("empty trajectory");
  const Grid1D& grid = weak.grid;
  const double dx = grid.dx();
  const auto n = static_cast<std::size_t>(grid.n_cells);
  const double q = 2.0 * law.gamma() / (law.gamma() - 1.0);
  if (options.defects) {
    if ((!options.defects->energy.empty() && options.defects->energy.size() != n) ||
        (!options.defects->reynolds.empty() && options.defects->reynolds.size() != n)) {
      throw DimensionMismatch("defect fields do not match the grid");
    }
  }
  double defect_total = 0.0;
  if (options.defects) {
    for (double v : options.defects->energy) defect_total += v;
  }

  struct Rates {
    double E, diss, bdry, kin, press, strong, cont, reyn, forcing, chi, b_norm;
  };
  auto rates_at = [&](const FluidState1D& f, const ReferenceSnapshot& s) {
    for (const auto& c : s.cells) {
      if (!(c.rho > 0.0)) {
        throw DomainError("reference density must be strictly positive; apply epsilon_shift to the reference first");
      }
    }
    const std::vector<double> u = f.velocity();
    const std::vector<double> ux = cell_gradient(u, bc, dx);
    const std::vector<double> b = strong_residual(s, law);
    Rates r{};
    r.E = relative_energy(f, grid, s, law);
    double ux_max = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& c = s.cells[i];
      const double rho = f.rho[i];
      const double stress = nu * ux[i];
      r.diss += (nu * ux[i] * ux[i] - stress * c.u_x) * dx;
      const double du = c.u - u[i];
      r.kin -= rho * du * du * c.u_x * dx;
      const double pb = law.pressure(rho) - law.pressure_derivative(c.rho) * (rho - c.rho) - law.pressure(c.rho);
      r.press -= pb * c.u_x * dx;
      r.strong += rho * du * b[i] * dx;
      const double cont_res = c.rho_t + c.rho_x * c.u + c.rho * c.u_x;
      r.cont += law.pressure_derivative(c.rho) * (1.0 - rho / c.rho) * cont_res * dx;
      if (options.defects && !options.defects->reynolds.empty()) r.reyn -= c.u_x * options.defects->reynolds[i] * dx;
      if (options.forcing) r.forcing -= rho * du * options.forcing(f.t, grid.center(static_cast<int>(i))) * dx;
      ux_max = std::max(ux_max, std::abs(c.u_x));
    }
    if (!bc.periodic) {
      auto side = [&](std::size_t cell, const solver1d::BoundarySide& side_bc, double un) {
        const double rt = s.cells[cell].rho;
        if (un >= 0.0) return checked_bregman(law, f.rho[cell], rt) * un;
        return side_bc.inflow ? checked_bregman(law, side_bc.rho_b, rt) * un : 0.0;
      };
      r.bdry = side(0, bc.left, -bc.left.u_b) + side(n - 1, bc.right, bc.right.u_b);
    }
    r.b_norm = lq_norm(b, q, dx);
    r.chi = options.c1 * ux_max + options.c2 * r.b_norm;
    return r;
  };

  RelativeEnergyTrace tr;
  tr.provenance = ref.provenance;
  Rates prev{};
  double cum_diss = 0, cum_bdry = 0, cum_kin = 0, cum_press = 0, cum_strong = 0, cum_cont = 0, cum_reyn = 0,
         cum_forcing = 0, cum_rate = 0, worst_violation = 0;
  double e0 = 0.0;
  double max_dt = 0.0;
  for (std::size_t k = 0; k < weak.frames.size(); ++k) {
    const FluidState1D& f = weak.frames[k];
    const Rates r = rates_at(f, ref.sample(grid, f.t));
    const double rate = std::abs(r.strong) + std::abs(r.cont) + std::abs(r.reyn) + std::abs(r.forcing) +
                        std::max(0.0, -r.diss);
    const double prev_rate = std::abs(prev.strong) + std::abs(prev.cont) + std::abs(prev.reyn) +
                             std::abs(prev.forcing) + std::max(0.0, -prev.diss);
    if (k == 0) {
      e0 = r.E;
    } else {
      const double h = f.t - weak.frames[k - 1].t;
      max_dt = std::max(max_dt, h);
      cum_diss += 0.5 * h * (prev.diss + r.diss);
      cum_bdry += 0.5 * h * (prev.bdry + r.bdry);
      cum_kin += 0.5 * h * (prev.kin + r.kin);
      cum_press += 0.5 * h * (prev.press + r.press);
      cum_strong += 0.5 * h * (prev.strong + r.strong);
      cum_cont += 0.5 * h * (prev.cont + r.cont);
      cum_reyn += 0.5 * h * (prev.reyn + r.reyn);
      cum_forcing += 0.5 * h * (prev.forcing + r.forcing);
      cum_rate += 0.5 * h * (prev_rate + rate);
    }
    const double defect_mass = k == 0 ? 0.0 : defect_total * dx;
    const double lhs = r.E - e0 + cum_diss + cum_bdry + defect_mass;
    const double rhs = cum_kin + cum_press + cum_strong + cum_cont + cum_reyn + cum_forcing;
    worst_violation = std::max(worst_violation, lhs - rhs);

    tr.tau.push_back(f.t);
    tr.energy.push_back(r.E);
    tr.lhs.push_back(lhs);
    tr.rhs.push_back(rhs);
    tr.chi.push_back(r.chi);
    tr.b_norm.push_back(r.b_norm);
    tr.residual.push_back(cum_rate + worst_violation);
    tr.dissipation_block.push_back(cum_diss);
    tr.boundary.push_back(cum_bdry);
    tr.defect_mass.push_back(defect_mass);
    tr.kinetic.push_back(cum_kin);
    tr.pressure.push_back(cum_press);
    tr.strong.push_back(cum_strong);
    tr.continuity.push_back(cum_cont);
    tr.reynolds.push_back(cum_reyn);
    tr.forcing.push_back(cum_forcing);
    prev = r;
  }
  tr.max_violation = worst_violation;
  tr.violation_constant = worst_violation / (dx + max_dt);
  return tr;
}

// ---------------------------------------------------------------------------

DensitySplit density_split_bound(const FluidState1D& state, const Grid1D& grid, const ReferenceSnapshot& ref,
                                 const PressureLaw& law, double rho_bar, double delta) {
  if (ref.cells.size() != state.size()) throw DimensionMismatch("reference does not match state");
  double ref_max = 0.0;
  for (const auto& c : ref.cells) ref_max = std::max(ref_max, c.rho);
  if (!(rho_bar >= 2.0 * ref_max)) {
    std::ostringstream os;
    os << "rho_bar = " << rho_bar << " must satisfy rho_bar >= 2 max rho~ = " << 2.0 * ref_max;
    throw DomainError(os.str());
  }
  if (!(delta > 0.0)) throw DomainError("delta must be positive");
  const double g = law.gamma();
  const double dx = grid.dx();
  const double q = 2.0 * g / (g - 1.0);
  const std::vector<double> u = state.velocity();
  const std::vector<double> b = strong_residual(ref, law);

  DensitySplit out{};
  out.rho_bar = rho_bar;
  out.q = q;
  out.delta = delta;
  out.convexity = constitutive::bregman_convexity_constant(law, rho_bar);
  out.b_norm = lq_norm(b, q, dx);

  double hi_a = 0.0, hi_b = 0.0, lo_l2 = 0.0, lo_u = 0.0, energy = 0.0, bregman_low = 0.0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    const double rho = state.rho[i];
    const double rt = ref.cells[i].rho;
    const double du = ref.cells[i].u - u[i];
    const double term = (rho - rt) * du * b[i] * dx;
    const double br = checked_bregman(law, rho, rt);
    energy += (0.5 * rho * du * du + br) * dx;
    lo_u += std::pow(std::abs(du), 2.0 * g) * dx;
    if (rho >= rho_bar) {
      out.high_part += term;
      hi_a += std::pow(rho - rt, g) * dx;
      hi_b += (rho - rt) * du * du * dx;
    } else {
      out.low_part += term;
      lo_l2 += (rho - rt) * (rho - rt) * dx;
      bregman_low += br * dx;
    }
  }
  const double u_norm = std::pow(lo_u, 1.0 / (2.0 * g));
  out.high_holder = std::pow(hi_a, 1.0 / (2.0 * g)) * std::sqrt(hi_b) * out.b_norm;
  out.high_energy_ratio = energy > 0.0 && out.b_norm > 0.0 ? out.high_holder / (out.b_norm * energy) : 0.0;
  out.low_holder = std::sqrt(lo_l2) * u_norm * out.b_norm;
  out.low_young = delta * u_norm * u_norm + lo_l2 * out.b_norm * out.b_norm / (4.0 * delta);
  out.low_l2_gap = lo_l2;
  out.low_l2_bound = bregman_low / out.convexity;
  const double slack = 1e-12;
  out.all_hold = out.high_part <= out.high_holder * (1.0 + slack) + slack &&
                 out.low_part <= out.low_holder * (1.0 + slack) + slack &&
                 out.low_holder <= out.low_young * (1.0 + slack) + slack &&
                 out.low_l2_gap <= out.low_l2_bound * (1.0 + slack) + slack && out.low_l2_bound <= energy / out.convexity * (1.0 + slack) + slack;
  return out;
}

// ---------------------------------------------------------------------------

Certificate gronwall_monitor(const RelativeEnergyTrace& trace) {
  const std::size_t m = trace.tau.size();
  if (trace.energy.size() != m || trace.chi.size() != m || trace.residual.size() != m) {
    throw DimensionMismatch("trace series have inconsistent lengths");
  }
  Certificate cert;
  cert.mode = trace.provenance;
  if (m == 0) return cert;
  for (double c : trace.chi) {
    if (!std::isfinite(c)) throw DomainError("chi series must be finite");
  }
  const double e0 = trace.energy.front();
  double chi_int = 0.0;
  double r_max = 0.0;
  cert.margin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < m; ++k) {
    if (k > 0) chi_int += 0.5 * (trace.tau[k] - trace.tau[k - 1]) * (trace.chi[k] + trace.chi[k - 1]);
    r_max = std::max(r_max, trace.residual[k]);
    const double bound = (e0 + r_max) * std::exp(chi_int);
    cert.bound.push_back(bound);
    const double gap = bound - trace.energy[k];
    if (k > 0 || m == 1) cert.margin = std::min(cert.margin, gap);
    const double slack = 1e-12 * std::max(bound, trace.energy[k]) + 1e-15;
    if (gap < -slack && !cert.first_violation) {
      cert.pass = false;
      cert.first_violation = trace.tau[k];
    }
  }
  return cert;
}

void write_certificate_csv(std::ostream& os, const RelativeEnergyTrace& trace, const Certificate& cert) {
  os << "tau,E,lhs,rhs,margin,chi\n";
  os << std::setprecision(17);
  for (std::size_t k = 0; k < trace.tau.size(); ++k) {
    const double margin = k < cert.bound.size() ? cert.bound[k] - trace.energy[k] : 0.0;
    os << trace.tau[k] << ',' << trace.energy[k] << ',' << trace.lhs[k] << ',' << trace.rhs[k] << ',' << margin
       << ',' << trace.chi[k] << '\n';
  }
}

KornPair korn_identity_1d(const std::vector<double>& u, const std::vector<double>& u_tilde, const Grid1D& grid,
                          double nu) {
  if (u.size() != u_tilde.size() || u.size() != static_cast<std::size_t>(grid.n_cells)) {
    throw DimensionMismatch("velocity fields do not match the grid");
  }
  const auto pot = constitutive::DissipationPotential::one_dimensional(nu);
  const double dx = grid.dx();
  KornPair out{0.0, 0.0};
  for (std::size_t f = 1; f < u.size(); ++f) {
    const double d = (u[f] - u[f - 1]) / dx;
    const double dt = (u_tilde[f] - u_tilde[f - 1]) / dx;
    constitutive::SymMatrix dm(1), dtm(1), qm(1), qneg(1);
    dm.set(0, 0, d);
    dtm.set(0, 0, dt);
    qm.set(0, 0, d - dt);
    qneg.set(0, 0, dt - d);
    const double gap = constitutive::coercivity_gap(pot, dtm, qm).gap + constitutive::coercivity_gap(pot, dm, qneg).gap;
    out.lhs += gap * dx;
    out.rhs += (d - dt) * (d - dt) * dx;
  }
  return out;
}

}  // namespace vacflow::relenergy
