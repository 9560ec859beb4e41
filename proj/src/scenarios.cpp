#include "vacflow/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include "vacflow/defects.hpp"
#include "vacflow/errors.hpp"

namespace vacflow::scenarios {

using config::ExperimentConfig;
using constitutive::PressureLaw;
using solver1d::BoundaryData;
using solver1d::FluidState1D;
using solver1d::Grid1D;
using transport::DensityProfile;
using transport::Point;
using transport::VelocityFieldSpec;

namespace {

constexpr double kPi = std::numbers::pi;

DensityProfile shifted(DensityProfile p, double mid, double scale = 1.0) {
  DensityProfile out = p;
  out.rho = [inner = p.rho, mid, scale](const Point& x) { return inner({(x[0] - mid) / scale, x[1], x[2]}); };
  if (p.support_radius) out.support_radius = std::nullopt;
  return out;
}

VelocityFieldSpec shifted(VelocityFieldSpec f, double mid) {
  VelocityFieldSpec out = f;
  auto sh = [mid](const Point& x) { return Point{x[0] - mid, x[1], x[2]}; };
  out.value = [inner = f.value, sh](double t, const Point& x) { return inner(t, sh(x)); };
  if (f.gradient) out.gradient = [inner = f.gradient, sh](double t, const Point& x) { return inner(t, sh(x)); };
  out.divergence = [inner = f.divergence, sh](double t, const Point& x) { return inner(t, sh(x)); };
  out.support_radius = std::nullopt;
  return out;
}

double min_density(const DensityProfile& p, const Grid1D& g) {
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < g.n_cells; ++i) m = std::min(m, p({g.center(i), 0.0, 0.0}));
  return m;
}

}  // namespace

Scenario build_scenario(const ExperimentConfig& cfg, int n_cells) {
  const Grid1D grid(cfg.x_min, cfg.x_max, n_cells > 0 ? n_cells : cfg.n_cells);
  const PressureLaw law(cfg.a, cfg.gamma);
  const double lo = cfg.x_min;
  const double len = cfg.x_max - cfg.x_min;
  const double mid = 0.5 * (cfg.x_min + cfg.x_max);
  auto xi = [lo, len](double x) { return (x - lo) / len; };

  BoundaryData bc = BoundaryData::periodic_domain();
  DensityProfile rho0;
  std::function<double(double)> u0 = [](double) { return 0.0; };
  const std::string& name = cfg.scenario;

  if (name == "rest") {
    rho0.rho = [](const Point&) { return 1.0; };
  } else if (name == "viscous-relaxation" || name == "same-data") {
    rho0.rho = [xi](const Point& x) { return 1.0 + 0.2 * std::sin(2.0 * kPi * xi(x[0])); };
    u0 = [xi](double x) { return 0.3 * std::sin(2.0 * kPi * xi(x)); };
  } else if (name == "gaussian-pulse") {
    rho0 = shifted(transport::gaussian_profile(1.0, 0.1 * len, 0.0), mid);
    rho0.rho = [inner = rho0.rho](const Point& x) { return 0.2 + inner(x); };
  } else if (name == "equilibrium") {
    bc = BoundaryData::walls();
    const double r = 0.25 * len;
    auto potential = [r](const Point& x) { return -0.5 * (x[0] / r) * (x[0] / r); };
    rho0 = shifted(transport::equilibrium_profile(potential, law, 0.5), mid);
  } else if (name == "compact-support") {
    bc = BoundaryData::walls();
    rho0 = shifted(transport::compact_profile(law, 0.25 * len, 1.0), mid);
  } else if (name == "polynomial-decay") {
    bc = BoundaryData::walls();
    rho0 = shifted(transport::polynomial_decay_profile(cfg.alpha, law), mid, 0.05 * len);
  } else if (name == "inflow-channel") {
    bc = BoundaryData::channel(0.5, 1.0);
    rho0.rho = [](const Point&) { return 1.0; };
    u0 = [](double) { return 0.5; };
  } else {
    throw ConfigError("unknown scenario '" + name + "'");
  }

  const double p = cfg.perturbation;
  const FluidState1D initial = solver1d::make_state(
      grid, [&](double x) { return rho0({x, 0.0, 0.0}) * (1.0 + p * std::cos(2.0 * kPi * xi(x))); },
      [&](double x) { return u0(x) + p * std::sin(2.0 * kPi * xi(x)); });

  VelocityFieldSpec field = shifted(transport::compact_bump_field(0.25, 0.4 * len, std::max(1.0, 2.0 * cfg.t_end)), mid);
  const bool vacuum = min_density(rho0, grid) <= 0.0;
  return Scenario{name, grid, bc, law, cfg.nu, rho0, u0, initial, field, vacuum};
}

double choose_dt(const Scenario& s, const ExperimentConfig& cfg) {
  double dt = 0.0;
  if (cfg.dt) {
    dt = *cfg.dt;
  } else {
    // Invariant-region speed bound max(|u| + 2c/(gamma - 1)) covers expansion into vacuum.
    const std::vector<double> u = s.initial.velocity();
    double a = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      a = std::max(a, std::abs(u[i]) + 2.0 * s.law.sound_speed(s.initial.rho[i]) / (s.law.gamma() - 1.0));
    }
    for (const auto* side : {&s.bc.left, &s.bc.right}) {
      if (side->inflow) a = std::max(a, std::abs(side->u_b) + 2.0 * s.law.sound_speed(side->rho_b) / (s.law.gamma() - 1.0));
    }
    const double dx = s.grid.dx();
    dt = cfg.cfl * std::min(a > 0.0 ? 0.4 * dx / a : std::numeric_limits<double>::infinity(), 0.25 * dx * dx / s.nu);
  }
  if (cfg.t_end > 0.0) {
    const double steps = std::ceil(cfg.t_end / dt - 1e-9);
    dt = cfg.t_end / std::max(1.0, steps);
  }
  return dt;
}

relenergy::ReferencePair build_reference(const Scenario& s, const ExperimentConfig& cfg, double dt) {
  relenergy::ReferencePair ref;
  if (cfg.reference == config::ReferenceMode::fine_solver) {
    constexpr int factor = 4;
    ExperimentConfig fine_cfg = cfg;
    fine_cfg.perturbation = 0.0;
    const Scenario fine = build_scenario(fine_cfg, s.grid.n_cells * factor);
    const double stable = cfg.cfl * solver1d::stable_dt(fine.initial, fine.grid, fine.bc, fine.law, fine.nu);
    const int k = std::max(1, static_cast<int>(std::ceil(dt / stable - 1e-9)));
    solver1d::RunOptions opt;
    opt.record_every = k;
    auto res = solver1d::run(fine.initial, fine.grid, fine.bc, fine.law, fine.nu, cfg.t_end, dt / k, opt);
    ref = relenergy::fine_solver_reference(std::move(res.trajectory), factor, s.bc);
  } else {
    const double hx = std::min(s.grid.dx(), 1e-2);
    transport::CharacteristicFlow flow(s.field, std::min(1e-3, dt));
    const Grid1D check(s.grid.x_min, s.grid.x_max, std::max(8, static_cast<int>(std::round(s.grid.length() / hx))));
    ref = relenergy::characteristics_reference(s.rho0, flow, check, 1e-2);
  }
  if (s.touches_vacuum && s.law.gamma() < 2.0) ref = relenergy::epsilon_shift(ref, cfg.epsilons.back());
  return ref;
}

CertifyOutcome certify(const ExperimentConfig& cfg, int n_cells) {
  Scenario s = build_scenario(cfg, n_cells);
  const double dt = choose_dt(s, cfg);
  const relenergy::ReferencePair ref = build_reference(s, cfg, dt);
  FluidState1D initial = s.initial;
  if (cfg.reference == config::ReferenceMode::characteristics) {
    const auto snap = ref.sample(s.grid, 0.0);
    const double p = cfg.perturbation;
    for (std::size_t i = 0; i < initial.size(); ++i) {
      const double xi = (s.grid.center(static_cast<int>(i)) - cfg.x_min) / s.grid.length();
      const double rho = std::max(0.0, snap.cells[i].rho - ref.shift) * (1.0 + p * std::cos(2.0 * kPi * xi));
      initial.rho[i] = rho;
      initial.mom[i] = rho * (snap.cells[i].u + p * std::sin(2.0 * kPi * xi));
    }
  }
  const auto res = solver1d::run(initial, s.grid, s.bc, s.law, s.nu, cfg.t_end, dt);
  CertifyOutcome out;
  out.trace = relenergy::rei_terms(res.trajectory, ref, s.law, s.nu, s.bc);
  out.certificate = relenergy::gronwall_monitor(out.trace);
  return out;
}

namespace {

std::ofstream open_csv(const ExperimentConfig& cfg, const std::string& file) {
  std::filesystem::create_directories(cfg.output_dir);
  const auto path = std::filesystem::path(cfg.output_dir) / file;
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write to output_dir '" + cfg.output_dir + "'");
  return os;
}

std::vector<double> restrict_to(const std::vector<double>& fine, std::size_t n) {
  const std::size_t f = fine.size() / n;
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t s = 0; s < f; ++s) out[i] += fine[i * f + s];
    out[i] /= static_cast<double>(f);
  }
  return out;
}

int cmd_simulate(const ExperimentConfig& cfg, std::ostream& out) {
  const Scenario s = build_scenario(cfg);
  const double dt = choose_dt(s, cfg);
  const auto res = solver1d::run(s.initial, s.grid, s.bc, s.law, s.nu, cfg.t_end, dt);
  auto traj = open_csv(cfg, "trajectory.csv");
  solver1d::write_trajectory_csv(traj, res.trajectory);
  auto led = open_csv(cfg, "ledger.csv");
  solver1d::write_ledger_csv(led, res.ledger);
  auto def = open_csv(cfg, "defects.csv");
  defects::write_defects_csv(def, defects::estimate_numerical_defect(res.ledger));
  const auto series = solver1d::energy_inequality_residual(res.ledger);
  out << "SIMULATE " << s.name << " steps=" << res.ledger.entries.size() - 1 << " dt=" << dt
      << " min_defect=" << series.min_defect << '\n';
  return 0;
}

int cmd_characteristics(const ExperimentConfig& cfg, std::ostream& out) {
  const Scenario s = build_scenario(cfg);
  const double dt = choose_dt(s, cfg);
  transport::CharacteristicFlow flow(s.field, std::min(1e-3, dt));
  const std::vector<double> xs = s.grid.centers();
  const std::vector<double> by_char = transport::density_on_points(s.rho0, std::nullopt, flow, cfg.t_end, xs);
  std::vector<double> rho(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) rho[i] = s.rho0({xs[i], 0.0, 0.0});
  const auto field = s.field;
  const std::vector<double> by_solver = solver1d::transport_run(
      rho, s.grid, [field](double t, double x) { return field.value(t, {x, 0.0, 0.0})[0]; }, cfg.t_end, dt);
  auto density = [&](double t, double x) {
    return transport::density_from_characteristics(s.rho0, std::nullopt, flow, t, {x, 0.0, 0.0});
  };
  const double t_check = std::max(cfg.t_end, 2.0 * s.grid.dx());
  const double residual = transport::continuity_residual(density, s.field, xs, std::min(s.grid.dx(), 0.5 * t_check), 0.5 * t_check);
  double l1 = 0.0;
  auto os = open_csv(cfg, "characteristics.csv");
  os << "x,rho_characteristics,rho_transport\n" << std::setprecision(17);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    os << xs[i] << ',' << by_char[i] << ',' << by_solver[i] << '\n';
    l1 += std::abs(by_char[i] - by_solver[i]) * s.grid.dx();
  }
  out << "CHARACTERISTICS " << s.name << " continuity_residual=" << residual << " l1_transport_gap=" << l1 << '\n';
  return 0;
}

void write_terms_csv(std::ostream& os, const relenergy::RelativeEnergyTrace& tr) {
  os << "tau,E,dissipation,boundary,defect,kinetic,pressure,strong,continuity,reynolds,forcing,residual\n"
     << std::setprecision(17);
  for (std::size_t k = 0; k < tr.tau.size(); ++k) {
    os << tr.tau[k] << ',' << tr.energy[k] << ',' << tr.dissipation_block[k] << ',' << tr.boundary[k] << ','
       << tr.defect_mass[k] << ',' << tr.kinetic[k] << ',' << tr.pressure[k] << ',' << tr.strong[k] << ','
       << tr.continuity[k] << ',' << tr.reynolds[k] << ',' << tr.forcing[k] << ',' << tr.residual[k] << '\n';
  }
}

int cmd_rel_energy(const ExperimentConfig& cfg, bool summary, std::ostream& out) {
  const CertifyOutcome c = certify(cfg);
  auto cert = open_csv(cfg, "certificate.csv");
  relenergy::write_certificate_csv(cert, c.trace, c.certificate);
  if (!summary) {
    auto terms = open_csv(cfg, "rel_energy_terms.csv");
    write_terms_csv(terms, c.trace);
    out << "REL-ENERGY " << cfg.scenario << " mode=" << relenergy::to_string(c.certificate.mode)
        << " max_E=" << *std::max_element(c.trace.energy.begin(), c.trace.energy.end()) << '\n';
    return 0;
  }
  out << "CERTIFY " << cfg.scenario << ' ' << (c.certificate.pass ? "PASS" : "FAIL")
      << " margin=" << c.certificate.margin << '\n';
  return c.certificate.pass ? 0 : 1;
}

int cmd_sweep(const ExperimentConfig& cfg, std::ostream& out) {
  const int rungs = cfg.rungs;
  std::vector<std::vector<double>> finals;
  std::vector<double> dxs, dts, consts;
  for (int r = 0; r < rungs; ++r) {
    const Scenario s = build_scenario(cfg, cfg.n_cells << r);
    ExperimentConfig rc = cfg;
    if (cfg.dt) rc.dt = *cfg.dt / std::pow(2.0, r);
    const double dt = choose_dt(s, rc);
    const auto res = solver1d::run(s.initial, s.grid, s.bc, s.law, s.nu, cfg.t_end, dt);
    finals.push_back(res.trajectory.frames.back().rho);
    dxs.push_back(s.grid.dx());
    dts.push_back(dt);
    consts.push_back(solver1d::energy_inequality_residual(res.ledger).constant);
  }
  auto os = open_csv(cfg, "sweep.csv");
  os << "n_cells,dx,dt,l1_error,order,defect_constant\n" << std::setprecision(17);
  double prev_err = 0.0;
  for (int r = 0; r < rungs; ++r) {
    double err = std::numeric_limits<double>::quiet_NaN();
    if (r + 1 < rungs) {
      const auto fine = restrict_to(finals[static_cast<std::size_t>(r) + 1], finals[static_cast<std::size_t>(r)].size());
      err = 0.0;
      for (std::size_t i = 0; i < fine.size(); ++i) err += std::abs(fine[i] - finals[static_cast<std::size_t>(r)][i]) * dxs[static_cast<std::size_t>(r)];
    }
    double order = std::numeric_limits<double>::quiet_NaN();
    if (r > 0 && r + 1 < rungs && err > 0.0 && prev_err > 0.0) order = std::log2(prev_err / err);
    os << (cfg.n_cells << r) << ',' << dxs[static_cast<std::size_t>(r)] << ',' << dts[static_cast<std::size_t>(r)] << ','
       << err << ',' << order << ',' << consts[static_cast<std::size_t>(r)] << '\n';
    prev_err = err;
  }
  out << "SWEEP " << cfg.scenario << " rungs=" << rungs << '\n';
  return 0;
}

int cmd_predicates(const ExperimentConfig& cfg, std::ostream& out) {
  auto os = open_csv(cfg, "predicates.csv");
  os << "gamma,threshold,alpha,mass_finite\n";
  std::vector<double> gammas{cfg.gamma};
  for (double g : {1.1, 1.2, 1.3, 1.4, 1.5, 1.6, 1.7, 1.8, 1.9, 2.0}) {
    if (std::abs(g - cfg.gamma) > 1e-12) gammas.push_back(g);
  }
  for (double g : gammas) {
    os << g << ',' << transport::mass_threshold(g) << ',' << cfg.alpha << ','
       << (transport::mass_criterion(cfg.alpha, g) ? "true" : "false") << '\n';
  }
  const PressureLaw law(cfg.a, cfg.gamma);
  const auto rho0 = transport::polynomial_decay_profile(cfg.alpha, law);
  transport::CharacteristicFlow flow(transport::compact_bump_field(0.5, 1.0, std::max(1.0, cfg.t_end)), 1e-3);
  const auto rep = transport::decay_propagation_check(rho0, flow, law, std::max(cfg.t_end, 0.0), 10.0);
  auto dec = open_csv(cfg, "decay.csv");
  dec << "alpha,gamma,expected_exponent,initial_exponent,fitted_exponent,within_tolerance\n"
      << std::setprecision(17) << rep.alpha << ',' << cfg.gamma << ',' << rep.expected_exponent << ','
      << rep.initial_exponent << ',' << rep.fitted_exponent << ',' << (rep.within_tolerance ? "true" : "false")
      << '\n';
  out << "PREDICATES gamma=" << cfg.gamma << " threshold=" << transport::mass_threshold(cfg.gamma)
      << " decay_exponent=" << rep.fitted_exponent << '\n';
  return 0;
}

}  // namespace

int run_scenario(const std::string& command, const ExperimentConfig& cfg, std::uint64_t /*seed*/,
                 std::ostream& out, std::ostream& err) {
  try {
    if (command == "simulate") return cmd_simulate(cfg, out);
    if (command == "characteristics") return cmd_characteristics(cfg, out);
    if (command == "rel-energy") return cmd_rel_energy(cfg, false, out);
    if (command == "certify") return cmd_rel_energy(cfg, true, out);
    if (command == "sweep") return cmd_sweep(cfg, out);
    if (command == "predicates") return cmd_predicates(cfg, out);
    err << "error: unknown command '" << command
        << "' (simulate|characteristics|rel-energy|certify|sweep|predicates)\n";
    return 2;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace vacflow::scenarios
