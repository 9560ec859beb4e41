// One line per acceptance criterion: `ACCEPT <id> <PASS|FAIL> <name> <details> time=<s>`.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "vacflow/config.hpp"
#include "vacflow/constitutive.hpp"
#include "vacflow/defects.hpp"
#include "vacflow/errors.hpp"
#include "vacflow/relenergy.hpp"
#include "vacflow/scenarios.hpp"
#include "vacflow/solver1d.hpp"
#include "vacflow/transport.hpp"

using namespace vacflow;
using constitutive::PressureLaw;
using constitutive::SymMatrix;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass;
  std::string details;
};

int failures = 0;

void criterion(int id, const char* name, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o{false, ""};
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = secs < limit_s;
  const bool pass = o.pass && in_time;
  if (!pass) ++failures;
  std::printf("ACCEPT %2d %s %s %s%s time=%.2fs\n", id, pass ? "PASS" : "FAIL", name, o.details.c_str(),
              in_time ? "" : " (over time limit)", secs);
  std::fflush(stdout);
}

double fitted_order(const std::vector<double>& h, const std::vector<double>& err) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double x = std::log(h[i]), y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

SymMatrix random_sym(std::mt19937_64& rng, int dim, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  SymMatrix m(dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = i; j < dim; ++j) m.set(i, j, u(rng));
  }
  return m;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Outcome bregman_positivity() {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  int bad = 0;
  for (int k = 0; k < 10000; ++k) {
    const double gamma = 1.0 + 1e-3 + (1.0 - 1e-3) * ud(rng);
    const PressureLaw law(0.1 + 5.0 * ud(rng), k % 50 == 0 ? 2.0 : gamma);
    const double r = 1e-3 + 10.0 * ud(rng);
    const double rho = k % 10 == 0 ? r : (k % 10 == 1 ? 0.0 : 10.0 * ud(rng));
    const double b = constitutive::bregman_pressure(law, rho, r);
    if (rho == r ? b != 0.0 : !(b > 0.0)) ++bad;
  }
  return {bad == 0, "violations=" + std::to_string(bad) + "/10000"};
}

Outcome fenchel_young() {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  double min_res = 1e300, max_at_grad = 0.0, max_fd = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const int dim = 1 + k % 3;
    const double mu = 0.1 + ud(rng), lambda = 0.1 + ud(rng);
    const auto pot = k % 2 == 0 ? constitutive::DissipationPotential::newtonian(mu, lambda, dim)
                                : constitutive::DissipationPotential::power_law(mu, lambda, dim, 0.5, 1.5);
    const SymMatrix d = random_sym(rng, dim);
    const SymMatrix s = random_sym(rng, dim, 2.0);
    min_res = std::min(min_res, constitutive::fenchel_young_residual(pot, d, s));
    const SymMatrix g = constitutive::subgradient(pot, d);
    max_at_grad = std::max(max_at_grad, std::abs(constitutive::fenchel_young_residual(pot, d, g)));
    for (int i = 0; i < dim; ++i) {
      for (int j = i; j < dim; ++j) {
        const double h = 1e-5;
        SymMatrix dp = d, dm = d;
        dp.set(i, j, d(i, j) + h);
        dm.set(i, j, d(i, j) - h);
        double fd = (constitutive::dissipation_value(pot, dp) - constitutive::dissipation_value(pot, dm)) / (2 * h);
        if (i != j) fd *= 0.5;
        max_fd = std::max(max_fd, std::abs(fd - g(i, j)) / std::max(1.0, std::abs(g(i, j))));
      }
    }
  }
  const bool pass = min_res >= -1e-10 && max_at_grad <= 1e-8 && max_fd <= 1e-5;
  return {pass, fmt("min_residual=%.3e", min_res) + fmt(" max_residual_at_subgradient=%.3e", max_at_grad) +
                    fmt(" max_rel_fd_error=%.3e", max_fd)};
}

Outcome coercivity() {
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  double worst = 0.0;
  for (int dim = 1; dim <= 3; ++dim) {
    for (int k = 0; k < 100; ++k) {
      const auto pot = constitutive::DissipationPotential::newtonian(0.1 + ud(rng), 0.0, dim);
      const auto gap = constitutive::coercivity_gap(pot, random_sym(rng, dim), random_sym(rng, dim));
      worst = std::max(worst, std::abs(gap.gap - gap.lower_bound));
    }
  }
  return {worst <= 1e-10, fmt("max|gap - 2mu|Q - beta trQ I|^2|=%.3e (lambda=0)", worst)};
}

Outcome characteristics_oracle() {
  transport::CharacteristicFlow flow(transport::linear_field(1.0), 1e-3);
  const auto rho0 = transport::gaussian_profile(1.0, 1.0, 0.0);
  double worst = 0.0;
  for (double t : {0.25, 0.5, 1.0}) {
    for (int i = 0; i <= 120; ++i) {
      const double x = -3.0 + 0.05 * i;
      const double exact = rho0({x * std::exp(-t), 0, 0}) * std::exp(-t);
      const double got = transport::density_from_characteristics(rho0, std::nullopt, flow, t, {x, 0, 0});
      worst = std::max(worst, std::abs(got - exact));
    }
  }
  return {worst <= 1e-6, fmt("max_error=%.3e", worst)};
}

}  // namespace

namespace {

Outcome transport_cross_validation() {
  const auto field = transport::compact_bump_field(0.5, 0.8, 2.0);
  transport::CharacteristicFlow flow(field, 1e-3);
  const auto rho0 = transport::gaussian_profile(1.0, 0.3, 0.0);
  const double t_end = 0.5;
  std::vector<double> hs, errs;
  std::string detail;
  for (int n : {50, 100, 200, 400}) {
    const solver1d::Grid1D grid(-1.0, 1.0, n);
    std::vector<double> rho(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) rho[static_cast<std::size_t>(i)] = rho0({grid.center(i), 0, 0});
    const double dt = 0.4 * grid.dx() / 0.5;
    const auto by_solver = solver1d::transport_run(
        rho, grid, [&](double t, double x) { return field.value(t, {x, 0, 0})[0]; }, t_end, dt);
    const auto by_char = transport::density_on_points(rho0, std::nullopt, flow, t_end, grid.centers());
    double err = 0.0;
    for (int i = 0; i < n; ++i) {
      err += std::abs(by_solver[static_cast<std::size_t>(i)] - by_char[static_cast<std::size_t>(i)]) * grid.dx();
    }
    hs.push_back(grid.dx());
    errs.push_back(err);
    detail += fmt(" %.3e", err);
  }
  const double order = fitted_order(hs, errs);
  return {order >= 0.9, "l1_errors=[" + detail + " ]" + fmt(" order=%.3f", order)};
}

config::ExperimentConfig base_config(const std::string& scenario) {
  config::ExperimentConfig c;
  c.scenario = scenario;
  c.nu = 0.1;
  c.gamma = 1.4;
  c.t_end = 0.1;
  c.n_cells = 32;
  return c;
}

Outcome discrete_energy_inequality() {
  auto cfg = base_config("viscous-relaxation");
  cfg.t_end = 0.2;
  std::vector<double> cs;
  std::string detail;
  for (int n : {32, 64, 128, 256}) {
    const auto s = scenarios::build_scenario(cfg, n);
    const double dt = scenarios::choose_dt(s, cfg);
    const auto res = solver1d::run(s.initial, s.grid, s.bc, s.law, s.nu, cfg.t_end, dt);
    const auto series = solver1d::energy_inequality_residual(res.ledger);
    cs.push_back(series.constant);
    detail += fmt(" %.3e", series.constant) + fmt("(min %.2e", series.min_defect) +
              fmt(" final %.2e)", series.defect.back());
  }
  bool pass = true;
  for (std::size_t k = 1; k < cs.size(); ++k) {
    if (!(cs[k] == 0.0 || cs[k] * 1.8 <= cs[k - 1])) pass = false;
  }
  return {pass, "C per rung=[" + detail + " ]"};
}

Outcome weak_strong_same_data() {
  auto cfg = base_config("same-data");
  std::vector<double> sups;
  std::string detail;
  bool all_pass = true;
  for (int n : {32, 64, 128}) {
    const auto out = scenarios::certify(cfg, n);
    const double sup = *std::max_element(out.trace.energy.begin(), out.trace.energy.end());
    sups.push_back(sup);
    all_pass = all_pass && out.certificate.pass;
    detail += fmt(" %.3e", sup) + (out.certificate.pass ? "/pass" : "/FAIL");
  }
  bool monotone = true;
  for (std::size_t k = 1; k < sups.size(); ++k) {
    if (sups[k] > 1.2 * sups[k - 1]) monotone = false;
  }
  return {monotone && all_pass, "sup_E per rung=[" + detail + " ]"};
}

Outcome gronwall_stability() {
  bool pass = true;
  std::string detail;
  for (double p : {0.01, 0.05}) {
    auto cfg = base_config("viscous-relaxation");
    cfg.perturbation = p;
    cfg.n_cells = 64;
    const auto out = scenarios::certify(cfg);
    bool every = true;
    for (std::size_t k = 0; k < out.trace.tau.size(); ++k) {
      if (out.trace.energy[k] > out.certificate.bound[k] * (1.0 + 1e-12)) every = false;
    }
    pass = pass && every && out.certificate.pass;
    detail += fmt(" e0=%.3e", out.trace.energy.front()) + fmt(" margin=%.3e", out.certificate.margin) +
              (every ? "" : " violated");
  }
  return {pass, detail};
}

}  // namespace

namespace {

Outcome epsilon_scaling() {
  bool pass = true;
  std::string detail;
  for (double gamma : {1.2, 1.5, 1.8}) {
    const PressureLaw law(1.0, gamma);
    const solver1d::Grid1D grid(-1.0, 1.0, 64);
    const auto bc = solver1d::BoundaryData::periodic_domain();
    const auto initial = solver1d::make_state(
        grid, [](double x) { return 0.5 + 0.25 * std::cos(kPi * x); }, [](double x) { return 0.1 * std::sin(kPi * x); });
    const double t_end = 0.1;
    const double dt = t_end / std::ceil(t_end / (0.9 * solver1d::stable_dt(initial, grid, bc, law, 0.1)));
    const auto weak = solver1d::run(initial, grid, bc, law, 0.1, t_end, dt).trajectory;
    transport::CharacteristicFlow flow(transport::compact_bump_field(0.2, 0.8, 1.0), 1e-3);
    const auto ref = relenergy::characteristics_reference(transport::compact_profile(law, 0.4, 1.0), flow,
                                                          solver1d::Grid1D(-1.0, 1.0, 200), 1e-2);
    const auto sc = relenergy::epsilon_vanishing_terms(weak, ref, law, {1e-4, 1e-5, 1e-6, 1e-7});
    const bool ok = sc.density_slope_ok;
    pass = pass && ok;
    detail += fmt(" gamma=%.1f:", gamma) + fmt("slope=%.4f", sc.density_slope.value_or(NAN)) +
              fmt("/target=%.1f", gamma - 1.0);
  }
  return {pass, detail};
}

Outcome decay_propagation() {
  bool pass = true;
  std::string detail;
  const std::pair<double, double> cases[] = {{3.0, 1.5}, {4.0, 1.5}, {3.0, 2.0}};
  for (const auto& [alpha, gamma] : cases) {
    const PressureLaw law(1.0, gamma);
    transport::CharacteristicFlow flow(transport::compact_bump_field(0.5, 1.0, 2.0), 1e-3);
    const auto rep = transport::decay_propagation_check(transport::polynomial_decay_profile(alpha, law), flow, law,
                                                        1.0, 10.0);
    pass = pass && rep.within_tolerance;
    detail += fmt(" (%.0f,", alpha) + fmt("%.1f):", gamma) + fmt("fit=%.4f", rep.fitted_exponent) +
              fmt("/expected=%.4f", rep.expected_exponent);
  }
  return {pass, detail};
}

Outcome mass_table() {
  const double gammas[] = {1.1, 1.5, 2.0};
  const double expected[] = {2.0, 2.5, 4.0};
  bool pass = true;
  std::string detail;
  for (int i = 0; i < 3; ++i) {
    const double th = transport::mass_threshold(gammas[i]);
    pass = pass && th == expected[i];
    pass = pass && transport::mass_criterion(expected[i] + 1e-9, gammas[i]) &&
           !transport::mass_criterion(expected[i], gammas[i]);
    detail += fmt(" %.1f->", gammas[i]) + fmt("%g", th);
  }
  return {pass, detail};
}

defects::ReynoldsDefectField reynolds2(std::initializer_list<std::array<double, 3>> entries) {
  defects::ReynoldsDefectField r;
  r.dim = 2;
  for (const auto& e : entries) {
    SymMatrix m(2);
    m.set(0, 0, e[0]);
    m.set(1, 1, e[1]);
    m.set(0, 1, e[2]);
    r.values.push_back(m);
  }
  return r;
}

Outcome defect_compatibility() {
  struct PsdCase {
    defects::ReynoldsDefectField r;
    bool expect;
  };
  const std::vector<PsdCase> psd_cases{
      {reynolds2({{1, 1, 0}, {2, 0, 0}}), true},
      {reynolds2({{0, 0, 0}}), true},
      {reynolds2({{1, -1e-13, 0}}), true},
      {reynolds2({{1, -1e-6, 0}}), false},
      {reynolds2({{1, 1, 2}}), false},
      {reynolds2({{1, 1, 1}}), true},
  };
  int mismatches = 0;
  for (const auto& c : psd_cases) {
    if (defects::psd_check(c.r).ok != c.expect) ++mismatches;
  }
  struct CompatCase {
    std::vector<double> e;
    defects::ReynoldsDefectField r;
    double lo, hi;
    bool expect;
  };
  const std::vector<CompatCase> compat_cases{
      {{1, 2}, reynolds2({{0.5, 0.5, 0}, {1, 1, 0}}), 1, 1, true},
      {{1, 2}, reynolds2({{0.5, 0.5, 0}, {1.5, 1.5, 0}}), 1, 1, false},
      {{1, 2}, reynolds2({{0.5, 0.5, 0}, {1.5, 1.5, 0}}), 1, 1.5, true},
      {{0}, reynolds2({{0, 0, 0}}), 1, 2, true},
      {{0}, reynolds2({{0.1, 0, 0}}), 1, 2, false},
      {{1}, reynolds2({{0.2, 0.2, 5}}), 0.5, 2, false},
  };
  for (const auto& c : compat_cases) {
    if (defects::compatibility_check({c.e}, c.r, c.lo, c.hi).ok != c.expect) ++mismatches;
  }
  double min_e = 0.0, max_e = 0.0;
  for (const auto& name : config::scenario_names()) {
    auto cfg = base_config(name);
    cfg.t_end = 0.05;
    const auto s = scenarios::build_scenario(cfg, 64);
    const auto res = solver1d::run(s.initial, s.grid, s.bc, s.law, s.nu, cfg.t_end, scenarios::choose_dt(s, cfg));
    for (double v : defects::estimate_numerical_defect(res.ledger).energy.values) {
      min_e = std::min(min_e, v);
      max_e = std::max(max_e, v);
    }
  }
  return {mismatches == 0 && min_e >= 0.0,
          "truth-table mismatches=" + std::to_string(mismatches) + fmt(" min E_h over scenarios=%.3e", min_e) +
              fmt(" max=%.3e", max_e)};
}

}  // namespace

int main() {
  criterion(1, "bregman-positivity", 1.0, bregman_positivity);
  criterion(2, "fenchel-young-subgradient", 5.0, fenchel_young);
  criterion(3, "coercivity-gap", 1.0, coercivity);
  criterion(4, "characteristics-oracle", 5.0, characteristics_oracle);
  criterion(5, "transport-cross-validation", 60.0, transport_cross_validation);
  criterion(6, "discrete-energy-inequality", 60.0, discrete_energy_inequality);
  criterion(7, "weak-strong-same-data", 120.0, weak_strong_same_data);
  criterion(8, "gronwall-stability", 60.0, gronwall_stability);
  criterion(9, "epsilon-shift-scaling", 30.0, epsilon_scaling);
  criterion(10, "decay-propagation", 60.0, decay_propagation);
  criterion(11, "mass-criterion-table", 1.0, mass_table);
  criterion(12, "defect-compatibility", 10.0, defect_compatibility);
  std::printf("ACCEPTANCE %s (%d failed)\n", failures == 0 ? "PASS" : "FAIL", failures);
  return failures == 0 ? 0 : 1;
}
