#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "vacflow/defects.hpp"
#include "vacflow/errors.hpp"

using namespace vacflow;
using namespace vacflow::defects;
using constitutive::PressureLaw;

namespace {

ReynoldsDefectField field_of(int dim, std::vector<SymMatrix> m) {
  ReynoldsDefectField r;
  r.dim = dim;
  r.values = std::move(m);
  return r;
}

solver1d::EnergyLedger relaxation_ledger(int n) {
  const PressureLaw law(1.0, 1.4);
  const solver1d::Grid1D g(0.0, 1.0, n);
  const auto bc = solver1d::BoundaryData::periodic_domain();
  const auto s0 = solver1d::make_state(g, [](double x) { return 1.0 + 0.2 * std::sin(2 * std::numbers::pi * x); },
                                       [](double x) { return 0.3 * std::sin(2 * std::numbers::pi * x); });
  const double t_end = 0.1;
  const double dt = 0.5 * solver1d::stable_dt(s0, g, bc, law, 0.1);
  return solver1d::run(s0, g, bc, law, 0.1, t_end, t_end / std::ceil(t_end / dt)).ledger;
}

}  // namespace

TEST_CASE("psd check") {
  CHECK(psd_check(field_of(3, std::vector<SymMatrix>(5, SymMatrix(3)))).ok);

  const auto bad = psd_check(field_of(2, {SymMatrix::identity(2), SymMatrix::diagonal({1.0, -1.0})}));
  CHECK_FALSE(bad.ok);
  REQUIRE(bad.witness_cell);
  CHECK(*bad.witness_cell == 1);
  CHECK(bad.min_eigenvalue == doctest::Approx(-1.0));
  REQUIRE(bad.witness_vector.size() == 2);
  CHECK(std::abs(bad.witness_vector[0]) <= 1e-12);
  CHECK(std::abs(bad.witness_vector[1]) == doctest::Approx(1.0));

  std::mt19937_64 rng(77);
  std::normal_distribution<double> n01;
  for (int dim = 1; dim <= 3; ++dim) {
    std::vector<SymMatrix> ms;
    for (int k = 0; k < 200; ++k) {
      double a[3][3];
      for (auto& row : a)
        for (auto& v : row) v = n01(rng);
      SymMatrix m(dim);
      for (int i = 0; i < dim; ++i)
        for (int j = i; j < dim; ++j) {
          double s = 0.0;
          for (int l = 0; l < dim; ++l) s += a[l][i] * a[l][j];
          m.set(i, j, s);
        }
      ms.push_back(m);
    }
    CHECK(psd_check(field_of(dim, ms)).ok);
  }
}

TEST_CASE("compatibility check") {
  const EnergyDefectField zero{std::vector<double>(4, 0.0)};
  CHECK(compatibility_check(zero, field_of(1, std::vector<SymMatrix>(4, SymMatrix(1))), 1.0, 3.0).ok);

  const EnergyDefectField one{std::vector<double>(4, 1.0)};
  const auto two = field_of(2, std::vector<SymMatrix>(4, SymMatrix::identity(2)));
  CHECK(compatibility_check(one, two, 1.0, 3.0).ok);

  const auto four = field_of(2, std::vector<SymMatrix>(4, 2.0 * SymMatrix::identity(2)));
  const auto rep = compatibility_check(one, four, 1.0, 3.0);
  CHECK_FALSE(rep.ok);
  REQUIRE(rep.worst_ratio);
  CHECK(*rep.worst_ratio == doctest::Approx(4.0));

  CHECK_THROWS(compatibility_check(one, two, 0.0, 3.0));
  CHECK_THROWS(compatibility_check(one, two, 3.0, 1.0));
}

TEST_CASE("numerical defect at rest is zero") {
  const PressureLaw law(1.0, 1.4);
  const solver1d::Grid1D g(0.0, 1.0, 32);
  const auto s0 = solver1d::make_state(g, [](double) { return 1.0; }, [](double) { return 0.0; });
  const auto res = solver1d::run(s0, g, solver1d::BoundaryData::periodic_domain(), law, 0.1, 0.05, 0.001);
  const auto d = estimate_numerical_defect(res.ledger);
  for (double v : d.energy.values) CHECK(v == 0.0);
  for (double v : d.reynolds.scalar()) CHECK(v == 0.0);
}

TEST_CASE("numerical defect is nonnegative and shrinks under refinement") {
  double prev = std::numeric_limits<double>::infinity();
  for (int n : {32, 64, 128}) {
    const auto ledger = relaxation_ledger(n);
    const auto d = estimate_numerical_defect(ledger);
    for (double v : d.energy.values) CHECK(v >= 0.0);
    CHECK(psd_check(d.reynolds).ok);
    CHECK(compatibility_check(d.energy, d.reynolds, 1.0, 1.0).ok);
    const double total = d.energy.total(ledger.dx);
    MESSAGE("n=" << n << " total=" << total);
    CHECK(total < prev);
    prev = total;
  }
}

TEST_CASE("injected residual") {
  solver1d::EnergyLedger ledger;
  ledger.dx = 1.0;
  ledger.cell_residual = {0.0, 0.0, 0.25, -0.5, 0.0};
  for (int dim : {1, 2, 3}) {
    const auto d = estimate_numerical_defect(ledger, dim);
    CHECK(d.energy.values[2] == 0.25);
    CHECK(d.energy.values[3] == 0.0);
    CHECK(d.reynolds.values[2].trace() == doctest::Approx(0.25));
    CHECK(d.energy.total(1.0) == doctest::Approx(0.25));
  }
  std::ostringstream os;
  write_defects_csv(os, estimate_numerical_defect(ledger));
  CHECK(os.str().rfind("cell,energy,reynolds_trace\n", 0) == 0);
}
