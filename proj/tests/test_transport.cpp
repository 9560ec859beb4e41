#include <doctest.h>

#include <cmath>
#include <limits>

#include "vacflow/errors.hpp"
#include "vacflow/transport.hpp"

using namespace vacflow;
using namespace vacflow::transport;
using vacflow::constitutive::PressureLaw;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

VelocityFieldSpec zero_field() { return constant_field(0.0); }

std::vector<double> nodes(double lo, double hi, int n) {
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  return x;
}

}  // namespace

TEST_CASE("forward characteristics") {
  CHECK(flow_forward(CharacteristicFlow(constant_field(1.0), 1e-3), {0, 0, 0}, 2.0)[0] == doctest::Approx(2.0));
  CHECK(flow_forward(CharacteristicFlow(linear_field(1.0), 1e-3), {1, 0, 0}, std::log(2.0))[0] ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(flow_forward(CharacteristicFlow(zero_field(), 1e-2), {0.7, 0, 0}, 3.0)[0] == 0.7);
}

TEST_CASE("backward characteristics and entry times") {
  const auto b = flow_backward(CharacteristicFlow(constant_field(1.0), 1e-3), {2, 0, 0}, 2.0);
  CHECK(b.x0[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(b.entry_time == 0.0);
  auto half_line = constant_field(1.0);
  half_line.domain = Domain::interval(0.0, kInf);
  const auto e = flow_backward(CharacteristicFlow(half_line, 1e-3), {1, 0, 0}, 2.0);
  CHECK(e.x0[0] == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(e.entry_time == doctest::Approx(1.0).epsilon(1e-5));
  const auto z = flow_backward(CharacteristicFlow(zero_field(), 1e-2), {0.3, 0, 0}, 1.0);
  CHECK(z.x0[0] == 0.3);
  CHECK(z.entry_time == 0.0);
}

TEST_CASE("exiting characteristics are flagged") {
  auto f = constant_field(1.0);
  f.domain = Domain::interval(-kInf, 1.0);
  const auto fw = CharacteristicFlow(f, 1e-3).forward({0, 0, 0}, 3.0);
  CHECK(fw.exited);
  CHECK(fw.exit_time == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("grazing characteristics raise") {
  // X(s) = s - s^2 through (1, 0) touches x = 1/4 at s = 1/2 where u = 0.
  VelocityFieldSpec f;
  f.value = [](double t, const Point&) { return Point{1.0 - 2.0 * t, 0, 0}; };
  f.divergence = [](double, const Point&) { return 0.0; };
  f.domain = Domain::interval(-kInf, 0.25 - 1e-14);
  const CharacteristicFlow flow(f, 1e-4);
  CHECK_THROWS_AS(flow.backward({0.0, 0, 0}, 1.0), NumericalFailure);
}

TEST_CASE("density from characteristics closed forms") {
  const CharacteristicFlow lin(linear_field(1.0), 1e-3);
  CHECK(density_from_characteristics(gaussian_profile(), std::nullopt, lin, std::log(2.0), {0, 0, 0}) ==
        doctest::Approx(0.5).epsilon(1e-12));
  const auto rho0 = gaussian_profile(2.0, 0.5, 0.1);
  CHECK(density_from_characteristics(rho0, std::nullopt, CharacteristicFlow(zero_field(), 1e-2), 5.0,
                                     {0.4, 0, 0}) == rho0({0.4, 0, 0}));
  DensityProfile one;
  one.rho = [](const Point&) { return 1.0; };
  for (double c : {-0.5, 0.3, 1.0}) {
    const CharacteristicFlow flow(linear_field(c), 1e-3);
    CHECK(density_from_characteristics(one, std::nullopt, flow, 1.5, {0.2, 0, 0}) ==
          doctest::Approx(std::exp(-c * 1.5)).epsilon(1e-12));
  }
}

TEST_CASE("inflow boundary needs a boundary density") {
  auto f = constant_field(1.0);
  f.domain = Domain::interval(0.0, kInf);
  const CharacteristicFlow flow(f, 1e-3);
  CHECK_THROWS_AS(density_from_characteristics(gaussian_profile(), std::nullopt, flow, 2.0, {1, 0, 0}), DomainError);
  const BoundaryDensity rb = [](const Point&) { return 0.25; };
  CHECK(density_from_characteristics(gaussian_profile(), rb, flow, 2.0, {1, 0, 0}) == doctest::Approx(0.25));
  CHECK(density_from_characteristics(gaussian_profile(), rb, flow, 2.0, {3, 0, 0}) ==
        doctest::Approx(gaussian_profile()({1, 0, 0})).epsilon(1e-10));
}

TEST_CASE("density on points is identical serial and parallel") {
  const CharacteristicFlow flow(compact_bump_field(0.5, 1.0), 1e-3);
  const auto xs = nodes(-2.0, 2.0, 301);
  const auto a = density_on_points(gaussian_profile(), std::nullopt, flow, 0.7, xs, false);
  const auto b = density_on_points(gaussian_profile(), std::nullopt, flow, 0.7, xs, true);
  CHECK(a == b);
}

TEST_CASE("continuity residual") {
  const auto spec = linear_field(1.0);
  auto exact = [](double t, double x) { return std::exp(-t) * std::exp(-x * x * std::exp(-2.0 * t)); };
  CHECK(continuity_residual(exact, spec, nodes(-3, 3, 601), 1e-2, 0.5) <= 1e-3);
  auto constant = [](double, double) { return 2.0; };
  CHECK(continuity_residual(constant, constant_field(0.7), nodes(-1, 1, 21), 1e-2, 0.5) <= 1e-12);
  CHECK_THROWS(continuity_residual(constant, constant_field(0.7), {0.0, 1.0}, 1e-2, 0.5));
}

TEST_CASE("regularity propagation") {
  const PressureLaw law(1.0, 1.5);
  const auto xs = nodes(-10, 10, 2001);
  const auto still = regularity_propagation_check(gaussian_profile(), CharacteristicFlow(zero_field(), 1e-2), law, 6,
                                                  {0.5, 1.0}, xs);
  for (double n : still.norms) CHECK(n == doctest::Approx(still.initial_norm).epsilon(1e-10));

  const auto rep = regularity_propagation_check(gaussian_profile(), CharacteristicFlow(linear_field(1.0), 1e-3), law,
                                                6, {0.5, 1.0}, xs);
  for (std::size_t k = 0; k < rep.times.size(); ++k) {
    const double t = rep.times[k];
    // d_x rho^(1/2) for rho = e^-t exp(-x^2 e^-2t), integrated by Simpson on [-30, 30].
    const int m = 60000;
    const double h = 60.0 / m;
    double acc = 0.0;
    for (int i = 0; i <= m; ++i) {
      const double x = -30.0 + i * h;
      const double f = std::exp(-t / 2.0) * std::exp(-x * x * std::exp(-2.0 * t) / 2.0);
      const double d = -x * std::exp(-2.0 * t) * f;
      acc += (i == 0 || i == m ? 1.0 : (i % 2 ? 4.0 : 2.0)) * std::pow(std::abs(d), 6.0);
    }
    const double analytic = std::pow(acc * h / 3.0, 1.0 / 6.0);
    CHECK(rep.norms[k] == doctest::Approx(analytic).epsilon(1e-2));
  }

  const auto compact = regularity_propagation_check(compact_profile(law, 0.5), CharacteristicFlow(compact_bump_field(0.3, 1.0), 1e-3),
                                                    law, 6, {0.5, 1.0}, nodes(-2, 2, 801));
  CHECK(std::isfinite(compact.sup_norm));
  const double edge = flow_forward(CharacteristicFlow(compact_bump_field(0.3, 1.0), 1e-3), {0.5, 0, 0}, 1.0)[0];
  const CharacteristicFlow cf(compact_bump_field(0.3, 1.0), 1e-3);
  CHECK(density_from_characteristics(compact_profile(law, 0.5), std::nullopt, cf, 1.0, {edge + 1e-3, 0, 0}) == 0.0);
  CHECK(density_from_characteristics(compact_profile(law, 0.5), std::nullopt, cf, 1.0, {edge - 1e-2, 0, 0}) > 0.0);

  auto inflow = constant_field(1.0);
  inflow.domain = Domain::interval(0.0, kInf);
  CHECK_THROWS_AS(regularity_propagation_check(gaussian_profile(), CharacteristicFlow(inflow, 1e-3), law, 6, {1.0},
                                               nodes(0.1, 3, 50)),
                  Unsupported);
}

TEST_CASE("decay propagation") {
  const PressureLaw l15(1.0, 1.5), l2(1.0, 2.0);
  const CharacteristicFlow flow(compact_bump_field(0.5, 1.0, 2.0), 1e-3);
  const auto a = decay_propagation_check(polynomial_decay_profile(4.0, l15), flow, l15, 1.0, 10.0);
  CHECK(a.expected_exponent == doctest::Approx(6.0));
  CHECK(a.fitted_exponent == doctest::Approx(6.0).epsilon(0.1));
  const auto b = decay_propagation_check(polynomial_decay_profile(3.0, l2), flow, l2, 1.0, 10.0);
  CHECK(b.fitted_exponent == doctest::Approx(2.0).epsilon(0.1));
  const auto still = decay_propagation_check(polynomial_decay_profile(3.0, l15), CharacteristicFlow(zero_field(), 1e-2),
                                             l15, 1.0, 10.0);
  CHECK(still.fitted_exponent == doctest::Approx(still.initial_exponent).epsilon(1e-12));
  CHECK_THROWS(decay_propagation_check(polynomial_decay_profile(3.0, l15), flow, l15, 1.0, 10.0, 4));
  CHECK_THROWS(decay_propagation_check(polynomial_decay_profile(3.0, l15), flow, l15, 1.0, 0.5));
}

TEST_CASE("equilibrium profiles") {
  const PressureLaw law(0.5, 2.0);
  const auto p = equilibrium_profile([](const Point& x) { return 1.0 - x[0] * x[0]; }, law, 0.0);
  for (double x : {-1.5, -0.9, -0.3, 0.0, 0.4, 0.99, 2.0}) {
    CHECK(p({x, 0, 0}) == doctest::Approx(std::max(0.0, 1.0 - x * x)).epsilon(1e-12));
  }
  // grad P'(rho) = grad G inside the support
  const double h = 1e-5;
  for (double x : {-0.5, 0.2, 0.7}) {
    const double lhs = (law.potential_derivative(p({x + h, 0, 0})) - law.potential_derivative(p({x - h, 0, 0}))) / (2 * h);
    CHECK(lhs == doctest::Approx(-2.0 * x).epsilon(1e-6));
  }
  const auto flat = equilibrium_profile([](const Point&) { return 0.3; }, PressureLaw(1, 1.5), 0.2);
  CHECK(flat({-4, 0, 0}) == flat({7, 0, 0}));
  CHECK(flat({0, 0, 0}) > 0.0);
  const auto empty = equilibrium_profile([](const Point& x) { return 1.0 - x[0] * x[0]; }, law, -100.0);
  for (double x : {-1.0, 0.0, 0.5}) CHECK(empty({x, 0, 0}) == 0.0);
}

TEST_CASE("mass criterion") {
  CHECK(mass_criterion(2.6, 1.5));
  CHECK_FALSE(mass_criterion(4.0, 2.0));
  CHECK(mass_criterion(4.1, 2.0));
  CHECK(mass_criterion(2.1, 1.1));
  CHECK(mass_threshold(1.1) == 2.0);
  CHECK(mass_threshold(1.5) == 2.5);
  CHECK(mass_threshold(2.0) == 4.0);
}
