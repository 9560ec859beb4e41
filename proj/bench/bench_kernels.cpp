#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "vacflow/kernels.hpp"
#include "vacflow/solver1d.hpp"
#include "vacflow/transport.hpp"

using namespace vacflow;

namespace {

kernels::Exec mode(const benchmark::State& st) {
  return st.range(1) == 0 ? kernels::Exec::serial : kernels::Exec::parallel;
}

void BM_LlfFluxes(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const constitutive::PressureLaw law(1.0, 1.4);
  std::vector<double> rho(n + 2), u(n + 2), fr(n + 1), fm(n + 1), fs(n + 1);
  for (std::size_t i = 0; i < n + 2; ++i) {
    rho[i] = 1.0 + 0.5 * std::sin(0.01 * static_cast<double>(i));
    u[i] = 0.3 * std::cos(0.01 * static_cast<double>(i));
  }
  for (auto _ : st) {
    kernels::llf_fluxes(rho, u, law, fr, fm, fs, mode(st));
    benchmark::DoNotOptimize(fr.data());
  }
}

void BM_Step(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const solver1d::Grid1D grid(0.0, 1.0, n);
  const constitutive::PressureLaw law(1.0, 1.4);
  const auto bc = solver1d::BoundaryData::periodic_domain();
  const auto s0 = solver1d::make_state(
      grid, [](double x) { return 1.0 + 0.2 * std::sin(2.0 * std::numbers::pi * x); },
      [](double x) { return 0.3 * std::sin(2.0 * std::numbers::pi * x); });
  const double dt = 0.5 * solver1d::stable_dt(s0, grid, bc, law, 1e-3);
  for (auto _ : st) {
    auto s1 = solver1d::step(s0, grid, bc, law, 1e-3, dt, mode(st));
    benchmark::DoNotOptimize(s1.rho.data());
  }
}

void BM_DensityOnPoints(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  transport::CharacteristicFlow flow(transport::linear_field(1.0), 1e-3);
  const auto rho0 = transport::gaussian_profile();
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i) xs[i] = -2.0 + 4.0 * static_cast<double>(i) / static_cast<double>(n);
  for (auto _ : st) {
    auto r = transport::density_on_points(rho0, std::nullopt, flow, 0.5, xs, st.range(1) != 0);
    benchmark::DoNotOptimize(r.data());
  }
}

}  // namespace

BENCHMARK(BM_LlfFluxes)->ArgsProduct({{1 << 12, 1 << 16, 1 << 20}, {0, 1}});
BENCHMARK(BM_Step)->ArgsProduct({{1 << 12, 1 << 16}, {0, 1}});
BENCHMARK(BM_DensityOnPoints)->ArgsProduct({{256, 4096}, {0, 1}});

BENCHMARK_MAIN();
