#include "vacflow/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace vacflow::kernels {

namespace {

struct FaceFlux {
  double rho;
  double mom;
  double speed;
};

struct CellState {
  double rho;
  double u;
  double p;
  double c;
};

inline CellState cell_state(double rho, double u, const constitutive::PressureLaw& law) {
  if (!(rho > 0.0)) return {rho, u, 0.0, 0.0};
  const double p = law.pressure(rho);
  return {rho, u, p, std::sqrt(law.gamma() * p / rho)};
}

inline FaceFlux llf_face(const CellState& l, const CellState& r) {
  const double a = std::max(std::abs(l.u) + l.c, std::abs(r.u) + r.c);
  const double ml = l.rho * l.u;
  const double mr = r.rho * r.u;
  return {0.5 * (ml + mr) - 0.5 * a * (r.rho - l.rho), 0.5 * (ml * l.u + l.p + mr * r.u + r.p) - 0.5 * a * (mr - ml), a};
}

inline double upwind_face(double rl, double rr, double v) { return v >= 0.0 ? rl * v : rr * v; }

}  // namespace

void llf_fluxes(std::span<const double> rho, std::span<const double> u, const constitutive::PressureLaw& law,
                std::span<double> flux_rho, std::span<double> flux_mom, std::span<double> face_speed, Exec exec) {
  const auto faces = static_cast<long>(flux_rho.size());
  const auto cells = faces + 1;
  std::vector<CellState> cs(static_cast<std::size_t>(cells));
  if (exec == Exec::serial) {
    for (long i = 0; i < cells; ++i) {
      const auto k = static_cast<std::size_t>(i);
      cs[k] = cell_state(rho[k], u[k], law);
    }
    for (long f = 0; f < faces; ++f) {
      const auto k = static_cast<std::size_t>(f);
      const FaceFlux ff = llf_face(cs[k], cs[k + 1]);
      flux_rho[k] = ff.rho;
      flux_mom[k] = ff.mom;
      face_speed[k] = ff.speed;
    }
    return;
  }
#pragma omp parallel
  {
#pragma omp for schedule(static)
    for (long i = 0; i < cells; ++i) {
      const auto k = static_cast<std::size_t>(i);
      cs[k] = cell_state(rho[k], u[k], law);
    }
#pragma omp for schedule(static)
    for (long f = 0; f < faces; ++f) {
      const auto k = static_cast<std::size_t>(f);
      const FaceFlux ff = llf_face(cs[k], cs[k + 1]);
      flux_rho[k] = ff.rho;
      flux_mom[k] = ff.mom;
      face_speed[k] = ff.speed;
    }
  }
}

void upwind_fluxes(std::span<const double> rho, std::span<const double> face_velocity,
                   std::span<double> flux_rho, Exec exec) {
  const auto faces = static_cast<long>(flux_rho.size());
  if (exec == Exec::serial) {
    for (long f = 0; f < faces; ++f) {
      const auto k = static_cast<std::size_t>(f);
      flux_rho[k] = upwind_face(rho[k], rho[k + 1], face_velocity[k]);
    }
    return;
  }
#pragma omp parallel for schedule(static)
  for (long f = 0; f < faces; ++f) {
    const auto k = static_cast<std::size_t>(f);
    flux_rho[k] = upwind_face(rho[k], rho[k + 1], face_velocity[k]);
  }
}

double max_wave_speed(std::span<const double> rho, std::span<const double> u,
                      const constitutive::PressureLaw& law, Exec exec) {
  const auto n = static_cast<long>(rho.size());
  double best = 0.0;
  if (exec == Exec::serial) {
    for (long i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(i);
      best = std::max(best, std::abs(u[k]) + (rho[k] > 0.0 ? law.sound_speed(rho[k]) : 0.0));
    }
    return best;
  }
#pragma omp parallel for schedule(static) reduction(max : best)
  for (long i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    best = std::max(best, std::abs(u[k]) + (rho[k] > 0.0 ? law.sound_speed(rho[k]) : 0.0));
  }
  return best;
}

void conservative_update(std::span<const double> in, std::span<const double> flux, double ratio,
                         std::span<double> out, Exec exec) {
  const auto n = static_cast<long>(in.size());
  if (exec == Exec::serial) {
    for (long i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(i);
      out[k] = in[k] - ratio * (flux[k + 1] - flux[k]);
    }
    return;
  }
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    out[k] = in[k] - ratio * (flux[k + 1] - flux[k]);
  }
}

}  // namespace vacflow::kernels
