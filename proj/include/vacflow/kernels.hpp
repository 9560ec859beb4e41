#pragma once

// Per-face flux kernels of the 1-D finite-volume scheme. Every kernel has a
// serial reference loop and an OpenMP loop over faces; both evaluate the same
// expression per face, so their outputs are bit-identical.

#include <cstdint>
#include <span>

#include "vacflow/constitutive.hpp"

namespace vacflow::kernels {

enum class Exec : std::uint8_t { serial, parallel };

/// Local Lax-Friedrichs fluxes for (rho, rho u) with pressure in the momentum
/// flux. `rho` and `u` hold n+2 values (one ghost per side); face f sits
/// between entries f and f+1, giving n+1 faces.
void llf_fluxes(std::span<const double> rho, std::span<const double> u, const constitutive::PressureLaw& law,
                std::span<double> flux_rho, std::span<double> flux_mom, std::span<double> face_speed, Exec exec);

/// Upwind mass flux rho_upwind * v for a prescribed face velocity.
void upwind_fluxes(std::span<const double> rho, std::span<const double> face_velocity,
                   std::span<double> flux_rho, Exec exec);

/// max_i |u_i| + c(rho_i).
double max_wave_speed(std::span<const double> rho, std::span<const double> u,
                      const constitutive::PressureLaw& law, Exec exec);

/// out_i = in_i - ratio (flux_{i+1} - flux_i), i in [0, n).
void conservative_update(std::span<const double> in, std::span<const double> flux, double ratio,
                         std::span<double> out, Exec exec);

}  // namespace vacflow::kernels
