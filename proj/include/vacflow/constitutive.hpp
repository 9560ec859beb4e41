#pragma once

// Barotropic pressure law, pressure potential and convex dissipation
// potentials with their Fenchel conjugates.

#include <array>
#include <cstdint>
#include <limits>

namespace vacflow::constitutive {

/// p(rho) = a rho^gamma with a > 0 and 1 < gamma <= 2.
class PressureLaw {
 public:
  PressureLaw(double a, double gamma);

  double a() const { return a_; }
  double gamma() const { return gamma_; }

  double pressure(double rho) const;
  /// p'(rho) = a gamma rho^(gamma-1).
  double pressure_derivative(double rho) const;
  /// P(rho) = a/(gamma-1) rho^gamma, so that P'(rho) rho - P(rho) = p(rho).
  double potential(double rho) const;
  /// P'(rho) = a gamma/(gamma-1) rho^(gamma-1).
  double potential_derivative(double rho) const;
  /// P''(rho) = p'(rho)/rho; infinite at rho = 0 when gamma < 2.
  double potential_second_derivative(double rho) const;
  /// Inverse of P' on [0, inf).
  double potential_derivative_inverse(double value) const;
  double sound_speed(double rho) const;

 private:
  double a_;
  double gamma_;
};

double pressure(const PressureLaw& law, double rho);
double pressure_potential(const PressureLaw& law, double rho);

/// P(rho) - P'(r)(rho - r) - P(r). Requires r > 0 unless gamma == 2.
double bregman_pressure(const PressureLaw& law, double rho, double r);

/// Largest c with bregman_pressure(rho, r) >= c (rho - r)^2 on [0, rho_bar]^2.
/// Equals min P'' / 2 = a gamma rho_bar^(gamma-2) / 2 for gamma <= 2.
double bregman_convexity_constant(const PressureLaw& law, double rho_bar);

/// Symmetric dim x dim matrix, dim in {1,2,3}. Setters write both (i,j) and
/// (j,i), so the stored entries are always exactly symmetric.
class SymMatrix {
 public:
  explicit SymMatrix(int dim);

  static SymMatrix identity(int dim);
  static SymMatrix diagonal(std::initializer_list<double> diag);

  int dim() const { return dim_; }
  double operator()(int i, int j) const { return e_[static_cast<std::size_t>(i * 3 + j)]; }
  void set(int i, int j, double v);

  double trace() const;
  /// Frobenius norm squared.
  double norm2() const;
  /// D - beta tr(D) I.
  SymMatrix shifted_trace(double beta) const;
  SymMatrix deviatoric() const { return shifted_trace(1.0 / dim_); }

  SymMatrix& operator+=(const SymMatrix& o);
  SymMatrix& operator-=(const SymMatrix& o);
  SymMatrix& operator*=(double s);

 private:
  int dim_;
  std::array<double, 9> e_{};
};

SymMatrix operator+(SymMatrix a, const SymMatrix& b);
SymMatrix operator-(SymMatrix a, const SymMatrix& b);
SymMatrix operator*(double s, SymMatrix a);
/// Frobenius product A : B.
double contract(const SymMatrix& a, const SymMatrix& b);

enum class PotentialKind : std::uint8_t { newtonian, quadratic_power_law };

/// F(D) = 2 mu |D - beta tr(D) I|^2 + lambda/2 tr(D)^2
///        [+ eta/p ((1 + |D - beta tr(D) I|^2)^(p/2) - 1) for the power-law kind]
/// with beta = 1/dim for dim >= 2 and beta = 0 for dim = 1. For dim >= 2 and
/// the newtonian kind this is (mu/2)|2D - (2/dim) tr(D) I|^2 + (lambda/2) tr(D)^2.
struct DissipationPotential {
  PotentialKind kind = PotentialKind::newtonian;
  double mu = 1.0;
  double lambda = 0.0;
  int dim = 3;
  /// Power-law correction, only read for quadratic_power_law; 1 <= p <= 2.
  double eta = 0.0;
  double power = 1.5;

  static DissipationPotential newtonian(double mu, double lambda, int dim);
  static DissipationPotential power_law(double mu, double lambda, int dim, double eta, double power);
  /// 1-D potential with S = nu u_x, i.e. F(D) = nu/2 D^2.
  static DissipationPotential one_dimensional(double nu);

  double beta_trace() const { return dim == 1 ? 0.0 : 1.0 / dim; }
  void validate() const;
};

double dissipation_value(const DissipationPotential& pot, const SymMatrix& d);
SymMatrix subgradient(const DissipationPotential& pot, const SymMatrix& d);

/// sup_D { S:D - F(D) }; +infinity is a legal value.
double conjugate(const DissipationPotential& pot, const SymMatrix& s);

/// F(D) + F*(S) - S:D. Nonnegative; zero iff S is the gradient of F at D.
double fenchel_young_residual(const DissipationPotential& pot, const SymMatrix& d, const SymMatrix& s);

struct CoercivityGap {
  double gap;
  double lower_bound;
};

/// gap = F(D+Q) - F(D) - S:Q with S = subgradient(D);
/// lower_bound = c |Q - beta tr(Q) I|^2 with c = coercivity_constant(pot).
CoercivityGap coercivity_gap(const DissipationPotential& pot, const SymMatrix& d, const SymMatrix& q);

/// 2 mu for the newtonian kind; for the power-law kind the constant measured by
/// estimate_coercivity_constant with the default sample count and seed.
double coercivity_constant(const DissipationPotential& pot);

/// Minimum over random (D, Q) of gap / |Q - beta tr(Q) I|^2.
double estimate_coercivity_constant(const DissipationPotential& pot, int samples, std::uint64_t seed);

}  // namespace vacflow::constitutive
