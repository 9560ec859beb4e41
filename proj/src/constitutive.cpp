#include "vacflow/constitutive.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "vacflow/errors.hpp"

namespace vacflow::constitutive {

namespace {

void require_nonnegative(double rho, const char* what) {
  if (!(rho >= 0.0)) {
    std::ostringstream os;
    os << what << " must be nonnegative, got " << rho;
    throw DomainError(os.str());
  }
}

void require_same_dim(const DissipationPotential& pot, const SymMatrix& m) {
  if (m.dim() != pot.dim) {
    std::ostringstream os;
    os << "matrix dimension " << m.dim() << " does not match potential dimension " << pot.dim;
    throw DimensionMismatch(os.str());
  }
}

// x^gamma - 1 - gamma (x - 1) for x >= 0, accurate near x = 1.
double convexity_gap_ratio(double x, double gamma) {
  const double h = x - 1.0;
  if (std::abs(h) < 1e-2) {
    double sum = 0.0;
    double binom = gamma;  // binom(gamma, 1)
    double hk = h;
    for (int k = 2; k <= 9; ++k) {
      binom *= (gamma - (k - 1)) / k;
      hk *= h;
      sum += binom * hk;
    }
    return sum;
  }
  return std::expm1(gamma * std::log1p(h)) - gamma * h;
}

// Radial profile g(r) = kappa/2 r^2 + eta/p ((1 + r^2)^(p/2) - 1) of the
// potential in the norm of the trace-shifted part.
struct Radial {
  double kappa;
  double eta;
  double p;

  double value(double r) const {
    double v = 0.5 * kappa * r * r;
    if (eta != 0.0) v += eta / p * (std::pow(1.0 + r * r, 0.5 * p) - 1.0);
    return v;
  }
  // g'(r) / r
  double slope_ratio(double r) const {
    double s = kappa;
    if (eta != 0.0) s += eta * std::pow(1.0 + r * r, 0.5 * p - 1.0);
    return s;
  }
  double derivative(double r) const { return slope_ratio(r) * r; }
  double second_derivative(double r) const {
    double s = kappa;
    if (eta != 0.0) s += eta * std::pow(1.0 + r * r, 0.5 * p - 2.0) * (1.0 + (p - 1.0) * r * r);
    return s;
  }

  // sup_{r >= 0} s r - g(r) for s >= 0; g' is strictly increasing from 0.
  double conjugate(double s) const {
    if (s <= 0.0) return 0.0;
    if (eta == 0.0) return s * s / (2.0 * kappa);
    // Bracket the root of g'(r) = s.
    double lo = 0.0;
    double hi = s / kappa;  // g'(r) >= kappa r
    double r = 0.5 * hi;
    for (int it = 0; it < 200; ++it) {
      const double f = derivative(r) - s;
      if (f > 0.0) {
        hi = r;
      } else {
        lo = r;
      }
      double next = r - f / second_derivative(r);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - r) <= 1e-15 * std::max(1.0, r)) {
        r = next;
        break;
      }
      r = next;
    }
    return s * r - value(r);
  }
};

Radial radial_of(const DissipationPotential& pot) {
  const double eta = pot.kind == PotentialKind::quadratic_power_law ? pot.eta : 0.0;
  const double kappa = pot.dim == 1 ? 4.0 * pot.mu + pot.lambda : 4.0 * pot.mu;
  return Radial{kappa, eta, pot.power};
}

}  // namespace

// ---------------------------------------------------------------------------
// PressureLaw

PressureLaw::PressureLaw(double a, double gamma) : a_(a), gamma_(gamma) {
  if (!(a > 0.0)) throw DomainError("pressure coefficient a must be positive");
  if (!(gamma > 1.0 && gamma <= 2.0)) {
    std::ostringstream os;
    os << "adiabatic exponent gamma must lie in (1, 2], got " << gamma;
    throw DomainError(os.str());
  }
}

double PressureLaw::pressure(double rho) const {
  require_nonnegative(rho, "density");
  return rho == 0.0 ? 0.0 : a_ * std::pow(rho, gamma_);
}

double PressureLaw::pressure_derivative(double rho) const {
  require_nonnegative(rho, "density");
  return rho == 0.0 ? 0.0 : a_ * gamma_ * std::pow(rho, gamma_ - 1.0);
}

double PressureLaw::potential(double rho) const {
  require_nonnegative(rho, "density");
  return rho == 0.0 ? 0.0 : a_ / (gamma_ - 1.0) * std::pow(rho, gamma_);
}

double PressureLaw::potential_derivative(double rho) const {
  require_nonnegative(rho, "density");
  return rho == 0.0 ? 0.0 : a_ * gamma_ / (gamma_ - 1.0) * std::pow(rho, gamma_ - 1.0);
}

double PressureLaw::potential_second_derivative(double rho) const {
  require_nonnegative(rho, "density");
  if (gamma_ == 2.0) return 2.0 * a_;
  if (rho == 0.0) return std::numeric_limits<double>::infinity();
  return a_ * gamma_ * std::pow(rho, gamma_ - 2.0);
}

double PressureLaw::potential_derivative_inverse(double value) const {
  if (value <= 0.0) return 0.0;
  return std::pow(value * (gamma_ - 1.0) / (a_ * gamma_), 1.0 / (gamma_ - 1.0));
}

double PressureLaw::sound_speed(double rho) const { return std::sqrt(pressure_derivative(rho)); }

double pressure(const PressureLaw& law, double rho) { return law.pressure(rho); }

double pressure_potential(const PressureLaw& law, double rho) { return law.potential(rho); }

double bregman_pressure(const PressureLaw& law, double rho, double r) {
  require_nonnegative(rho, "density");
  require_nonnegative(r, "reference density");
  if (r == 0.0) {
    if (law.gamma() < 2.0) {
      throw DomainError("Bregman pressure distance needs a positive reference density when gamma < 2 "
                        "(P' is singular at vacuum); shift the reference by epsilon");
    }
    return law.potential(rho);
  }
  const double g = law.gamma();
  const double scale = law.a() / (g - 1.0) * std::pow(r, g);
  return std::max(0.0, scale * convexity_gap_ratio(rho / r, g));
}

double bregman_convexity_constant(const PressureLaw& law, double rho_bar) {
  if (!(rho_bar > 0.0)) throw DomainError("rho_bar must be positive");
  return 0.5 * law.a() * law.gamma() * std::pow(rho_bar, law.gamma() - 2.0);
}

// ---------------------------------------------------------------------------
// SymMatrix

SymMatrix::SymMatrix(int dim) : dim_(dim) {
  if (dim < 1 || dim > 3) throw DimensionMismatch("SymMatrix dimension must be 1, 2 or 3");
}

SymMatrix SymMatrix::identity(int dim) {
  SymMatrix m(dim);
  for (int i = 0; i < dim; ++i) m.set(i, i, 1.0);
  return m;
}

SymMatrix SymMatrix::diagonal(std::initializer_list<double> diag) {
  SymMatrix m(static_cast<int>(diag.size()));
  int i = 0;
  for (double v : diag) {
    m.set(i, i, v);
    ++i;
  }
  return m;
}

void SymMatrix::set(int i, int j, double v) {
  e_[static_cast<std::size_t>(i * 3 + j)] = v;
  e_[static_cast<std::size_t>(j * 3 + i)] = v;
}

double SymMatrix::trace() const {
  double t = 0.0;
  for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

double SymMatrix::norm2() const { return contract(*this, *this); }

SymMatrix SymMatrix::shifted_trace(double beta) const {
  SymMatrix out = *this;
  const double shift = beta * trace();
  for (int i = 0; i < dim_; ++i) out.set(i, i, (*this)(i, i) - shift);
  return out;
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& o) {
  if (o.dim_ != dim_) throw DimensionMismatch("SymMatrix dimension mismatch in +");
  for (std::size_t k = 0; k < e_.size(); ++k) e_[k] += o.e_[k];
  return *this;
}

SymMatrix& SymMatrix::operator-=(const SymMatrix& o) {
  if (o.dim_ != dim_) throw DimensionMismatch("SymMatrix dimension mismatch in -");
  for (std::size_t k = 0; k < e_.size(); ++k) e_[k] -= o.e_[k];
  return *this;
}

SymMatrix& SymMatrix::operator*=(double s) {
  for (double& v : e_) v *= s;
  return *this;
}

SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
SymMatrix operator*(double s, SymMatrix a) { return a *= s; }

double contract(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("SymMatrix dimension mismatch in contraction");
  double sum = 0.0;
  for (int i = 0; i < a.dim(); ++i) {
    for (int j = 0; j < a.dim(); ++j) sum += a(i, j) * b(i, j);
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Dissipation potentials

DissipationPotential DissipationPotential::newtonian(double mu, double lambda, int dim) {
  DissipationPotential p;
  p.kind = PotentialKind::newtonian;
  p.mu = mu;
  p.lambda = lambda;
  p.dim = dim;
  p.validate();
  return p;
}

DissipationPotential DissipationPotential::power_law(double mu, double lambda, int dim, double eta,
                                                     double power) {
  DissipationPotential p;
  p.kind = PotentialKind::quadratic_power_law;
  p.mu = mu;
  p.lambda = lambda;
  p.dim = dim;
  p.eta = eta;
  p.power = power;
  p.validate();
  return p;
}

DissipationPotential DissipationPotential::one_dimensional(double nu) {
  return newtonian(0.25 * nu, 0.0, 1);
}

void DissipationPotential::validate() const {
  if (dim < 1 || dim > 3) throw DimensionMismatch("potential dimension must be 1, 2 or 3");
  if (!(mu > 0.0)) throw DomainError("shear viscosity mu must be positive");
  if (!(lambda >= 0.0)) throw DomainError("bulk coefficient lambda must be nonnegative");
  if (kind == PotentialKind::quadratic_power_law) {
    if (!(eta >= 0.0)) throw DomainError("power-law coefficient eta must be nonnegative");
    if (!(power >= 1.0 && power <= 2.0)) throw DomainError("power-law exponent must lie in [1, 2]");
  }
}

double dissipation_value(const DissipationPotential& pot, const SymMatrix& d) {
  require_same_dim(pot, d);
  const Radial g = radial_of(pot);
  if (pot.dim == 1) return g.value(std::abs(d(0, 0)));
  const double tr = d.trace();
  const double r = std::sqrt(d.shifted_trace(pot.beta_trace()).norm2());
  return g.value(r) + 0.5 * pot.lambda * tr * tr;
}

SymMatrix subgradient(const DissipationPotential& pot, const SymMatrix& d) {
  require_same_dim(pot, d);
  const Radial g = radial_of(pot);
  if (pot.dim == 1) {
    SymMatrix s(1);
    const double x = d(0, 0);
    s.set(0, 0, g.slope_ratio(std::abs(x)) * x);
    return s;
  }
  const SymMatrix d0 = d.shifted_trace(pot.beta_trace());
  const double r = std::sqrt(d0.norm2());
  SymMatrix s = g.slope_ratio(r) * d0;
  return s + (pot.lambda * d.trace()) * SymMatrix::identity(pot.dim);
}

double conjugate(const DissipationPotential& pot, const SymMatrix& s) {
  require_same_dim(pot, s);
  const Radial g = radial_of(pot);
  if (pot.dim == 1) return g.conjugate(std::abs(s(0, 0)));
  const double tr = s.trace();
  const double scale = std::max(1.0, std::sqrt(s.norm2()));
  double trace_part = 0.0;
  if (pot.lambda > 0.0) {
    trace_part = tr * tr / (2.0 * pot.lambda * pot.dim * pot.dim);
  } else if (std::abs(tr) > 1e-12 * scale) {
    return std::numeric_limits<double>::infinity();
  }
  const double r = std::sqrt(s.deviatoric().norm2());
  return g.conjugate(r) + trace_part;
}

double fenchel_young_residual(const DissipationPotential& pot, const SymMatrix& d, const SymMatrix& s) {
  require_same_dim(pot, d);
  require_same_dim(pot, s);
  const double fstar = conjugate(pot, s);
  if (std::isinf(fstar)) return fstar;
  return dissipation_value(pot, d) + fstar - contract(s, d);
}

CoercivityGap coercivity_gap(const DissipationPotential& pot, const SymMatrix& d, const SymMatrix& q) {
  require_same_dim(pot, d);
  require_same_dim(pot, q);
  const SymMatrix s = subgradient(pot, d);
  const double gap = dissipation_value(pot, d + q) - dissipation_value(pot, d) - contract(s, q);
  const double lb = coercivity_constant(pot) * q.shifted_trace(pot.beta_trace()).norm2();
  return {gap, lb};
}

double coercivity_constant(const DissipationPotential& pot) {
  if (pot.kind == PotentialKind::newtonian) return 2.0 * pot.mu;
  return estimate_coercivity_constant(pot, 2000, 20240611ULL);
}

double estimate_coercivity_constant(const DissipationPotential& pot, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> log_scale(-2.0, 2.0);
  auto random_matrix = [&]() {
    SymMatrix m(pot.dim);
    const double scale = std::pow(10.0, log_scale(rng));
    for (int i = 0; i < pot.dim; ++i) {
      for (int j = i; j < pot.dim; ++j) m.set(i, j, scale * normal(rng));
    }
    return m;
  };
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < samples; ++k) {
    const SymMatrix d = random_matrix();
    const SymMatrix q = random_matrix();
    const double denom = q.shifted_trace(pot.beta_trace()).norm2();
    if (denom < 1e-12) continue;
    const SymMatrix s = subgradient(pot, d);
    const double gap = dissipation_value(pot, d + q) - dissipation_value(pot, d) - contract(s, q);
    best = std::min(best, gap / denom);
  }
  return best;
}

}  // namespace vacflow::constitutive
