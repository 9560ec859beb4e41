#include "vacflow/defects.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "vacflow/errors.hpp"

namespace vacflow::defects {

double EnergyDefectField::total(double dx) const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * dx;
}

std::vector<double> ReynoldsDefectField::scalar() const {
  if (dim != 1) throw DimensionMismatch("scalar view needs dim = 1");
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& m : values) out.push_back(m(0, 0));
  return out;
}

PsdReport psd_check(const ReynoldsDefectField& r, double tol) {
  PsdReport rep;
  bool first = true;
  for (std::size_t c = 0; c < r.values.size(); ++c) {
    const SymMatrix& m = r.values[c];
    if (m.dim() != r.dim) throw DimensionMismatch("Reynolds defect entry has the wrong dimension");
    Eigen::MatrixXd a(m.dim(), m.dim());
    for (int i = 0; i < m.dim(); ++i) {
      for (int j = 0; j < m.dim(); ++j) a(i, j) = m(i, j);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    const double lo = es.eigenvalues()(0);
    if (first || lo < rep.min_eigenvalue) {
      rep.min_eigenvalue = lo;
      first = false;
      if (lo < -tol) {
        rep.ok = false;
        rep.witness_cell = c;
        const Eigen::VectorXd v = es.eigenvectors().col(0);
        rep.witness_vector.assign(v.data(), v.data() + v.size());
      }
    }
  }
  return rep;
}

CompatibilityReport compatibility_check(const EnergyDefectField& e, const ReynoldsDefectField& r, double d_lo,
                                        double d_hi) {
  if (e.values.size() != r.values.size()) throw DimensionMismatch("defect fields differ in length");
  if (!(d_lo > 0.0) || !(d_hi >= d_lo)) throw DomainError("need 0 < d_lo <= d_hi");
  CompatibilityReport rep;
  for (std::size_t c = 0; c < e.values.size(); ++c) {
    const double en = e.values[c];
    const double tr = r.values[c].trace();
    const double slack = 1e-12 * std::max(1.0, std::abs(en));
    if (tr < d_lo * en - slack || tr > d_hi * en + slack) {
      rep.ok = false;
      if (!rep.worst_cell) rep.worst_cell = c;
    }
    if (en > 0.0) {
      const double ratio = tr / en;
      if (!rep.worst_ratio || ratio > *rep.worst_ratio) rep.worst_ratio = ratio;
    }
  }
  return rep;
}

NumericalDefect estimate_numerical_defect(const solver1d::EnergyLedger& ledger, int dim) {
  if (dim < 1 || dim > 3) throw DomainError("dim must be 1, 2 or 3");
  if (!(ledger.dx > 0.0)) throw DomainError("ledger has no grid spacing");
  NumericalDefect d;
  d.reynolds.dim = dim;
  for (double r : ledger.cell_residual) {
    const double e = std::max(0.0, r) / ledger.dx;
    d.energy.values.push_back(e);
    d.reynolds.values.push_back((e / dim) * SymMatrix::identity(dim));
  }
  return d;
}

void write_defects_csv(std::ostream& os, const NumericalDefect& d) {
  os << "cell,energy,reynolds_trace\n" << std::setprecision(17);
  for (std::size_t c = 0; c < d.energy.values.size(); ++c) {
    os << c << ',' << d.energy.values[c] << ',' << d.reynolds.values[c].trace() << '\n';
  }
}

}  // namespace vacflow::defects
