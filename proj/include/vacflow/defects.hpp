#pragma once

// Energy and Reynolds defect measures attached to dissipative solutions.

#include <iosfwd>
#include <optional>
#include <vector>

#include "vacflow/constitutive.hpp"
#include "vacflow/solver1d.hpp"

namespace vacflow::defects {

using constitutive::SymMatrix;

/// Nonnegative scalar measure, one value per cell.
struct EnergyDefectField {
  std::vector<double> values;
  double total(double dx) const;
};

/// Symmetric-matrix-valued measure, one matrix per cell.
struct ReynoldsDefectField {
  int dim = 1;
  std::vector<SymMatrix> values;
  /// 1-D scalar entries.
  std::vector<double> scalar() const;
};

struct PsdReport {
  bool ok = true;
  double min_eigenvalue = 0.0;
  std::optional<std::size_t> witness_cell;
  std::vector<double> witness_vector;  // eigenvector of the offending eigenvalue
};

/// Every cell's matrix is positive semidefinite (eigenvalues >= -tol).
PsdReport psd_check(const ReynoldsDefectField& r, double tol = 1e-12);

struct CompatibilityReport {
  bool ok = true;
  std::optional<double> worst_ratio;  // max tr(R)/E over cells with E > 0
  std::optional<std::size_t> worst_cell;
};

/// d_lo E <= tr(R) <= d_hi E cellwise.
CompatibilityReport compatibility_check(const EnergyDefectField& e, const ReynoldsDefectField& r, double d_lo,
                                        double d_hi);

struct NumericalDefect {
  EnergyDefectField energy;
  ReynoldsDefectField reynolds;
};

/// E_h = max(0, cell energy residual) summed over the run; R_h = (E_h / dim) I.
NumericalDefect estimate_numerical_defect(const solver1d::EnergyLedger& ledger, int dim = 1);

/// CSV `cell,energy,reynolds_trace`.
void write_defects_csv(std::ostream& os, const NumericalDefect& d);

}  // namespace vacflow::defects
