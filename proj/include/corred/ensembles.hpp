#pragma once

// Weighted sums of product terms sum_i p_i left_i (x) right_i that assemble a
// two-part state. Terms are stored as raw matrices: the exact decompositions
// of entangled pair states use unit-trace terms that are not positive.

#include <string>
#include <vector>

#include "corred/matrix.hpp"
#include "corred/states.hpp"

namespace corred {

struct EnsembleTerm {
  double weight;
  ComplexMatrix left;   // alpha factor
  ComplexMatrix right;  // beta factor
};

class Ensemble {
 public:
  /// Validates weights (>= 0, sum 1) and factor traces (1) within tol.
  Ensemble(BipartiteSystem system, std::vector<EnsembleTerm> terms, std::string branch = {},
           double tol = 1e-12);

  const BipartiteSystem& system() const noexcept { return system_; }
  const std::vector<EnsembleTerm>& terms() const noexcept { return terms_; }
  /// Which case of a piecewise decomposition produced this ensemble.
  const std::string& branch() const noexcept { return branch_; }

 private:
  BipartiteSystem system_;
  std::vector<EnsembleTerm> terms_;
  std::string branch_;
};

/// sum_i p_i kron(left_i, right_i).
ComplexMatrix assemble(const Ensemble& e);

/// Four equiprobable terms assembling epr_state() for every theta.
Ensemble epr_decomposition(double theta = 0.0);
/// Four equiprobable terms assembling triplet_state() for every theta.
Ensemble triplet_decomposition(double theta = 0.0);

/// Two diagonal product terms with weights cos^2(phi), sin^2(phi) in the
/// standard case split on |tan(phi)| (the |tan(phi)| < 1 case does not
/// reproduce the diagonal of spin_pair_initial; verify_ensemble reports it).
/// |tan(phi)| = 1 delegates to the EPR or triplet decomposition.
Ensemble spin_pair_initial_decomposition(double phi, double theta = 0.0);

/// Two-term diagonal ensemble for the propagated spin-pair state with weights
/// P/2 = (1 + C)/2 on |21> and M/2 = (1 - C)/2 on |12>, C = cos(2phi)cos(2ct).
/// The sign of C selects the branch, which orders the dominant term first.
/// Throws TieUndefined when |C| < 1e-12 and |tan(phi)| != 1.
Ensemble spin_pair_reduced_decomposition(double phi, double c, double t, double theta = 0.0);

struct VerificationReport {
  double max_error = 0.0;
  /// Entries with both subsystem indices diagonal.
  double diagonal_error = 0.0;
  /// Entries off-diagonal in both subsystems.
  double coherence_error = 0.0;
  /// Entries off-diagonal in exactly one subsystem.
  double cross_error = 0.0;
  /// |assemble(e) - target| entrywise.
  ComplexMatrix error_matrix;
  double tol = 0.0;
  bool passed = false;
};

VerificationReport verify_ensemble(const Ensemble& e, const DensityMatrix& target,
                                   double tol = 1e-12);

/// Weighted averages of x (1 - x) and x^2 over the terms, x being the
/// diagonal entry `level` of the chosen factor.
struct StatisticalAverages {
  double mixed;   // <x (1 - x)>
  double square;  // <x^2>
};

StatisticalAverages statistical_averages(const Ensemble& e, Side side, std::size_t level);

}  // namespace corred
