#pragma once

// Reduction of a bipartite state to its subsystems.
//
// neumann       partial traces, i.e. conditioning on the maximally mixed state
// conditioned   rho_other = Sp_given(rho sigma') / Sp(rho sigma') for a given
//               state sigma of one side
// projective    conditioning on a basis projector |j><j|
// correlated    self-consistent fixed point of the two conditioned reductions,
//               found by successive substitution

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "corred/matrix.hpp"
#include "corred/states.hpp"

namespace corred {

/// |Sp(rho sigma')| below this raises DegenerateOverlap.
inline constexpr double kDegenerateOverlap = 1e-14;
/// |Sp(rho sigma')| below this is reported as near-degenerate.
inline constexpr double kNearDegenerateOverlap = 1e-10;

enum class Method { neumann, conditioned, projective, correlated };

const char* to_string(Method m) noexcept;

struct ReductionResult {
  DensityMatrix rho_alpha;
  std::optional<DensityMatrix> rho_beta;
  Method method;
  /// max |rho - rho_alpha (x) rho_beta|; zero when rho_beta is absent.
  double reconstruction_error = 0.0;
  std::vector<std::string> warnings;
};

ReductionResult neumann_reduce(const DensityMatrix& rho, const BipartiteSystem& sys);

/// rho_RN = (Sp_beta rho) (x) (1/N_beta) 1 when observed == alpha, mirrored
/// for beta.
ComplexMatrix replacement_operator(const DensityMatrix& rho, const BipartiteSystem& sys,
                                   Side observed);

/// Unnormalized conditioned reduction Sp_given(rho sigma') together with the
/// overlap Sp(rho sigma'). No validation and no degeneracy check.
struct ConditionedTerms {
  ComplexMatrix numerator;
  complex overlap;
};
ConditionedTerms conditioned_terms(const ComplexMatrix& rho, const BipartiteSystem& sys,
                                   const ComplexMatrix& sigma, Side given_side);

/// Reduced state of the side opposite to given_side, assuming given_side is
/// in the state sigma. Hermitized and trace-normalized; relaxed validation.
DensityMatrix conditioned_reduce(const DensityMatrix& rho, const BipartiteSystem& sys,
                                 const DensityMatrix& sigma, Side given_side);

/// Conditioned reduction on |level><level| of given_side. The result holds the
/// reduced state of the other side paired with the projector.
ReductionResult projective_reduce(const DensityMatrix& rho, const BipartiteSystem& sys,
                                  std::size_t level, Side given_side = Side::beta);

enum class UpdateScheme {
  gauss_seidel,  // beta from the current alpha, then alpha from the new beta
  jacobi,        // both from the previous pair
};

enum class Verdict { converged, max_iter, oscillating, degenerate };

const char* to_string(Verdict v) noexcept;

struct NeumannSeed {};
using Seed = std::variant<NeumannSeed, ReductionResult>;

struct CorrelatedOptions {
  double tol = 1e-12;
  std::size_t max_iter = 10000;
  UpdateScheme scheme = UpdateScheme::gauss_seidel;
  Seed seed = NeumannSeed{};
};

struct IterationReport {
  std::size_t iterations = 0;
  Verdict verdict = Verdict::max_iter;
  /// max-abs change of both iterates, one entry per sweep.
  std::vector<double> residual_history;
  ReductionResult final;
};

IterationReport correlated_reduce(const DensityMatrix& rho, const BipartiteSystem& sys,
                                  const CorrelatedOptions& options = {});

/// Sp(rho A); the imaginary part vanishes for hermitian A.
complex mean_value(const DensityMatrix& rho_sub, const Observable& a);

struct CorrelatorBreakdown {
  complex exact;                   // Sp rho (A (x) B)
  double mean_a_neumann = 0.0;     // <A>_N
  double mean_b_neumann = 0.0;     // <B>_N
  std::optional<double> mean_a_given_b;  // <A>_B, needs <B>_N != 0
  std::optional<double> mean_b_given_a;  // <B>_A, needs <A>_N != 0
  std::optional<double> form_given_b;    // <A>_B <B>_N
  std::optional<double> form_given_a;    // <A>_N <B>_A

  bool factorized() const noexcept { return form_given_b && form_given_a; }
  /// Throws ZeroNeumannMean if either factorized form is unavailable.
  void require_factorized() const;
};

/// The exact correlator and both factorizations through reductions conditioned
/// on the observable-derived states A/Sp A and B/Sp B. A and B must be
/// nonnegative.
CorrelatorBreakdown correlator(const DensityMatrix& rho, const BipartiteSystem& sys,
                               const Observable& a, const Observable& b);

struct CorrelatedMeans {
  double mean_a;   // <A>_C
  double mean_b;   // <B>_C
  double product;  // <A>_C <B>_C
};

/// Throws NotConverged unless report.verdict == converged.
CorrelatedMeans correlated_mean_pair(const IterationReport& report, const Observable& a,
                                     const Observable& b);

/// product - exact for the correlated means of report against rho.
double correlated_gap(const DensityMatrix& rho, const BipartiteSystem& sys,
                      const IterationReport& report, const Observable& a, const Observable& b);

}  // namespace corred
