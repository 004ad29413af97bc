#include "corred/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "corred/errors.hpp"

namespace corred {

const char* to_string(Method m) noexcept {
  switch (m) {
    case Method::neumann: return "neumann";
    case Method::conditioned: return "conditioned";
    case Method::projective: return "projective";
    case Method::correlated: return "correlated";
  }
  return "unknown";
}

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::converged: return "converged";
    case Verdict::max_iter: return "max_iter";
    case Verdict::oscillating: return "oscillating";
    case Verdict::degenerate: return "degenerate";
  }
  return "unknown";
}

namespace {

void require_composite(const DensityMatrix& rho, const BipartiteSystem& sys, const char* who) {
  if (rho.dim() != sys.composite_dim()) {
    throw DimensionMismatch(std::string(who) + ": state of dimension " +
                            std::to_string(rho.dim()) + " vs composite dimension " +
                            std::to_string(sys.composite_dim()));
  }
}

double product_error(const ComplexMatrix& rho, const ComplexMatrix& a, const ComplexMatrix& b) {
  return max_abs_diff(rho, kron(a, b));
}

// Hermitized, unit-trace version of the conditioned numerator.
ComplexMatrix normalized(const ConditionedTerms& t) {
  ComplexMatrix h = hermitize(t.numerator);
  const double tr = h.trace().real();
  return (1.0 / tr) * std::move(h);
}

ConditionedTerms checked_terms(const ComplexMatrix& rho, const BipartiteSystem& sys,
                               const ComplexMatrix& sigma, Side given,
                               std::vector<std::string>* warnings) {
  ConditionedTerms t = conditioned_terms(rho, sys, sigma, given);
  const double overlap = std::abs(t.overlap);
  if (overlap < kDegenerateOverlap) {
    std::ostringstream os;
    os << "conditioning state on " << to_string(given) << " has overlap " << overlap
       << " with the support of rho";
    throw DegenerateOverlap(os.str());
  }
  if (overlap < kNearDegenerateOverlap && warnings != nullptr) {
    std::ostringstream os;
    os << "near-degenerate overlap " << overlap << " conditioning on " << to_string(given);
    if (std::find(warnings->begin(), warnings->end(), os.str()) == warnings->end())
      warnings->push_back(os.str());
  }
  return t;
}

}  // namespace

ReductionResult neumann_reduce(const DensityMatrix& rho, const BipartiteSystem& sys) {
  require_composite(rho, sys, "neumann_reduce");
  ComplexMatrix a = partial_trace(rho.matrix(), sys, Side::beta);
  ComplexMatrix b = partial_trace(rho.matrix(), sys, Side::alpha);
  const double err = product_error(rho.matrix(), a, b);
  return ReductionResult{DensityMatrix(std::move(a), Validation::relaxed),
                         DensityMatrix(std::move(b), Validation::relaxed), Method::neumann, err,
                         {}};
}

ComplexMatrix replacement_operator(const DensityMatrix& rho, const BipartiteSystem& sys,
                                   Side observed) {
  require_composite(rho, sys, "replacement_operator");
  const ComplexMatrix reduced = partial_trace(rho.matrix(), sys, other(observed));
  const ComplexMatrix mixed = minimum_information_state(sys.dim(other(observed))).matrix();
  return observed == Side::alpha ? kron(reduced, mixed) : kron(mixed, reduced);
}

ConditionedTerms conditioned_terms(const ComplexMatrix& rho, const BipartiteSystem& sys,
                                   const ComplexMatrix& sigma, Side given_side) {
  const std::size_t n = sys.composite_dim();
  if (rho.rows() != n || rho.cols() != n) {
    throw DimensionMismatch("conditioned reduction: state does not match composite dimension");
  }
  const std::size_t dg = sys.dim(given_side);
  if (sigma.rows() != dg || sigma.cols() != dg) {
    throw DimensionMismatch(std::string("conditioned reduction: conditioning state on ") +
                            to_string(given_side) + " must be " + std::to_string(dg) + "x" +
                            std::to_string(dg));
  }
  const std::size_t na = sys.dim_alpha();
  const std::size_t nb = sys.dim_beta();
  ConditionedTerms t;
  if (given_side == Side::beta) {
    // [Sp_beta rho (1 (x) sigma)]_ij = sum_kl rho_(ik),(jl) sigma_lk
    t.numerator = ComplexMatrix(na, na);
    for (std::size_t i = 0; i < na; ++i)
      for (std::size_t j = 0; j < na; ++j) {
        complex acc = 0.0;
        for (std::size_t k = 0; k < nb; ++k)
          for (std::size_t l = 0; l < nb; ++l)
            acc += rho(sys.index(i, k), sys.index(j, l)) * sigma(l, k);
        t.numerator(i, j) = acc;
      }
  } else {
    // [Sp_alpha rho (sigma (x) 1)]_kl = sum_ij rho_(ik),(jl) sigma_ji
    t.numerator = ComplexMatrix(nb, nb);
    for (std::size_t k = 0; k < nb; ++k)
      for (std::size_t l = 0; l < nb; ++l) {
        complex acc = 0.0;
        for (std::size_t i = 0; i < na; ++i)
          for (std::size_t j = 0; j < na; ++j)
            acc += rho(sys.index(i, k), sys.index(j, l)) * sigma(j, i);
        t.numerator(k, l) = acc;
      }
  }
  t.overlap = t.numerator.trace();
  return t;
}

DensityMatrix conditioned_reduce(const DensityMatrix& rho, const BipartiteSystem& sys,
                                 const DensityMatrix& sigma, Side given_side) {
  require_composite(rho, sys, "conditioned_reduce");
  const ConditionedTerms t =
      checked_terms(rho.matrix(), sys, sigma.matrix(), given_side, nullptr);
  return DensityMatrix(normalized(t), Validation::relaxed);
}

ReductionResult projective_reduce(const DensityMatrix& rho, const BipartiteSystem& sys,
                                  std::size_t level, Side given_side) {
  require_composite(rho, sys, "projective_reduce");
  DensityMatrix projector = projector_state(sys.dim(given_side), level);
  std::vector<std::string> warnings;
  const ConditionedTerms t =
      checked_terms(rho.matrix(), sys, projector.matrix(), given_side, &warnings);
  DensityMatrix reduced(normalized(t), Validation::relaxed);
  const bool alpha_reduced = given_side == Side::beta;
  const ComplexMatrix& a = alpha_reduced ? reduced.matrix() : projector.matrix();
  const ComplexMatrix& b = alpha_reduced ? projector.matrix() : reduced.matrix();
  const double err = product_error(rho.matrix(), a, b);
  if (alpha_reduced) {
    return ReductionResult{std::move(reduced), std::move(projector), Method::projective, err,
                           std::move(warnings)};
  }
  return ReductionResult{std::move(projector), std::move(reduced), Method::projective, err,
                         std::move(warnings)};
}

IterationReport correlated_reduce(const DensityMatrix& rho, const BipartiteSystem& sys,
                                  const CorrelatedOptions& options) {
  require_composite(rho, sys, "correlated_reduce");
  if (options.max_iter == 0) throw Error("correlated_reduce: max_iter must be >= 1");
  if (!(options.tol > 0.0)) throw Error("correlated_reduce: tol must be > 0");

  ComplexMatrix alpha;
  ComplexMatrix beta;
  if (const auto* seeded = std::get_if<ReductionResult>(&options.seed)) {
    if (!seeded->rho_beta) throw Error("correlated_reduce: seed needs both reduced states");
    alpha = seeded->rho_alpha.matrix();
    beta = seeded->rho_beta->matrix();
    if (alpha.rows() != sys.dim_alpha() || beta.rows() != sys.dim_beta())
      throw DimensionMismatch("correlated_reduce: seed does not match subsystem dimensions");
  } else {
    alpha = partial_trace(rho.matrix(), sys, Side::beta);
    beta = partial_trace(rho.matrix(), sys, Side::alpha);
  }

  IterationReport report{0, Verdict::max_iter, {},
                         ReductionResult{DensityMatrix(ComplexMatrix::identity(1)), std::nullopt,
                                         Method::correlated, 0.0, {}}};
  std::vector<std::string> warnings;
  std::optional<ComplexMatrix> alpha_prev2;
  std::optional<ComplexMatrix> beta_prev2;

  for (std::size_t n = 1; n <= options.max_iter; ++n) {
    ComplexMatrix beta_next;
    ComplexMatrix alpha_next;
    if (options.scheme == UpdateScheme::gauss_seidel) {
      beta_next = normalized(checked_terms(rho.matrix(), sys, alpha, Side::alpha, &warnings));
      alpha_next = normalized(checked_terms(rho.matrix(), sys, beta_next, Side::beta, &warnings));
    } else {
      beta_next = normalized(checked_terms(rho.matrix(), sys, alpha, Side::alpha, &warnings));
      alpha_next = normalized(checked_terms(rho.matrix(), sys, beta, Side::beta, &warnings));
    }
    const double residual =
        std::max(max_abs_diff(alpha_next, alpha), max_abs_diff(beta_next, beta));
    const double previous_residual =
        report.residual_history.empty() ? -1.0 : report.residual_history.back();
    report.residual_history.push_back(residual);
    report.iterations = n;

    if (residual < options.tol) {
      report.verdict = Verdict::converged;
    } else if (alpha_prev2 && std::abs(residual - previous_residual) < options.tol &&
               max_abs_diff(alpha_next, *alpha_prev2) < options.tol &&
               max_abs_diff(beta_next, *beta_prev2) < options.tol) {
      report.verdict = Verdict::oscillating;
    }
    alpha_prev2 = std::move(alpha);
    beta_prev2 = std::move(beta);
    alpha = std::move(alpha_next);
    beta = std::move(beta_next);
    if (report.verdict != Verdict::max_iter) break;
  }

  const double err = product_error(rho.matrix(), alpha, beta);
  report.final = ReductionResult{DensityMatrix(std::move(alpha), Validation::relaxed),
                                 DensityMatrix(std::move(beta), Validation::relaxed),
                                 Method::correlated, err, std::move(warnings)};
  return report;
}

complex mean_value(const DensityMatrix& rho_sub, const Observable& a) {
  if (rho_sub.dim() != a.dim()) {
    throw DimensionMismatch("mean_value: state of dimension " + std::to_string(rho_sub.dim()) +
                            " vs observable of dimension " + std::to_string(a.dim()));
  }
  const ComplexMatrix& r = rho_sub.matrix();
  const ComplexMatrix& m = a.matrix();
  complex acc = 0.0;
  for (std::size_t i = 0; i < r.rows(); ++i)
    for (std::size_t k = 0; k < r.cols(); ++k) acc += r(i, k) * m(k, i);
  return acc;
}

void CorrelatorBreakdown::require_factorized() const {
  if (!factorized())
    throw ZeroNeumannMean("correlator: a von Neumann mean vanishes; factorized forms undefined");
}

CorrelatorBreakdown correlator(const DensityMatrix& rho, const BipartiteSystem& sys,
                               const Observable& a, const Observable& b) {
  require_composite(rho, sys, "correlator");
  if (a.dim() != sys.dim_alpha() || b.dim() != sys.dim_beta())
    throw DimensionMismatch("correlator: observables do not match subsystem dimensions");
  const DensityMatrix state_a = state_from_observable(a);
  const DensityMatrix state_b = state_from_observable(b);

  CorrelatorBreakdown out;
  out.exact = (rho.matrix() * kron(a.matrix(), b.matrix())).trace();
  const ReductionResult neumann = neumann_reduce(rho, sys);
  out.mean_a_neumann = mean_value(neumann.rho_alpha, a).real();
  out.mean_b_neumann = mean_value(*neumann.rho_beta, b).real();

  const auto conditioned_mean = [&](const DensityMatrix& given, Side side,
                                    const Observable& obs) -> std::optional<double> {
    const ConditionedTerms t = conditioned_terms(rho.matrix(), sys, given.matrix(), side);
    if (std::abs(t.overlap) < kDegenerateOverlap) return std::nullopt;
    return mean_value(DensityMatrix(normalized(t), Validation::relaxed), obs).real();
  };
  out.mean_a_given_b = conditioned_mean(state_b, Side::beta, a);
  out.mean_b_given_a = conditioned_mean(state_a, Side::alpha, b);
  if (out.mean_a_given_b) out.form_given_b = *out.mean_a_given_b * out.mean_b_neumann;
  if (out.mean_b_given_a) out.form_given_a = out.mean_a_neumann * *out.mean_b_given_a;
  return out;
}

CorrelatedMeans correlated_mean_pair(const IterationReport& report, const Observable& a,
                                     const Observable& b) {
  if (report.verdict != Verdict::converged) {
    throw NotConverged(std::string("correlated_mean_pair: iteration verdict is ") +
                       to_string(report.verdict));
  }
  const double ma = mean_value(report.final.rho_alpha, a).real();
  const double mb = mean_value(*report.final.rho_beta, b).real();
  return CorrelatedMeans{ma, mb, ma * mb};
}

double correlated_gap(const DensityMatrix& rho, const BipartiteSystem& sys,
                      const IterationReport& report, const Observable& a, const Observable& b) {
  require_composite(rho, sys, "correlated_gap");
  const CorrelatedMeans means = correlated_mean_pair(report, a, b);
  const complex exact = (rho.matrix() * kron(a.matrix(), b.matrix())).trace();
  return means.product - exact.real();
}

}  // namespace corred
