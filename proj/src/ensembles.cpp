#include "corred/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

#include "corred/errors.hpp"
#include "corred/models.hpp"

namespace corred {

namespace {

constexpr double kPi = std::numbers::pi;
// Terms lighter than this are dropped from piecewise decompositions.
constexpr double kWeightFloor = 1e-15;
// |cos 2phi| below this means |tan phi| == 1.
constexpr double kUnitTangent = 1e-12;

// Two-level factor with populations {1, 0} (upper) or {0, 1} and coherence
// exp(i phase)/sqrt(2) in the (|2>, |1>) slot.
ComplexMatrix phased_factor(bool upper, double phase) {
  const complex coh = std::polar(1.0 / std::numbers::sqrt2, phase);
  return ComplexMatrix{{upper ? 1.0 : 0.0, coh}, {std::conj(coh), upper ? 0.0 : 1.0}};
}

ComplexMatrix level_projector(std::size_t level) { return projector_state(2, level).matrix(); }

std::vector<EnsembleTerm> without_empty(std::vector<EnsembleTerm> terms) {
  std::erase_if(terms, [](const EnsembleTerm& t) { return t.weight < kWeightFloor; });
  return terms;
}

}  // namespace

Ensemble::Ensemble(BipartiteSystem system, std::vector<EnsembleTerm> terms, std::string branch,
                   double tol)
    : system_(system), terms_(std::move(terms)), branch_(std::move(branch)) {
  if (terms_.empty()) throw InvalidState("Ensemble: no terms");
  double total = 0.0;
  for (const auto& t : terms_) {
    if (t.weight < -tol) throw InvalidState("Ensemble: negative weight");
    total += t.weight;
    const std::size_t na = system_.dim_alpha(), nb = system_.dim_beta();
    if (t.left.rows() != na || t.left.cols() != na || t.right.rows() != nb ||
        t.right.cols() != nb) {
      throw DimensionMismatch("Ensemble: term factors do not match subsystem dimensions");
    }
    if (std::abs(t.left.trace() - 1.0) > tol || std::abs(t.right.trace() - 1.0) > tol)
      throw InvalidState("Ensemble: term factor without unit trace");
  }
  if (std::abs(total - 1.0) > tol) {
    std::ostringstream os;
    os << "Ensemble: weights sum to " << total;
    throw InvalidState(os.str());
  }
}

ComplexMatrix assemble(const Ensemble& e) {
  const std::size_t n = e.system().composite_dim();
  ComplexMatrix out(n, n);
  for (const auto& t : e.terms()) out += t.weight * kron(t.left, t.right);
  return out;
}

Ensemble epr_decomposition(double theta) {
  return Ensemble(BipartiteSystem(2, 2),
                  {
                      {0.25, phased_factor(true, theta), phased_factor(false, theta + kPi)},
                      {0.25, phased_factor(true, theta + kPi), phased_factor(false, theta)},
                      {0.25, phased_factor(false, theta + kPi / 2),
                       phased_factor(true, theta + 3 * kPi / 2)},
                      {0.25, phased_factor(false, theta + 3 * kPi / 2),
                       phased_factor(true, theta + kPi / 2)},
                  },
                  "singlet");
}

Ensemble triplet_decomposition(double theta) {
  std::vector<EnsembleTerm> terms;
  const double shifts[] = {0.0, kPi / 2, kPi, 3 * kPi / 2};
  for (std::size_t k = 0; k < 4; ++k) {
    const bool left_upper = k % 2 == 0;
    const double phase = theta + shifts[k];
    terms.push_back({0.25, phased_factor(left_upper, phase), phased_factor(!left_upper, phase)});
  }
  return Ensemble(BipartiteSystem(2, 2), std::move(terms), "triplet");
}

Ensemble spin_pair_initial_decomposition(double phi, double theta) {
  const double cos2phi = std::cos(2.0 * phi);
  if (std::abs(cos2phi) < kUnitTangent) {
    return std::sin(2.0 * phi) > 0.0 ? epr_decomposition(theta) : triplet_decomposition(theta);
  }
  const double c2 = std::cos(phi) * std::cos(phi);
  const double s2 = std::sin(phi) * std::sin(phi);
  const ComplexMatrix up = level_projector(kUpper);
  const ComplexMatrix down = level_projector(kLower);
  // |tan phi| > 1  <=>  cos 2phi < 0.
  if (cos2phi < 0.0) {
    return Ensemble(BipartiteSystem(2, 2), without_empty({{c2, up, down}, {s2, down, up}}),
                    "|tan(phi)|>1");
  }
  return Ensemble(BipartiteSystem(2, 2), without_empty({{c2, down, up}, {s2, up, down}}),
                  "|tan(phi)|<1");
}

Ensemble spin_pair_reduced_decomposition(double phi, double c, double t, double theta) {
  if (std::abs(std::cos(2.0 * phi)) < kUnitTangent) {
    return spin_pair_initial_decomposition(phi, theta);
  }
  const double corr = spin_pair_correlation(phi, c, t);
  if (std::abs(corr) < 1e-12) {
    std::ostringstream os;
    os << "spin_pair_reduced_decomposition: C(phi, t) = 0 at phi=" << phi << ", t=" << t;
    throw TieUndefined(os.str());
  }
  const double p_half = 0.5 * (1.0 + corr);
  const double m_half = 0.5 * (1.0 - corr);
  const ComplexMatrix up = level_projector(kUpper);
  const ComplexMatrix down = level_projector(kLower);
  EnsembleTerm on_21{p_half, up, down};
  EnsembleTerm on_12{m_half, down, up};
  if (corr > 0.0) {
    return Ensemble(BipartiteSystem(2, 2), without_empty({on_21, on_12}), "C>0");
  }
  return Ensemble(BipartiteSystem(2, 2), without_empty({on_12, on_21}), "C<0");
}

VerificationReport verify_ensemble(const Ensemble& e, const DensityMatrix& target, double tol) {
  const BipartiteSystem& sys = e.system();
  if (target.dim() != sys.composite_dim()) {
    throw DimensionMismatch("verify_ensemble: target does not match ensemble dimensions");
  }
  const ComplexMatrix assembled = assemble(e);
  VerificationReport r;
  r.tol = tol;
  r.error_matrix = ComplexMatrix(sys.composite_dim(), sys.composite_dim());
  const std::size_t nb = sys.dim_beta();
  for (std::size_t row = 0; row < sys.composite_dim(); ++row)
    for (std::size_t col = 0; col < sys.composite_dim(); ++col) {
      const double err = std::abs(assembled(row, col) - target.matrix()(row, col));
      r.error_matrix(row, col) = err;
      const bool alpha_diag = row / nb == col / nb;
      const bool beta_diag = row % nb == col % nb;
      double& bucket = alpha_diag && beta_diag     ? r.diagonal_error
                       : !alpha_diag && !beta_diag ? r.coherence_error
                                                   : r.cross_error;
      bucket = std::max(bucket, err);
      r.max_error = std::max(r.max_error, err);
    }
  r.passed = r.max_error < tol;
  return r;
}

StatisticalAverages statistical_averages(const Ensemble& e, Side side, std::size_t level) {
  if (level >= e.system().dim(side)) {
    throw IndexOutOfRange("statistical_averages: level outside subsystem");
  }
  StatisticalAverages avg{0.0, 0.0};
  for (const auto& t : e.terms()) {
    const double x = (side == Side::alpha ? t.left : t.right)(level, level).real();
    avg.mixed += t.weight * x * (1.0 - x);
    avg.square += t.weight * x * x;
  }
  return avg;
}

}  // namespace corred
