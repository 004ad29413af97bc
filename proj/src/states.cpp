#include "corred/states.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "corred/errors.hpp"

namespace corred {

const char* to_string(Validation v) noexcept {
  return v == Validation::strict ? "strict" : "relaxed";
}

DensityMatrix::DensityMatrix(ComplexMatrix m, Validation level, double tol)
    : matrix_(std::move(m)), validation_(level) {
  if (!matrix_.is_square() || matrix_.empty()) {
    throw DimensionMismatch("DensityMatrix: matrix must be square and non-empty");
  }
  if (!is_hermitian(matrix_, tol)) throw InvalidState("DensityMatrix: not hermitian");
  const complex tr = matrix_.trace();
  if (std::abs(tr - 1.0) > tol) {
    throw InvalidState("DensityMatrix: trace " + std::to_string(tr.real()) + " != 1");
  }
  min_eigenvalue_ = hermitian_eig(matrix_, tol).eigenvalues.front();
  if (level == Validation::strict && min_eigenvalue_ < -tol) {
    throw InvalidState("DensityMatrix: negative eigenvalue " + std::to_string(min_eigenvalue_));
  }
}

double DensityMatrix::purity() const { return (matrix_ * matrix_).trace().real(); }

std::vector<double> DensityMatrix::populations() const {
  std::vector<double> p(dim());
  for (std::size_t i = 0; i < dim(); ++i) p[i] = matrix_(i, i).real();
  return p;
}

Observable::Observable(ComplexMatrix m, std::string label, double tol)
    : matrix_(std::move(m)), label_(std::move(label)) {
  if (!matrix_.is_square()) throw DimensionMismatch("Observable: matrix must be square");
  if (!is_hermitian(matrix_, tol)) throw NotHermitian("Observable: '" + label_ + "'");
}

DensityMatrix minimum_information_state(std::size_t dim) {
  if (dim == 0) throw DimensionMismatch("minimum_information_state: dim must be >= 1");
  return DensityMatrix((1.0 / static_cast<double>(dim)) * ComplexMatrix::identity(dim));
}

DensityMatrix thermal_state(const ComplexMatrix& h, double temperature) {
  if (!h.is_square()) throw DimensionMismatch("thermal_state: hamiltonian must be square");
  if (!is_hermitian(h)) throw NotHermitian("thermal_state: hamiltonian is not hermitian");
  if (std::isnan(temperature) || temperature <= 0.0) {
    throw NonPositiveTemperature("thermal_state: temperature must be > 0");
  }
  if (std::isinf(temperature)) return minimum_information_state(h.rows());
  const Spectrum s = hermitian_eig(h);
  // Shift by the ground energy so the largest Boltzmann factor is 1.
  const double e0 = s.eigenvalues.front();
  double z = 0.0;
  for (double e : s.eigenvalues) z += std::exp(-(e - e0) / temperature);
  ComplexMatrix rho = apply_spectral(
      s, [&](double e) { return complex{std::exp(-(e - e0) / temperature) / z, 0.0}; });
  return DensityMatrix(hermitize(rho));
}

DensityMatrix projector_state(std::size_t dim, std::size_t level) {
  if (level >= dim) {
    throw IndexOutOfRange("projector_state: level " + std::to_string(level) +
                          " outside dimension " + std::to_string(dim));
  }
  ComplexMatrix p(dim, dim);
  p(level, level) = 1.0;
  return DensityMatrix(std::move(p));
}

namespace {

// Pure state on the {|21>, |12>} subspace with the given 2x2 block.
ComplexMatrix inner_block_state(double p21, double p12, complex coherence) {
  ComplexMatrix m(4, 4);
  m(1, 1) = p21;
  m(2, 2) = p12;
  m(1, 2) = coherence;
  m(2, 1) = std::conj(coherence);
  return m;
}

}  // namespace

DensityMatrix epr_state() { return DensityMatrix(inner_block_state(0.5, 0.5, -0.5)); }

DensityMatrix triplet_state() { return DensityMatrix(inner_block_state(0.5, 0.5, 0.5)); }

DensityMatrix spin_pair_initial(double phi) {
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  return DensityMatrix(inner_block_state(c * c, s * s, -s * c));
}

DensityMatrix state_from_observable(const Observable& a, double tol) {
  const Spectrum s = hermitian_eig(a.matrix(), tol);
  if (s.eigenvalues.front() < -tol) {
    throw NotNonnegative("state_from_observable: '" + a.label() + "' has eigenvalue " +
                         std::to_string(s.eigenvalues.front()));
  }
  const double tr = a.matrix().trace().real();
  if (tr <= tol) throw ZeroTrace("state_from_observable: '" + a.label() + "' has zero trace");
  return DensityMatrix(hermitize((1.0 / tr) * a.matrix()));
}

}  // namespace corred
