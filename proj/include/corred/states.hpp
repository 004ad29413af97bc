#pragma once

#include <cstddef>
#include <limits>
#include <string>

#include "corred/matrix.hpp"

namespace corred {

/// strict: min eigenvalue >= -tol is enforced.
/// relaxed: negativity is recorded in min_eigenvalue() but permitted.
enum class Validation { strict, relaxed };

const char* to_string(Validation v) noexcept;

/// Hermitian, unit-trace state operator. Units: hbar = k_B = 1 throughout.
class DensityMatrix {
 public:
  /// Validates and stores m; throws InvalidState (or DimensionMismatch for a
  /// non-square input).
  explicit DensityMatrix(ComplexMatrix m, Validation level = Validation::strict,
                         double tol = kDefaultTolerance);

  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  std::size_t dim() const noexcept { return matrix_.rows(); }
  Validation validation() const noexcept { return validation_; }
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }
  /// Sp rho^2.
  double purity() const;
  std::vector<double> populations() const;

 private:
  ComplexMatrix matrix_;
  Validation validation_;
  double min_eigenvalue_;
};

/// Hermitian operator of an observable of one subsystem.
class Observable {
 public:
  explicit Observable(ComplexMatrix m, std::string label = {}, double tol = kDefaultTolerance);

  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  const std::string& label() const noexcept { return label_; }
  std::size_t dim() const noexcept { return matrix_.rows(); }

 private:
  ComplexMatrix matrix_;
  std::string label_;
};

/// Level indices for two-level subsystems in the descending-energy layout.
inline constexpr std::size_t kUpper = 0;  // |2>
inline constexpr std::size_t kLower = 1;  // |1>

/// (1/N) 1: the steady state of minimum information.
DensityMatrix minimum_information_state(std::size_t dim);

/// exp(-H/T) / Sp exp(-H/T); an infinite temperature yields the
/// minimum-information state.
DensityMatrix thermal_state(const ComplexMatrix& h,
                            double temperature = std::numeric_limits<double>::infinity());

/// |level><level|.
DensityMatrix projector_state(std::size_t dim, std::size_t level);

/// Singlet-like pair: 1/2 on (21,21) and (12,12), -1/2 on the coherences.
DensityMatrix epr_state();
/// Same as epr_state with +1/2 coherences.
DensityMatrix triplet_state();
/// cos^2(phi) on (21,21), sin^2(phi) on (12,12), -sin(phi)cos(phi) coherences.
DensityMatrix spin_pair_initial(double phi);

/// A / Sp A for a nonnegative observable.
DensityMatrix state_from_observable(const Observable& a, double tol = kDefaultTolerance);

}  // namespace corred
