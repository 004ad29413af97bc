#pragma once

// Dense complex linear algebra for bipartite systems.
//
// Composite basis ordering: the pair (i, i') of subsystem levels maps to
// i * dim_beta + i'. For two-level subsystems level index 0 is the upper
// state |2> and index 1 the lower state |1>, so a 2x2 (x) 2x2 operator is laid
// out in the order |22>, |21>, |12>, |11>.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace corred {

using complex = std::complex<double>;

/// Default absolute per-entry tolerance for comparisons and validation.
inline constexpr double kDefaultTolerance = 1e-10;

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  /// Zero matrix.
  ComplexMatrix(std::size_t rows, std::size_t cols);
  /// Row-major entries; throws DimensionMismatch if entries.size() != rows*cols.
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<complex> entries);
  /// Nested rows, e.g. {{1, 0}, {0, 1}}.
  ComplexMatrix(std::initializer_list<std::initializer_list<complex>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const complex> diag);
  static ComplexMatrix diagonal(std::initializer_list<complex> diag);
  static ComplexMatrix real_diagonal(std::span<const double> diag);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return entries_.empty(); }

  complex& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const complex& operator()(std::size_t r, std::size_t c) const {
    return entries_[r * cols_ + c];
  }

  std::span<const complex> entries() const noexcept { return entries_; }

  ComplexMatrix adjoint() const;
  complex trace() const;
  std::vector<complex> diagonal_entries() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(complex scale);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<complex> entries_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(complex s, ComplexMatrix a);
ComplexMatrix operator*(ComplexMatrix a, complex s);

/// max |a_ij - b_ij|; throws DimensionMismatch on shape mismatch.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
double max_abs(const ComplexMatrix& a);
bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b,
                  double tol = kDefaultTolerance);
/// Largest singular value.
double spectral_norm(const ComplexMatrix& a);
bool is_hermitian(const ComplexMatrix& a, double tol = kDefaultTolerance);
/// (X + X^dagger) / 2.
ComplexMatrix hermitize(const ComplexMatrix& a);
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

enum class Side { alpha, beta };

constexpr Side other(Side s) noexcept { return s == Side::alpha ? Side::beta : Side::alpha; }
const char* to_string(Side s) noexcept;

/// Dimension pair (N_alpha, N_beta) of a two-part system.
class BipartiteSystem {
 public:
  BipartiteSystem(std::size_t dim_alpha, std::size_t dim_beta);

  std::size_t dim_alpha() const noexcept { return dim_alpha_; }
  std::size_t dim_beta() const noexcept { return dim_beta_; }
  std::size_t dim(Side s) const noexcept { return s == Side::alpha ? dim_alpha_ : dim_beta_; }
  std::size_t composite_dim() const noexcept { return dim_alpha_ * dim_beta_; }

  /// Composite index of the basis state with alpha level i and beta level j.
  std::size_t index(std::size_t i, std::size_t j) const noexcept { return i * dim_beta_ + j; }

  friend bool operator==(const BipartiteSystem&, const BipartiteSystem&) = default;

 private:
  std::size_t dim_alpha_;
  std::size_t dim_beta_;
};

/// Maps a composite operator between the descending-energy layout used here
/// and the ascending layout common in external data. The map is an involution.
ComplexMatrix reorder_ascending(const ComplexMatrix& op, const BipartiteSystem& sys);

/// Kronecker product: block (i, j) of the result equals a(i, j) * b.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Sp_beta rho (over == beta) or Sp_alpha rho (over == alpha).
ComplexMatrix partial_trace(const ComplexMatrix& rho, const BipartiteSystem& sys, Side over);

/// A (x) 1_beta for side == alpha, 1_alpha (x) B for side == beta.
ComplexMatrix extend(const ComplexMatrix& op, const BipartiteSystem& sys, Side side);

struct Spectrum {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // orthonormal columns

  ComplexMatrix reconstruct() const;
};

Spectrum hermitian_eig(const ComplexMatrix& h, double tol = kDefaultTolerance);

/// Applies f to the eigenvalues of a hermitian matrix: V f(Lambda) V^dagger.
template <typename F>
ComplexMatrix apply_spectral(const Spectrum& s, F&& f) {
  const std::size_t n = s.eigenvalues.size();
  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const complex fk = f(s.eigenvalues[k]);
    for (std::size_t i = 0; i < n; ++i) {
      const complex vik = s.eigenvectors(i, k) * fk;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += vik * std::conj(s.eigenvectors(j, k));
    }
  }
  return out;
}

/// U(t) = exp(-i t H / hbar).
ComplexMatrix evolve_operator(const ComplexMatrix& h, double t, double hbar = 1.0,
                              double tol = kDefaultTolerance);

}  // namespace corred
