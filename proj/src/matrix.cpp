#include "corred/matrix.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "corred/errors.hpp"

namespace corred {

namespace {

std::string shape(const ComplexMatrix& m) {
  std::ostringstream os;
  os << m.rows() << "x" << m.cols();
  return os.str();
}

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch(std::string(what) + ": " + shape(a) + " vs " + shape(b));
  }
}

Eigen::MatrixXcd to_eigen(const ComplexMatrix& m) {
  Eigen::MatrixXcd out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows_ * cols_) {
    throw DimensionMismatch("ComplexMatrix: " + std::to_string(entries_.size()) +
                            " entries for a " + std::to_string(rows_) + "x" +
                            std::to_string(cols_) + " matrix");
  }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<complex>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
  entries_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw DimensionMismatch("ComplexMatrix: ragged initializer");
    entries_.insert(entries_.end(), row.begin(), row.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
  return out;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const complex> diag) {
  ComplexMatrix out(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) out(i, i) = diag[i];
  return out;
}

ComplexMatrix ComplexMatrix::diagonal(std::initializer_list<complex> diag) {
  return diagonal(std::span<const complex>(diag.begin(), diag.size()));
}

ComplexMatrix ComplexMatrix::real_diagonal(std::span<const double> diag) {
  ComplexMatrix out(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) out(i, i) = diag[i];
  return out;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

complex ComplexMatrix::trace() const {
  if (!is_square()) throw DimensionMismatch("trace of non-square " + shape(*this));
  complex t = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

std::vector<complex> ComplexMatrix::diagonal_entries() const {
  std::vector<complex> d(std::min(rows_, cols_));
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = (*this)(i, i);
  return d;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "operator+");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += other.entries_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "operator-");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= other.entries_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(complex scale) {
  for (auto& e : entries_) e *= scale;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(complex s, ComplexMatrix a) { return a *= s; }
ComplexMatrix operator*(ComplexMatrix a, complex s) { return a *= s; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionMismatch("matrix product: " + shape(a) + " * " + shape(b));
  }
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const complex aik = a(i, k);
      if (aik == complex{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  const auto ea = a.entries();
  const auto eb = b.entries();
  for (std::size_t k = 0; k < ea.size(); ++k) m = std::max(m, std::abs(ea[k] - eb[k]));
  return m;
}

double max_abs(const ComplexMatrix& a) {
  double m = 0.0;
  for (const auto& e : a.entries()) m = std::max(m, std::abs(e));
  return m;
}

bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return max_abs_diff(a, b) <= tol;
}

double spectral_norm(const ComplexMatrix& a) {
  if (a.empty()) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(a));
  return svd.singularValues()(0);
}

bool is_hermitian(const ComplexMatrix& a, double tol) {
  if (!a.is_square()) return false;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i; j < a.cols(); ++j)
      if (std::abs(a(i, j) - std::conj(a(j, i))) > tol) return false;
  return true;
}

ComplexMatrix hermitize(const ComplexMatrix& a) {
  if (!a.is_square()) throw DimensionMismatch("hermitize of non-square " + shape(a));
  ComplexMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
  return out;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a * b - b * a;
}

const char* to_string(Side s) noexcept { return s == Side::alpha ? "alpha" : "beta"; }

BipartiteSystem::BipartiteSystem(std::size_t dim_alpha, std::size_t dim_beta)
    : dim_alpha_(dim_alpha), dim_beta_(dim_beta) {
  if (dim_alpha == 0 || dim_beta == 0) {
    throw DimensionMismatch("BipartiteSystem: subsystem dimensions must be >= 1");
  }
}

ComplexMatrix reorder_ascending(const ComplexMatrix& op, const BipartiteSystem& sys) {
  const std::size_t n = sys.composite_dim();
  if (op.rows() != n || op.cols() != n) {
    throw DimensionMismatch("reorder_ascending: operator " + shape(op) +
                            " vs composite dimension " + std::to_string(n));
  }
  const std::size_t na = sys.dim_alpha();
  const std::size_t nb = sys.dim_beta();
  auto flip = [&](std::size_t k) {
    return sys.index(na - 1 - k / nb, nb - 1 - k % nb);
  };
  ComplexMatrix out(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) out(flip(r), flip(c)) = op(r, c);
  return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t m = a.rows(), n = a.cols(), p = b.rows(), q = b.cols();
  ComplexMatrix out(m * p, n * q);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const complex aij = a(i, j);
      if (aij == complex{}) continue;
      for (std::size_t k = 0; k < p; ++k)
        for (std::size_t l = 0; l < q; ++l) out(i * p + k, j * q + l) = aij * b(k, l);
    }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, const BipartiteSystem& sys, Side over) {
  const std::size_t n = sys.composite_dim();
  if (rho.rows() != n || rho.cols() != n) {
    throw DimensionMismatch("partial_trace: operator " + shape(rho) +
                            " vs composite dimension " + std::to_string(n));
  }
  const std::size_t na = sys.dim_alpha();
  const std::size_t nb = sys.dim_beta();
  if (over == Side::beta) {
    ComplexMatrix out(na, na);
    for (std::size_t i = 0; i < na; ++i)
      for (std::size_t j = 0; j < na; ++j)
        for (std::size_t k = 0; k < nb; ++k) out(i, j) += rho(sys.index(i, k), sys.index(j, k));
    return out;
  }
  ComplexMatrix out(nb, nb);
  for (std::size_t k = 0; k < nb; ++k)
    for (std::size_t l = 0; l < nb; ++l)
      for (std::size_t i = 0; i < na; ++i) out(k, l) += rho(sys.index(i, k), sys.index(i, l));
  return out;
}

ComplexMatrix extend(const ComplexMatrix& op, const BipartiteSystem& sys, Side side) {
  const std::size_t d = sys.dim(side);
  if (op.rows() != d || op.cols() != d) {
    throw DimensionMismatch(std::string("extend: operator ") + shape(op) + " on side " +
                            to_string(side) + " of dimension " + std::to_string(d));
  }
  if (side == Side::alpha) return kron(op, ComplexMatrix::identity(sys.dim_beta()));
  return kron(ComplexMatrix::identity(sys.dim_alpha()), op);
}

ComplexMatrix Spectrum::reconstruct() const {
  return apply_spectral(*this, [](double x) { return complex{x, 0.0}; });
}

Spectrum hermitian_eig(const ComplexMatrix& h, double tol) {
  if (!h.is_square()) throw DimensionMismatch("hermitian_eig of non-square " + shape(h));
  if (!is_hermitian(h, tol)) throw NotHermitian("hermitian_eig: input is not hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(to_eigen(hermitize(h)));
  if (solver.info() != Eigen::Success) throw Error("hermitian_eig: eigensolver failed");
  const std::size_t n = h.rows();
  Spectrum s;
  s.eigenvalues.resize(n);
  s.eigenvectors = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    s.eigenvalues[k] = solver.eigenvalues()(k);
    for (std::size_t i = 0; i < n; ++i) s.eigenvectors(i, k) = solver.eigenvectors()(i, k);
  }
  return s;
}

ComplexMatrix evolve_operator(const ComplexMatrix& h, double t, double hbar, double tol) {
  const Spectrum s = hermitian_eig(h, tol);
  const double rate = t / hbar;
  return apply_spectral(s, [rate](double e) { return std::polar(1.0, -e * rate); });
}

}  // namespace corred
