#pragma once

// Random generators and independent reference computations for the tests.
// Nothing here calls into the library's numerical routines.

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "corred/matrix.hpp"
#include "corred/states.hpp"

namespace corred::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  double normal() { return normal_(engine_); }
  complex cnormal() { return {normal(), normal()}; }
  std::size_t index(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(engine_);
  }

  ComplexMatrix ginibre(std::size_t rows, std::size_t cols) {
    ComplexMatrix g(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) g(r, c) = cnormal();
    return g;
  }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

// Naive products, kept separate from the library's operator*.
inline ComplexMatrix naive_mul(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      complex s{};
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      out(i, j) = s;
    }
  return out;
}

inline ComplexMatrix naive_adjoint(const ComplexMatrix& a) {
  ComplexMatrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = std::conj(a(i, j));
  return out;
}

inline complex naive_trace(const ComplexMatrix& a) {
  complex s{};
  for (std::size_t i = 0; i < a.rows(); ++i) s += a(i, i);
  return s;
}

inline double max_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

/// G G^dagger / Sp(G G^dagger), full rank with probability one.
inline ComplexMatrix random_density_matrix(Rng& rng, std::size_t n) {
  const ComplexMatrix g = rng.ginibre(n, n);
  ComplexMatrix rho = naive_mul(g, naive_adjoint(g));
  const complex tr = naive_trace(rho);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) rho(i, j) /= tr;
  return rho;
}

inline DensityMatrix random_density(Rng& rng, std::size_t n) {
  return DensityMatrix(random_density_matrix(rng, n));
}

inline ComplexMatrix random_hermitian(Rng& rng, std::size_t n) {
  const ComplexMatrix g = rng.ginibre(n, n);
  ComplexMatrix h(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) h(i, j) = 0.5 * (g(i, j) + std::conj(g(j, i)));
  return h;
}

/// Positive definite, so its mean in any state is strictly positive.
inline ComplexMatrix random_nonnegative(Rng& rng, std::size_t n) {
  const ComplexMatrix g = rng.ginibre(n, n);
  ComplexMatrix a = naive_mul(g, naive_adjoint(g));
  for (std::size_t i = 0; i < n; ++i) a(i, i) += 0.1;
  return a;
}

inline ComplexMatrix naive_kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

/// Sp_beta by explicit summation over the beta index.
inline ComplexMatrix trace_out_beta(const ComplexMatrix& rho, std::size_t na, std::size_t nb) {
  ComplexMatrix out(na, na);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < na; ++j)
      for (std::size_t k = 0; k < nb; ++k) out(i, j) += rho(i * nb + k, j * nb + k);
  return out;
}

inline ComplexMatrix trace_out_alpha(const ComplexMatrix& rho, std::size_t na, std::size_t nb) {
  ComplexMatrix out(nb, nb);
  for (std::size_t k = 0; k < nb; ++k)
    for (std::size_t l = 0; l < nb; ++l)
      for (std::size_t i = 0; i < na; ++i) out(k, l) += rho(i * nb + k, i * nb + l);
  return out;
}

/// exp(-i t H) by scaling and squaring of a truncated Taylor series.
inline ComplexMatrix expm_oracle(const ComplexMatrix& h, double t) {
  const std::size_t n = h.rows();
  ComplexMatrix a(n, n);
  double norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      a(i, j) = complex(0.0, -t) * h(i, j);
      row += std::abs(a(i, j));
    }
    norm = std::max(norm, row);
  }
  int squarings = 0;
  while (norm > 0.25) {
    norm /= 2.0;
    ++squarings;
  }
  const double scale = std::ldexp(1.0, -squarings);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) *= scale;

  ComplexMatrix result = ComplexMatrix::identity(n);
  ComplexMatrix term = ComplexMatrix::identity(n);
  for (int k = 1; k <= 24; ++k) {
    term = naive_mul(term, a);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        term(i, j) /= static_cast<double>(k);
        result(i, j) += term(i, j);
      }
  }
  for (int s = 0; s < squarings; ++s) result = naive_mul(result, result);
  return result;
}

// Two-level subsystems. Matrix positions: 22 -> 0, 21 -> 1, 12 -> 2, 11 -> 3
// in the composite space and 2 -> 0, 1 -> 1 in each factor.
inline complex rho_at(const ComplexMatrix& rho, int a, int b) {
  auto pos = [](int label) {
    switch (label) {
      case 22: return 0;
      case 21: return 1;
      case 12: return 2;
      default: return 3;
    }
  };
  return rho(pos(a), pos(b));
}

/// Unnormalized alpha reduction conditioned on a 2x2 beta state, entry by
/// entry as written out for the 2x2 (x) 2x2 case.
inline ComplexMatrix alpha_given_beta_2x2(const ComplexMatrix& r, const ComplexMatrix& b) {
  const complex b22 = b(0, 0), b21 = b(0, 1), b12 = b(1, 0), b11 = b(1, 1);
  auto p = [&](int x, int y) { return rho_at(r, x, y); };
  ComplexMatrix out(2, 2);
  out(0, 0) = p(22, 22) * b22 + p(21, 21) * b11 + p(22, 21) * b12 + p(21, 22) * b21;
  out(0, 1) = p(22, 12) * b22 + p(21, 11) * b11 + p(22, 11) * b12 + p(21, 12) * b21;
  out(1, 0) = p(12, 22) * b22 + p(11, 21) * b11 + p(12, 21) * b12 + p(11, 22) * b21;
  out(1, 1) = p(12, 12) * b22 + p(11, 11) * b11 + p(12, 11) * b12 + p(11, 12) * b21;
  return out;
}

/// Mirror of alpha_given_beta_2x2. The (2,2) entry reads rho_{21,21} alpha_22
/// (the symmetric counterpart of the (1,1) entry).
inline ComplexMatrix beta_given_alpha_2x2(const ComplexMatrix& r, const ComplexMatrix& a) {
  const complex a22 = a(0, 0), a21 = a(0, 1), a12 = a(1, 0), a11 = a(1, 1);
  auto p = [&](int x, int y) { return rho_at(r, x, y); };
  ComplexMatrix out(2, 2);
  out(0, 0) = p(22, 22) * a22 + p(12, 12) * a11 + p(22, 12) * a12 + p(12, 22) * a21;
  out(0, 1) = p(22, 21) * a22 + p(12, 11) * a11 + p(22, 11) * a12 + p(12, 21) * a21;
  out(1, 0) = p(21, 22) * a22 + p(11, 12) * a11 + p(21, 12) * a12 + p(11, 22) * a21;
  out(1, 1) = p(21, 21) * a22 + p(11, 11) * a11 + p(21, 11) * a12 + p(11, 21) * a21;
  return out;
}

inline double pi() { return std::acos(-1.0); }

}  // namespace corred::testing
