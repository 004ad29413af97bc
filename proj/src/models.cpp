#include "corred/models.hpp"

#include <cmath>

namespace corred {

namespace {

constexpr complex kI{0.0, 1.0};

// Forward evolution uses the upper signs of each +-/-+ pair.
double sign_of(Direction dir) { return dir == Direction::forward ? 1.0 : -1.0; }

// sin(x t) / x with the x -> 0 limit.
double sin_over(double x, double t) {
  return std::abs(x) < 1e-300 ? t : std::sin(x * t) / x;
}

}  // namespace

ComplexMatrix spin_pair_hamiltonian(const SpinPairParams& p) {
  const double w = p.omega, j = p.j_coupling, c = p.c_coupling, d = p.d_coupling;
  return ComplexMatrix{{w + j, 0.0, 0.0, d},
                       {0.0, -j, c, 0.0},
                       {0.0, c, -j, 0.0},
                       {d, 0.0, 0.0, -w + j}};
}

double spin_pair_outer_frequency(const SpinPairParams& p) {
  return std::hypot(p.omega, p.d_coupling);
}

ComplexMatrix spin_pair_evolution(const SpinPairParams& p, double t, Direction dir) {
  const double s = sign_of(dir);
  const double big_omega = spin_pair_outer_frequency(p);
  const double cos_outer = std::cos(big_omega * t);
  const double sin_outer = sin_over(big_omega, t);  // S(Omega t) / Omega
  const complex outer_phase = std::polar(1.0, -s * p.j_coupling * t);
  const complex inner_phase = std::polar(1.0, s * p.j_coupling * t);
  const double cc = std::cos(p.c_coupling * t);
  const double sc = std::sin(p.c_coupling * t);

  ComplexMatrix u(4, 4);
  u(0, 0) = outer_phase * (cos_outer - s * kI * p.omega * sin_outer);
  u(3, 3) = outer_phase * (cos_outer + s * kI * p.omega * sin_outer);
  u(0, 3) = -s * kI * p.d_coupling * outer_phase * sin_outer;
  u(3, 0) = u(0, 3);
  u(1, 1) = inner_phase * cc;
  u(2, 2) = inner_phase * cc;
  u(1, 2) = -s * kI * inner_phase * sc;
  u(2, 1) = u(1, 2);
  return u;
}

DensityMatrix spin_pair_density(const SpinPairParams& p, double phi, double t) {
  const ComplexMatrix u = spin_pair_evolution(p, t, Direction::forward);
  const ComplexMatrix u_dag = spin_pair_evolution(p, t, Direction::adjoint);
  return DensityMatrix(hermitize(u * spin_pair_initial(phi).matrix() * u_dag));
}

double spin_pair_correlation(double phi, double c, double t) {
  return std::cos(2.0 * phi) * std::cos(2.0 * c * t);
}

BipartiteSystem jcm_system(const JcmParams& p) { return BipartiteSystem(2, p.n_max + 1); }

ComplexMatrix annihilation(std::size_t n_max) {
  ComplexMatrix a(n_max + 1, n_max + 1);
  for (std::size_t n = 1; n <= n_max; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

ComplexMatrix jcm_hamiltonian(const JcmParams& p) {
  const BipartiteSystem sys = jcm_system(p);
  const std::size_t nf = p.n_max + 1;
  const ComplexMatrix a = annihilation(p.n_max);
  const ComplexMatrix a_dag = a.adjoint();

  ComplexMatrix p22(2, 2), p11(2, 2), p21(2, 2), p12(2, 2);
  p22(kUpper, kUpper) = 1.0;
  p11(kLower, kLower) = 1.0;
  p21(kUpper, kLower) = 1.0;
  p12(kLower, kUpper) = 1.0;

  // (a^+ a + a a^+) / 2 = n + 1/2 on the untruncated space; evaluating it as a
  // function of the number operator keeps the top Fock level at its true
  // energy instead of the truncation artefact of a a^+.
  ComplexMatrix field(nf, nf);
  for (std::size_t n = 0; n < nf; ++n) field(n, n) = static_cast<double>(n) + 0.5;

  ComplexMatrix h = (0.5 * p.omega) * extend(p22 - p11, sys, Side::alpha);
  h += p.omega * extend(field, sys, Side::beta);
  h += (0.5 * p.rabi * kI) * (kron(p21, a) - kron(p12, a_dag));
  return h;
}

ComplexMatrix jcm_evolution(const JcmParams& p, double t, Direction dir) {
  const BipartiteSystem sys = jcm_system(p);
  const std::size_t n_max = p.n_max;
  const double s = sign_of(dir);
  const double half = 0.5 * p.rabi * t;
  const auto root = [](std::size_t n) { return std::sqrt(static_cast<double>(n)); };
  // exp(-+ i omega t k) for the number-operator eigenvalue k.
  const auto phase = [&](std::size_t k) {
    return std::polar(1.0, -s * p.omega * t * static_cast<double>(k));
  };

  ComplexMatrix u(sys.composite_dim(), sys.composite_dim());
  for (std::size_t n = 0; n <= n_max; ++n) {
    // P22 exp(-+ i w t a a^+) cos(Omega t/2 sqrt(a a^+)), with a a^+ |n> = (n+1)|n>.
    u(sys.index(kUpper, n), sys.index(kUpper, n)) = phase(n + 1) * std::cos(half * root(n + 1));
    // P11 exp(-+ i w t a^+ a) cos(Omega t/2 sqrt(a^+ a)).
    u(sys.index(kLower, n), sys.index(kLower, n)) = phase(n) * std::cos(half * root(n));
    // +- P21 exp(-+ i w t a a^+) exp(i phi) sin(Omega t/2 sqrt(a^+ a)):
    // |1,n> -> |2,n-1>, and a a^+ |n-1> = n |n-1>.
    if (n >= 1) {
      u(sys.index(kUpper, n - 1), sys.index(kLower, n)) =
          s * phase(n) * std::sin(half * root(n));
    }
    // -+ P12 exp(-+ i w t a^+ a) exp(-i phi) sin(Omega t/2 sqrt(a a^+)):
    // |2,n> -> |1,n+1>; exp(-i phi) annihilates the top Fock state.
    if (n < n_max) {
      u(sys.index(kLower, n + 1), sys.index(kUpper, n)) =
          -s * phase(n + 1) * std::sin(half * root(n + 1));
    }
  }
  return u;
}

DensityMatrix jcm_vacuum_density(const JcmParams& p, double t) {
  const BipartiteSystem sys = jcm_system(p);
  ComplexMatrix rho0(sys.composite_dim(), sys.composite_dim());
  rho0(sys.index(kUpper, 0), sys.index(kUpper, 0)) = 1.0;
  const ComplexMatrix u = jcm_evolution(p, t, Direction::forward);
  const ComplexMatrix u_dag = jcm_evolution(p, t, Direction::adjoint);
  return DensityMatrix(hermitize(u * rho0 * u_dag));
}

JcmStep jcm_correlated_limit(const JcmParams& p, double t) {
  // c^2 - s^2 = cos(Omega t) decides which population dominates.
  const double dominance = std::cos(p.rabi * t);
  if (std::abs(dominance) < 1e-12) return JcmStep{0.5, 0.5, true};
  return dominance > 0.0 ? JcmStep{1.0, 0.0, false} : JcmStep{0.0, 1.0, false};
}

}  // namespace corred
