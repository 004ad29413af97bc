#pragma once

// Exactly soluble two-part models with closed-form evolution operators.
// hbar = 1: energies are angular frequencies.

#include <cstddef>

#include "corred/matrix.hpp"
#include "corred/states.hpp"

namespace corred {

/// forward: U(t) = exp(-iHt); adjoint: U^dagger(t) = exp(+iHt).
enum class Direction { forward, adjoint };

/// Pair of identical spins-1/2 in a static field with a simple spin-spin
/// interaction. Weak coupling (omega > J, c, d) is the intended regime but is
/// not enforced.
struct SpinPairParams {
  double omega = 1.0;       // Zeeman frequency
  double j_coupling = 0.0;  // diagonal exchange shift J
  double c_coupling = 0.0;  // flip-flop coupling c within {|21>, |12>}
  double d_coupling = 0.0;  // double-flip coupling d within {|22>, |11>}
};

inline const BipartiteSystem kSpinPairSystem{2, 2};

ComplexMatrix spin_pair_hamiltonian(const SpinPairParams& p);

/// Frequency of the {|22>, |11>} block: sqrt(omega^2 + d^2).
double spin_pair_outer_frequency(const SpinPairParams& p);

/// Closed-form evolution operator of spin_pair_hamiltonian.
ComplexMatrix spin_pair_evolution(const SpinPairParams& p, double t,
                                  Direction dir = Direction::forward);

/// U(t) rho(0) U^dagger(t) with rho(0) = spin_pair_initial(phi).
DensityMatrix spin_pair_density(const SpinPairParams& p, double phi, double t);

/// C(phi, t) = cos(2 phi) cos(2 c t).
double spin_pair_correlation(double phi, double c, double t);

/// Resonant two-level atom coupled to one field mode, Fock space truncated
/// at n_max photons.
struct JcmParams {
  double omega = 1.0;  // atom and field frequency
  double rabi = 1.0;   // vacuum Rabi frequency Omega
  std::size_t n_max = 16;
};

/// Atom (alpha, levels |2>, |1>) times field (beta, photon numbers 0..n_max).
BipartiteSystem jcm_system(const JcmParams& p);

/// Lowering operator on photon numbers 0..n_max.
ComplexMatrix annihilation(std::size_t n_max);

ComplexMatrix jcm_hamiltonian(const JcmParams& p);

/// Closed-form evolution operator built from number-diagonal operator
/// functions and the phase operators exp(+-i phi). Exact on every dressed
/// block {|2,n>, |1,n+1>} with n < n_max; the |2,n_max> column loses the norm
/// that would flow to the truncated |1,n_max+1>.
ComplexMatrix jcm_evolution(const JcmParams& p, double t, Direction dir = Direction::forward);

/// Atom excited, field in vacuum at t = 0, propagated to t.
DensityMatrix jcm_vacuum_density(const JcmParams& p, double t);

struct JcmStep {
  double excited;  // C(t), probability of |2>
  double ground;   // S(t) = 1 - C(t)
  bool tie;        // t on a step boundary; excited == ground == 1/2
};

/// Limit of c^2n / (c^2n + s^2n) with c = cos(Omega t / 2), s = sin(Omega t / 2).
JcmStep jcm_correlated_limit(const JcmParams& p, double t);

}  // namespace corred
