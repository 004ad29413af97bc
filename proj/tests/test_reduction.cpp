#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "corred/errors.hpp"
#include "corred/models.hpp"
#include "corred/reduction.hpp"
#include "corred/states.hpp"
#include "support/support.hpp"

using namespace corred;
using corred::testing::Rng;

namespace {

const BipartiteSystem k22{2, 2};

DensityMatrix product(const ComplexMatrix& a, const ComplexMatrix& b) {
  return DensityMatrix(testing::naive_kron(a, b));
}

ComplexMatrix normalize(ComplexMatrix m) {
  const complex tr = testing::naive_trace(m);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) /= tr;
  return m;
}

}  // namespace

TEST_CASE("neumann_reduce") {
  Rng rng(2);
  const auto ra = testing::random_density_matrix(rng, 2);
  const auto rb = testing::random_density_matrix(rng, 3);
  const auto r = neumann_reduce(product(ra, rb), BipartiteSystem(2, 3));
  CHECK(max_abs_diff(r.rho_alpha.matrix(), ra) < 1e-14);
  CHECK(max_abs_diff(r.rho_beta->matrix(), rb) < 1e-14);
  CHECK(r.reconstruction_error < 1e-12);
  CHECK(r.method == Method::neumann);

  const auto e = neumann_reduce(epr_state(), k22);
  CHECK(max_abs_diff(e.rho_alpha.matrix(), 0.5 * ComplexMatrix::identity(2)) < 1e-15);
  CHECK(max_abs_diff(e.rho_beta->matrix(), 0.5 * ComplexMatrix::identity(2)) < 1e-15);
  CHECK(e.reconstruction_error == doctest::Approx(0.5));

  CHECK_THROWS_AS(neumann_reduce(epr_state(), BipartiteSystem(2, 3)), DimensionMismatch);
}

TEST_CASE("replacement_operator") {
  CHECK(max_abs_diff(replacement_operator(epr_state(), k22, Side::alpha),
                     0.25 * ComplexMatrix::identity(4)) < 1e-15);
  Rng rng(4);
  const auto ra = testing::random_density_matrix(rng, 2);
  const auto half = 0.5 * ComplexMatrix::identity(2);
  CHECK(max_abs_diff(replacement_operator(product(ra, half), k22, Side::alpha),
                     testing::naive_kron(ra, half)) < 1e-14);

  // block pattern of the alpha replacement
  const DensityMatrix rho(testing::random_density_matrix(rng, 4));
  const auto r = replacement_operator(rho, k22, Side::alpha);
  const auto& m = rho.matrix();
  auto p = [&](int a, int b) { return testing::rho_at(m, a, b); };
  const complex a22 = 0.5 * (p(22, 22) + p(21, 21));
  const complex a21 = 0.5 * (p(22, 12) + p(21, 11));
  const complex a12 = 0.5 * (p(12, 22) + p(11, 21));
  const complex a11 = 0.5 * (p(12, 12) + p(11, 11));
  const ComplexMatrix expected{{a22, 0, a21, 0}, {0, a22, 0, a21}, {a12, 0, a11, 0}, {0, a12, 0, a11}};
  CHECK(max_abs_diff(r, expected) < 1e-15);

  const auto rb = replacement_operator(rho, k22, Side::beta);
  const complex b22 = 0.5 * (p(22, 22) + p(12, 12));
  const complex b21 = 0.5 * (p(22, 21) + p(12, 11));
  const complex b12 = 0.5 * (p(21, 22) + p(11, 12));
  const complex b11 = 0.5 * (p(21, 21) + p(11, 11));
  const ComplexMatrix expected_b{{b22, b21, 0, 0}, {b12, b11, 0, 0}, {0, 0, b22, b21}, {0, 0, b12, b11}};
  CHECK(max_abs_diff(rb, expected_b) < 1e-15);
}

TEST_CASE("conditioned_reduce examples") {
  Rng rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t na = rng.index(1, 3), nb = rng.index(1, 3);
    const BipartiteSystem sys(na, nb);
    const auto rho = testing::random_density(rng, na * nb);
    const auto by_min = conditioned_reduce(rho, sys, minimum_information_state(nb), Side::beta);
    CHECK(max_abs_diff(by_min.matrix(), neumann_reduce(rho, sys).rho_alpha.matrix()) < 1e-12);
    const auto by_min_a = conditioned_reduce(rho, sys, minimum_information_state(na), Side::alpha);
    CHECK(max_abs_diff(by_min_a.matrix(), neumann_reduce(rho, sys).rho_beta->matrix()) < 1e-12);
  }

  const auto ra = testing::random_density_matrix(rng, 2);
  const auto rb = testing::random_density_matrix(rng, 2);
  const auto sigma = testing::random_density(rng, 2);
  CHECK(max_abs_diff(conditioned_reduce(product(ra, rb), k22, sigma, Side::beta).matrix(), ra) <
        1e-13);
  CHECK(max_abs_diff(conditioned_reduce(product(ra, rb), k22, sigma, Side::alpha).matrix(), rb) <
        1e-13);

  // beta found in |1> forces alpha into |2>
  const auto forced = conditioned_reduce(epr_state(), k22, projector_state(2, kLower), Side::beta);
  CHECK(max_abs_diff(forced.matrix(), ComplexMatrix::diagonal({1, 0})) < 1e-15);

  // zero overlap
  const auto up = ComplexMatrix::diagonal({1, 0});
  CHECK_THROWS_AS(
      conditioned_reduce(product(up, up), k22, projector_state(2, kLower), Side::beta),
      DegenerateOverlap);
  CHECK_THROWS_AS(conditioned_reduce(epr_state(), k22, minimum_information_state(3), Side::beta),
                  DimensionMismatch);
}

TEST_CASE("conditioned_terms agrees with the written-out 2x2 formulas") {
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const auto rho = testing::random_density_matrix(rng, 4);
    const auto sigma = testing::random_density_matrix(rng, 2);

    const auto ta = conditioned_terms(rho, k22, sigma, Side::beta);
    const auto oa = testing::alpha_given_beta_2x2(rho, sigma);
    CHECK(max_abs_diff(ta.numerator, oa) < 1e-14);
    CHECK(std::abs(ta.overlap - testing::naive_trace(oa)) < 1e-14);

    const auto tb = conditioned_terms(rho, k22, sigma, Side::alpha);
    const auto ob = testing::beta_given_alpha_2x2(rho, sigma);
    CHECK(max_abs_diff(tb.numerator, ob) < 1e-14);
    CHECK(std::abs(tb.overlap - testing::naive_trace(ob)) < 1e-14);

    // normalized reduction against the same oracle
    const auto reduced = conditioned_reduce(DensityMatrix(rho), k22, DensityMatrix(sigma), Side::beta);
    CHECK(max_abs_diff(reduced.matrix(), normalize(oa)) < 1e-12);
  }
}

TEST_CASE("conditioned reduction against the defining partial trace") {
  Rng rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t na = rng.index(1, 4), nb = rng.index(1, 4);
    const BipartiteSystem sys(na, nb);
    const auto rho = testing::random_density_matrix(rng, na * nb);
    const auto sigma = testing::random_density_matrix(rng, nb);
    // Sp_beta[rho (1 (x) sigma)] / Sp[rho (1 (x) sigma)]
    const auto prod = testing::naive_mul(rho, testing::naive_kron(ComplexMatrix::identity(na), sigma));
    const auto expected = normalize(testing::trace_out_beta(prod, na, nb));
    const auto got = conditioned_reduce(DensityMatrix(rho), sys, DensityMatrix(sigma), Side::beta);
    CHECK(max_abs_diff(got.matrix(), expected) < 1e-12);
  }
}

TEST_CASE("projective_reduce") {
  const auto r = projective_reduce(epr_state(), k22, kLower);
  CHECK(r.method == Method::projective);
  CHECK(max_abs_diff(r.rho_alpha.matrix(), ComplexMatrix::diagonal({1, 0})) < 1e-15);
  CHECK(max_abs_diff(r.rho_beta->matrix(), ComplexMatrix::diagonal({0, 1})) < 1e-15);

  const auto ra_side = projective_reduce(epr_state(), k22, kUpper, Side::alpha);
  CHECK(max_abs_diff(ra_side.rho_alpha.matrix(), ComplexMatrix::diagonal({1, 0})) < 1e-15);
  CHECK(max_abs_diff(ra_side.rho_beta->matrix(), ComplexMatrix::diagonal({0, 1})) < 1e-15);

  Rng rng(12);
  const auto ra = testing::random_density_matrix(rng, 2);
  const auto rb = testing::random_density_matrix(rng, 3);
  for (std::size_t level = 0; level < 3; ++level) {
    const auto p = projective_reduce(product(ra, rb), BipartiteSystem(2, 3), level);
    CHECK(max_abs_diff(p.rho_alpha.matrix(), ra) < 1e-13);
  }

  // emitted-photon branch of the vacuum Rabi state
  const JcmParams jp{1.0, 1.0, 4};
  const auto jr = projective_reduce(jcm_vacuum_density(jp, 1.1), jcm_system(jp), 1);
  CHECK(max_abs_diff(jr.rho_alpha.matrix(), ComplexMatrix::diagonal({0, 1})) < 1e-12);

  CHECK_THROWS_AS(projective_reduce(epr_state(), k22, 2), IndexOutOfRange);
}

TEST_CASE("correlated_reduce fixed points") {
  Rng rng(14);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t na = rng.index(1, 3), nb = rng.index(1, 3);
    const auto ra = testing::random_density_matrix(rng, na);
    const auto rb = testing::random_density_matrix(rng, nb);
    for (auto scheme : {UpdateScheme::gauss_seidel, UpdateScheme::jacobi}) {
      CorrelatedOptions opts;
      opts.scheme = scheme;
      const auto rep = correlated_reduce(product(ra, rb), BipartiteSystem(na, nb), opts);
      CHECK(rep.verdict == Verdict::converged);
      CHECK(rep.iterations == 1);
      CHECK(rep.residual_history.size() == 1);
      CHECK(rep.final.reconstruction_error < 1e-12);
      CHECK(max_abs_diff(rep.final.rho_alpha.matrix(), ra) < 1e-12);
      CHECK(max_abs_diff(rep.final.rho_beta->matrix(), rb) < 1e-12);
    }
  }

  const auto e = correlated_reduce(epr_state(), k22);
  CHECK(e.verdict == Verdict::converged);
  CHECK(e.iterations == 1);
  CHECK(max_abs_diff(e.final.rho_alpha.matrix(), 0.5 * ComplexMatrix::identity(2)) < 1e-15);
  CHECK(max_abs_diff(e.final.rho_beta->matrix(), 0.5 * ComplexMatrix::identity(2)) < 1e-15);
}

TEST_CASE("correlated_reduce on the vacuum Rabi state picks the plateau") {
  const double pi = testing::pi();
  const JcmParams p{1.0, 1.0, 3};
  // Omega t / 2 = pi / 8
  auto rep = correlated_reduce(jcm_vacuum_density(p, pi / 4), jcm_system(p));
  CHECK(rep.verdict == Verdict::converged);
  CHECK(rep.final.rho_alpha.populations()[0] == doctest::Approx(1.0).epsilon(1e-9));
  // Omega t / 2 = 3 pi / 8
  rep = correlated_reduce(jcm_vacuum_density(p, 3 * pi / 4), jcm_system(p));
  CHECK(rep.verdict == Verdict::converged);
  CHECK(rep.final.rho_alpha.populations()[1] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("correlated_reduce report invariants and verdicts") {
  Rng rng(16);
  for (int trial = 0; trial < 20; ++trial) {
    const auto rho = testing::random_density(rng, 4);
    CorrelatedOptions opts;
    opts.max_iter = 200;
    const auto rep = correlated_reduce(rho, k22, opts);
    CHECK(rep.residual_history.size() == rep.iterations);
    if (rep.verdict == Verdict::converged) CHECK(rep.residual_history.back() < opts.tol);
    CHECK(rep.final.reconstruction_error >= 0.0);
    CHECK(std::abs(rep.final.rho_alpha.matrix().trace() - 1.0) < 1e-12);
    CHECK(is_hermitian(rep.final.rho_beta->matrix(), 1e-14));
  }

  // anti-correlated classical mixture, mismatched seed: the Jacobi sweep swaps
  // both sides every iteration
  const auto anti = DensityMatrix(ComplexMatrix::diagonal({0, 0.5, 0.5, 0}));
  const auto up = ComplexMatrix::diagonal({1, 0});
  CorrelatedOptions jac;
  jac.scheme = UpdateScheme::jacobi;
  jac.seed = ReductionResult{DensityMatrix(up), DensityMatrix(up), Method::correlated, 0.0, {}};
  const auto osc = correlated_reduce(anti, k22, jac);
  CHECK(osc.verdict == Verdict::oscillating);
  CHECK(osc.iterations == 2);

  // the same start under Gauss-Seidel settles on a consistent pair
  CorrelatedOptions gs = jac;
  gs.scheme = UpdateScheme::gauss_seidel;
  const auto settled = correlated_reduce(anti, k22, gs);
  CHECK(settled.verdict == Verdict::converged);
  CHECK(max_abs_diff(settled.final.rho_alpha.matrix(), up) < 1e-15);
  CHECK(max_abs_diff(settled.final.rho_beta->matrix(), ComplexMatrix::diagonal({0, 1})) < 1e-15);
  CHECK(settled.final.reconstruction_error == doctest::Approx(0.5));

  CorrelatedOptions tight;
  tight.max_iter = 3;
  const JcmParams p{1.0, 1.0, 2};
  const double near_tie = 2 * (testing::pi() / 4 - 0.005);
  const auto capped = correlated_reduce(jcm_vacuum_density(p, near_tie), jcm_system(p), tight);
  CHECK(capped.verdict == Verdict::max_iter);
  CHECK(capped.iterations == 3);

  // seed with zero overlap
  CorrelatedOptions bad;
  bad.seed = ReductionResult{DensityMatrix(ComplexMatrix::diagonal({0, 1})), DensityMatrix(up),
                             Method::correlated, 0.0, {}};
  CHECK_THROWS_AS(correlated_reduce(product(up, up), k22, bad), DegenerateOverlap);
  CorrelatedOptions zero;
  zero.max_iter = 0;
  CHECK_THROWS_AS(correlated_reduce(epr_state(), k22, zero), Error);
}

TEST_CASE("mean_value") {
  const Observable sz(ComplexMatrix::diagonal({1, -1}));
  CHECK(std::abs(mean_value(minimum_information_state(2), sz)) < 1e-15);
  CHECK(mean_value(projector_state(2, kUpper), sz).real() == doctest::Approx(1.0));

  const JcmParams p{1.0, 1.0, 3};
  const Observable p22(ComplexMatrix::diagonal({1, 0}));
  for (double t : {0.3, 1.0, 2.5}) {
    const auto atom = neumann_reduce(jcm_vacuum_density(p, t), jcm_system(p)).rho_alpha;
    CHECK(mean_value(atom, p22).real() ==
          doctest::Approx(std::pow(std::cos(t / 2), 2)).epsilon(1e-12));
  }
}

TEST_CASE("correlator") {
  Rng rng(18);
  const auto rho = testing::random_density(rng, 6);
  const BipartiteSystem sys(2, 3);
  const Observable a(testing::random_nonnegative(rng, 2));
  const Observable id_b(ComplexMatrix::identity(3));
  const auto c = correlator(rho, sys, a, id_b);
  REQUIRE(c.mean_a_given_b);
  CHECK(*c.mean_a_given_b == doctest::Approx(c.mean_a_neumann).epsilon(1e-12));
  CHECK(c.exact.real() == doctest::Approx(c.mean_a_neumann).epsilon(1e-12));

  const auto ra = testing::random_density_matrix(rng, 2);
  const auto rb = testing::random_density_matrix(rng, 3);
  const Observable b(testing::random_nonnegative(rng, 3));
  const auto pc = correlator(product(ra, rb), sys, a, b);
  CHECK(pc.exact.real() == doctest::Approx(pc.mean_a_neumann * pc.mean_b_neumann).epsilon(1e-12));

  const Observable up(ComplexMatrix::diagonal({1, 0}));
  const auto ec = correlator(epr_state(), k22, up, up);
  CHECK(std::abs(ec.exact) < 1e-15);
  CHECK(ec.factorized());
  CHECK(*ec.form_given_b == doctest::Approx(0.0));

  // zero Neumann mean leaves the factorized forms undefined
  const auto upup = product(ComplexMatrix::diagonal({1, 0}), ComplexMatrix::diagonal({1, 0}));
  const Observable down(ComplexMatrix::diagonal({0, 1}));
  const auto z = correlator(upup, k22, down, up);
  CHECK_FALSE(z.factorized());
  CHECK_THROWS_AS(z.require_factorized(), ZeroNeumannMean);

  CHECK_THROWS_AS(correlator(epr_state(), k22, Observable(ComplexMatrix::diagonal({1, -1})), up),
                  NotNonnegative);
}

TEST_CASE("correlated means and the approximation gap") {
  Rng rng(20);
  const auto ra = testing::random_density_matrix(rng, 2);
  const auto rb = testing::random_density_matrix(rng, 2);
  const Observable a(testing::random_hermitian(rng, 2));
  const Observable b(testing::random_hermitian(rng, 2));
  const auto prod_state = product(ra, rb);
  const auto rep = correlated_reduce(prod_state, k22);
  CHECK(std::abs(correlated_gap(prod_state, k22, rep, a, b)) < 1e-12);

  const double pi = testing::pi();
  const JcmParams p{1.0, 1.0, 3};
  const auto jrho = jcm_vacuum_density(p, pi / 4);
  const auto jrep = correlated_reduce(jrho, jcm_system(p));
  const Observable p22(ComplexMatrix::diagonal({1, 0}));
  const Observable vac(ComplexMatrix::real_diagonal(std::vector<double>{1, 0, 0, 0}));
  const auto m = correlated_mean_pair(jrep, p22, vac);
  CHECK(m.mean_a == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(m.mean_b == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(m.product == doctest::Approx(1.0).epsilon(1e-9));

  const Observable up(ComplexMatrix::diagonal({1, 0}));
  const auto erep = correlated_reduce(epr_state(), k22);
  CHECK(correlated_mean_pair(erep, up, up).product == doctest::Approx(0.25));
  CHECK(correlated_gap(epr_state(), k22, erep, up, up) == doctest::Approx(0.25));

  CorrelatedOptions one;
  one.max_iter = 1;
  const auto unfinished = correlated_reduce(jcm_vacuum_density(p, 1.4), jcm_system(p), one);
  REQUIRE(unfinished.verdict != Verdict::converged);
  CHECK_THROWS_AS(correlated_mean_pair(unfinished, p22, vac), NotConverged);
}
