#include "corpus.hpp"

#include "shortpath/eigensolve.hpp"
#include "shortpath/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace shortpath;

namespace {

Matrix random_symmetric(Index n, std::uint64_t seed) {
  CounterRng rng(seed);
  Matrix m(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j <= i; ++j) m(i, j) = m(j, i) = rng.normal();
  return m;
}

LinearOperator wrap(const Matrix& m) {
  LinearOperator op;
  op.dim = m.rows();
  op.apply = [m](const Vector& x, Vector& y) { y = m * x; };
  return op;
}

}  // namespace

TEST_CASE("Lanczos agrees with the dense solver on random matrices") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Matrix m = random_symmetric(60, seed);
    const EigenResult dense = dense_spectrum(m, false);
    const EigenResult lz = extreme_eigs(wrap(m), 6);
    for (int i = 0; i < 6; ++i) CHECK(std::abs(lz.eigenvalues[i] - dense.eigenvalues[i]) < 1e-9);
    for (int i = 0; i < 6; ++i) {
      const Vector r = m * lz.eigenvectors[i] - lz.eigenvalues[i] * lz.eigenvectors[i];
      CHECK(r.norm() < 1e-8);
    }
  }
}

TEST_CASE("Lanczos resolves exact multiplicities") {
  Vector d(40);
  for (Index i = 0; i < 40; ++i) d[i] = i < 4 ? -3.0 : (i < 6 ? -1.0 : static_cast<double>(i));
  // random orthogonal basis: eigenvectors of an unrelated random matrix
  const Matrix q = Eigen::SelfAdjointEigenSolver<Matrix>(random_symmetric(40, 9)).eigenvectors();
  const Matrix m = q * d.asDiagonal() * q.transpose();
  const EigenResult lz = extreme_eigs(wrap(m), 7);
  for (int i = 0; i < 4; ++i) CHECK(lz.eigenvalues[i] == doctest::Approx(-3.0).epsilon(1e-10));
  CHECK(lz.eigenvalues[4] == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(lz.eigenvalues[5] == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(lz.eigenvalues[6] == doctest::Approx(6.0).epsilon(1e-10));
  const EigenResult level = lowest_eigenspace(wrap(m));
  CHECK(level.eigenvalues.size() == 4);
}

TEST_CASE("deflation by basis indices and parity") {
  const DiagonalTable t = evaluate_hz(generate(SkPm{}, 6, 2));
  const GroundSpaceInfo g = ground_space(t);
  const LinearOperator op = make_operator(OperatorSpec::hs(1.0, 1.5, 2), t);
  const Matrix full = dense_matrix(op);

  std::vector<Index> keep;
  for (Index u = 0; u < t.energies.size(); ++u)
    if (parity_of(u) == Parity::Even && !g.contains(u)) keep.push_back(u);
  Matrix sub(keep.size(), keep.size());
  for (std::size_t a = 0; a < keep.size(); ++a)
    for (std::size_t b = 0; b < keep.size(); ++b) sub(a, b) = full(keep[a], keep[b]);
  const EigenResult dense = dense_spectrum(sub, false);

  Deflation d;
  d.basis_indices = g.ground_indices;
  d.parity_block = Parity::Even;
  CHECK(d.complement_dim(t.energies.size()) == static_cast<Index>(keep.size()));
  const EigenResult lz = extreme_eigs(op, 3, d);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(lz.eigenvalues[i] - dense.eigenvalues[i]) < 1e-9);
  for (Index u : g.ground_indices) CHECK(lz.eigenvectors[0][u] == 0.0);
}

TEST_CASE("extreme_eigs rejects requests beyond the space") {
  const Matrix m = random_symmetric(5, 1);
  CHECK_THROWS_AS(extreme_eigs(wrap(m), 6), PreconditionError);
  CHECK_THROWS_AS(extreme_eigs(wrap(m), 0), PreconditionError);
}

TEST_CASE("shifted solve residual and the resolvent identity on Q") {
  const DiagonalTable t = evaluate_hz(generate(SkPm{}, 6, 3));
  const GroundSpaceInfo g = ground_space(t);
  const LinearOperator hz = make_operator(OperatorSpec::hz(), t);
  Deflation q;
  q.basis_indices = g.ground_indices;
  Vector rhs = make_state(RandomOn{{3, 9, 17, 40, 62}, 5}, 6).amplitudes;
  zero_indices(rhs, g.ground_indices);
  const double omega = t.e0 + 0.3;
  const Vector x = solve_shifted(hz, omega, rhs, q);
  // (omega - H_Z) x should give rhs back; H_Z is diagonal, so compare entrywise
  const Vector back = (omega - t.energies.array()).matrix().cwiseProduct(x);
  CHECK((back - rhs).norm() < 1e-9 * rhs.norm());
  CHECK(solve_shifted(hz, omega, Vector::Zero(64), q).norm() == 0.0);

  const LinearOperator hs = make_operator(OperatorSpec::hs(1.0, 2.0, 1), t);
  const Vector y = solve_shifted(hs, t.e0 - 1.0, rhs, q);
  Vector hy = hs * y;
  Vector res = (t.e0 - 1.0) * y - hy;
  q.apply(res);
  CHECK((res - rhs).norm() <= 1e-10 * rhs.norm() * 10);
}

TEST_CASE("shift on the spectrum is reported as singular") {
  Vector d(4);
  d << 0.0, 1.0, 2.0, 3.0;
  const Matrix m = d.asDiagonal();
  Vector rhs = Vector::Ones(4);
  CHECK_THROWS_AS(solve_shifted(wrap(m), 1.0, rhs), SingularShiftError);
}

TEST_CASE("block lemma: 2x2 example") {
  BlockMatrixInput in{Matrix::Constant(1, 1, 0.0), Matrix::Constant(1, 1, 0.25), Matrix::Constant(1, 1, 1.0)};
  const LemmaGenReport r = block_lemma_check(in);
  CHECK(r.applicable);
  const double lam = (1.0 - std::sqrt(1.25)) / 2.0;
  CHECK(r.lambda_min == doctest::Approx(lam).epsilon(1e-12));
  CHECK(r.two_by_two_min == doctest::Approx(lam).epsilon(1e-12));
  CHECK(r.closed_form_bound == doctest::Approx(-0.0625));
  CHECK(r.item1_pass);
  CHECK(r.item2_pass);
  // <psi|P|psi> of the lowest eigenvector, from the closed form
  const double v2 = lam / 0.25;
  const double weight = 1.0 / (1.0 + v2 * v2);
  CHECK(r.min_p_weight == doctest::Approx(weight).epsilon(1e-12));
  // the literal square-root form is stronger than the continuity argument gives
  CHECK(r.item3_bound == doctest::Approx(std::sqrt(1.0 - 0.0625)));
  CHECK_FALSE(r.item3_pass);
  CHECK(r.item3_norm_bound == doctest::Approx(1.0 - 0.0625));
  CHECK(r.item3_norm_pass);
}

TEST_CASE("block lemma: decoupled blocks") {
  Matrix a(2, 2), c(3, 3);
  a << 0.0, 0.1, 0.1, 0.2;
  c = Vector::LinSpaced(3, 1.0, 2.0).asDiagonal();
  const LemmaGenReport r = block_lemma_check({a, Matrix::Zero(2, 3), c});
  CHECK(r.lambda_min == doctest::Approx(r.e_a_min));
  CHECK(r.min_p_weight == doctest::Approx(1.0));
  CHECK(r.item1_pass);
  CHECK(r.item2_pass);
  CHECK(r.item3_pass);
}

TEST_CASE("block lemma: overlapping spectra are not applicable and bad input throws") {
  const LemmaGenReport r =
      block_lemma_check({Matrix::Constant(1, 1, 2.0), Matrix::Constant(1, 1, 0.1), Matrix::Constant(1, 1, 1.0)});
  CHECK_FALSE(r.applicable);
  Matrix asym(2, 2);
  asym << 0, 1, 0, 0;
  CHECK_THROWS_AS(block_lemma_check({asym, Matrix::Zero(2, 1), Matrix::Ones(1, 1)}), PreconditionError);
  CHECK_THROWS_AS(block_lemma_check({Matrix::Zero(2, 2), Matrix::Zero(3, 1), Matrix::Ones(1, 1)}),
                  PreconditionError);
}
