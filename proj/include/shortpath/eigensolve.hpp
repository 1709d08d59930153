#ifndef SHORTPATH_EIGENSOLVE_HPP
#define SHORTPATH_EIGENSOLVE_HPP

#include "shortpath/hilbert.hpp"
#include "shortpath/types.hpp"

#include <optional>
#include <vector>

namespace shortpath {

struct EigenResult {
  std::vector<double> eigenvalues;  // ascending
  std::vector<Vector> eigenvectors;  // empty when not requested
  std::vector<double> residuals;     // ||Op v - lambda v||
};

/// Directions removed from the search space: basis indices (cheap, P is
/// diagonal), an optional parity block to stay inside, and explicit vectors.
struct Deflation {
  std::vector<Index> basis_indices;
  std::optional<Parity> parity_block;
  std::vector<Vector> vectors;  // orthonormalised on first use

  /// v <- projection of v onto the complement of the deflated directions.
  void apply(Vector& v) const;
  /// Dimension of the complement.
  Index complement_dim(Index dim) const;

 private:
  mutable bool orthonormal_ = false;
  void orthonormalize() const;
};

/// Full spectrum by Householder tridiagonalisation + QL (Eigen's
/// SelfAdjointEigenSolver). Serves as the oracle for the Krylov paths.
EigenResult dense_spectrum(const Matrix& m, bool with_vectors = true);
EigenResult dense_spectrum(const LinearOperator& op, bool with_vectors = true,
                           Index max_dim = Index{1} << 13);

struct LanczosOptions {
  double tol = 1e-11;  // residual tolerance relative to the operator scale
  int krylov_dim = 120;
  int max_restarts = 400;
  std::uint64_t seed = 0x5eedULL;
};

/// The `how_many` lowest eigenpairs of `op` restricted to the complement of
/// `deflate`. Lanczos with full reorthogonalisation and explicit restarts;
/// converged pairs are locked one at a time so exact multiplicities are
/// resolved.
EigenResult extreme_eigs(const LinearOperator& op, int how_many, const Deflation& deflate = {},
                         const LanczosOptions& options = {});

/// Every eigenpair of the lowest level: eigenvalues within `degeneracy_tol`
/// of the minimum. Widens the Lanczos request until the level is closed.
EigenResult lowest_eigenspace(const LinearOperator& op, const Deflation& deflate = {},
                              double degeneracy_tol = 1e-8, const LanczosOptions& options = {});

struct ShiftSolveOptions {
  double tol = 1e-10;
  int max_iter = 0;  // 0 = automatic
  double singular_threshold = 1e-8;
};

/// Solves (omega - Op) x = rhs on the complement of `deflate` with MINRES.
/// Throws SingularShiftError when the shift is within `singular_threshold`
/// of the deflated spectrum or the iteration stagnates.
Vector solve_shifted(const LinearOperator& op, double omega, const Vector& rhs,
                     const Deflation& deflate = {}, const ShiftSolveOptions& options = {});

struct BlockMatrixInput {
  Matrix a_block;  // n0 x n0, symmetric
  Matrix b_block;  // n0 x m
  Matrix c_block;  // m x m, symmetric
};

struct LemmaGenReport {
  bool applicable = false;  // E_C^min > E_A^max
  Index n0 = 0, m = 0;
  double e_a_min = 0, e_a_max = 0, e_c_min = 0, b_norm = 0;
  std::vector<double> spectrum;

  // item 1: n0 eigenvalues <= E_A^max, the rest >= E_C^min
  bool item1_pass = false;
  double item1_margin = 0;

  // item 2: lambda_min(H) >= lambda_min(2x2) >= E_A^min - |B|^2 / (E_C^min - E_A^min)
  double lambda_min = 0, two_by_two_min = 0, closed_form_bound = 0;
  bool item2_pass = false;
  double item2_margin = 0;

  // item 3, literal reading: <psi|P|psi> >= sqrt(1 - |B|^2 / (E_C^min - E_A^max)^2)
  double min_p_weight = 0;  // min over unit psi in the low band of <psi|P|psi>
  double item3_bound = 0;
  bool item3_pass = false;
  double item3_margin = 0;

  // item 3 in the form the continuity argument gives: |P psi| >= sqrt(1 - x^2),
  // i.e. <psi|P|psi> >= 1 - x^2.
  double item3_norm_bound = 0;
  bool item3_norm_pass = false;
  double item3_norm_margin = 0;
};

LemmaGenReport block_lemma_check(const BlockMatrixInput& input, double tol = 1e-10);

}  // namespace shortpath

#endif  // SHORTPATH_EIGENSOLVE_HPP
