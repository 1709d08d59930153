#ifndef SHORTPATH_BWPT_HPP
#define SHORTPATH_BWPT_HPP

#include "shortpath/eigensolve.hpp"
#include "shortpath/hilbert.hpp"
#include "shortpath/types.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace shortpath {

/// H_1 = H_Z - B (X/N)^K with the resolvent shift zeta on the ground space.
struct PathParams {
  double B = 0.0;
  int K = 1;
  double zeta = 0.5;
  /// Requested block for even K; resolved by working_block().
  std::optional<Parity> parity_block;
};

/// Even K conserves the parity of the Hamming weight, so the analysis runs
/// in one block: the requested one (which must hold a ground state) or, by
/// default, the even block when it holds one and the odd block otherwise.
/// Odd K mixes the blocks and the result is empty.
std::optional<Parity> working_block(const GroundSpaceInfo& ground, int K,
                                    std::optional<Parity> requested = std::nullopt);

/// Deflation restricted to `block` that also removes every ground index.
Deflation q_deflation(const GroundSpaceInfo& ground, std::optional<Parity> block);

struct BwContext {
  double zeta = 0.5;
  double omega = 0.0;  // E_{0,1}, the lowest eigenvalue of H_1 in the block
  double eq01 = 0.0;   // lowest eigenvalue of Q H_1 Q in the block
  std::optional<Parity> block;
  std::vector<Index> active_indices;  // ground indices inside the block
  Vector xi0;                         // over active_indices, unit l2 norm, non-negative
  Matrix h_matrix;
  double h_asymmetry = 0.0;
  double fixed_point_residual = 0.0;  // |lambda_min(h(omega, 1)) - omega|
  bool xi0_degenerate = false;        // lowest level of h was degenerate
  std::vector<Vector> ground_level;   // orthonormal basis of the lowest eigenspace of H_1
  /// psi_{0,1}: the positive ground vector, or psi_+ projected onto the
  /// lowest eigenspace (normalised) when that space is degenerate.
  Vector psi01;
};

/// Normalised projection of psi_+ onto span(level); the sign-fixed single
/// vector when the level is one-dimensional.
Vector positive_representative(const std::vector<Vector>& level);

/// h(omega, s) = E0 I + s M1 + s^2 M2 over `indices`, with
/// M1[v,u] = <v|V|u>, M2[v,u] = <V v|(omega - Q H_s Q)^{-1} Q V|u>, V = -B (X/N)^K.
Matrix effective_hamiltonian(const DiagonalTable& table, const GroundSpaceInfo& ground,
                             const PathParams& params, double omega, double s = 1.0,
                             std::optional<Parity> block = std::nullopt);

/// omega := E_{0,1} from the eigensolver, h(omega, 1), and its lowest
/// eigenvector made positive. A degenerate lowest level is resolved by
/// projecting the uniform vector onto it.
BwContext solve_self_consistent(const DiagonalTable& table, const GroundSpaceInfo& ground,
                                const PathParams& params);

struct OverlapReport {
  double inner_psi_plus_phi = 0;
  double inner_psi_plus_gs = 0;  // <psi_+|psi_{0,1}>
  double xi0_l1 = 0;
  double phi_norm = 0;
  double phi_sum = 0;  // sum of the amplitudes of phi
  double analytic_bound = 0;
  double log2_analytic_bound = 0;
  double log2_overlap_margin = 0;     // log2 <psi_+|phi> + N/2
  double log2_gs_overlap_margin = 0;  // log2 <psi_+|psi_{0,1}> + N/2
  double eigen_residual = 0;          // |H_1 phi - omega phi| / |phi|
  double ray_overlap = 0;             // |projection of phi/|phi| on the lowest level|
  double min_amplitude = 0;
  double lambda_min_js = 0;           // lowest eigenvalue of H_1 + zeta P
};

/// phi = sum_k ((omega - J_0)^{-1} V)^k xi0, resummed by one shifted solve of
/// (omega - H_1 - zeta P) phi = (omega - E0 - zeta) xi0.
StateVector phi_exact(const BwContext& ctx, const DiagonalTable& table, const GroundSpaceInfo& ground,
                      const PathParams& params, int degree, OverlapReport* report = nullptr);

struct WalkOptions {
  std::int64_t samples = 100000;
  std::uint64_t seed = 1;
  double cutoff = 1e-16;
};

struct WalkEstimate {
  double series_estimate = 0;
  double std_error = 0;
  int t_truncation = 0;
  int t_max = 0;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
};

/// Monte-Carlo estimate of sum_t B^t E[prod_{m<=t} 1/(E'_{u_m} - omega)]:
/// u_0 drawn from xi0 / |xi0|_1, each step K uniform spin flips. Sample i
/// uses stream i of the seed, and the per-sample values are reduced in a
/// fixed pairwise order, so the result does not depend on the worker count.
WalkEstimate walk_estimate(const BwContext& ctx, const DiagonalTable& table,
                           const GroundSpaceInfo& ground, const PathParams& params, int degree,
                           const WalkOptions& options = {});

struct AnalyticBound {
  double leading = 1.0;  // exp(B N / (2 D K |E0|))
  double log2_leading = 0.0;
};

AnalyticBound analytic_lower_bound(int n_qubits, int degree, int K, double B, double e0);

}  // namespace shortpath

#endif  // SHORTPATH_BWPT_HPP
