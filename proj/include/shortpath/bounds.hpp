#ifndef SHORTPATH_BOUNDS_HPP
#define SHORTPATH_BOUNDS_HPP

#include "shortpath/hilbert.hpp"
#include "shortpath/instances.hpp"
#include "shortpath/types.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace shortpath {

// All logarithms in this module are base 2 unless the name says otherwise.

struct TauConstants {
  double entropy_tol = 1e-12;
};

/// S(x) = -x log x - (1-x) log(1-x).
double binary_entropy(double x);
/// Inverse of S on the branch [0, 1/2], by bisection. tau() only depends on
/// x(1-x), so the branch choice does not matter.
double binary_entropy_inverse(double sigma, const TauConstants& consts = {});
/// tau(sigma) = 2 sqrt(S^{-1}(sigma) (1 - S^{-1}(sigma))).
double tau(double sigma, const TauConstants& consts = {});
/// Closed form: S((1 - sqrt(1 - t^2)) / 2).
double tau_inverse(double t);
/// tau with its argument clamped to [0, 1]; entropy densities above 1 come
/// out of the product bounds and saturate at tau = 1.
double tau_saturated(double sigma, const TauConstants& consts = {});

enum class EntropyFunction { S, SInverse, Tau, TauInverse };
/// Dispatching entry point; rejects arguments outside [0, 1].
double entropy_and_tau(double argument, EntropyFunction what, const TauConstants& consts = {});

/// Shannon entropy in bits of the squared (normalised) amplitudes.
template <typename Derived>
double computational_entropy(const Eigen::MatrixBase<Derived>& amplitudes) {
  const double total = amplitudes.squaredNorm();
  double s = 0.0;
  for (Index i = 0; i < amplitudes.size(); ++i) {
    const double p = amplitudes[i] * amplitudes[i] / total;
    if (p > 0.0) s -= p * std::log2(p);
  }
  return s;
}

/// tau(log n0/N + ((K + 1/2) log N + 1)/N)^K, the bound on |(X/N)^K psi| for
/// psi supported on n0 basis states.
double pbound(double n0, int n_qubits, int K, const TauConstants& consts = {});

struct StateEntropyRecord {
  double s_comp = 0;
  double x_over_n = 0;  // <psi|X|psi> / N
  double sx_bound = 0;  // tau(s_comp / N)
  bool sx_ok = false;

  std::vector<double> s_sequence;  // S_0 .. S_K
  bool sequence_complete = true;   // false when X psi_{i-1} = 0
  double exact_x2k = 0;            // <psi|(X/N)^{2K}|psi>
  double genineq_bound = 0;
  bool genineq_ok = false;

  Index support = 0;
  double genineqbasis_bound = 0;
  bool genineqbasis_ok = false;
  double loose_bound = 0;
  bool loose_ok = false;
  double xk_norm = 0;  // |(X/N)^K psi|
  double pbound = 0;
  bool pbound_ok = false;
};

/// Entropy inequalities for one normalised state: the single-step
/// log-Sobolev bound, and the K-step product bounds built from the entropies
/// of psi_i = X psi_{i-1} / |X psi_{i-1}| or from the support size.
StateEntropyRecord state_entropy_checks(const StateVector& state, int K,
                                        const TauConstants& consts = {});

/// <u|(X/N)^{L}|v> for basis states at Hamming distance d = 0..N, from the
/// Ehrenfest chain on the distance.
Vector walk_kernel_by_distance(int n_qubits, int L);

struct PxkNorm {
  double value = 0;
  Index columns = 0;
  bool sampled = false;  // true: principal-submatrix lower bound only
};

/// ||P (X/N)^K|| = sqrt(lambda_max(G)), G[u,v] = <u|(X/N)^{2K}|v> over the
/// ground indices (optionally one parity block). Above `max_columns` ground
/// states the Gram matrix is restricted to an evenly spaced subset.
PxkNorm p_xk_norm(const GroundSpaceInfo& ground, int n_qubits, int K,
                  std::optional<Parity> block = std::nullopt, Index max_columns = 4096);

struct KboundRecord {
  double tau_argument = 0;
  bool saturated = false;  // argument >= 1, tau forced to 1
  double lhs = 0;
  bool pass = false;
};

/// B * tau(log n0/N + ((K + 1/2) log N + 1)/N)^K <= 1/4.
KboundRecord kbound_check(double n0, int n_qubits, int K, double B, const TauConstants& consts = {});

struct DosHistogram {
  double e0 = 0;
  std::vector<std::uint64_t> counts;  // counts[k]: energies in [e0 + k, e0 + k + 1)
  std::uint64_t total = 0;
};

DosHistogram dos_histogram(const DiagonalTable& table);

struct PowerLawFit {
  double exponent = 0;  // slope of ln(log W) against ln(E - E0)
  double intercept = 0;
  double r_squared = 0;
  int points = 0;
};

/// Least squares over bins k in [k_min, k_max] with W >= 2 and k >= 1.
PowerLawFit dos_powerlaw_fit(const DosHistogram& hist, int k_min, int k_max);

/// Every unquantified O(1) / O(log N) constant in the theorem checks.
struct TheoremConstants {
  double c_err = 1.0;
  double c_tau = 1.0;
  double c_log = 1.0;
  double hassoln_c1 = 1.0;
  double hassoln_c2 = 1.0;
  double hassoln_c3 = 1.0;
  double hassoln_c4 = 1.0;
};

/// "key = value" lines, '#' comments; unknown keys are an error.
TheoremConstants load_constants(std::istream& in);
TheoremConstants load_constants_file(const std::string& path);

struct FInversePoint {
  int bin = 0;
  double energy = 0;
  double log2_w = 0;
  std::optional<double> f_inverse;  // empty when energy < F(0)
  bool witness = false;
};

struct Item2Check {
  bool degenerate_f = false;  // B = 0: F is constant, nothing to witness
  double x_min = 0;
  double f_at_zero = 0;
  double f_at_n = 0;
  std::vector<FInversePoint> curve;
  std::optional<double> witness_energy;
  std::optional<int> witness_bin;
};

/// F(S) = E0 + c_err J_tot K^2 D^2 / X_min^2 + (5/2) c_tau B tau(S/N)^K with
/// X_min = N (10 B)^{-1/K}; scans E = E0 + k (k >= 1) for
/// log W(E) >= F^{-1}(E) - c_log log N. F^{-1} is N above F(N).
Item2Check theorem1_item2_check(const DosHistogram& hist, double B, int K, int n_qubits, int degree,
                                double j_tot, const TheoremConstants& consts = {},
                                const TauConstants& tau_consts = {});

enum class Thm3Regime { High, Low };

struct ParameterChoice {
  double alpha = 0;
  double c = 0;
  double n = 0;
  double c_big = 0;
  double b = 0.1;
  double e0_magnitude = 0;  // c N^alpha
  double B = 0;
  Thm3Regime regime = Thm3Regime::High;
  double exponent = 0;  // mu (high) or nu (low)
  double K = 0;
  double x_min = 0;
};

/// alpha in (11/7, 2]: K = ceil(C ln N N^mu), mu = 4/3 - 2 alpha / 3;
/// alpha in (10/7, 11/7]: K = ceil(C ln(N)^2 N^nu), nu = 5 - 3 alpha.
ParameterChoice thm3_parameters(double alpha, double c, double n, double c_big);

struct HassolnRecord {
  std::array<double, 4> terms{};
  double lhs = 0;
  double e0_abs = 0;
  bool violated = false;  // lhs >= |E0|: the no-solution conclusion fails
};

HassolnRecord hassoln_lhs(double K, double n, double e0, const TheoremConstants& consts = {});

struct BaselineRecord {
  Index ground_state = 0;
  std::vector<double> local_fields;  // F_i at the ground state
  int best_i = 0;
  double max_abs_fi = 0;
  double threshold = 0;  // 2 |E0| / N
  bool field_bound_holds = false;  // max |F_i| >= threshold
  int neighbours = 0;              // M
  bool formula_applicable = false; // neighbour weights all +-1
  double n_choice_log2 = 0;
  std::optional<std::uint64_t> n_choice_exact;
  std::optional<std::uint64_t> brute_count;
};

/// Local fields F_i = sum_j J_ij Z_j at the first ground state, the counting
/// formula sum_{|f| >= 2|E0|/N} 2^{N-1-M} C(M, (M+f)/2) for the maximising i,
/// and (N <= brute_max) the brute-force count over the N-1 other spins.
BaselineRecord classical_baseline(const Instance& instance, const DiagonalTable& table,
                                  int brute_max = 14);

}  // namespace shortpath

#endif  // SHORTPATH_BOUNDS_HPP
