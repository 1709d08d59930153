#ifndef SHORTPATH_ANALYZE_HPP
#define SHORTPATH_ANALYZE_HPP

#include "shortpath/bounds.hpp"
#include "shortpath/bwpt.hpp"
#include "shortpath/hilbert.hpp"
#include "shortpath/instances.hpp"

#include <optional>
#include <string>
#include <vector>

namespace shortpath {

/// B = b |E0| when b is given, B itself otherwise; exactly one must be set
/// and 0 <= b < 1.
double resolve_B(std::optional<double> b, std::optional<double> B, double e0);

/// Everything the pipelines need about one instance, computed once.
struct Problem {
  Instance instance;
  DiagonalTable table;
  GroundSpaceInfo ground;
  PathParams params;

  Problem(Instance inst, double B, int K, double zeta = 0.5,
          std::optional<Parity> parity = std::nullopt);
  /// Variant taking b and resolving B = b |E0| after the ground-space scan.
  static Problem with_b(Instance inst, double b, int K, double zeta = 0.5,
                        std::optional<Parity> parity = std::nullopt);

  int n() const { return table.n_qubits; }
  double b() const { return table.e0 < 0 ? params.B / std::abs(table.e0) : 0.0; }
};

struct SpectralReport {
  std::optional<Parity> block;
  Index n0 = 0;  // ground states inside the block
  double e0 = 0;
  std::vector<double> band;  // n0 lowest eigenvalues of H_1 in the block
  std::optional<double> next_eigenvalue;
  std::optional<double> eq01;
  double e01 = 0;
  double p_ov = 0;
  double p0_overlaps = 0;  // min over unit psi in the band of <psi|P_0|psi>
  bool band_upper_ok = false;
  bool gap_lower_ok = false;
  double psi01_plus_overlap = 0;  // <psi_+|psi_{0,1}>

  std::vector<Vector> band_vectors;  // not serialised
  Vector psi01;                      // not serialised
};

SpectralReport spectral_report(const Problem& problem, double tol = 1e-9);

struct Check {
  std::string name;
  std::optional<bool> pass;  // empty: reported, not judged
  double value = 0;
  double margin = 0;
  std::string note;
};

struct TheoremReport {
  std::string theorem;  // "qgood" or "mainconst"
  std::vector<Check> preconditions;
  std::vector<Check> conclusions;
  std::optional<int> branch;
  bool applicable = true;
  TheoremConstants constants;
  std::vector<std::string> notes;

  bool preconditions_pass() const;
  const Check* find(const std::string& name) const;
};

TheoremReport qgood_verify(const Problem& problem, const SpectralReport& spectral,
                           const TheoremConstants& consts = {}, double tol = 1e-9);

struct EigenvLemmaRecord {
  double lambda_min = 0;           // lowest eigenvalue of H_Z - (5/2) B (X/N)^K
  double walk_weight = 0;          // <Psi|B (X/N)^K|Psi>
};

TheoremReport mainconst_decide(const Problem& problem, const SpectralReport& spectral,
                               const TheoremConstants& consts = {}, double tol = 1e-9,
                               Item2Check* item2_out = nullptr,
                               std::optional<EigenvLemmaRecord>* lemma_out = nullptr);

struct SimulationRecord {
  double success_prob = 0;
  double p_accept = 0;  // sum of |<psi_+|psi_i>|^2 over accepted eigenvectors
  double min_p0 = 1;    // min over accepted levels of lambda_min(P_0 restricted to the level)
  double amplified_queries_exponent = 0;  // -log2(success) / 2
  double grover_exponent = 0;             // N / 2
  double speedup_bits = 0;
  bool threshold_ambiguous = false;  // eigenvalues in (E0 + 1/4, E0 + 1/2)
  int accepted_states = 0;
  double psi01_bound = 0;  // <psi_+|psi_01>^2 <psi_01|P_0|psi_01>
};

/// Algorithm 1 with exact phase estimation: collapse psi_+ onto H_1
/// eigenspaces, accept energies <= E0 + 1/4, then measure in the
/// computational basis. Runs in the full space.
SimulationRecord simulate_algorithm1(const Problem& problem);

}  // namespace shortpath

#endif  // SHORTPATH_ANALYZE_HPP
