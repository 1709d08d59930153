#include "shortpath/analyze.hpp"

#include "shortpath/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace shortpath {

double resolve_B(std::optional<double> b, std::optional<double> B, double e0) {
  if (b.has_value() == B.has_value()) throw PreconditionError("give exactly one of b and B");
  if (B) {
    if (!(*B >= 0.0) || !std::isfinite(*B)) throw PreconditionError("B must be non-negative");
    return *B;
  }
  if (!(*b >= 0.0 && *b < 1.0)) throw PreconditionError("b must lie in [0, 1)");
  return *b * std::abs(e0);
}

Problem::Problem(Instance inst, double B, int K, double zeta, std::optional<Parity> parity)
    : instance(std::move(inst)), table(evaluate_hz(instance)), ground(ground_space(table)) {
  params.B = B;
  params.K = K;
  params.zeta = zeta;
  params.parity_block = parity;
  validate(OperatorSpec::hs(1.0, B, K));
}

Problem Problem::with_b(Instance inst, double b, int K, double zeta, std::optional<Parity> parity) {
  Problem p(std::move(inst), 0.0, K, zeta, parity);
  p.params.B = resolve_B(b, std::nullopt, p.table.e0);
  return p;
}

namespace {

Deflation block_only(std::optional<Parity> block) {
  Deflation d;
  d.parity_block = block;
  return d;
}

// lambda_min of the P_0 block of span(vectors): min over unit psi in the span
// of <psi|P_0|psi>.
double min_ground_weight(const std::vector<Vector>& vectors, std::size_t first, std::size_t count,
                         const std::vector<Index>& ground_indices) {
  Matrix w(ground_indices.size(), count);
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t a = 0; a < ground_indices.size(); ++a) w(a, i) = vectors[first + i][ground_indices[a]];
  Eigen::SelfAdjointEigenSolver<Matrix> eig(w.transpose() * w, Eigen::EigenvaluesOnly);
  return std::clamp(eig.eigenvalues()[0], 0.0, 1.0);
}

Check judged(std::string name, double value, double margin, double tol, std::string note = {}) {
  return {std::move(name), margin >= -tol, value, margin, std::move(note)};
}

Check reported(std::string name, double value, double margin, std::string note = {}) {
  return {std::move(name), std::nullopt, value, margin, std::move(note)};
}

}  // namespace

SpectralReport spectral_report(const Problem& problem, double tol) {
  const auto& table = problem.table;
  const auto& ground = problem.ground;
  const auto& params = problem.params;
  SpectralReport rep;
  rep.block = working_block(ground, params.K, params.parity_block);
  const std::vector<Index> idx = ground.indices_in(rep.block);
  rep.n0 = static_cast<Index>(idx.size());
  rep.e0 = table.e0;

  const LinearOperator h1 = make_operator(OperatorSpec::hs(1.0, params.B, params.K), table);
  const Deflation in_block = block_only(rep.block);
  const Index eff = in_block.complement_dim(table.energies.size());
  const int k = static_cast<int>(std::min<Index>(rep.n0 + 1, eff));
  EigenResult res = extreme_eigs(h1, k, in_block);
  for (Index i = 0; i < rep.n0; ++i) {
    rep.band.push_back(res.eigenvalues[i]);
    rep.band_vectors.push_back(res.eigenvectors[i]);
  }
  if (k > rep.n0) rep.next_eigenvalue = res.eigenvalues[rep.n0];
  const Deflation q = q_deflation(ground, rep.block);
  if (q.complement_dim(table.energies.size()) > 0) rep.eq01 = extreme_eigs(h1, 1, q).eigenvalues[0];

  rep.e01 = rep.band.front();
  for (const auto& v : rep.band_vectors) {
    const double c = overlap_with_plus(v, table.n_qubits);
    rep.p_ov += c * c;
  }
  rep.p0_overlaps = min_ground_weight(rep.band_vectors, 0, rep.band_vectors.size(), idx);
  rep.band_upper_ok = rep.band.back() <= table.e0 + 0.25 + tol;
  rep.gap_lower_ok = !rep.next_eigenvalue || *rep.next_eigenvalue >= table.e0 + 0.5 - tol;

  std::size_t level = 1;
  while (level < rep.band.size() && rep.band[level] - rep.band[0] <= 1e-8) ++level;
  rep.psi01 = positive_representative(
      std::vector<Vector>(rep.band_vectors.begin(), rep.band_vectors.begin() + level));
  rep.psi01_plus_overlap = overlap_with_plus(rep.psi01, table.n_qubits);
  return rep;
}

bool TheoremReport::preconditions_pass() const {
  return std::all_of(preconditions.begin(), preconditions.end(),
                     [](const Check& c) { return c.pass.value_or(true); });
}

const Check* TheoremReport::find(const std::string& name) const {
  for (const auto* list : {&preconditions, &conclusions})
    for (const auto& c : *list)
      if (c.name == name) return &c;
  return nullptr;
}

TheoremReport qgood_verify(const Problem& problem, const SpectralReport& spectral,
                           const TheoremConstants& consts, double tol) {
  const int n = problem.n();
  const double e0 = problem.table.e0;
  const double B = problem.params.B;
  const int K = problem.params.K;
  TheoremReport rep;
  rep.theorem = "qgood";
  rep.constants = consts;

  const double eq01 = spectral.eq01.value_or(std::numeric_limits<double>::max());
  rep.preconditions.push_back(judged("eq01_separation", eq01 - e0, eq01 - (e0 + 0.5), tol));
  const PxkNorm norm = p_xk_norm(problem.ground, n, K, spectral.block);
  rep.preconditions.push_back(judged("p_xk_norm_bound", B * norm.value, 0.25 - B * norm.value, tol,
                                     norm.sampled ? "sampled lower bound on the norm" : ""));
  rep.preconditions.push_back(reported("B_over_log2N", B / std::log2(std::max(2, n)), 0.0,
                                       "asymptotic condition; recorded only"));

  const bool ok = rep.preconditions_pass();
  const double band_max = spectral.band.back();
  const double next = spectral.next_eigenvalue.value_or(std::numeric_limits<double>::max());
  const double scaled = spectral.psi01_plus_overlap * std::exp2(0.5 * n);
  const double measured_bits = std::log2(scaled);
  const double predicted_bits =
      e0 < 0 ? analytic_lower_bound(n, problem.instance.degree(), K, B, e0).log2_leading : 0.0;

  std::vector<Check> concl{
      judged("item1_band_upper", band_max, e0 + 0.25 - band_max, tol),
      judged("item1_gap_lower", next, next - (e0 + 0.5), tol),
      judged("item3_p0_overlap", spectral.p0_overlaps, spectral.p0_overlaps - std::sqrt(0.75), tol),
      judged("item2_overlap_floor", scaled, measured_bits, tol,
             "2^{N/2} <psi_+|psi_01>, must be at least 1"),
      reported("item2_leading_exponent", measured_bits, measured_bits - predicted_bits,
               "measured log2 overlap gain minus the leading exponential; o(1) corrections unquantified"),
  };
  if (!ok) {
    for (auto& c : concl) {
      c.pass.reset();
      c.note = "skipped: preconditions fail";
    }
    rep.notes.push_back("preconditions fail; the instance falls to the density-of-states branch (see mainconst)");
  }
  rep.conclusions = std::move(concl);
  return rep;
}

TheoremReport mainconst_decide(const Problem& problem, const SpectralReport& spectral,
                               const TheoremConstants& consts, double tol, Item2Check* item2_out,
                               std::optional<EigenvLemmaRecord>* lemma_out) {
  const int n = problem.n();
  const double e0 = problem.table.e0;
  const double B = problem.params.B;
  const int K = problem.params.K;
  const int D = problem.instance.degree();
  TheoremReport rep;
  rep.theorem = "mainconst";
  rep.constants = consts;
  if (!problem.ground.gap_certified) {
    rep.applicable = false;
    rep.notes.push_back("ground space not gap-certified");
    return rep;
  }

  const KboundRecord kb = kbound_check(static_cast<double>(spectral.n0), n, K, B);
  rep.preconditions.push_back(judged("kbound", kb.lhs, 0.25 - kb.lhs, 0.0,
                                     kb.saturated ? "tau argument saturated at 1" : ""));
  if (!kb.pass) {
    rep.applicable = false;
    rep.notes.push_back("K-bound fails: no branch is decided");
    return rep;
  }

  const double eq01 = spectral.eq01.value_or(std::numeric_limits<double>::max());
  if (eq01 >= e0 + 0.5 - tol) {
    rep.branch = 1;
    const double b = e0 < 0 ? B / std::abs(e0) : 0.0;
    const double speed_bits = b / (2.0 * D * K) * n * std::numbers::log2e;
    rep.conclusions.push_back(reported("branch1_time_exponent_bits", 0.5 * n - speed_bits, speed_bits,
                                       "expected-time exponent N/2 - (b/2DK) N log2 e; margin is the gain"));
    return rep;
  }

  rep.branch = 2;
  const DosHistogram hist = dos_histogram(problem.table);
  Item2Check item2 = theorem1_item2_check(hist, B, K, n, D, problem.instance.j_tot(), consts);
  if (item2.degenerate_f) {
    rep.conclusions.push_back(reported("item2_witness", 0.0, 0.0, "F is constant; no witness required"));
  } else {
    const bool found = item2.witness_bin.has_value();
    Check c{"item2_witness", found, found ? *item2.witness_energy - e0 : 0.0, found ? 1.0 : -1.0,
            "value: E - E0 of the first witnessing bin"};
    rep.conclusions.push_back(c);
  }
  if (item2_out) *item2_out = item2;

  Deflation in_block;
  in_block.parity_block = spectral.block;
  const LinearOperator h52 = make_operator(OperatorSpec::hs(1.0, 2.5 * B, K), problem.table);
  const EigenResult low = extreme_eigs(h52, 1, in_block);
  EigenvLemmaRecord lemma;
  lemma.lambda_min = low.eigenvalues[0];
  Vector walked = low.eigenvectors[0];
  apply_xk(walked, n, K);
  lemma.walk_weight = B * low.eigenvectors[0].dot(walked);
  rep.conclusions.push_back(
      judged("eigenvlemma_energy", lemma.lambda_min, (e0 - 0.25) - lemma.lambda_min, 0.0));
  rep.conclusions.push_back(judged("eigenvlemma_walk_weight", lemma.walk_weight,
                                   lemma.walk_weight - 0.25, tol));
  if (lemma_out) *lemma_out = lemma;
  return rep;
}

SimulationRecord simulate_algorithm1(const Problem& problem) {
  const auto& table = problem.table;
  const auto& ground = problem.ground;
  const int n = table.n_qubits;
  const Index dim = table.energies.size();
  const double accept = table.e0 + 0.25;
  const double reject = table.e0 + 0.5;
  const LinearOperator h1 =
      make_operator(OperatorSpec::hs(1.0, problem.params.B, problem.params.K), table);

  std::vector<double> vals;
  std::vector<Vector> vecs;
  Index k = std::min<Index>(ground.n0 + 1, dim);
  for (;;) {
    if (k > 64 && dim <= (Index{1} << 13)) {
      EigenResult all = dense_spectrum(dense_matrix(h1));
      vals = std::move(all.eigenvalues);
      vecs = std::move(all.eigenvectors);
      break;
    }
    EigenResult res = extreme_eigs(h1, static_cast<int>(k), {});
    vals = std::move(res.eigenvalues);
    vecs = std::move(res.eigenvectors);
    if (vals.back() > reject || k == dim) break;
    k = std::min<Index>(2 * k, dim);
  }

  SimulationRecord rec;
  rec.grover_exponent = 0.5 * n;
  const double amp = std::exp2(-0.5 * n);
  std::size_t i = 0;
  while (i < vals.size() && vals[i] <= accept) {
    std::size_t j = i + 1;
    while (j < vals.size() && vals[j] <= accept && vals[j] - vals[i] <= 1e-8) ++j;
    Vector projected = Vector::Zero(dim);
    for (std::size_t m = i; m < j; ++m) {
      const double c = amp * vecs[m].sum();
      rec.p_accept += c * c;
      projected += c * vecs[m];
    }
    for (Index u : ground.ground_indices) rec.success_prob += projected[u] * projected[u];
    rec.min_p0 = std::min(rec.min_p0, min_ground_weight(vecs, i, j - i, ground.ground_indices));
    rec.accepted_states += static_cast<int>(j - i);
    i = j;
  }
  for (double v : vals)
    if (v > accept && v < reject) rec.threshold_ambiguous = true;

  std::size_t level = 1;
  while (level < vals.size() && vals[level] - vals[0] <= 1e-8) ++level;
  const Vector psi01 = positive_representative(std::vector<Vector>(vecs.begin(), vecs.begin() + level));
  double p0 = 0.0;
  for (Index u : ground.ground_indices) p0 += psi01[u] * psi01[u];
  const double ov = overlap_with_plus(psi01, n);
  rec.psi01_bound = ov * ov * p0;

  rec.amplified_queries_exponent = -0.5 * std::log2(rec.success_prob);
  rec.speedup_bits = rec.grover_exponent - rec.amplified_queries_exponent;
  return rec;
}

}  // namespace shortpath
