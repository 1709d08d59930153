#include "shortpath/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace shortpath {

std::string hex_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

void put_real(Json& obj, const std::string& key, double v) {
  obj[key] = std::isfinite(v) ? Json(v) : Json(nullptr);
  obj[key + "_hex"] = hex_double(v);
}

void put_real(Json& obj, const std::string& key, const std::optional<double>& v) {
  if (v) {
    put_real(obj, key, *v);
  } else {
    obj[key] = nullptr;
    obj[key + "_hex"] = nullptr;
  }
}

namespace {

Json real_list(const std::vector<double>& xs) {
  Json out = Json::array();
  for (double x : xs) out.push_back(std::isfinite(x) ? Json(x) : Json(nullptr));
  return out;
}

Json block_json(const std::optional<Parity>& block) {
  return block ? Json(to_string(*block)) : Json(nullptr);
}

Json check_json(const Check& c) {
  Json j;
  j["name"] = c.name;
  j["pass"] = c.pass ? Json(*c.pass) : Json(nullptr);
  put_real(j, "value", c.value);
  put_real(j, "margin", c.margin);
  j["note"] = c.note;
  return j;
}

}  // namespace

Json instance_json(const Instance& instance, const DiagonalTable& table, const GroundSpaceInfo& ground) {
  Json j;
  j["n_qubits"] = instance.n_qubits();
  j["degree"] = instance.degree();
  j["terms"] = instance.terms().size();
  put_real(j, "j_tot", instance.j_tot());
  put_real(j, "e0", table.e0);
  put_real(j, "gap", table.gap);
  j["n0"] = ground.n0;
  j["gap_certified"] = ground.gap_certified;
  if (ground.ground_indices.size() <= 64) j["ground_indices"] = ground.ground_indices;
  return j;
}

Json instance_json(const Problem& problem) {
  Json j = instance_json(problem.instance, problem.table, problem.ground);
  put_real(j, "B", problem.params.B);
  put_real(j, "b", problem.b());
  j["K"] = problem.params.K;
  put_real(j, "zeta", problem.params.zeta);
  return j;
}

Json to_json(const SpectralReport& r) {
  Json j;
  j["block"] = block_json(r.block);
  j["n0"] = r.n0;
  put_real(j, "e0", r.e0);
  j["band"] = real_list(r.band);
  put_real(j, "next_eigenvalue", r.next_eigenvalue);
  put_real(j, "eq01", r.eq01);
  put_real(j, "e01", r.e01);
  put_real(j, "p_ov", r.p_ov);
  put_real(j, "p0_overlaps", r.p0_overlaps);
  j["band_upper_ok"] = r.band_upper_ok;
  j["gap_lower_ok"] = r.gap_lower_ok;
  put_real(j, "psi01_plus_overlap", r.psi01_plus_overlap);
  return j;
}

Json to_json(const TheoremReport& r) {
  Json j;
  j["theorem"] = r.theorem;
  j["preconditions"] = Json::array();
  for (const auto& c : r.preconditions) j["preconditions"].push_back(check_json(c));
  j["conclusions"] = Json::array();
  for (const auto& c : r.conclusions) j["conclusions"].push_back(check_json(c));
  j["branch"] = r.branch ? Json(*r.branch) : Json(nullptr);
  j["applicable"] = r.applicable;
  j["constants_used"] = to_json(r.constants);
  j["notes"] = r.notes;
  return j;
}

Json to_json(const SimulationRecord& r) {
  Json j;
  put_real(j, "success_prob", r.success_prob);
  put_real(j, "p_accept", r.p_accept);
  put_real(j, "min_p0", r.min_p0);
  put_real(j, "amplified_queries_exponent", r.amplified_queries_exponent);
  put_real(j, "grover_exponent", r.grover_exponent);
  put_real(j, "speedup_bits", r.speedup_bits);
  j["threshold_ambiguous"] = r.threshold_ambiguous;
  j["accepted_states"] = r.accepted_states;
  put_real(j, "psi01_bound", r.psi01_bound);
  return j;
}

Json to_json(const BwContext& ctx) {
  Json j;
  put_real(j, "zeta", ctx.zeta);
  put_real(j, "omega", ctx.omega);
  put_real(j, "eq01", ctx.eq01);
  j["block"] = block_json(ctx.block);
  j["active_indices"] = ctx.active_indices;
  j["xi0"] = real_list(std::vector<double>(ctx.xi0.data(), ctx.xi0.data() + ctx.xi0.size()));
  put_real(j, "h_asymmetry", ctx.h_asymmetry);
  put_real(j, "fixed_point_residual", ctx.fixed_point_residual);
  j["xi0_degenerate"] = ctx.xi0_degenerate;
  return j;
}

Json to_json(const OverlapReport& r) {
  Json j;
  put_real(j, "inner_psi_plus_phi", r.inner_psi_plus_phi);
  put_real(j, "inner_psi_plus_gs", r.inner_psi_plus_gs);
  put_real(j, "xi0_l1", r.xi0_l1);
  put_real(j, "phi_norm", r.phi_norm);
  put_real(j, "phi_sum", r.phi_sum);
  put_real(j, "analytic_bound", r.analytic_bound);
  put_real(j, "log2_analytic_bound", r.log2_analytic_bound);
  put_real(j, "log2_overlap_margin", r.log2_overlap_margin);
  put_real(j, "log2_gs_overlap_margin", r.log2_gs_overlap_margin);
  put_real(j, "eigen_residual", r.eigen_residual);
  put_real(j, "ray_overlap", r.ray_overlap);
  put_real(j, "min_amplitude", r.min_amplitude);
  put_real(j, "lambda_min_js", r.lambda_min_js);
  return j;
}

Json to_json(const WalkEstimate& r) {
  Json j;
  put_real(j, "series_estimate", r.series_estimate);
  put_real(j, "std_error", r.std_error);
  j["t_truncation"] = r.t_truncation;
  j["t_max"] = r.t_max;
  j["samples"] = r.samples;
  j["seed"] = r.seed;
  return j;
}

Json to_json(const Item2Check& r) {
  Json j;
  j["degenerate_f"] = r.degenerate_f;
  put_real(j, "x_min", r.x_min);
  put_real(j, "f_at_zero", r.f_at_zero);
  put_real(j, "f_at_n", r.f_at_n);
  put_real(j, "witness_energy", r.witness_energy);
  j["witness_bin"] = r.witness_bin ? Json(*r.witness_bin) : Json(nullptr);
  j["curve"] = Json::array();
  for (const auto& p : r.curve) {
    Json c;
    c["bin"] = p.bin;
    put_real(c, "energy", p.energy);
    put_real(c, "log2_w", p.log2_w);
    put_real(c, "f_inverse", p.f_inverse);
    c["witness"] = p.witness;
    j["curve"].push_back(c);
  }
  return j;
}

Json to_json(const EigenvLemmaRecord& r) {
  Json j;
  put_real(j, "lambda_min", r.lambda_min);
  put_real(j, "walk_weight", r.walk_weight);
  return j;
}

Json to_json(const KboundRecord& r) {
  Json j;
  put_real(j, "tau_argument", r.tau_argument);
  j["saturated"] = r.saturated;
  put_real(j, "lhs", r.lhs);
  j["pass"] = r.pass;
  return j;
}

Json to_json(const PxkNorm& r) {
  Json j;
  put_real(j, "value", r.value);
  j["columns"] = r.columns;
  j["sampled"] = r.sampled;
  return j;
}

Json to_json(const DosHistogram& r) {
  Json j;
  put_real(j, "e0", r.e0);
  j["counts"] = r.counts;
  j["total"] = r.total;
  return j;
}

Json to_json(const PowerLawFit& r) {
  Json j;
  put_real(j, "exponent", r.exponent);
  put_real(j, "intercept", r.intercept);
  put_real(j, "r_squared", r.r_squared);
  j["points"] = r.points;
  return j;
}

Json to_json(const ParameterChoice& r) {
  Json j;
  put_real(j, "alpha", r.alpha);
  put_real(j, "c", r.c);
  put_real(j, "n", r.n);
  put_real(j, "C", r.c_big);
  put_real(j, "b", r.b);
  put_real(j, "e0_magnitude", r.e0_magnitude);
  put_real(j, "B", r.B);
  j["regime"] = r.regime == Thm3Regime::High ? "high" : "low";
  put_real(j, r.regime == Thm3Regime::High ? "mu" : "nu", r.exponent);
  put_real(j, "K", r.K);
  put_real(j, "x_min", r.x_min);
  return j;
}

Json to_json(const HassolnRecord& r) {
  Json j;
  j["terms"] = real_list({r.terms.begin(), r.terms.end()});
  put_real(j, "lhs", r.lhs);
  put_real(j, "e0_abs", r.e0_abs);
  j["violated"] = r.violated;
  return j;
}

Json to_json(const BaselineRecord& r) {
  Json j;
  j["ground_state"] = r.ground_state;
  j["local_fields"] = real_list(r.local_fields);
  j["best_i"] = r.best_i;
  put_real(j, "max_abs_fi", r.max_abs_fi);
  put_real(j, "threshold", r.threshold);
  j["field_bound_holds"] = r.field_bound_holds;
  j["neighbours"] = r.neighbours;
  j["formula_applicable"] = r.formula_applicable;
  if (r.formula_applicable) {
    put_real(j, "n_choice_log2", r.n_choice_log2);
  } else {
    put_real(j, "n_choice_log2", std::nullopt);
  }
  j["n_choice_exact"] = r.n_choice_exact ? Json(*r.n_choice_exact) : Json(nullptr);
  j["brute_count"] = r.brute_count ? Json(*r.brute_count) : Json(nullptr);
  return j;
}

Json to_json(const TheoremConstants& c) {
  Json j;
  put_real(j, "c_err", c.c_err);
  put_real(j, "c_tau", c.c_tau);
  put_real(j, "c_log", c.c_log);
  put_real(j, "hassoln_c1", c.hassoln_c1);
  put_real(j, "hassoln_c2", c.hassoln_c2);
  put_real(j, "hassoln_c3", c.hassoln_c3);
  put_real(j, "hassoln_c4", c.hassoln_c4);
  return j;
}

Json make_report(const std::string& command, const Json& body) {
  Json j = body.is_object() ? body : Json::object();
  j["schema_version"] = kReportSchemaVersion;
  j["command"] = command;
  j["workers"] = execution_config().workers;
  return j;
}

void write_report(const Json& report, std::ostream& out) { out << report.dump(2) << '\n'; }

void write_dos_csv(const DosHistogram& hist, std::ostream& out) {
  out << "k,energy_low,count\n";
  char buf[64];
  for (std::size_t k = 0; k < hist.counts.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g", hist.e0 + static_cast<double>(k));
    out << k << ',' << buf << ',' << hist.counts[k] << '\n';
  }
}

void write_eigenvalues_csv(const std::vector<double>& values, std::ostream& out) {
  out << "index,eigenvalue\n";
  char buf[64];
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", values[i]);
    out << i << ',' << buf << '\n';
  }
}

}  // namespace shortpath
