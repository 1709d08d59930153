// Command-line front end: instance generation and the analysis pipelines,
// each writing one JSON report.

#include "shortpath/analyze.hpp"
#include "shortpath/report.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

using namespace shortpath;

namespace {

struct SourceOptions {
  std::string in;
  std::string model;
  int n = 0;
  std::uint64_t seed = 1;
  int n1 = 1;
  double p = 0.0;
  bool rescale = false;
};

struct PathOptions {
  std::optional<double> b;
  std::optional<double> B;
  int K = 1;
  std::string parity = "auto";
  double zeta = 0.5;
};

struct OutputOptions {
  std::string out;
  std::string csv;
  std::string constants;
};

void add_source(CLI::App* cmd, SourceOptions& src) {
  auto* in = cmd->add_option("--in", src.in, "instance file");
  auto* model = cmd->add_option("--model", src.model, "generator: sk_pm, sk_gaussian or toy")
                    ->check(CLI::IsMember({"sk_pm", "sk_gaussian", "toy"}));
  in->excludes(model);
  cmd->add_option("--n", src.n, "number of qubits for --model");
  cmd->add_option("--seed", src.seed, "generator seed");
  cmd->add_option("--n1", src.n1, "toy model: size of the ferromagnetic core S1");
  cmd->add_option("--p", src.p, "toy model: antiferromagnetic density inside S2");
  cmd->add_flag("--rescale-unit-gap", src.rescale, "divide weights by the measured gap");
}

void add_path(CLI::App* cmd, PathOptions& path) {
  auto* b = cmd->add_option("--b", path.b, "B = b |E0|, 0 <= b < 1");
  auto* B = cmd->add_option("--B", path.B, "absolute driver strength");
  b->excludes(B);
  cmd->add_option("--K", path.K, "driver power")->check(CLI::PositiveNumber);
  cmd->add_option("--parity", path.parity, "block for even K")
      ->check(CLI::IsMember({"auto", "even", "odd"}));
  cmd->add_option("--zeta", path.zeta, "ground-space resolvent shift");
}

void add_output(CLI::App* cmd, OutputOptions& out, bool csv, bool constants) {
  cmd->add_option("--out", out.out, "report path (stdout when omitted)");
  if (csv) cmd->add_option("--csv", out.csv, "CSV side output");
  if (constants) cmd->add_option("--constants", out.constants, "key = value file of theorem constants");
}

Instance load_source(const SourceOptions& src) {
  Instance inst;
  if (!src.in.empty()) {
    inst = load_instance_file(src.in);
  } else if (!src.model.empty()) {
    if (src.n < 1) throw PreconditionError("--model needs --n");
    ModelSpec spec = SkPm{};
    if (src.model == "sk_gaussian") spec = SkGaussian{};
    if (src.model == "toy") spec = ToyModelSpec{src.n1, src.p, src.seed};
    inst = generate(spec, src.n, src.seed);
  } else {
    throw PreconditionError("give --in or --model");
  }
  if (src.rescale) {
    const DiagonalTable t = evaluate_hz(inst);
    if (!t.gap) throw PreconditionError("cannot rescale: every state is degenerate");
    inst = rescale_to_unit_gap(inst, *t.gap);
  }
  return inst;
}

Problem make_problem(const SourceOptions& src, const PathOptions& path) {
  std::optional<Parity> parity;
  if (path.parity == "even") parity = Parity::Even;
  if (path.parity == "odd") parity = Parity::Odd;
  Problem p(load_source(src), 0.0, path.K, path.zeta, parity);
  p.params.B = resolve_B(path.b, path.B, p.table.e0);
  return p;
}

TheoremConstants constants_from(const OutputOptions& out) {
  return out.constants.empty() ? TheoremConstants{} : load_constants_file(out.constants);
}

void emit(const std::string& command, const Json& body, const OutputOptions& out) {
  const Json report = make_report(command, body);
  if (out.out.empty()) {
    write_report(report, std::cout);
    return;
  }
  std::ofstream f(out.out);
  if (!f) throw Error("cannot write '" + out.out + "'");
  write_report(report, f);
}

template <typename Writer>
void emit_csv(const std::string& path, Writer&& writer) {
  if (path.empty()) return;
  std::ofstream f(path);
  if (!f) throw Error("cannot write '" + path + "'");
  writer(f);
}

Json bw_section(const Problem& problem, std::optional<std::int64_t> samples, std::uint64_t walk_seed) {
  Json j;
  try {
    const BwContext ctx = solve_self_consistent(problem.table, problem.ground, problem.params);
    OverlapReport overlap;
    phi_exact(ctx, problem.table, problem.ground, problem.params, problem.instance.degree(), &overlap);
    j["context"] = to_json(ctx);
    j["overlap"] = to_json(overlap);
    if (samples) {
      WalkOptions opts;
      opts.samples = *samples;
      opts.seed = walk_seed;
      const WalkEstimate w =
          walk_estimate(ctx, problem.table, problem.ground, problem.params, problem.instance.degree(), opts);
      j["walk"] = to_json(w);
      Json cmp;
      const double exact = overlap.phi_sum / overlap.xi0_l1;
      put_real(cmp, "exact_series", exact);
      put_real(cmp, "z_score", w.std_error > 0 ? (w.series_estimate - exact) / w.std_error : 0.0);
      j["walk_vs_exact"] = cmp;
    }
  } catch (const PreconditionError& e) {
    j["error"] = e.what();
  }
  return j;
}

Json theorem_section(const Problem& problem, const SpectralReport& spectral, const TheoremConstants& consts) {
  Json j;
  j["qgood"] = to_json(qgood_verify(problem, spectral, consts));
  Item2Check item2;
  std::optional<EigenvLemmaRecord> lemma;
  const TheoremReport mc = mainconst_decide(problem, spectral, consts, 1e-9, &item2, &lemma);
  j["mainconst"] = to_json(mc);
  if (mc.branch == 2) {
    j["mainconst"]["item2"] = to_json(item2);
    if (lemma) j["mainconst"]["eigenvlemma"] = to_json(*lemma);
  }
  j["kbound"] = to_json(kbound_check(static_cast<double>(spectral.n0), problem.n(), problem.params.K,
                                     problem.params.B));
  j["p_xk_norm"] = to_json(p_xk_norm(problem.ground, problem.n(), problem.params.K, spectral.block));
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Short-path optimization numerics"};
  app.require_subcommand(1);
  int workers = 1;
  std::optional<int> max_qubits;
  app.add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--max-qubits", max_qubits, "dense-vector qubit ceiling");

  SourceOptions src;
  PathOptions path;
  OutputOptions out;
  std::int64_t samples = 100000;
  std::uint64_t walk_seed = 1;
  int fit_min = 1, fit_max = 1 << 20;
  double alpha = 2.0, c = 1.0, thm_n = 1e6, c_big = 10.0;

  auto* gen = app.add_subcommand("gen", "write an instance file");
  add_source(gen, src);
  gen->add_option("--out", out.out, "instance path (stdout when omitted)");

  auto* spectrum = app.add_subcommand("spectrum", "band, E^Q_{0,1}, P_ov of H_1");
  add_source(spectrum, src);
  add_path(spectrum, path);
  add_output(spectrum, out, true, false);

  auto* qgood = app.add_subcommand("qgood", "gapped-branch verification");
  add_source(qgood, src);
  add_path(qgood, path);
  add_output(qgood, out, false, true);

  auto* mainconst = app.add_subcommand("mainconst", "branch decision between speedup and density of states");
  add_source(mainconst, src);
  add_path(mainconst, path);
  add_output(mainconst, out, true, true);

  auto* simulate = app.add_subcommand("simulate", "spectral model of the algorithm");
  add_source(simulate, src);
  add_path(simulate, path);
  add_output(simulate, out, false, false);

  auto* walk = app.add_subcommand("walk", "exact series and random-walk estimate of the overlap");
  add_source(walk, src);
  add_path(walk, path);
  add_output(walk, out, false, false);
  walk->add_option("--samples", samples, "walk samples")->check(CLI::PositiveNumber);
  walk->add_option("--walk-seed", walk_seed, "walk seed");

  auto* dos = app.add_subcommand("dos", "density of states and power-law fit");
  add_source(dos, src);
  add_output(dos, out, true, false);
  dos->add_option("--fit-min", fit_min, "first bin of the fit window");
  dos->add_option("--fit-max", fit_max, "last bin of the fit window");

  auto* thm3 = app.add_subcommand("thm3", "parameter choice for |E0| >= c N^alpha");
  thm3->add_option("--alpha", alpha)->required();
  thm3->add_option("--c", c);
  thm3->add_option("--n", thm_n)->required();
  thm3->add_option("--C", c_big);
  add_output(thm3, out, false, true);

  auto* baseline = app.add_subcommand("baseline", "local-field classical baseline (D = 2)");
  add_source(baseline, src);
  add_output(baseline, out, false, false);

  auto* report = app.add_subcommand("report", "every analysis in one report");
  add_source(report, src);
  add_path(report, path);
  add_output(report, out, true, true);
  report->add_option("--samples", samples, "walk samples")->check(CLI::PositiveNumber);
  report->add_option("--walk-seed", walk_seed, "walk seed");

  CLI11_PARSE(app, argc, argv);

  try {
    execution_config().workers = workers;
    if (const char* env = std::getenv("SHORTPATH_MAX_QUBITS")) execution_config().max_qubits = std::atoi(env);
    if (max_qubits) execution_config().max_qubits = *max_qubits;

    if (gen->parsed()) {
      const Instance inst = load_source(src);
      if (out.out.empty())
        save_instance(inst, std::cout);
      else
        save_instance_file(inst, out.out);
      return 0;
    }

    if (thm3->parsed()) {
      const TheoremConstants consts = constants_from(out);
      const ParameterChoice pc = thm3_parameters(alpha, c, thm_n, c_big);
      Json body;
      body["parameters"] = to_json(pc);
      body["hassoln"] = to_json(hassoln_lhs(pc.K, thm_n, -pc.e0_magnitude, consts));
      body["constants_used"] = to_json(consts);
      emit("thm3", body, out);
      return 0;
    }

    if (dos->parsed()) {
      const Instance inst = load_source(src);
      const DiagonalTable table = evaluate_hz(inst);
      const DosHistogram hist = dos_histogram(table);
      Json body;
      body["instance"] = instance_json(inst, table, ground_space(table));
      body["dos"] = to_json(hist);
      try {
        body["fit"] = to_json(dos_powerlaw_fit(hist, fit_min, fit_max));
      } catch (const PreconditionError& e) {
        body["fit"] = {{"error", e.what()}};
      }
      put_real(body, "e0_over_n_three_halves", std::abs(table.e0) / std::pow(table.n_qubits, 1.5));
      emit_csv(out.csv, [&](std::ostream& f) { write_dos_csv(hist, f); });
      emit("dos", body, out);
      return 0;
    }

    if (baseline->parsed()) {
      const Instance inst = load_source(src);
      const DiagonalTable table = evaluate_hz(inst);
      Json body;
      body["instance"] = instance_json(inst, table, ground_space(table));
      body["baseline"] = to_json(classical_baseline(inst, table));
      emit("baseline", body, out);
      return 0;
    }

    const Problem problem = make_problem(src, path);
    const TheoremConstants consts = constants_from(out);
    Json body;
    body["instance"] = instance_json(problem);

    if (walk->parsed()) {
      body["bw"] = bw_section(problem, samples, walk_seed);
      emit("walk", body, out);
      return 0;
    }
    if (simulate->parsed()) {
      body["simulation"] = to_json(simulate_algorithm1(problem));
      emit("simulate", body, out);
      return 0;
    }

    const SpectralReport spectral = spectral_report(problem);
    body["spectrum"] = to_json(spectral);
    if (spectrum->parsed()) {
      emit_csv(out.csv, [&](std::ostream& f) { write_eigenvalues_csv(spectral.band, f); });
      emit("spectrum", body, out);
      return 0;
    }
    if (qgood->parsed()) {
      body["qgood"] = to_json(qgood_verify(problem, spectral, consts));
      emit("qgood", body, out);
      return 0;
    }
    if (mainconst->parsed()) {
      const Json th = theorem_section(problem, spectral, consts);
      body["mainconst"] = th["mainconst"];
      body["kbound"] = th["kbound"];
      emit_csv(out.csv, [&](std::ostream& f) { write_dos_csv(dos_histogram(problem.table), f); });
      emit("mainconst", body, out);
      return 0;
    }

    // report: everything
    const Json th = theorem_section(problem, spectral, consts);
    for (const auto& [k, v] : th.items()) body[k] = v;
    body["simulation"] = to_json(simulate_algorithm1(problem));
    body["bw"] = bw_section(problem, samples, walk_seed);
    const DosHistogram hist = dos_histogram(problem.table);
    body["dos"] = to_json(hist);
    if (problem.instance.degree() == 2)
      body["baseline"] = to_json(classical_baseline(problem.instance, problem.table));
    emit_csv(out.csv, [&](std::ostream& f) { write_dos_csv(hist, f); });
    emit("report", body, out);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
