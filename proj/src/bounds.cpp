#include "shortpath/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace shortpath {

double binary_entropy(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double binary_entropy_inverse(double sigma, const TauConstants& consts) {
  if (sigma <= 0.0) return 0.0;
  if (sigma >= 1.0) return 0.5;
  double lo = 0.0, hi = 0.5;
  while (hi - lo > consts.entropy_tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (binary_entropy(mid) < sigma ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double tau(double sigma, const TauConstants& consts) {
  const double x = binary_entropy_inverse(sigma, consts);
  return 2.0 * std::sqrt(x * (1.0 - x));
}

double tau_inverse(double t) {
  const double x = 0.5 * (1.0 - std::sqrt(std::max(0.0, 1.0 - t * t)));
  return binary_entropy(x);
}

double tau_saturated(double sigma, const TauConstants& consts) {
  return tau(std::clamp(sigma, 0.0, 1.0), consts);
}

double entropy_and_tau(double argument, EntropyFunction what, const TauConstants& consts) {
  if (!(argument >= 0.0 && argument <= 1.0))
    throw PreconditionError("entropy/tau argument must lie in [0, 1], got " + std::to_string(argument));
  switch (what) {
    case EntropyFunction::S: return binary_entropy(argument);
    case EntropyFunction::SInverse: return binary_entropy_inverse(argument, consts);
    case EntropyFunction::Tau: return tau(argument, consts);
    case EntropyFunction::TauInverse: return tau_inverse(argument);
  }
  return 0.0;
}

double pbound(double n0, int n_qubits, int K, const TauConstants& consts) {
  const double n = n_qubits;
  const double arg = std::log2(n0) / n + ((K + 0.5) * std::log2(n) + 1.0) / n;
  return std::pow(tau_saturated(arg, consts), K);
}

StateEntropyRecord state_entropy_checks(const StateVector& state, int K, const TauConstants& consts) {
  if (K < 1) throw PreconditionError("K must be positive");
  if (std::abs(state.norm() - 1.0) > 1e-9) throw PreconditionError("state must be normalised");
  const int n = state.n_qubits;
  const double nd = n;
  StateEntropyRecord rec;

  rec.s_comp = computational_entropy(state.amplitudes);
  Vector xpsi;
  apply_x(state.amplitudes, n, xpsi);
  rec.x_over_n = state.amplitudes.dot(xpsi) / nd;
  rec.sx_bound = tau_saturated(rec.s_comp / nd, consts);
  rec.sx_ok = rec.sx_bound >= rec.x_over_n - 1e-9;

  Vector current = state.amplitudes;
  rec.s_sequence.push_back(rec.s_comp);
  for (int i = 1; i <= K; ++i) {
    Vector next;
    apply_x(current, n, next);
    const double nrm = next.norm();
    if (nrm == 0.0) {
      rec.sequence_complete = false;
      break;
    }
    current = next / nrm;
    rec.s_sequence.push_back(computational_entropy(current));
  }

  Vector walked = state.amplitudes;
  apply_xk(walked, n, K);
  rec.xk_norm = walked.norm();
  rec.exact_x2k = walked.squaredNorm();
  const double slack = 1e-12;

  if (rec.sequence_complete) {
    rec.genineq_bound = 1.0;
    for (int i = 0; i < K; ++i) {
      const double t = tau_saturated(((rec.s_sequence[i] + rec.s_sequence[i + 1]) / 2.0 + 1.0) / nd, consts);
      rec.genineq_bound *= t * t;
    }
  } else {
    rec.genineq_bound = 0.0;  // X psi = 0 forces <(X/N)^{2K}> = 0
  }
  rec.genineq_ok = rec.exact_x2k <= rec.genineq_bound * (1.0 + slack) + slack;

  rec.support = (state.amplitudes.array() != 0.0).count();
  const double log_n0 = std::log2(static_cast<double>(rec.support));
  rec.genineqbasis_bound = 1.0;
  for (int i = 0; i < K; ++i) {
    const double t = tau_saturated((log_n0 + (i + 0.5) * std::log2(nd) + 1.0) / nd, consts);
    rec.genineqbasis_bound *= t * t;
  }
  rec.genineqbasis_ok = rec.exact_x2k <= rec.genineqbasis_bound * (1.0 + slack) + slack;
  rec.loose_bound =
      std::pow(tau_saturated((log_n0 + (K + 0.5) * std::log2(nd) + 1.0) / nd, consts), 2 * K);
  rec.loose_ok = rec.exact_x2k <= rec.loose_bound * (1.0 + slack) + slack;
  rec.pbound = pbound(static_cast<double>(rec.support), n, K, consts);
  rec.pbound_ok = rec.xk_norm <= rec.pbound * (1.0 + slack) + slack;
  return rec;
}

Vector walk_kernel_by_distance(int n_qubits, int L) {
  const int n = n_qubits;
  Vector dist = Vector::Zero(n + 1);
  dist[0] = 1.0;
  for (int step = 0; step < L; ++step) {
    Vector next = Vector::Zero(n + 1);
    for (int d = 0; d <= n; ++d) {
      if (dist[d] == 0.0) continue;
      if (d > 0) next[d - 1] += dist[d] * d / n;
      if (d < n) next[d + 1] += dist[d] * static_cast<double>(n - d) / n;
    }
    dist = next;
  }
  Vector kernel(n + 1);
  for (int d = 0; d <= n; ++d) {
    const double log_binom = std::lgamma(n + 1.0) - std::lgamma(d + 1.0) - std::lgamma(n - d + 1.0);
    kernel[d] = dist[d] * std::exp(-log_binom);
  }
  return kernel;
}

PxkNorm p_xk_norm(const GroundSpaceInfo& ground, int n_qubits, int K, std::optional<Parity> block,
                  Index max_columns) {
  std::vector<Index> idx = ground.indices_in(block);
  PxkNorm out;
  if (idx.empty()) return out;
  if (static_cast<Index>(idx.size()) > max_columns) {
    std::vector<Index> subset;
    const double stride = static_cast<double>(idx.size()) / max_columns;
    for (Index j = 0; j < max_columns; ++j) subset.push_back(idx[static_cast<std::size_t>(j * stride)]);
    idx = std::move(subset);
    out.sampled = true;
  }
  const Vector kernel = walk_kernel_by_distance(n_qubits, 2 * K);
  const Index m = static_cast<Index>(idx.size());
  Matrix gram(m, m);
  for (Index a = 0; a < m; ++a)
    for (Index b = 0; b <= a; ++b) {
      const int d = __builtin_popcountll(static_cast<unsigned long long>(idx[a] ^ idx[b]));
      gram(a, b) = gram(b, a) = kernel[d];
    }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
  out.value = std::sqrt(std::max(0.0, eig.eigenvalues()[m - 1]));
  out.columns = m;
  return out;
}

KboundRecord kbound_check(double n0, int n_qubits, int K, double B, const TauConstants& consts) {
  if (n0 < 1 || n_qubits < 1 || K < 1 || B < 0) throw PreconditionError("kbound_check: invalid arguments");
  KboundRecord rec;
  const double n = n_qubits;
  rec.tau_argument = std::log2(n0) / n + ((K + 0.5) * std::log2(n) + 1.0) / n;
  rec.saturated = rec.tau_argument >= 1.0;
  rec.lhs = B * std::pow(tau_saturated(rec.tau_argument, consts), K);
  rec.pass = rec.lhs <= 0.25;
  return rec;
}

DosHistogram dos_histogram(const DiagonalTable& table) {
  DosHistogram hist;
  hist.e0 = table.e0;
  for (Index u = 0; u < table.energies.size(); ++u) {
    // 1e-9 absorbs rounding so that E0 + k computed in floating point lands in bin k
    const double offset = table.energies[u] - table.e0 + 1e-9;
    const auto k = static_cast<std::size_t>(std::max(0.0, std::floor(offset)));
    if (k >= hist.counts.size()) hist.counts.resize(k + 1, 0);
    ++hist.counts[k];
  }
  hist.total = static_cast<std::uint64_t>(table.energies.size());
  return hist;
}

PowerLawFit dos_powerlaw_fit(const DosHistogram& hist, int k_min, int k_max) {
  std::vector<double> xs, ys;
  for (int k = std::max(1, k_min); k <= k_max && k < static_cast<int>(hist.counts.size()); ++k) {
    if (hist.counts[k] < 2) continue;
    xs.push_back(std::log(static_cast<double>(k)));
    ys.push_back(std::log(std::log2(static_cast<double>(hist.counts[k]))));
  }
  if (xs.size() < 2) throw PreconditionError("power-law fit window holds fewer than two populated bins");
  const double n = xs.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  PowerLawFit fit;
  fit.points = static_cast<int>(xs.size());
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  fit.r_squared = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

TheoremConstants load_constants(std::istream& in) {
  TheoremConstants c;
  const std::map<std::string, double*> fields{
      {"c_err", &c.c_err},           {"c_tau", &c.c_tau},           {"c_log", &c.c_log},
      {"hassoln_c1", &c.hassoln_c1}, {"hassoln_c2", &c.hassoln_c2}, {"hassoln_c3", &c.hassoln_c3},
      {"hassoln_c4", &c.hassoln_c4}};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected key = value", line_no);
    std::string key = line.substr(0, eq);
    key.erase(0, key.find_first_not_of(" \t"));
    key.erase(key.find_last_not_of(" \t\r") + 1);
    auto it = fields.find(key);
    if (it == fields.end()) throw ParseError("unknown constant '" + key + "'", line_no);
    std::istringstream vs(line.substr(eq + 1));
    double v;
    std::string rest;
    if (!(vs >> v) || (vs >> rest)) throw ParseError("non-numeric value for '" + key + "'", line_no);
    if (v < 0) throw ParseError("constant '" + key + "' must be non-negative", line_no);
    *it->second = v;
  }
  return c;
}

TheoremConstants load_constants_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open constants file '" + path + "'");
  return load_constants(in);
}

Item2Check theorem1_item2_check(const DosHistogram& hist, double B, int K, int n_qubits, int degree,
                                double j_tot, const TheoremConstants& consts,
                                const TauConstants& tau_consts) {
  Item2Check out;
  const double n = n_qubits;
  if (B == 0.0) {
    out.degenerate_f = true;
    out.x_min = std::numeric_limits<double>::infinity();
    out.f_at_zero = out.f_at_n = hist.e0;
    return out;
  }
  out.x_min = n * std::pow(10.0 * B, -1.0 / K);
  const double base = hist.e0 + consts.c_err * j_tot * K * K * degree * degree / (out.x_min * out.x_min);
  auto f = [&](double s) {
    return base + 2.5 * consts.c_tau * B * std::pow(tau_saturated(s / n, tau_consts), K);
  };
  out.f_at_zero = f(0.0);
  out.f_at_n = f(n);
  if (!(out.f_at_n > out.f_at_zero)) {
    out.degenerate_f = true;
    return out;
  }
  auto f_inverse = [&](double e) -> std::optional<double> {
    if (e < out.f_at_zero) return std::nullopt;
    if (e >= out.f_at_n) return n;
    double lo = 0.0, hi = n;
    for (int it = 0; it < 200 && hi - lo > 1e-12 * n; ++it) {
      const double mid = 0.5 * (lo + hi);
      (f(mid) < e ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };
  const double slack = consts.c_log * std::log2(n);
  for (std::size_t k = 1; k < hist.counts.size(); ++k) {
    if (hist.counts[k] == 0) continue;
    FInversePoint p;
    p.bin = static_cast<int>(k);
    p.energy = hist.e0 + static_cast<double>(k);
    p.log2_w = std::log2(static_cast<double>(hist.counts[k]));
    p.f_inverse = f_inverse(p.energy);
    p.witness = p.f_inverse && p.log2_w >= *p.f_inverse - slack;
    if (p.witness && !out.witness_bin) {
      out.witness_bin = p.bin;
      out.witness_energy = p.energy;
    }
    out.curve.push_back(p);
  }
  return out;
}

ParameterChoice thm3_parameters(double alpha, double c, double n, double c_big) {
  if (!(alpha > 10.0 / 7.0 && alpha <= 2.0))
    throw PreconditionError("alpha must lie in (10/7, 2], got " + std::to_string(alpha));
  if (!(n >= 3)) throw PreconditionError("thm3 needs N >= 3");
  if (!(c > 0) || !(c_big > 0)) throw PreconditionError("c and C must be positive");
  ParameterChoice p;
  p.alpha = alpha;
  p.c = c;
  p.n = n;
  p.c_big = c_big;
  p.e0_magnitude = c * std::pow(n, alpha);
  p.B = p.b * p.e0_magnitude;
  const double ln_n = std::log(n);
  if (alpha > 11.0 / 7.0) {
    p.regime = Thm3Regime::High;
    p.exponent = 4.0 / 3.0 - 2.0 * alpha / 3.0;
    p.K = std::ceil(c_big * ln_n * std::pow(n, p.exponent));
  } else {
    p.regime = Thm3Regime::Low;
    p.exponent = 5.0 - 3.0 * alpha;
    p.K = std::ceil(c_big * ln_n * ln_n * std::pow(n, p.exponent));
  }
  p.K = std::max(1.0, p.K);
  p.x_min = n * std::pow(10.0 * p.B, -1.0 / p.K);
  return p;
}

HassolnRecord hassoln_lhs(double K, double n, double e0, const TheoremConstants& consts) {
  if (!(K >= 1) || !(n >= 3)) throw PreconditionError("hassoln_lhs needs K >= 1 and N >= 3");
  HassolnRecord r;
  const double ln_n = std::log(n);
  const double ratio_log = std::max(0.0, std::log(K / ln_n));
  r.terms[0] = consts.hassoln_c1 * std::pow(ln_n, 1.5) * n * n / std::pow(K, 1.5);
  r.terms[1] = consts.hassoln_c2 * std::sqrt(ln_n) * std::pow(n, 1.5) / std::sqrt(K) * std::sqrt(ratio_log);
  r.terms[2] = consts.hassoln_c3 * K * K;
  r.terms[3] = consts.hassoln_c4 * std::cbrt(ln_n) * std::pow(n, 5.0 / 3.0) / std::cbrt(K) * std::cbrt(ratio_log);
  r.lhs = r.terms[0] + r.terms[1] + r.terms[2] + r.terms[3];
  r.e0_abs = std::abs(e0);
  r.violated = r.lhs >= r.e0_abs;
  return r;
}

namespace {

std::optional<std::uint64_t> exact_binomial(int m, int j) {
  unsigned __int128 r = 1;
  for (int i = 1; i <= j; ++i) r = r * static_cast<unsigned>(m - j + i) / static_cast<unsigned>(i);
  if (r > std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
  return static_cast<std::uint64_t>(r);
}

}  // namespace

BaselineRecord classical_baseline(const Instance& instance, const DiagonalTable& table, int brute_max) {
  if (instance.degree() != 2) throw PreconditionError("classical baseline needs D = 2");
  const int n = instance.n_qubits();
  BaselineRecord rec;
  Index u_star = 0;
  for (Index u = 0; u < table.energies.size(); ++u)
    if (table.energies[u] == table.e0) {
      u_star = u;
      break;
    }
  rec.ground_state = u_star;
  auto z = [](Index u, int q) { return ((u >> q) & 1) ? -1.0 : 1.0; };

  std::vector<std::vector<std::pair<int, double>>> adj(n);
  for (const auto& t : instance.terms()) {
    adj[t.qubits[0]].push_back({t.qubits[1], t.weight});
    adj[t.qubits[1]].push_back({t.qubits[0], t.weight});
  }
  rec.local_fields.assign(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (auto [j, w] : adj[i]) rec.local_fields[i] += w * z(u_star, j);
  for (int i = 0; i < n; ++i)
    if (std::abs(rec.local_fields[i]) > rec.max_abs_fi) {
      rec.max_abs_fi = std::abs(rec.local_fields[i]);
      rec.best_i = i;
    }
  rec.threshold = 2.0 * std::abs(table.e0) / n;
  const double eps = 1e-9;
  rec.field_bound_holds = rec.max_abs_fi >= rec.threshold - eps;

  const int i = rec.best_i;
  const int m = static_cast<int>(adj[i].size());
  rec.neighbours = m;
  rec.formula_applicable =
      std::all_of(adj[i].begin(), adj[i].end(), [](auto& p) { return std::abs(p.second) == 1.0; });
  if (rec.formula_applicable) {
    // f = M - 2j for j neighbours anti-aligned with their coupling sign
    double log_sum = -std::numeric_limits<double>::infinity();
    unsigned __int128 exact = 0;
    bool exact_ok = n - 1 - m < 64;
    for (int j = 0; j <= m; ++j) {
      const int f = m - 2 * j;
      if (std::abs(f) < rec.threshold - eps) continue;
      const double lt = (n - 1 - m) + (std::lgamma(m + 1.0) - std::lgamma(j + 1.0) - std::lgamma(m - j + 1.0)) / std::log(2.0);
      log_sum = std::max(log_sum, lt) + std::log2(1.0 + std::exp2(-std::abs(log_sum - lt)));
      if (exact_ok) {
        auto bin = exact_binomial(m, j);
        if (!bin) {
          exact_ok = false;
        } else {
          exact += static_cast<unsigned __int128>(*bin) << (n - 1 - m);
        }
      }
    }
    rec.n_choice_log2 = log_sum;
    if (exact_ok && exact <= std::numeric_limits<std::uint64_t>::max())
      rec.n_choice_exact = static_cast<std::uint64_t>(exact);
  }

  if (n <= brute_max) {
    std::uint64_t count = 0;
    for (Index u = 0; u < (Index{1} << n); ++u) {
      if ((u >> i) & 1) continue;  // Z_i fixed; F_i does not depend on it
      double fi = 0.0;
      for (auto [j, w] : adj[i]) fi += w * z(u, j);
      if (std::abs(fi) >= rec.threshold - eps) ++count;
    }
    rec.brute_count = count;
  }
  return rec;
}

}  // namespace shortpath
