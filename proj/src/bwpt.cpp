#include "shortpath/bwpt.hpp"

#include "shortpath/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

namespace shortpath {

std::optional<Parity> working_block(const GroundSpaceInfo& ground, int K, std::optional<Parity> requested) {
  if (K % 2 == 1) return std::nullopt;
  auto holds = [&](Parity p) { return !ground.indices_in(p).empty(); };
  if (requested) {
    if (!holds(*requested))
      throw PreconditionError(std::string("the ") + to_string(*requested) +
                              " parity block contains no ground state");
    return requested;
  }
  return holds(Parity::Even) ? Parity::Even : Parity::Odd;
}

Deflation q_deflation(const GroundSpaceInfo& ground, std::optional<Parity> block) {
  Deflation d;
  d.basis_indices = ground.ground_indices;
  d.parity_block = block;
  return d;
}

namespace {

Deflation block_only(std::optional<Parity> block) {
  Deflation d;
  d.parity_block = block;
  return d;
}

Vector walk_column(Index u, const DiagonalTable& table, const PathParams& params) {
  Vector v = Vector::Zero(table.energies.size());
  v[u] = 1.0;
  apply_xk(v, table.n_qubits, params.K);
  return -params.B * v;
}

// Fixed-order pairwise sum: the association never depends on threading.
double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

}  // namespace

Vector positive_representative(const std::vector<Vector>& level) {
  if (level.empty()) throw PreconditionError("empty eigenspace");
  if (level.size() == 1) return level[0].sum() < 0 ? Vector(-level[0]) : level[0];
  Vector v = Vector::Zero(level[0].size());
  for (const auto& g : level) v += g.sum() * g;
  const double nrm = v.norm();
  if (nrm == 0.0) throw PreconditionError("psi_+ is orthogonal to the lowest eigenspace");
  return v / nrm;
}

Matrix effective_hamiltonian(const DiagonalTable& table, const GroundSpaceInfo& ground,
                             const PathParams& params, double omega, double s,
                             std::optional<Parity> block) {
  const std::vector<Index> idx = ground.indices_in(block);
  const Index n0 = static_cast<Index>(idx.size());
  Matrix h = table.e0 * Matrix::Identity(n0, n0);
  if (params.B == 0.0 || s == 0.0) return h;

  const LinearOperator hs = make_operator(OperatorSpec::hs(s, params.B, params.K), table);
  const Deflation q = q_deflation(ground, block);
  std::vector<Vector> v_cols;
  for (Index u : idx) v_cols.push_back(walk_column(u, table, params));

  Matrix m1(n0, n0), m2(n0, n0);
  for (Index a = 0; a < n0; ++a) {
    Vector rhs = v_cols[a];
    zero_indices(rhs, ground.ground_indices);
    const Vector x = solve_shifted(hs, omega, rhs, q);
    for (Index b = 0; b < n0; ++b) {
      m1(b, a) = v_cols[a][idx[b]];
      m2(b, a) = v_cols[b].dot(x);
    }
  }
  h += s * m1 + s * s * m2;
  return h;
}

BwContext solve_self_consistent(const DiagonalTable& table, const GroundSpaceInfo& ground,
                                const PathParams& params) {
  if (!ground.gap_certified)
    throw PreconditionError("ground space is not gap-certified (lowest excited energy < E0 + 1)");
  BwContext ctx;
  ctx.zeta = params.zeta;
  ctx.block = working_block(ground, params.K, params.parity_block);
  ctx.active_indices = ground.indices_in(ctx.block);

  const LinearOperator h1 = make_operator(OperatorSpec::hs(1.0, params.B, params.K), table);
  const Deflation in_block = block_only(ctx.block);
  EigenResult level = lowest_eigenspace(h1, in_block);
  ctx.omega = level.eigenvalues[0];
  ctx.ground_level = std::move(level.eigenvectors);
  ctx.psi01 = positive_representative(ctx.ground_level);

  const Deflation q = q_deflation(ground, ctx.block);
  ctx.eq01 = q.complement_dim(table.energies.size()) > 0 ? extreme_eigs(h1, 1, q).eigenvalues[0]
                                                          : std::numeric_limits<double>::infinity();
  if (!(ctx.omega < ctx.eq01 - 1e-8))
    throw PreconditionError("E_{0,1} = " + std::to_string(ctx.omega) +
                            " is not below the Q-restricted spectrum (" + std::to_string(ctx.eq01) + ")");

  const Matrix h = effective_hamiltonian(table, ground, params, ctx.omega, 1.0, ctx.block);
  ctx.h_asymmetry = (h - h.transpose()).cwiseAbs().maxCoeff();
  ctx.h_matrix = 0.5 * (h + h.transpose());

  Eigen::SelfAdjointEigenSolver<Matrix> eig(ctx.h_matrix);
  const Vector& vals = eig.eigenvalues();
  const Index n0 = vals.size();
  ctx.fixed_point_residual = std::abs(vals[0] - ctx.omega);
  const double tol = 1e-9 * std::max(1.0, std::abs(vals[0]));
  Index lowest = 1;
  while (lowest < n0 && vals[lowest] - vals[0] <= tol) ++lowest;
  if (lowest > 1) {
    ctx.xi0_degenerate = true;
    const Matrix basis = eig.eigenvectors().leftCols(lowest);
    ctx.xi0 = basis * (basis.transpose() * Vector::Ones(n0));
  } else {
    ctx.xi0 = eig.eigenvectors().col(0);
    if (ctx.xi0.sum() < 0) ctx.xi0 = -ctx.xi0;
  }
  ctx.xi0.normalize();
  if (ctx.xi0.minCoeff() < -1e-10)
    throw SolverError("lowest eigenvector of h has mixed signs; the effective Hamiltonian is not "
                      "sign-definite (is the parity block applied?)",
                      ctx.xi0.minCoeff());
  ctx.xi0 = ctx.xi0.cwiseMax(0.0);
  return ctx;
}

StateVector phi_exact(const BwContext& ctx, const DiagonalTable& table, const GroundSpaceInfo& ground,
                      const PathParams& params, int degree, OverlapReport* report) {
  const int n = table.n_qubits;
  const Index dim = table.energies.size();
  Vector xi(dim);
  xi.setZero();
  for (std::size_t a = 0; a < ctx.active_indices.size(); ++a) xi[ctx.active_indices[a]] = ctx.xi0[a];

  OperatorSpec js_spec = OperatorSpec::js(1.0, params.B, params.K, ctx.zeta);
  const LinearOperator js = make_operator(js_spec, table, &ground);
  const Deflation in_block = block_only(ctx.block);
  const double lambda_js = extreme_eigs(js, 1, in_block).eigenvalues[0];
  if (!(lambda_js > ctx.omega + 1e-8))
    throw PreconditionError("omega is not below the spectrum of H_1 + zeta P");

  StateVector phi(n);
  if (params.B == 0.0) {
    phi.amplitudes = xi;
  } else {
    const Vector rhs = (ctx.omega - table.e0 - ctx.zeta) * xi;
    phi.amplitudes = solve_shifted(js, ctx.omega, rhs, in_block);
  }

  if (report) {
    OverlapReport& r = *report;
    const LinearOperator h1 = make_operator(OperatorSpec::hs(1.0, params.B, params.K), table);
    const Vector h1phi = h1 * phi.amplitudes;
    r.phi_norm = phi.norm();
    r.phi_sum = phi.amplitudes.sum();
    r.eigen_residual = (h1phi - ctx.omega * phi.amplitudes).norm() / r.phi_norm;
    double proj = 0.0;
    for (const auto& g : ctx.ground_level) {
      const double c = g.dot(phi.amplitudes) / r.phi_norm;
      proj += c * c;
    }
    r.ray_overlap = std::sqrt(proj);
    r.min_amplitude = phi.amplitudes.minCoeff();
    r.lambda_min_js = lambda_js;
    r.inner_psi_plus_phi = overlap_with_plus(phi.amplitudes, n);
    r.inner_psi_plus_gs = overlap_with_plus(ctx.psi01, n);
    r.xi0_l1 = ctx.xi0.lpNorm<1>();
    const AnalyticBound bound = analytic_lower_bound(n, degree, params.K, params.B, table.e0);
    r.log2_analytic_bound = bound.log2_leading - 0.5 * n;
    r.analytic_bound = std::exp2(r.log2_analytic_bound);
    r.log2_overlap_margin = std::log2(r.inner_psi_plus_phi) + 0.5 * n;
    r.log2_gs_overlap_margin = std::log2(r.inner_psi_plus_gs) + 0.5 * n;
  }
  return phi;
}

WalkEstimate walk_estimate(const BwContext& ctx, const DiagonalTable& table,
                           const GroundSpaceInfo& ground, const PathParams& params, int degree,
                           const WalkOptions& options) {
  if (options.samples < 1) throw PreconditionError("walk_estimate needs at least one sample");
  const int n = table.n_qubits;
  const double B = params.B;
  const double omega = ctx.omega;
  WalkEstimate out;
  out.samples = options.samples;
  out.seed = options.seed;
  const double mean_steps = B * n / (2.0 * degree * params.K * std::abs(table.e0));
  out.t_max = 10 * static_cast<int>(std::ceil(mean_steps)) + 100;

  Vector shifted = table.energies;  // E'_u = <u|J_0|u>
  for (Index u : ground.ground_indices) shifted[u] += ctx.zeta;

  std::vector<double> cdf(ctx.xi0.size());
  double acc = 0.0;
  for (Index a = 0; a < ctx.xi0.size(); ++a) cdf[a] = (acc += ctx.xi0[a]);
  for (double& c : cdf) c /= acc;

  std::vector<double> values(options.samples);
  std::vector<int> t_used(options.samples, 0);
  auto run = [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i) {
      CounterRng rng(options.seed, static_cast<std::uint64_t>(i));
      const double r = rng.uniform();
      const auto pick = std::min<std::size_t>(
          std::upper_bound(cdf.begin(), cdf.end(), r) - cdf.begin(), cdf.size() - 1);
      Index u = ctx.active_indices[pick];
      double sum = 1.0, weight = 1.0;
      int t = 0;
      while (t < out.t_max) {
        if (B == 0.0) break;
        for (int k = 0; k < params.K; ++k) u ^= Index{1} << rng.below(static_cast<std::uint64_t>(n));
        const double denom = shifted[u] - omega;
        if (!(denom > 0.0))
          throw PreconditionError("walk visited basis state " + std::to_string(u) +
                                  " with E'_u - omega = " + std::to_string(denom) +
                                  " <= 0; omega is too high");
        weight *= B / denom;
        sum += weight;
        ++t;
        if (weight < options.cutoff * sum) break;
      }
      values[i] = sum;
      t_used[i] = t;
    }
  };

  const int workers = std::max(1, execution_config().workers);
  if (workers == 1 || options.samples < 1024) {
    run(0, options.samples);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    const std::int64_t chunk = (options.samples + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const std::int64_t b = w * chunk, e = std::min(options.samples, b + chunk);
      if (b >= e) break;
      pool.emplace_back([&, w, b, e] {
        try {
          run(b, e);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  const auto count = static_cast<std::size_t>(options.samples);
  const double mean = pairwise_sum(values.data(), count) / static_cast<double>(count);
  std::vector<double> sq(count);
  for (std::size_t i = 0; i < count; ++i) sq[i] = (values[i] - mean) * (values[i] - mean);
  const double var = count > 1 ? pairwise_sum(sq.data(), count) / static_cast<double>(count - 1) : 0.0;
  out.series_estimate = mean;
  out.std_error = std::sqrt(var / static_cast<double>(count));
  out.t_truncation = *std::max_element(t_used.begin(), t_used.end());
  return out;
}

AnalyticBound analytic_lower_bound(int n_qubits, int degree, int K, double B, double e0) {
  if (!(e0 < 0)) throw PreconditionError("analytic bound needs E0 < 0");
  if (n_qubits < 1 || degree < 1 || K < 1) throw PreconditionError("analytic bound needs N, D, K >= 1");
  const double exponent = B * n_qubits / (2.0 * degree * K * std::abs(e0));
  return {std::exp(exponent), exponent * std::numbers::log2e};
}

}  // namespace shortpath
