#include "shortpath/hilbert.hpp"

#include "shortpath/rng.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace shortpath {

ExecutionConfig& execution_config() {
  static ExecutionConfig config;
  return config;
}

namespace {

std::uint64_t term_mask(const Term& t) {
  std::uint64_t m = 0;
  for (int q : t.qubits) m |= std::uint64_t{1} << q;
  return m;
}

void check_dim(int n_qubits) {
  if (n_qubits > execution_config().max_qubits)
    throw BudgetError("N = " + std::to_string(n_qubits) + " exceeds the dense-vector ceiling of " +
                      std::to_string(execution_config().max_qubits) +
                      " qubits; use energy_at() for streaming evaluation");
}

// Runs body(begin, end) over [0, n) split into contiguous chunks. Each output
// element is written by exactly one chunk, so the result does not depend on
// the worker count.
template <typename Body>
void parallel_chunks(Index n, Body&& body) {
  const int workers = std::max(1, execution_config().workers);
  if (workers == 1 || n < (Index{1} << 15)) {
    body(Index{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  const Index chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const Index b = w * chunk;
    const Index e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&body, b, e] { body(b, e); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

StateVector::StateVector(int n, Vector amps) : n_qubits(n), amplitudes(std::move(amps)) {
  if (amplitudes.size() != (Index{1} << n))
    throw PreconditionError("state vector length must be 2^N");
}

StateVector::StateVector(int n) : n_qubits(n), amplitudes(Vector::Zero(Index{1} << n)) {}

double energy_at(const Instance& instance, Index u) {
  double e = 0.0;
  const auto bits = static_cast<std::uint64_t>(u);
  for (const auto& t : instance.terms())
    e += (__builtin_popcountll(bits & term_mask(t)) & 1) ? -t.weight : t.weight;
  return e;
}

DiagonalTable evaluate_hz(const Instance& instance) {
  const int n = instance.n_qubits();
  check_dim(n);
  DiagonalTable table;
  table.n_qubits = n;
  const Index dim = Index{1} << n;
  table.energies = Vector::Zero(dim);
  double* e = table.energies.data();
  for (const auto& t : instance.terms()) {
    const std::uint64_t m = term_mask(t);
    const double w = t.weight;
    parallel_chunks(dim, [&](Index b, Index end) {
      for (Index u = b; u < end; ++u)
        e[u] += (__builtin_popcountll(static_cast<std::uint64_t>(u) & m) & 1) ? -w : w;
    });
  }
  table.e0 = table.energies.minCoeff();
  double second = std::numeric_limits<double>::infinity();
  for (Index u = 0; u < dim; ++u)
    if (e[u] > table.e0 && e[u] < second) second = e[u];
  if (std::isfinite(second)) table.gap = second - table.e0;
  return table;
}

bool GroundSpaceInfo::contains(Index u) const {
  return std::binary_search(ground_indices.begin(), ground_indices.end(), u);
}

std::vector<Index> GroundSpaceInfo::indices_in(std::optional<Parity> block) const {
  if (!block) return ground_indices;
  std::vector<Index> out;
  for (Index u : ground_indices)
    if (parity_of(u) == *block) out.push_back(u);
  return out;
}

GroundSpaceInfo ground_space(const DiagonalTable& table, double degeneracy_tol) {
  GroundSpaceInfo info;
  info.e0 = table.e0;
  info.degeneracy_tol = degeneracy_tol;
  double first_excluded = std::numeric_limits<double>::infinity();
  for (Index u = 0; u < table.energies.size(); ++u) {
    const double e = table.energies[u];
    if (e <= table.e0 + degeneracy_tol)
      info.ground_indices.push_back(u);
    else
      first_excluded = std::min(first_excluded, e);
  }
  info.n0 = static_cast<Index>(info.ground_indices.size());
  info.gap_certified = !std::isfinite(first_excluded) || first_excluded >= table.e0 + 1.0 - 1e-9;
  return info;
}

StateVector make_state(const StateKind& kind, int n_qubits) {
  check_dim(n_qubits);
  StateVector state(n_qubits);
  const Index dim = state.dim();
  auto check_support = [dim](const std::vector<Index>& support) {
    if (support.empty()) throw PreconditionError("state support must be non-empty");
    for (Index u : support)
      if (u < 0 || u >= dim) throw PreconditionError("basis index " + std::to_string(u) + " out of range");
  };

  if (std::holds_alternative<PsiPlus>(kind)) {
    state.amplitudes.setConstant(std::exp2(-0.5 * n_qubits));
  } else if (auto* b = std::get_if<BasisState>(&kind)) {
    check_support({b->u});
    state.amplitudes[b->u] = 1.0;
  } else if (auto* uni = std::get_if<UniformOn>(&kind)) {
    check_support(uni->support);
    for (Index u : uni->support) state.amplitudes[u] = 1.0;
    state.amplitudes /= state.amplitudes.norm();
  } else {
    const auto& rnd = std::get<RandomOn>(kind);
    check_support(rnd.support);
    CounterRng rng(rnd.seed);
    for (Index u : rnd.support) state.amplitudes[u] = rng.normal();
    const double nrm = state.amplitudes.norm();
    if (nrm == 0.0) throw PreconditionError("random state drew an all-zero vector");
    state.amplitudes /= nrm;
  }
  return state;
}

void validate(const OperatorSpec& spec) {
  if (spec.K < 1) throw PreconditionError("K must be a positive integer");
  if (!(spec.s >= 0.0 && spec.s <= 1.0)) throw PreconditionError("s must lie in [0, 1]");
  if (!(spec.B >= 0.0) || !std::isfinite(spec.B)) throw PreconditionError("B must be non-negative");
}

void apply_x(const Vector& in, int n_qubits, Vector& out) {
  const Index dim = in.size();
  out.resize(dim);
  const double* x = in.data();
  double* y = out.data();
  parallel_chunks(dim, [&](Index b, Index e) {
    for (Index u = b; u < e; ++u) {
      double acc = 0.0;
      for (int i = 0; i < n_qubits; ++i) acc += x[u ^ (Index{1} << i)];
      y[u] = acc;
    }
  });
}

void apply_xk(Vector& v, int n_qubits, int K) {
  Vector tmp(v.size());
  const double inv_n = 1.0 / n_qubits;
  for (int k = 0; k < K; ++k) {
    apply_x(v, n_qubits, tmp);
    v.swap(tmp);
    v *= inv_n;
  }
}

LinearOperator make_operator(const OperatorSpec& spec, const DiagonalTable& table,
                             const GroundSpaceInfo* ground) {
  validate(spec);
  const int n = table.n_qubits;
  const Index dim = table.energies.size();
  const bool needs_ground = spec.kind == OperatorKind::QHSQ || spec.kind == OperatorKind::JS;
  if (needs_ground && ground == nullptr)
    throw PreconditionError("Q H_s Q and J_0 + sV need ground-space information");

  const Vector* energies = &table.energies;
  std::vector<Index> ground_idx = ground ? ground->ground_indices : std::vector<Index>{};

  auto parity_guard = [spec](const Vector& x) {
    if (!spec.check_parity || !spec.parity_block) return;
    for (Index u = 0; u < x.size(); ++u)
      if (x[u] != 0.0 && parity_of(u) != *spec.parity_block)
        throw PreconditionError("input has support outside the " +
                                std::string(to_string(*spec.parity_block)) + " parity block");
  };

  LinearOperator op;
  op.dim = dim;
  switch (spec.kind) {
    case OperatorKind::HZ:
      op.apply = [energies, parity_guard](const Vector& x, Vector& y) {
        parity_guard(x);
        y = energies->cwiseProduct(x);
      };
      break;
    case OperatorKind::X:
      op.apply = [n, parity_guard](const Vector& x, Vector& y) {
        parity_guard(x);
        apply_x(x, n, y);
      };
      break;
    case OperatorKind::XK:
      op.apply = [n, K = spec.K, parity_guard](const Vector& x, Vector& y) {
        parity_guard(x);
        y = x;
        apply_xk(y, n, K);
      };
      break;
    case OperatorKind::HS:
    case OperatorKind::QHSQ:
    case OperatorKind::JS: {
      const double coupling = spec.s * spec.B;
      const bool q_sandwich = spec.kind == OperatorKind::QHSQ;
      const double ground_shift = spec.kind == OperatorKind::JS ? spec.zeta : 0.0;
      op.apply = [=](const Vector& x_in, Vector& y) {
        parity_guard(x_in);
        Vector x = x_in;
        if (q_sandwich) zero_indices(x, ground_idx);
        Vector walk = x;
        if (coupling != 0.0) apply_xk(walk, n, spec.K);
        y = energies->cwiseProduct(x) - coupling * walk;
        if (ground_shift != 0.0)
          for (Index u : ground_idx) y[u] += ground_shift * x[u];
        if (q_sandwich) zero_indices(y, ground_idx);
      };
      break;
    }
  }
  return op;
}

StateVector apply_operator(const OperatorSpec& spec, const DiagonalTable& table,
                           const GroundSpaceInfo* ground, const StateVector& state) {
  if (state.n_qubits != table.n_qubits) throw PreconditionError("state and table sizes differ");
  auto op = make_operator(spec, table, ground);
  StateVector out(state.n_qubits);
  op.apply(state.amplitudes, out.amplitudes);
  return out;
}

void zero_indices(Vector& v, const std::vector<Index>& indices) {
  for (Index u : indices) v[u] = 0.0;
}

void keep_parity(Vector& v, Parity block) {
  for (Index u = 0; u < v.size(); ++u)
    if (parity_of(u) != block) v[u] = 0.0;
}

StateVector project(const StateVector& state, const Subspace& subspace,
                    const GroundSpaceInfo* ground) {
  StateVector out = state;
  if (auto* par = std::get_if<ProjectParity>(&subspace)) {
    keep_parity(out.amplitudes, par->block);
    return out;
  }
  if (ground == nullptr) throw PreconditionError("P and Q projections need ground-space information");
  if (std::holds_alternative<ProjectQ>(subspace)) {
    zero_indices(out.amplitudes, ground->ground_indices);
  } else {
    out.amplitudes.setZero();
    for (Index u : ground->ground_indices) out.amplitudes[u] = state.amplitudes[u];
  }
  return out;
}

Matrix dense_matrix(const LinearOperator& op) {
  Matrix m(op.dim, op.dim);
  Vector e = Vector::Zero(op.dim);
  Vector col(op.dim);
  for (Index j = 0; j < op.dim; ++j) {
    e[j] = 1.0;
    op.apply(e, col);
    m.col(j) = col;
    e[j] = 0.0;
  }
  return m;
}

}  // namespace shortpath
