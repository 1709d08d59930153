#ifndef SHORTPATH_HILBERT_HPP
#define SHORTPATH_HILBERT_HPP

#include "shortpath/instances.hpp"
#include "shortpath/types.hpp"

#include <functional>
#include <optional>
#include <variant>
#include <vector>

namespace shortpath {

// Basis convention: bit i of a basis index u is qubit i, and bit value 0
// maps to Z_i = +1, bit value 1 to Z_i = -1.

/// Real amplitudes over the 2^N computational basis states.
struct StateVector {
  int n_qubits = 0;
  Vector amplitudes;

  StateVector() = default;
  StateVector(int n, Vector amps);
  explicit StateVector(int n);  // zero vector

  Index dim() const { return amplitudes.size(); }
  double norm() const { return amplitudes.norm(); }
  double l1() const { return amplitudes.lpNorm<1>(); }
  double dot(const StateVector& other) const { return amplitudes.dot(other.amplitudes); }
};

/// <psi_+|v> = 2^{-N/2} * sum_u v_u.
template <typename Derived>
double overlap_with_plus(const Eigen::MatrixBase<Derived>& v, int n_qubits) {
  return v.sum() * std::exp2(-0.5 * n_qubits);
}

struct DiagonalTable {
  int n_qubits = 0;
  Vector energies;
  double e0 = 0.0;
  /// Second-distinct energy minus e0; empty when every state is degenerate.
  std::optional<double> gap;
};

/// Energy of one basis state, no table needed.
double energy_at(const Instance& instance, Index u);

/// Dense table of <u|H_Z|u>. Throws BudgetError above the configured qubit
/// ceiling; energy_at() is the streaming fallback.
DiagonalTable evaluate_hz(const Instance& instance);

struct GroundSpaceInfo {
  double e0 = 0.0;
  Index n0 = 0;
  std::vector<Index> ground_indices;  // sorted
  bool gap_certified = false;
  double degeneracy_tol = 1e-9;

  bool contains(Index u) const;
  /// Ground indices restricted to one parity block (all of them when empty).
  std::vector<Index> indices_in(std::optional<Parity> block) const;
};

/// Ground set = energies within `degeneracy_tol` of e0. The gap is certified
/// when the lowest excluded energy is at least e0 + 1 - 1e-9 (vacuously true
/// when nothing is excluded).
GroundSpaceInfo ground_space(const DiagonalTable& table, double degeneracy_tol = 1e-9);

struct PsiPlus {};
struct BasisState {
  Index u = 0;
};
struct UniformOn {
  std::vector<Index> support;
};
struct RandomOn {
  std::vector<Index> support;
  std::uint64_t seed = 0;
};
using StateKind = std::variant<PsiPlus, BasisState, UniformOn, RandomOn>;

StateVector make_state(const StateKind& kind, int n_qubits);

enum class OperatorKind {
  HZ,    // diagonal objective
  X,     // sum_i X_i
  XK,    // (X/N)^K
  HS,    // H_Z - s B (X/N)^K
  QHSQ,  // Q H_s Q
  JS,    // H_s + zeta P   (J_0 + s V in the Brillouin-Wigner resolvent)
};

struct OperatorSpec {
  OperatorKind kind = OperatorKind::HZ;
  int K = 1;
  double s = 1.0;
  double B = 0.0;
  double zeta = 0.5;
  std::optional<Parity> parity_block;
  bool check_parity = false;

  static OperatorSpec hz() { return {}; }
  static OperatorSpec x() { return make(OperatorKind::X, 1, 1.0, 0.0); }
  static OperatorSpec xk(int K) { return make(OperatorKind::XK, K, 1.0, 0.0); }
  static OperatorSpec hs(double s, double B, int K) { return make(OperatorKind::HS, K, s, B); }
  static OperatorSpec qhsq(double s, double B, int K) { return make(OperatorKind::QHSQ, K, s, B); }
  static OperatorSpec js(double s, double B, int K, double zeta) {
    OperatorSpec o = make(OperatorKind::JS, K, s, B);
    o.zeta = zeta;
    return o;
  }

 private:
  static OperatorSpec make(OperatorKind kind, int K, double s, double B) {
    OperatorSpec o;
    o.kind = kind;
    o.K = K;
    o.s = s;
    o.B = B;
    return o;
  }
};

/// Throws PreconditionError on s outside [0, 1], negative B or K < 1.
void validate(const OperatorSpec& spec);

/// out = (sum_i X_i) in. `out` must not alias `in`.
void apply_x(const Vector& in, int n_qubits, Vector& out);
/// v <- (X/N)^K v, K successive applications.
void apply_xk(Vector& v, int n_qubits, int K);

/// Matrix-free y = Op x; linear, symmetric in this real basis.
struct LinearOperator {
  Index dim = 0;
  std::function<void(const Vector&, Vector&)> apply;

  Vector operator*(const Vector& x) const {
    Vector y(dim);
    apply(x, y);
    return y;
  }
};

/// Binds an operator spec to an H_Z table (and ground info for QHSQ / JS).
LinearOperator make_operator(const OperatorSpec& spec, const DiagonalTable& table,
                             const GroundSpaceInfo* ground = nullptr);

StateVector apply_operator(const OperatorSpec& spec, const DiagonalTable& table,
                           const GroundSpaceInfo* ground, const StateVector& state);

struct ProjectP {};
struct ProjectQ {};
struct ProjectParity {
  Parity block = Parity::Even;
};
using Subspace = std::variant<ProjectP, ProjectQ, ProjectParity>;

StateVector project(const StateVector& state, const Subspace& subspace,
                    const GroundSpaceInfo* ground = nullptr);

void zero_indices(Vector& v, const std::vector<Index>& indices);
void keep_parity(Vector& v, Parity block);

/// Explicit dense matrix of a small operator, column by column.
Matrix dense_matrix(const LinearOperator& op);

}  // namespace shortpath

#endif  // SHORTPATH_HILBERT_HPP
