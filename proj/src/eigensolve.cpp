#include "shortpath/eigensolve.hpp"

#include "shortpath/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace shortpath {

void Deflation::orthonormalize() const {
  if (orthonormal_) return;
  auto& vs = const_cast<std::vector<Vector>&>(vectors);
  std::vector<Vector> kept;
  for (auto v : vs) {
    for (const auto& u : basis_indices) v[u] = 0.0;
    if (parity_block) keep_parity(v, *parity_block);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : kept) v -= q.dot(v) * q;
    const double n = v.norm();
    if (n > 1e-12) kept.push_back(v / n);
  }
  vs = std::move(kept);
  orthonormal_ = true;
}

void Deflation::apply(Vector& v) const {
  zero_indices(v, basis_indices);
  if (parity_block) keep_parity(v, *parity_block);
  if (vectors.empty()) return;
  orthonormalize();
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& q : vectors) v -= q.dot(v) * q;
}

Index Deflation::complement_dim(Index dim) const {
  orthonormalize();
  Index kept = 0;
  std::vector<Index> sorted = basis_indices;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (parity_block) {
    kept = dim / 2;
    for (Index u : sorted)
      if (parity_of(u) == *parity_block) --kept;
  } else {
    kept = dim - static_cast<Index>(sorted.size());
  }
  return std::max<Index>(0, kept - static_cast<Index>(vectors.size()));
}

EigenResult dense_spectrum(const Matrix& m, bool with_vectors) {
  if (m.rows() != m.cols()) throw PreconditionError("dense_spectrum needs a square matrix");
  EigenResult out;
  if (m.rows() == 0) return out;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(
      m, with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw SolverError("dense eigensolver failed", NAN);
  const Vector& vals = solver.eigenvalues();
  out.eigenvalues.assign(vals.data(), vals.data() + vals.size());
  if (with_vectors) {
    for (Index j = 0; j < vals.size(); ++j) {
      Vector v = solver.eigenvectors().col(j);
      out.residuals.push_back((m * v - vals[j] * v).norm());
      out.eigenvectors.push_back(std::move(v));
    }
  }
  return out;
}

EigenResult dense_spectrum(const LinearOperator& op, bool with_vectors, Index max_dim) {
  if (op.dim > max_dim)
    throw BudgetError("dense_spectrum limited to dimension " + std::to_string(max_dim) + ", got " +
                      std::to_string(op.dim));
  return dense_spectrum(dense_matrix(op), with_vectors);
}

EigenResult extreme_eigs(const LinearOperator& op, int how_many, const Deflation& deflate,
                         const LanczosOptions& options) {
  if (how_many < 1) throw PreconditionError("extreme_eigs needs how_many >= 1");
  const Index dim = op.dim;
  const Index eff = deflate.complement_dim(dim);
  if (how_many > eff)
    throw PreconditionError("requested " + std::to_string(how_many) +
                            " eigenpairs but the deflated space has dimension " + std::to_string(eff));

  std::vector<Vector> locked;
  std::vector<double> locked_vals, locked_res;
  auto project_all = [&](Vector& v) {
    deflate.apply(v);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : locked) v -= q.dot(v) * q;
  };

  CounterRng rng(options.seed);
  auto random_start = [&] {
    Vector v(dim);
    for (Index i = 0; i < dim; ++i) v[i] = rng.normal();
    project_all(v);
    return v;
  };

  double scale = 1.0;
  Vector w(dim);
  while (static_cast<int>(locked.size()) < how_many) {
    const Index remaining = eff - static_cast<Index>(locked.size());
    const Index m_cap = std::min<Index>(options.krylov_dim, remaining);
    Matrix basis(dim, m_cap);
    Vector start = random_start();
    double best_residual = std::numeric_limits<double>::infinity();
    bool converged = false;

    for (int restart = 0; restart <= options.max_restarts && !converged; ++restart) {
      double nrm = start.norm();
      if (!(nrm > 1e-300)) {
        start = random_start();
        nrm = start.norm();
      }
      Vector v = start / nrm;
      std::vector<double> alpha, beta;
      Index used = 0;
      for (Index j = 0; j < m_cap; ++j) {
        basis.col(j) = v;
        op.apply(v, w);
        project_all(w);
        alpha.push_back(v.dot(w));
        auto cols = basis.leftCols(j + 1);
        for (int pass = 0; pass < 2; ++pass) w.noalias() -= cols * (cols.transpose() * w);
        project_all(w);
        used = j + 1;
        const double b = w.norm();
        if (j + 1 == m_cap) break;
        if (b <= 1e-13 * scale) break;  // invariant subspace reached
        beta.push_back(b);
        v = w / b;
      }

      Matrix t = Matrix::Zero(used, used);
      for (Index i = 0; i < used; ++i) {
        t(i, i) = alpha[i];
        if (i + 1 < used) t(i, i + 1) = t(i + 1, i) = beta[i];
      }
      Eigen::SelfAdjointEigenSolver<Matrix> tri(t);
      const double theta = tri.eigenvalues()[0];
      scale = std::max({scale, std::abs(tri.eigenvalues()[0]), std::abs(tri.eigenvalues()[used - 1])});

      Vector y = basis.leftCols(used) * tri.eigenvectors().col(0);
      project_all(y);
      y.normalize();
      op.apply(y, w);
      project_all(w);
      const double theta_y = y.dot(w);
      const double residual = (w - theta_y * y).norm();
      best_residual = std::min(best_residual, residual);
      if (residual <= options.tol * scale) {
        locked.push_back(y);
        locked_vals.push_back(theta_y);
        locked_res.push_back(residual);
        converged = true;
      } else {
        start = y;
      }
      (void)theta;
    }
    if (!converged)
      throw SolverError("Lanczos did not converge for eigenpair " + std::to_string(locked.size()) +
                            " (best residual " + std::to_string(best_residual) + ")",
                        best_residual);
  }

  std::vector<std::size_t> order(locked.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return locked_vals[a] < locked_vals[b]; });
  EigenResult out;
  for (auto i : order) {
    out.eigenvalues.push_back(locked_vals[i]);
    out.eigenvectors.push_back(std::move(locked[i]));
    out.residuals.push_back(locked_res[i]);
  }
  return out;
}

EigenResult lowest_eigenspace(const LinearOperator& op, const Deflation& deflate,
                              double degeneracy_tol, const LanczosOptions& options) {
  const Index eff = deflate.complement_dim(op.dim);
  if (eff < 1) throw PreconditionError("lowest_eigenspace on an empty space");
  int k = static_cast<int>(std::min<Index>(2, eff));
  for (;;) {
    EigenResult res = extreme_eigs(op, k, deflate, options);
    int level = 1;
    while (level < k && res.eigenvalues[level] - res.eigenvalues[0] <= degeneracy_tol) ++level;
    if (level < k || k == eff) {
      res.eigenvalues.resize(level);
      res.eigenvectors.resize(level);
      res.residuals.resize(level);
      return res;
    }
    k = static_cast<int>(std::min<Index>(2 * k, eff));
  }
}

namespace {

// MINRES (Paige & Saunders) for the symmetric system A x = b, A given by
// `apply_a`. Returns the iterate; `converged` reports whether the recurrence
// residual dropped below tol * |b|.
template <typename ApplyA>
Vector minres(ApplyA&& apply_a, const Vector& b, double tol, int max_iter, bool& converged) {
  const Index n = b.size();
  Vector x = Vector::Zero(n);
  converged = false;
  const double beta1 = b.norm();
  if (beta1 == 0.0) {
    converged = true;
    return x;
  }
  Vector r1 = b, r2 = b, y = b, v(n), w = Vector::Zero(n), w1(n), w2 = Vector::Zero(n);
  double oldb = 0.0, beta = beta1, dbar = 0.0, epsln = 0.0, phibar = beta1;
  double cs = -1.0, sn = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();

  for (int itn = 1; itn <= max_iter; ++itn) {
    v = y / beta;
    apply_a(v, y);
    if (itn >= 2) y -= (beta / oldb) * r1;
    const double alfa = v.dot(y);
    y -= (alfa / beta) * r2;
    r1.swap(r2);
    r2 = y;
    oldb = beta;
    beta = y.norm();
    const double oldeps = epsln;
    const double delta = cs * dbar + sn * alfa;
    const double gbar = sn * dbar - cs * alfa;
    epsln = sn * beta;
    dbar = -cs * beta;
    const double gamma = std::max(std::hypot(gbar, beta), eps);
    cs = gbar / gamma;
    sn = beta / gamma;
    const double phi = cs * phibar;
    phibar = sn * phibar;
    w1.swap(w2);
    w2.swap(w);
    w = (v - oldeps * w1 - delta * w2) / gamma;
    x += phi * w;
    if (phibar <= tol * beta1 || beta <= eps * beta1) {
      converged = true;
      break;
    }
  }
  return x;
}

}  // namespace

Vector solve_shifted(const LinearOperator& op, double omega, const Vector& rhs,
                     const Deflation& deflate, const ShiftSolveOptions& options) {
  if (rhs.size() != op.dim) throw PreconditionError("rhs length does not match the operator");
  Vector b = rhs;
  deflate.apply(b);
  const double bnorm = b.norm();
  if (bnorm == 0.0) return Vector::Zero(op.dim);

  const Index eff = deflate.complement_dim(op.dim);
  const int max_iter =
      options.max_iter > 0 ? options.max_iter
                           : static_cast<int>(std::clamp<Index>(20 * eff, 200, 20000));
  Vector tmp(op.dim);
  auto apply_a = [&](const Vector& v, Vector& out) {
    op.apply(v, tmp);
    out = omega * v - tmp;
    deflate.apply(out);
  };

  Vector x = Vector::Zero(op.dim);
  Vector r = b;
  double rnorm = bnorm;
  for (int sweep = 0; sweep < 6 && rnorm > options.tol * bnorm; ++sweep) {
    bool converged = false;
    Vector dx = minres(apply_a, r, options.tol * bnorm / rnorm * 0.5, max_iter, converged);
    deflate.apply(dx);
    x += dx;
    Vector ax(op.dim);
    apply_a(x, ax);
    r = b - ax;
    rnorm = r.norm();
  }
  const double xnorm = x.norm();
  const double gap_estimate = xnorm > 0.0 ? bnorm / xnorm : 0.0;
  if (rnorm > options.tol * bnorm)
    throw SingularShiftError("shifted solve stagnated at relative residual " +
                                 std::to_string(rnorm / bnorm) + "; estimated distance to spectrum " +
                                 std::to_string(gap_estimate),
                             rnorm / bnorm, gap_estimate);
  if (gap_estimate < options.singular_threshold)
    throw SingularShiftError("shift within " + std::to_string(gap_estimate) +
                                 " of the deflated spectrum",
                             rnorm / bnorm, gap_estimate);
  return x;
}

LemmaGenReport block_lemma_check(const BlockMatrixInput& in, double tol) {
  const Index n0 = in.a_block.rows();
  const Index m = in.c_block.rows();
  if (n0 < 1 || in.a_block.cols() != n0 || in.c_block.cols() != m || in.b_block.rows() != n0 ||
      in.b_block.cols() != m)
    throw PreconditionError("block dimensions are inconsistent");
  auto symmetric = [](const Matrix& a) {
    return (a - a.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, a.cwiseAbs().maxCoeff());
  };
  if (!symmetric(in.a_block) || (m > 0 && !symmetric(in.c_block)))
    throw PreconditionError("diagonal blocks must be symmetric");

  LemmaGenReport rep;
  rep.n0 = n0;
  rep.m = m;
  Eigen::SelfAdjointEigenSolver<Matrix> a_eig(in.a_block, Eigen::EigenvaluesOnly);
  rep.e_a_min = a_eig.eigenvalues()[0];
  rep.e_a_max = a_eig.eigenvalues()[n0 - 1];
  if (m == 0) return rep;
  Eigen::SelfAdjointEigenSolver<Matrix> c_eig(in.c_block, Eigen::EigenvaluesOnly);
  rep.e_c_min = c_eig.eigenvalues()[0];
  rep.b_norm = Eigen::JacobiSVD<Matrix>(in.b_block).singularValues()[0];
  rep.applicable = rep.e_c_min > rep.e_a_max;
  if (!rep.applicable) return rep;

  Matrix h(n0 + m, n0 + m);
  h << in.a_block, in.b_block, in.b_block.transpose(), in.c_block;
  Eigen::SelfAdjointEigenSolver<Matrix> h_eig(h);
  const Vector& lam = h_eig.eigenvalues();
  rep.spectrum.assign(lam.data(), lam.data() + lam.size());

  rep.item1_margin = std::min(rep.e_a_max - lam[n0 - 1], lam[n0] - rep.e_c_min);
  rep.item1_pass = rep.item1_margin >= -tol;

  const double bb = rep.b_norm * rep.b_norm;
  rep.lambda_min = lam[0];
  const double mid = 0.5 * (rep.e_a_min + rep.e_c_min);
  const double half = 0.5 * (rep.e_c_min - rep.e_a_min);
  rep.two_by_two_min = mid - std::sqrt(half * half + bb);
  rep.closed_form_bound = rep.e_a_min - bb / (rep.e_c_min - rep.e_a_min);
  rep.item2_margin = std::min(rep.lambda_min - rep.two_by_two_min, rep.two_by_two_min - rep.closed_form_bound);
  rep.item2_pass = rep.item2_margin >= -tol;

  const Matrix top = h_eig.eigenvectors().topLeftCorner(n0, n0);
  Eigen::SelfAdjointEigenSolver<Matrix> w_eig(top.transpose() * top, Eigen::EigenvaluesOnly);
  rep.min_p_weight = w_eig.eigenvalues()[0];
  const double sep = rep.e_c_min - rep.e_a_max;
  const double x2 = bb / (sep * sep);
  rep.item3_bound = x2 <= 1.0 ? std::sqrt(1.0 - x2) : 0.0;
  rep.item3_margin = rep.min_p_weight - rep.item3_bound;
  rep.item3_pass = rep.item3_margin >= -tol;
  rep.item3_norm_bound = std::max(0.0, 1.0 - x2);
  rep.item3_norm_margin = rep.min_p_weight - rep.item3_norm_bound;
  rep.item3_norm_pass = rep.item3_norm_margin >= -tol;
  return rep;
}

}  // namespace shortpath
