#pragma once

// Symmetric generalized eigenproblems A x = λ M x with M symmetric positive definite.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#ifdef COASSOC_WITH_CHOLMOD
#include <Eigen/CholmodSupport>
#endif

#include "coassoc/error.hpp"

namespace coassoc {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Sparse LDLᵀ used for every symmetric positive-definite solve.
#ifdef COASSOC_WITH_CHOLMOD
using SpdSolver = Eigen::CholmodSimplicialLDLT<SparseMatrix>;
#else
using SpdSolver = Eigen::SimplicialLDLT<SparseMatrix>;
#endif

struct EigenOptions {
  double residual_tol = 1e-8;     ///< ‖Ax − λMx‖ ≤ tol·‖Mx‖ for every returned pair
  Eigen::Index dense_threshold = 1500;
  std::uint64_t seed = 7;
  int max_restarts = 80;
  int krylov_steps = 4;
};

struct EigenPairs {
  std::vector<double> values;
  Eigen::MatrixXd vectors;  ///< M-orthonormal columns
  std::vector<double> residuals;
};

/// Projection onto the M-orthogonal complement of range(G): x − G K⁺ Gᵀ M x with K = Gᵀ M G.
/// One column of G per connected component is pinned so that K is invertible.
class RangeDeflation {
 public:
  RangeDeflation(const SparseMatrix& g, const SparseMatrix& m, const std::vector<Eigen::Index>& pinned) : g_(g), m_(m) {
    SparseMatrix k = SparseMatrix(g.transpose()) * m * g;
    std::vector<bool> pin(static_cast<std::size_t>(k.rows()), false);
    for (auto p : pinned) pin[static_cast<std::size_t>(p)] = true;
    std::vector<Eigen::Triplet<double>> tr;
    for (Eigen::Index c = 0; c < k.outerSize(); ++c)
      for (SparseMatrix::InnerIterator it(k, c); it; ++it)
        if (!pin[static_cast<std::size_t>(it.row())] && !pin[static_cast<std::size_t>(it.col())])
          tr.emplace_back(it.row(), it.col(), it.value());
    for (auto p : pinned) tr.emplace_back(p, p, 1.0);
    pinned_ = pinned;
    SparseMatrix kp(k.rows(), k.cols());
    kp.setFromTriplets(tr.begin(), tr.end());
    solver_.compute(kp);
    if (solver_.info() != Eigen::Success) fail(ErrorKind::SolverNonConvergence, "deflation factorization failed");
  }

  Eigen::Index rank() const { return g_.cols() - static_cast<Eigen::Index>(pinned_.size()); }

  template <class Mat>
  void apply(Mat& x) const {
    Eigen::MatrixXd rhs = g_.transpose() * (m_ * x);
    for (auto p : pinned_) rhs.row(p).setZero();
    Eigen::MatrixXd y = solver_.solve(rhs);
    x -= g_ * y;
  }

  const SparseMatrix& range() const { return g_; }
  const SparseMatrix& mass() const { return m_; }

 private:
  SparseMatrix g_, m_;
  std::vector<Eigen::Index> pinned_;
  SpdSolver solver_;
};

namespace eig_detail {

inline double rel_residual(const SparseMatrix& a, const SparseMatrix& m, const Eigen::VectorXd& x, double lambda) {
  const Eigen::VectorXd mx = m * x;
  const double denom = mx.norm();
  return denom > 0 ? (a * x - lambda * mx).norm() / denom : 0.0;
}

/// Ordering of indices by distance of values to sigma, ties broken by value.
inline std::vector<Eigen::Index> nearest(const Eigen::VectorXd& v, double sigma) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(v.size()));
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
    const double da = std::abs(v(a) - sigma), db = std::abs(v(b) - sigma);
    if (da != db) return da < db;
    return v(a) < v(b);
  });
  return idx;
}

}  // namespace eig_detail

/// All eigenpairs by dense reduction, restricted to the M-orthogonal complement of the
/// deflated range when one is given.
inline EigenPairs dense_pencil(const SparseMatrix& a, const SparseMatrix& m, const RangeDeflation* defl = nullptr) {
  const Eigen::MatrixXd ad(a), md(m);
  Eigen::MatrixXd basis;
  if (defl) {
    // complement of range(MG) in the Euclidean sense = {x : GᵀMx = 0}
    const Eigen::MatrixXd mg = md * Eigen::MatrixXd(defl->range());
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(mg);
    const Eigen::Index r = qr.rank();
    const Eigen::MatrixXd q = qr.householderQ();
    basis = q.rightCols(a.rows() - r);
  } else {
    basis = Eigen::MatrixXd::Identity(a.rows(), a.rows());
  }
  const Eigen::MatrixXd ar = basis.transpose() * ad * basis;
  const Eigen::MatrixXd mr = basis.transpose() * md * basis;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(ar, mr);
  if (es.info() != Eigen::Success) throw SolverError("dense generalized eigensolver failed", INFINITY);
  EigenPairs out;
  out.vectors = basis * es.eigenvectors();
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    out.values.push_back(es.eigenvalues()(i));
    out.residuals.push_back(eig_detail::rel_residual(a, m, out.vectors.col(i), out.values.back()));
  }
  return out;
}

/// The `nev` eigenpairs nearest sigma by restarted block Krylov iteration on (A − σM)⁻¹M
/// with Rayleigh-Ritz extraction. `definite` selects a Cholesky factorization of A − σM.
inline EigenPairs shift_invert(const SparseMatrix& a, const SparseMatrix& m, Eigen::Index nev, double sigma,
                               bool definite, const RangeDeflation* defl, const EigenOptions& opt) {
  const Eigen::Index n = a.rows();
  const Eigen::Index avail = n - (defl ? defl->rank() : 0);
  nev = std::min(nev, avail);
  if (nev <= 0) return {};
  const SparseMatrix shifted = a - sigma * m;
  SpdSolver ldlt;
  Eigen::SparseLU<SparseMatrix> lu;
  if (definite) {
    ldlt.compute(shifted);
    if (ldlt.info() != Eigen::Success) throw SolverError("shifted matrix is not definite", INFINITY);
  } else {
    lu.analyzePattern(shifted);
    lu.factorize(shifted);
    if (lu.info() != Eigen::Success) throw SolverError("shifted matrix is singular", INFINITY);
  }
  auto op = [&](const Eigen::MatrixXd& x) {
    Eigen::MatrixXd y = definite ? Eigen::MatrixXd(ldlt.solve(m * x)) : Eigen::MatrixXd(lu.solve(m * x));
    if (defl) defl->apply(y);
    return y;
  };

  const Eigen::Index block = std::min<Eigen::Index>(avail, std::max<Eigen::Index>(nev + std::max<Eigen::Index>(4, nev / 2), 8));
  const Eigen::Index max_cols = std::min<Eigen::Index>(avail, block * (opt.krylov_steps + 1));
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd x(n, block);
  for (Eigen::Index j = 0; j < block; ++j)
    for (Eigen::Index i = 0; i < n; ++i) x(i, j) = gauss(rng);
  if (defl) defl->apply(x);

  Eigen::MatrixXd q(n, max_cols);
  Eigen::MatrixXd mq(n, max_cols);
  double best = INFINITY;
  for (int restart = 0; restart < opt.max_restarts; ++restart) {
    Eigen::Index cols = 0;
    // Block CGS2 against q, then column-wise within the block; near-dependent columns are dropped.
    auto append = [&](Eigen::MatrixXd w) {
      if (defl) defl->apply(w);
      const Eigen::VectorXd start = (w.transpose() * (m * w)).diagonal().cwiseMax(0.0).cwiseSqrt();
      for (int pass = 0; pass < 2; ++pass)
        if (cols > 0) w -= q.leftCols(cols) * (mq.leftCols(cols).transpose() * w);
      const Eigen::Index first = cols;
      for (Eigen::Index j = 0; j < w.cols() && cols < max_cols; ++j) {
        if (!(start(j) > 0)) continue;
        Eigen::VectorXd v = w.col(j);
        for (int pass = 0; pass < 2; ++pass)
          if (cols > first) v -= q.middleCols(first, cols - first) * (mq.middleCols(first, cols - first).transpose() * v);
        const Eigen::VectorXd mv = m * v;
        const double norm = std::sqrt(std::max(0.0, v.dot(mv)));
        if (!(norm > 1e-13 * start(j))) continue;
        q.col(cols) = v / norm;
        mq.col(cols) = mv / norm;
        ++cols;
      }
    };
    append(x);
    Eigen::Index last_begin = 0, last_end = cols;
    for (int step = 0; step < opt.krylov_steps && cols < max_cols; ++step) {
      Eigen::MatrixXd w = op(q.middleCols(last_begin, last_end - last_begin));
      last_begin = cols;
      append(std::move(w));
      last_end = cols;
      if (last_end == last_begin) break;
    }
    const Eigen::MatrixXd qc = q.leftCols(cols);
    Eigen::MatrixXd h = qc.transpose() * (a * qc);
    h = 0.5 * (h + h.transpose()).eval();
    // Gram matrix kept explicit: M-orthogonality of q degrades slowly over restarts.
    Eigen::MatrixXd gm = qc.transpose() * mq.leftCols(cols);
    gm = 0.5 * (gm + gm.transpose()).eval();
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(h, gm);
    const auto order = eig_detail::nearest(es.eigenvalues(), sigma);
    const Eigen::Index keep = std::min<Eigen::Index>(block, cols);
    Eigen::MatrixXd ritz(n, keep);
    std::vector<double> theta(static_cast<std::size_t>(keep));
    for (Eigen::Index j = 0; j < keep; ++j) {
      ritz.col(j) = qc * es.eigenvectors().col(order[static_cast<std::size_t>(j)]);
      theta[static_cast<std::size_t>(j)] = es.eigenvalues()(order[static_cast<std::size_t>(j)]);
    }
    EigenPairs out;
    double worst = 0;
    for (Eigen::Index j = 0; j < std::min(nev, keep); ++j) {
      const double r = eig_detail::rel_residual(a, m, ritz.col(j), theta[static_cast<std::size_t>(j)]);
      worst = std::max(worst, r);
      out.residuals.push_back(r);
      out.values.push_back(theta[static_cast<std::size_t>(j)]);
    }
    best = std::min(best, worst);
    if (worst <= opt.residual_tol && keep >= nev) {
      out.vectors = ritz.leftCols(nev);
      std::vector<Eigen::Index> idx(static_cast<std::size_t>(nev));
      std::iota(idx.begin(), idx.end(), 0);
      std::sort(idx.begin(), idx.end(), [&](auto i, auto j) { return out.values[static_cast<std::size_t>(i)] < out.values[static_cast<std::size_t>(j)]; });
      EigenPairs sorted;
      sorted.vectors.resize(n, nev);
      for (Eigen::Index j = 0; j < nev; ++j) {
        sorted.values.push_back(out.values[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])]);
        sorted.residuals.push_back(out.residuals[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])]);
        sorted.vectors.col(j) = out.vectors.col(idx[static_cast<std::size_t>(j)]);
      }
      return sorted;
    }
    x = ritz;
  }
  throw SolverError("shift-invert iteration did not reach residual " + std::to_string(opt.residual_tol) +
                        " (best " + std::to_string(best) + ")",
                    best);
}

}  // namespace coassoc
