#pragma once

// Exact rational cohomology of a complex, of its link, and of the pair.

#include <array>
#include <numeric>
#include <string>
#include <vector>

#include "coassoc/error.hpp"
#include "coassoc/exact.hpp"
#include "coassoc/simplicial.hpp"

namespace coassoc {

using exact::BigInt;
using exact::EchelonBasis;
using exact::Rational;
using Cochain = exact::SparseVec<BigInt>;

/// Cochains of X, or relative cochains of (X, A) when `excluded` marks the simplices of A.
/// Local index i in degree k refers to simplex global[k][i] of X.
class CochainComplex {
 public:
  CochainComplex(const SimplicialComplex& x, const std::vector<std::vector<bool>>* excluded = nullptr)
      : x_(&x) {
    const int d = x.dim();
    global_.assign(static_cast<std::size_t>(d) + 1, {});
    local_.assign(static_cast<std::size_t>(d) + 1, {});
    for (int k = 0; k <= d; ++k) {
      const auto ku = static_cast<std::size_t>(k);
      local_[ku].assign(x.count(k), -1);
      for (std::size_t i = 0; i < x.count(k); ++i) {
        if (excluded && (*excluded)[ku][i]) continue;
        local_[ku][i] = static_cast<int>(global_[ku].size());
        global_[ku].push_back(i);
      }
    }
  }

  const SimplicialComplex& complex() const { return *x_; }
  int top() const { return x_->dim(); }
  std::size_t dim(int k) const {
    return k < 0 || k > top() ? 0 : global_[static_cast<std::size_t>(k)].size();
  }
  std::size_t global_index(int k, std::size_t local) const { return global_[static_cast<std::size_t>(k)][local]; }
  int local_index(int k, std::size_t global) const { return local_[static_cast<std::size_t>(k)][global]; }

  /// The functional f -> (delta f)(tau) for every (k+1)-cochain basis element tau,
  /// as a vector over the degree-k cochains.
  std::vector<Cochain> coboundary_rows(int k) const {
    std::vector<Cochain> rows;
    if (k + 1 > top() || k < 0) return rows;
    rows.reserve(dim(k + 1));
    for (std::size_t g : global_[static_cast<std::size_t>(k) + 1]) {
      const Simplex& tau = x_->simplices(k + 1)[g];
      std::vector<std::pair<std::uint32_t, BigInt>> e;
      for (std::size_t i = 0; i < tau.size(); ++i) {
        const int l = local_index(k, *x_->index_of(face(tau, i)));
        if (l >= 0) e.emplace_back(static_cast<std::uint32_t>(l), (i % 2 == 0) ? 1 : -1);
      }
      rows.push_back(Cochain::from_pairs(std::move(e)));
    }
    return rows;
  }

  /// delta(e_sigma) for every degree-k basis cochain, as vectors over degree k+1.
  std::vector<Cochain> coboundary_images(int k) const {
    std::vector<std::vector<std::pair<std::uint32_t, BigInt>>> acc(dim(k));
    const auto rows = coboundary_rows(k);
    for (std::size_t t = 0; t < rows.size(); ++t)
      for (std::size_t j = 0; j < rows[t].size(); ++j)
        acc[rows[t].idx[j]].emplace_back(static_cast<std::uint32_t>(t), rows[t].val[j]);
    std::vector<Cochain> out;
    out.reserve(acc.size());
    for (auto& e : acc) out.push_back(Cochain::from_pairs(std::move(e)));
    return out;
  }

  /// delta f for a degree-k cochain f.
  Cochain coboundary(int k, const Cochain& f) const {
    std::vector<std::pair<std::uint32_t, BigInt>> e;
    if (k + 1 > top()) return {};
    std::vector<BigInt> dense(dim(k), 0);
    for (std::size_t j = 0; j < f.size(); ++j) dense[f.idx[j]] = f.val[j];
    const auto rows = coboundary_rows(k);
    for (std::size_t t = 0; t < rows.size(); ++t) {
      BigInt s = 0;
      for (std::size_t j = 0; j < rows[t].size(); ++j) s += rows[t].val[j] * dense[rows[t].idx[j]];
      if (sgn(s) != 0) e.emplace_back(static_cast<std::uint32_t>(t), s);
    }
    return Cochain::from_pairs(std::move(e));
  }

 private:
  const SimplicialComplex* x_;
  std::vector<std::vector<std::size_t>> global_;
  std::vector<std::vector<int>> local_;
};

/// Echelon rows of a subspace, stored as primitive integer vectors.
struct Subspace {
  std::size_t ambient = 0;
  std::vector<Cochain> rows;

  std::size_t rank() const { return rows.size(); }

  /// Rank of span(rows ∪ extra) minus rank(rows).
  std::size_t extra_rank(const std::vector<Cochain>& extra) const {
    return exact::with_overflow_fallback([&]<class Int>() {
      EchelonBasis<Int> b(ambient);
      for (const auto& r : rows) b.insert(exact::convert<Int>(r));
      std::size_t added = 0;
      for (const auto& v : extra) added += b.insert(exact::convert<Int>(v)) ? 1 : 0;
      return added;
    });
  }

  /// Indices of `extra` that are independent modulo the subspace and of each other (greedy).
  std::vector<std::size_t> independent_subset(const std::vector<Cochain>& extra) const {
    return exact::with_overflow_fallback([&]<class Int>() {
      EchelonBasis<Int> b(ambient);
      for (const auto& r : rows) b.insert(exact::convert<Int>(r));
      std::vector<std::size_t> keep;
      for (std::size_t i = 0; i < extra.size(); ++i)
        if (b.insert(exact::convert<Int>(extra[i]))) keep.push_back(i);
      return keep;
    });
  }

  static Subspace span(std::size_t ambient, const std::vector<Cochain>& gens) {
    return exact::with_overflow_fallback([&]<class Int>() {
      EchelonBasis<Int> b(ambient);
      for (const auto& v : gens) b.insert(exact::convert<Int>(v));
      Subspace s;
      s.ambient = ambient;
      for (const auto& r : b.rows()) s.rows.push_back(exact::to_big(r));
      return s;
    });
  }
};

/// Per-degree cohomology data of a cochain complex.
struct DegreeCohomology {
  Subspace coboundaries;         ///< B^k
  std::vector<Cochain> cocycles; ///< one representative per basis class of H^k
  std::size_t rank_delta = 0;    ///< rank of delta^k : C^k -> C^{k+1}
};

struct Cohomology {
  std::vector<DegreeCohomology> degree;
  std::vector<std::size_t> betti() const {
    std::vector<std::size_t> b;
    for (const auto& d : degree) b.push_back(d.cocycles.size());
    return b;
  }
};

/// Cocycle representatives vanishing on the pivot columns of B^k.
/// Z^k splits as B^k plus the cocycles supported off the pivots, so these span H^k.
inline std::vector<Cochain> cocycles_off_pivots(const CochainComplex& cc, int k, const Subspace& b) {
  const std::size_t n = cc.dim(k);
  std::vector<bool> pivot(n, false);
  for (const auto& r : b.rows) pivot[r.idx[0]] = true;
  std::vector<std::uint32_t> to_free(n, UINT32_MAX);
  std::vector<std::uint32_t> from_free;
  for (std::size_t i = 0; i < n; ++i)
    if (!pivot[i]) {
      to_free[i] = static_cast<std::uint32_t>(from_free.size());
      from_free.push_back(static_cast<std::uint32_t>(i));
    }
  std::vector<Cochain> rows;
  for (const auto& r : cc.coboundary_rows(k)) {
    std::vector<std::pair<std::uint32_t, BigInt>> e;
    for (std::size_t j = 0; j < r.size(); ++j)
      if (!pivot[r.idx[j]]) e.emplace_back(to_free[r.idx[j]], r.val[j]);
    if (!e.empty()) rows.push_back(Cochain::from_pairs(std::move(e)));
  }
  const auto null = exact::with_overflow_fallback([&]<class Int>() {
    EchelonBasis<Int> e(from_free.size());
    for (const auto& r : rows) e.insert(exact::convert<Int>(r));
    return e.nullspace();
  });
  std::vector<Cochain> reps;
  for (const auto& v : null) {
    Cochain c = exact::primitive_integer(v);
    for (auto& i : c.idx) i = from_free[i];
    reps.push_back(std::move(c));
  }
  return reps;
}

inline Cohomology compute_cohomology(const CochainComplex& cc) {
  Cohomology h;
  const int top = cc.top();
  h.degree.resize(static_cast<std::size_t>(top) + 1);
  for (int k = 0; k <= top; ++k) {
    auto& d = h.degree[static_cast<std::size_t>(k)];
    d.coboundaries = k == 0 ? Subspace{cc.dim(0), {}} : Subspace::span(cc.dim(k), cc.coboundary_images(k - 1));
  }
  for (int k = 0; k <= top; ++k) {
    auto& d = h.degree[static_cast<std::size_t>(k)];
    d.rank_delta = k == top ? 0 : h.degree[static_cast<std::size_t>(k) + 1].coboundaries.rank();
    d.cocycles = cocycles_off_pivots(cc, k, d.coboundaries);
    if (d.cocycles.size() + d.rank_delta + d.coboundaries.rank() != cc.dim(k))
      fail(ErrorKind::ExactnessViolation, "rank-nullity fails in degree " + std::to_string(k));
  }
  return h;
}

inline std::vector<std::size_t> betti(const SimplicialComplex& x) { return compute_cohomology(CochainComplex(x)).betti(); }

inline std::vector<std::size_t> relative_betti(const ManifoldPair& pair) {
  return compute_cohomology(CochainComplex(pair.total, &pair.in_link)).betti();
}

/// Ranks of the maps in the long exact sequence of (C-bar, L):
/// H^k_cs -j-> H^k(C) -r-> H^k(L) -c-> H^{k+1}_cs.
struct LesRanks {
  std::array<std::size_t, 5> j{};
  std::array<std::size_t, 4> r{};
  std::array<std::size_t, 4> connecting{};
};

struct CohomologyProfile {
  std::array<std::size_t, 5> b_C{};
  std::array<std::size_t, 4> b_L{};
  std::array<std::size_t, 5> b_cs{};
  LesRanks les_ranks;
  std::size_t dim_V = 0;
  /// Relative 2-cocycles (indexed by all 2-simplices of C-bar, zero on L) whose images span V.
  std::vector<Cochain> V_basis;
  /// Exactness defect at each of the 14 nodes, in sequence order; all zero on success.
  std::vector<long> exactness_defects;
};

/// Extends a relative cochain (local indexing) by zero to a cochain on the whole complex.
inline Cochain extend_by_zero(const CochainComplex& rel, int k, const Cochain& c) {
  Cochain out;
  for (std::size_t j = 0; j < c.size(); ++j)
    out.push(static_cast<std::uint32_t>(rel.global_index(k, c.idx[j])), c.val[j]);
  return out;
}

/// Cohomology of the pair with every map of the long exact sequence; verifies exactness and duality.
inline CohomologyProfile les_of_pair(const ManifoldPair& pair) {
  const CochainComplex cx(pair.total);
  const CochainComplex crel(pair.total, &pair.in_link);
  const CochainComplex cl(pair.link);
  const Cohomology hx = compute_cohomology(cx);
  const Cohomology hrel = compute_cohomology(crel);
  const Cohomology hl = compute_cohomology(cl);

  CohomologyProfile p;
  for (int k = 0; k <= 4; ++k) {
    p.b_C[static_cast<std::size_t>(k)] = hx.degree[static_cast<std::size_t>(k)].cocycles.size();
    p.b_cs[static_cast<std::size_t>(k)] = hrel.degree[static_cast<std::size_t>(k)].cocycles.size();
  }
  for (int k = 0; k <= 3; ++k) p.b_L[static_cast<std::size_t>(k)] = hl.degree[static_cast<std::size_t>(k)].cocycles.size();

  for (int k = 0; k <= 4; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    std::vector<Cochain> ext;
    for (const auto& z : hrel.degree[ku].cocycles) ext.push_back(extend_by_zero(crel, k, z));
    p.les_ranks.j[ku] = hx.degree[ku].coboundaries.extra_rank(ext);
    if (k == 2) {
      for (std::size_t i : hx.degree[ku].coboundaries.independent_subset(ext)) p.V_basis.push_back(ext[i]);
    }
  }
  for (int k = 0; k <= 3; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    std::vector<Cochain> res;
    for (const auto& z : hx.degree[ku].cocycles) {
      Cochain c;
      for (std::size_t j = 0; j < z.size(); ++j)
        if (pair.in_link[ku][z.idx[j]])
          c.push(static_cast<std::uint32_t>(*pair.link.index_of(pair.total.simplices(k)[z.idx[j]])), z.val[j]);
      res.push_back(std::move(c));
    }
    p.les_ranks.r[ku] = hl.degree[ku].coboundaries.extra_rank(res);

    std::vector<Cochain> conn;
    for (const auto& z : hl.degree[ku].cocycles) {
      Cochain zhat;
      for (std::size_t j = 0; j < z.size(); ++j) zhat.push(static_cast<std::uint32_t>(pair.inclusion[ku][z.idx[j]]), z.val[j]);
      const Cochain dz = cx.coboundary(k, zhat);
      Cochain rel;
      for (std::size_t j = 0; j < dz.size(); ++j) {
        const int l = crel.local_index(k + 1, dz.idx[j]);
        if (l < 0) fail(ErrorKind::ExactnessViolation, "connecting cochain does not vanish on the link");
        rel.push(static_cast<std::uint32_t>(l), dz.val[j]);
      }
      conn.push_back(std::move(rel));
    }
    p.les_ranks.connecting[ku] = hrel.degree[ku + 1].coboundaries.extra_rank(conn);
  }
  p.dim_V = p.les_ranks.j[2];

  // Nodes in order H^0_cs, H^0, H^0(L), H^1_cs, ..., H^3(L), H^4_cs, H^4.
  auto defect = [](std::size_t in, std::size_t out, std::size_t node) {
    return static_cast<long>(in + out) - static_cast<long>(node);
  };
  for (int k = 0; k <= 4; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    const std::size_t c_in = k == 0 ? 0 : p.les_ranks.connecting[ku - 1];
    p.exactness_defects.push_back(defect(c_in, p.les_ranks.j[ku], p.b_cs[ku]));
    const std::size_t r_out = k == 4 ? 0 : p.les_ranks.r[ku];
    p.exactness_defects.push_back(defect(p.les_ranks.j[ku], r_out, p.b_C[ku]));
    if (k < 4) p.exactness_defects.push_back(defect(p.les_ranks.r[ku], p.les_ranks.connecting[ku], p.b_L[ku]));
  }
  for (std::size_t i = 0; i < p.exactness_defects.size(); ++i)
    if (p.exactness_defects[i] != 0)
      fail(ErrorKind::ExactnessViolation, "long exact sequence fails at node " + std::to_string(i));
  for (std::size_t k = 0; k <= 4; ++k)
    if (p.b_C[k] != p.b_cs[4 - k])
      fail(ErrorKind::ExactnessViolation, "Poincare-Lefschetz duality fails in degree " + std::to_string(k));
  for (std::size_t k = 0; k <= 3; ++k)
    if (p.b_L[k] != p.b_L[3 - k])
      fail(ErrorKind::ExactnessViolation, "Poincare duality of the link fails in degree " + std::to_string(k));
  return p;
}

/// dim V and relative 2-cocycles spanning it.
inline std::pair<std::size_t, std::vector<Cochain>> dim_v_direct(const ManifoldPair& pair) {
  auto p = les_of_pair(pair);
  return {p.dim_V, std::move(p.V_basis)};
}

/// dim V from Betti numbers alone, by the alternating sum over the exact sequence
/// truncated at V. Throws MismatchWithDirect if it disagrees with the rank of H^2_cs -> H^2.
inline long dim_v_formula(const CohomologyProfile& p) {
  const auto& c = p.b_C;
  const auto& l = p.b_L;
  const long value = static_cast<long>(c[2] + c[1] + l[0]) - static_cast<long>(c[3] + l[1] + c[0]);
  if (value != static_cast<long>(p.dim_V))
    fail(ErrorKind::MismatchWithDirect, "alternating sum gives " + std::to_string(value) + " but rank(H^2_cs -> H^2) = " +
                                            std::to_string(p.dim_V));
  return value;
}

/// Kernel of H^3_cs -> H^3 as read off the exact sequence.
inline std::size_t h3_kernel_from_les(const CohomologyProfile& p) { return p.b_cs[3] - p.les_ranks.j[3]; }

}  // namespace coassoc
