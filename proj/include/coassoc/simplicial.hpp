#pragma once

// Combinatorial simplicial complexes with orientation.
//
// Simplices are stored as ascending vertex tuples; the global vertex order
// (vertex id order) fixes every orientation sign, the boundary operator and
// the Alexander-Whitney cup product. Top-dimensional simplices additionally
// remember the sign of the permutation that sorted their input tuple.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <string>
#include <unordered_map>
#include <vector>

#include "coassoc/error.hpp"
#include "coassoc/exact.hpp"

namespace coassoc {

using VertexId = std::int32_t;
using Simplex = std::vector<VertexId>;

struct SimplexHash {
  std::size_t operator()(const Simplex& s) const noexcept {
    std::size_t h = s.size();
    for (VertexId v : s) h = h * 1000003u ^ static_cast<std::size_t>(v) * 0x9e3779b97f4a7c15ULL;
    return h;
  }
};

/// Sign of the permutation sorting `s` (+1 even, -1 odd); `s` is sorted in place.
inline int sort_with_sign(Simplex& s) {
  int sign = 1;
  for (std::size_t i = 1; i < s.size(); ++i)
    for (std::size_t j = i; j > 0 && s[j - 1] > s[j]; --j) {
      std::swap(s[j - 1], s[j]);
      sign = -sign;
    }
  return sign;
}

/// Face of a sorted simplex with the vertex at position `i` removed.
inline Simplex face(const Simplex& s, std::size_t i) {
  Simplex f;
  f.reserve(s.size() - 1);
  for (std::size_t j = 0; j < s.size(); ++j)
    if (j != i) f.push_back(s[j]);
  return f;
}

class SimplicialComplex {
 public:
  SimplicialComplex() = default;

  /// Builds the closure of the given (oriented) simplices.
  /// Throws DuplicateSimplex, RepeatedVertexInSimplex, InvalidInput.
  static SimplicialComplex build(const std::vector<Simplex>& input) {
    if (input.empty()) fail(ErrorKind::InvalidInput, "empty simplex list");
    SimplicialComplex x;
    std::size_t top = 0;
    for (const auto& s : input) {
      if (s.empty()) fail(ErrorKind::InvalidInput, "empty simplex");
      if (s.size() > 5) fail(ErrorKind::InvalidInput, "simplices above dimension 4 are not supported");
      top = std::max(top, s.size());
    }
    x.dim_ = static_cast<int>(top) - 1;
    x.cells_.assign(top, {});
    x.index_.assign(top, {});

    std::unordered_map<Simplex, int, SimplexHash> seen_input;
    std::vector<std::pair<Simplex, int>> tops;
    for (std::size_t n = 0; n < input.size(); ++n) {
      Simplex s = input[n];
      for (VertexId v : s)
        if (v < 0) fail(ErrorKind::InvalidInput, "negative vertex id in simplex #" + std::to_string(n));
      const int sign = sort_with_sign(s);
      if (std::adjacent_find(s.begin(), s.end()) != s.end())
        fail(ErrorKind::RepeatedVertexInSimplex, "simplex #" + std::to_string(n) + " repeats a vertex");
      if (!seen_input.emplace(s, sign).second)
        fail(ErrorKind::DuplicateSimplex, "simplex #" + std::to_string(n) + " listed twice");
      if (s.size() == top) tops.emplace_back(s, sign);
    }

    std::vector<std::vector<Simplex>> all(top);
    std::vector<std::unordered_map<Simplex, int, SimplexHash>> present(top);
    for (const auto& [s, sign] : seen_input) {
      // Every nonempty subset of s is a face.
      const std::size_t k = s.size();
      for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
        Simplex f;
        for (std::size_t i = 0; i < k; ++i)
          if (mask & (1u << i)) f.push_back(s[i]);
        const std::size_t d = f.size() - 1;
        if (present[d].emplace(f, 0).second) all[d].push_back(std::move(f));
      }
    }
    for (std::size_t d = 0; d < top; ++d) {
      std::sort(all[d].begin(), all[d].end());
      x.cells_[d] = std::move(all[d]);
      x.index_[d].reserve(x.cells_[d].size());
      for (std::size_t i = 0; i < x.cells_[d].size(); ++i) x.index_[d].emplace(x.cells_[d][i], i);
    }
    x.top_signs_.assign(x.cells_[top - 1].size(), 1);
    for (const auto& [s, sign] : tops) x.top_signs_[x.index_[top - 1].at(s)] = sign;
    return x;
  }

  int dim() const { return dim_; }
  std::size_t vertex_count() const { return cells_.empty() ? 0 : cells_[0].size(); }
  std::size_t count(int k) const {
    return k < 0 || k > dim_ ? 0 : cells_[static_cast<std::size_t>(k)].size();
  }
  const std::vector<Simplex>& simplices(int k) const { return cells_.at(static_cast<std::size_t>(k)); }

  std::optional<std::size_t> index_of(const Simplex& sorted) const {
    if (sorted.empty() || static_cast<int>(sorted.size()) - 1 > dim_) return std::nullopt;
    const auto& m = index_[sorted.size() - 1];
    auto it = m.find(sorted);
    if (it == m.end()) return std::nullopt;
    return it->second;
  }

  /// Orientation of each top simplex relative to its canonical (sorted) tuple.
  const std::vector<int>& top_signs() const { return top_signs_; }

  /// Top simplices written in their oriented order (sorted, first two swapped if negative).
  std::vector<Simplex> oriented_top() const {
    std::vector<Simplex> out = simplices(dim_);
    for (std::size_t i = 0; i < out.size(); ++i)
      if (top_signs_[i] < 0 && out[i].size() >= 2) std::swap(out[i][0], out[i][1]);
    return out;
  }

  std::vector<VertexId> vertices() const {
    std::vector<VertexId> v;
    for (const auto& s : cells_.at(0)) v.push_back(s[0]);
    return v;
  }

  /// Sparse boundary operator d_k: column j is the signed boundary of the j-th k-simplex.
  std::vector<exact::SparseVec<exact::BigInt>> boundary_columns(int k) const {
    if (k < 1 || k > dim_) fail(ErrorKind::OutOfRange, "boundary degree " + std::to_string(k));
    std::vector<exact::SparseVec<exact::BigInt>> cols;
    cols.reserve(count(k));
    for (const auto& s : simplices(k)) {
      std::vector<std::pair<std::uint32_t, exact::BigInt>> entries;
      for (std::size_t i = 0; i < s.size(); ++i)
        entries.emplace_back(static_cast<std::uint32_t>(*index_of(face(s, i))), (i % 2 == 0) ? 1 : -1);
      cols.push_back(exact::SparseVec<exact::BigInt>::from_pairs(std::move(entries)));
    }
    return cols;
  }

  /// Canonical equality: same simplices in every dimension and same top orientations.
  bool operator==(const SimplicialComplex& o) const {
    return dim_ == o.dim_ && cells_ == o.cells_ && top_signs_ == o.top_signs_;
  }

 private:
  int dim_ = -1;
  std::vector<std::vector<Simplex>> cells_;
  std::vector<std::unordered_map<Simplex, std::size_t, SimplexHash>> index_;
  std::vector<int> top_signs_;
};

/// Dense matrix of the boundary operator d_k (rows: (k-1)-simplices, cols: k-simplices).
inline exact::RationalMatrix boundary_matrix(const SimplicialComplex& x, int k) {
  const auto cols = x.boundary_columns(k);
  exact::RationalMatrix m(x.count(k - 1), x.count(k));
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (std::size_t t = 0; t < cols[c].size(); ++t) m(cols[c].idx[t], c) = cols[c].val[t];
  return m;
}

/// Compact oriented 4-manifold (as a pseudomanifold) together with its boundary link.
struct ManifoldPair {
  SimplicialComplex total;
  SimplicialComplex link;
  /// inclusion[k][i] = index in `total` of the i-th k-simplex of `link`.
  std::vector<std::vector<std::size_t>> inclusion;
  /// Consistent orientation of the 4-simplices of `total`, relative to sorted tuples.
  std::vector<int> top_orientation;
  /// in_link[k][i] is true when the i-th k-simplex of `total` lies in the link.
  std::vector<std::vector<bool>> in_link;
};

/// Finds the boundary link and a coherent orientation of a 4-dimensional complex.
///
/// The link is oriented outward-normal-last: a boundary 3-face tau of an
/// oriented 4-simplex receives the orientation for which (tau, outward normal)
/// is positive. With this convention the signed boundary of the top chain is
/// (-1)^3 times the fundamental cycle of the link.
///
/// If `orientation_hint` is given it is validated and used; otherwise each
/// connected component is oriented starting from the input sign of its first
/// 4-simplex.
inline ManifoldPair extract_pair(const SimplicialComplex& total,
                                 const std::optional<std::vector<int>>& orientation_hint = std::nullopt) {
  if (total.dim() != 4) fail(ErrorKind::InvalidInput, "extract_pair needs a 4-dimensional complex");
  const auto& tops = total.simplices(4);
  const std::size_t n3 = total.count(3);

  // Every vertex must lie in a 4-simplex.
  {
    std::vector<bool> covered(total.count(0), false);
    for (const auto& s : tops)
      for (VertexId v : s) covered[*total.index_of({v})] = true;
    if (std::find(covered.begin(), covered.end(), false) != covered.end())
      fail(ErrorKind::NotPseudomanifold, "complex is not pure 4-dimensional");
  }

  // cofaces[f] = list of (4-simplex, position of removed vertex)
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> cofaces(n3);
  for (std::size_t t = 0; t < tops.size(); ++t)
    for (std::size_t i = 0; i < 5; ++i) cofaces[*total.index_of(face(tops[t], i))].emplace_back(t, i);
  for (std::size_t f = 0; f < n3; ++f) {
    if (cofaces[f].empty())
      fail(ErrorKind::NotPseudomanifold, "3-face lies in no 4-simplex (complex not pure)");
    if (cofaces[f].size() > 2)
      fail(ErrorKind::NotPseudomanifold, "3-face " + std::to_string(f) + " lies in " +
                                             std::to_string(cofaces[f].size()) + " 4-simplices");
  }

  auto induced = [](int eps, std::size_t pos) { return (pos % 2 == 0) ? eps : -eps; };

  std::vector<int> eps(tops.size(), 0);
  if (orientation_hint) {
    if (orientation_hint->size() != tops.size())
      fail(ErrorKind::InvalidInput, "orientation hint has wrong length");
    eps = *orientation_hint;
    for (int e : eps)
      if (e != 1 && e != -1) fail(ErrorKind::InvalidInput, "orientation hint entries must be +-1");
  } else {
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(tops.size());
    for (std::size_t t = 0; t < tops.size(); ++t) {
      // start each component from the input orientation
      if (eps[t] != 0) continue;
      eps[t] = total.top_signs()[t];
      std::queue<std::size_t> q;
      q.push(t);
      while (!q.empty()) {
        const std::size_t s = q.front();
        q.pop();
        for (std::size_t i = 0; i < 5; ++i) {
          const std::size_t f = *total.index_of(face(tops[s], i));
          if (cofaces[f].size() != 2) continue;
          const auto& [a, pa] = cofaces[f][0];
          const auto& [b, pb] = cofaces[f][1];
          const std::size_t other = a == s ? b : a;
          const std::size_t pos_self = a == s ? pa : pb;
          const std::size_t pos_other = a == s ? pb : pa;
          // induced orientations on the shared face must cancel
          const int want = -induced(eps[s], pos_self) * ((pos_other % 2 == 0) ? 1 : -1);
          if (eps[other] == 0) {
            eps[other] = want;
            q.push(other);
          }
        }
      }
    }
  }
  for (std::size_t f = 0; f < n3; ++f) {
    if (cofaces[f].size() != 2) continue;
    const auto& [a, pa] = cofaces[f][0];
    const auto& [b, pb] = cofaces[f][1];
    if (induced(eps[a], pa) + induced(eps[b], pb) != 0)
      fail(ErrorKind::NonOrientable, orientation_hint ? "orientation hint is not coherent"
                                                      : "no coherent orientation of the 4-simplices exists");
  }

  std::vector<Simplex> link_tets;
  for (std::size_t f = 0; f < n3; ++f) {
    if (cofaces[f].size() != 1) continue;
    const auto& [t, pos] = cofaces[f][0];
    Simplex tau = face(tops[t], pos);
    const int outward_last = -induced(eps[t], pos);
    if (outward_last < 0) std::swap(tau[0], tau[1]);
    link_tets.push_back(std::move(tau));
  }

  // Components of C-bar without boundary are compact closed pieces.
  {
    std::vector<std::size_t> comp(tops.size(), SIZE_MAX);
    std::size_t ncomp = 0;
    for (std::size_t t = 0; t < tops.size(); ++t) {
      if (comp[t] != SIZE_MAX) continue;
      std::queue<std::size_t> q;
      q.push(t);
      comp[t] = ncomp;
      while (!q.empty()) {
        const std::size_t s = q.front();
        q.pop();
        for (std::size_t i = 0; i < 5; ++i)
          for (const auto& [o, p] : cofaces[*total.index_of(face(tops[s], i))])
            if (comp[o] == SIZE_MAX) {
              comp[o] = ncomp;
              q.push(o);
            }
      }
      ++ncomp;
    }
    std::vector<bool> has_boundary(ncomp, false);
    for (std::size_t f = 0; f < n3; ++f)
      if (cofaces[f].size() == 1) has_boundary[comp[cofaces[f][0].first]] = true;
    if (std::find(has_boundary.begin(), has_boundary.end(), false) != has_boundary.end())
      fail(ErrorKind::CompactComponent, "a connected component has empty boundary");
  }

  ManifoldPair pair;
  pair.total = total;
  pair.link = SimplicialComplex::build(link_tets);
  pair.top_orientation = std::move(eps);

  // The link must be a closed 3-pseudomanifold.
  {
    std::vector<int> deg(pair.link.count(2), 0);
    for (const auto& s : pair.link.simplices(3))
      for (std::size_t i = 0; i < 4; ++i) ++deg[*pair.link.index_of(face(s, i))];
    for (int d : deg)
      if (d != 2) fail(ErrorKind::NotPseudomanifold, "boundary link is not a closed pseudomanifold");
  }

  pair.inclusion.assign(4, {});
  pair.in_link.assign(5, {});
  for (int k = 0; k <= 4; ++k) pair.in_link[static_cast<std::size_t>(k)].assign(total.count(k), false);
  for (int k = 0; k <= 3; ++k) {
    for (const auto& s : pair.link.simplices(k)) {
      const std::size_t i = *total.index_of(s);
      pair.inclusion[static_cast<std::size_t>(k)].push_back(i);
      pair.in_link[static_cast<std::size_t>(k)][i] = true;
    }
  }
  return pair;
}

/// Signed boundary of the top chain sum(eps_s * s), as a map from sorted 3-faces to coefficients.
inline std::map<Simplex, int> top_chain_boundary(const SimplicialComplex& x, const std::vector<int>& eps) {
  std::map<Simplex, int> out;
  const auto& tops = x.simplices(x.dim());
  for (std::size_t t = 0; t < tops.size(); ++t)
    for (std::size_t i = 0; i < tops[t].size(); ++i) {
      int& c = out[face(tops[t], i)];
      c += (i % 2 == 0) ? eps[t] : -eps[t];
    }
  for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

// ---------------------------------------------------------------------------
// Combinatorial constructions

/// Product of two ordered simplicial complexes (staircase triangulation).
/// Vertex (a, b) receives id index(a) * |B| + index(b), indices in vertex order.
/// Oriented so that each product cell carries the product orientation.
inline std::vector<Simplex> product_triangulation(const SimplicialComplex& a, const SimplicialComplex& b) {
  const auto va = a.vertices();
  const auto vb = b.vertices();
  std::unordered_map<VertexId, VertexId> ia, ib;
  for (std::size_t i = 0; i < va.size(); ++i) ia[va[i]] = static_cast<VertexId>(i);
  for (std::size_t i = 0; i < vb.size(); ++i) ib[vb[i]] = static_cast<VertexId>(i);
  const auto nb = static_cast<VertexId>(vb.size());
  const auto ta = a.oriented_top();
  const auto tb = b.oriented_top();
  const std::size_t p = static_cast<std::size_t>(a.dim());
  const std::size_t q = static_cast<std::size_t>(b.dim());
  std::vector<Simplex> out;
  for (std::size_t i = 0; i < ta.size(); ++i) {
    Simplex sa = ta[i];
    const int sign_a = sort_with_sign(sa);
    for (std::size_t j = 0; j < tb.size(); ++j) {
      Simplex sb = tb[j];
      const int sign_b = sort_with_sign(sb);
      // Each staircase path is a shuffle: steps in A (true) and in B (false).
      std::vector<bool> steps(p + q, false);
      std::fill(steps.begin(), steps.begin() + static_cast<long>(p), true);
      std::sort(steps.begin(), steps.end());
      do {
        Simplex cell;
        std::size_t x = 0, y = 0;
        cell.push_back(ia[sa[x]] * nb + ib[sb[y]]);
        // Sign of the shuffle: count (B-step before A-step) inversions.
        int inversions = 0, b_steps = 0;
        for (bool step : steps) {
          if (step) {
            ++x;
            inversions += b_steps;
          } else {
            ++y;
            ++b_steps;
          }
          cell.push_back(ia[sa[x]] * nb + ib[sb[y]]);
        }
        const int sign = sign_a * sign_b * ((inversions % 2 == 0) ? 1 : -1);
        if (sign < 0) std::swap(cell[0], cell[1]);
        out.push_back(std::move(cell));
      } while (std::next_permutation(steps.begin(), steps.end()));
    }
  }
  return out;
}

/// Stellar subdivision of `target` (a sorted simplex) in a pure complex given by oriented top simplices:
/// every top simplex containing it is coned from a new vertex `apex`.
inline std::vector<Simplex> stellar_subdivide(const std::vector<Simplex>& oriented_tops, const Simplex& target,
                                              VertexId apex) {
  std::vector<Simplex> out;
  for (const auto& s : oriented_tops) {
    const bool contains = std::all_of(target.begin(), target.end(), [&](VertexId v) {
      return std::find(s.begin(), s.end(), v) != s.end();
    });
    if (!contains) {
      out.push_back(s);
      continue;
    }
    for (VertexId v : target) {
      Simplex child = s;
      *std::find(child.begin(), child.end(), v) = apex;
      out.push_back(std::move(child));
    }
  }
  return out;
}

/// Barycentric subdivision of the pure complex `x`, oriented by `eps` (per top simplex).
/// New vertex ids enumerate the simplices of x in (dimension, canonical) order.
inline std::vector<Simplex> barycentric_subdivision(const SimplicialComplex& x, const std::vector<int>& eps) {
  std::vector<std::size_t> offset(static_cast<std::size_t>(x.dim()) + 2, 0);
  for (int k = 0; k <= x.dim(); ++k) offset[static_cast<std::size_t>(k) + 1] = offset[static_cast<std::size_t>(k)] + x.count(k);
  auto id_of = [&](const Simplex& s) {
    return static_cast<VertexId>(offset[s.size() - 1] + *x.index_of(s));
  };
  std::vector<Simplex> out;
  const auto& tops = x.simplices(x.dim());
  for (std::size_t t = 0; t < tops.size(); ++t) {
    std::vector<std::size_t> perm(tops[t].size());
    std::iota(perm.begin(), perm.end(), 0);
    do {
      // Flag {v_perm0} < {v_perm0, v_perm1} < ... with barycenters listed bottom-up; its
      // barycentric coordinate matrix is triangular up to the column permutation, so the
      // flag simplex is oriented like the parent times sign(perm).
      Simplex cell;
      Simplex cur;
      std::vector<Simplex> chain;
      for (std::size_t i : perm) {
        cur.push_back(tops[t][i]);
        Simplex sorted = cur;
        std::sort(sorted.begin(), sorted.end());
        chain.push_back(sorted);
      }
      for (const auto& c : chain) cell.push_back(id_of(c));
      Simplex pcopy(perm.begin(), perm.end());
      const int sign = sort_with_sign(pcopy) * eps[t];
      if (sign < 0) std::swap(cell[0], cell[1]);
      out.push_back(std::move(cell));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return out;
}

/// Applies a vertex relabelling to oriented simplices (orientation follows the tuple order).
inline std::vector<Simplex> relabel(const std::vector<Simplex>& simplices, const std::vector<VertexId>& new_id) {
  std::vector<Simplex> out = simplices;
  for (auto& s : out)
    for (auto& v : s) v = new_id.at(static_cast<std::size_t>(v));
  return out;
}

}  // namespace coassoc
