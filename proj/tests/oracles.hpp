#pragma once

// Test-side oracles. Nothing here calls into the library's algebra: complexes are
// re-derived from their top simplices, ranks use plain dense elimination, signatures
// come from characteristic polynomials.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <set>
#include <vector>

#include <gmpxx.h>

namespace oracle {

using Simplex = std::vector<std::int32_t>;

/// Rank over Q by fraction-free Gauss-Jordan on a dense mpq matrix.
inline std::size_t rank_q(std::vector<std::vector<mpq_class>> a) {
  std::size_t rank = 0;
  const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t p = rank;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[rank]);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || a[r][c] == 0) continue;
      const mpq_class f = a[r][c] / a[rank][c];
      for (std::size_t k = c; k < cols; ++k) a[r][k] -= f * a[rank][k];
    }
    ++rank;
  }
  return rank;
}

/// Prime field used for the large-rank oracle. Rank mod p never exceeds the rank over Q;
/// the two agree unless p divides every maximal nonzero minor.
inline constexpr std::uint64_t kPrime = 2147483629ULL;

inline std::uint64_t inv_mod(std::uint64_t a) {
  std::uint64_t r = 1, e = kPrime - 2;
  while (e) {
    if (e & 1) r = r * a % kPrime;
    a = a * a % kPrime;
    e >>= 1;
  }
  return r;
}

inline std::uint64_t to_mod(long v) { return static_cast<std::uint64_t>((v % static_cast<long>(kPrime) + static_cast<long>(kPrime)) % static_cast<long>(kPrime)); }

/// Row-reduces in place; returns the pivot columns.
inline std::vector<std::size_t> rref_mod(std::vector<std::vector<std::uint64_t>>& a) {
  std::vector<std::size_t> pivots;
  std::size_t rank = 0;
  const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t p = rank;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[rank]);
    const std::uint64_t inv = inv_mod(a[rank][c]);
    for (std::size_t k = c; k < cols; ++k) a[rank][k] = a[rank][k] * inv % kPrime;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || a[r][c] == 0) continue;
      const std::uint64_t f = a[r][c];
      for (std::size_t k = c; k < cols; ++k) a[r][k] = (a[r][k] + (kPrime - f) * a[rank][k]) % kPrime;
    }
    pivots.push_back(c);
    ++rank;
  }
  a.resize(rank);
  return pivots;
}

inline std::size_t rank_mod(std::vector<std::vector<std::uint64_t>> a) { return rref_mod(a).size(); }

/// Null space basis of a (rows x n) matrix mod p.
inline std::vector<std::vector<std::uint64_t>> kernel_mod(std::vector<std::vector<std::uint64_t>> a, std::size_t n) {
  const auto piv = rref_mod(a);
  std::vector<bool> is_pivot(n, false);
  for (auto c : piv) is_pivot[c] = true;
  std::vector<std::vector<std::uint64_t>> basis;
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    std::vector<std::uint64_t> v(n, 0);
    v[f] = 1;
    for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = (kPrime - a[r][f]) % kPrime;
    basis.push_back(std::move(v));
  }
  return basis;
}

/// All faces of the given simplices, sorted, per dimension.
struct Closure {
  std::vector<std::vector<Simplex>> cells;
  std::vector<std::map<Simplex, std::size_t>> index;
};

inline Closure closure(const std::vector<Simplex>& tops) {
  std::size_t d = 0;
  for (const auto& s : tops) d = std::max(d, s.size() - 1);
  std::vector<std::set<Simplex>> sets(d + 1);
  for (Simplex s : tops) {
    std::sort(s.begin(), s.end());
    const std::size_t n = s.size();
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
      Simplex f;
      for (std::size_t i = 0; i < n; ++i)
        if (mask & (1u << i)) f.push_back(s[i]);
      sets[f.size() - 1].insert(f);
    }
  }
  Closure c;
  for (auto& s : sets) {
    c.cells.emplace_back(s.begin(), s.end());
    std::map<Simplex, std::size_t> idx;
    for (std::size_t i = 0; i < c.cells.back().size(); ++i) idx[c.cells.back()[i]] = i;
    c.index.push_back(std::move(idx));
  }
  return c;
}

/// Codimension-one faces with exactly one coface: the boundary of a pseudomanifold.
inline std::vector<Simplex> boundary_faces(const Closure& c) {
  const std::size_t d = c.cells.size() - 1;
  std::map<Simplex, int> count;
  for (const auto& s : c.cells[d])
    for (std::size_t i = 0; i < s.size(); ++i) {
      Simplex f = s;
      f.erase(f.begin() + static_cast<long>(i));
      ++count[f];
    }
  std::vector<Simplex> out;
  for (const auto& [f, n] : count)
    if (n == 1) out.push_back(f);
  return out;
}

/// Coboundary δ_k : C^k → C^{k+1} as a dense matrix mod p, restricted to the simplices
/// marked `keep` (all when empty).
inline std::vector<std::vector<std::uint64_t>> coboundary_mod(const Closure& c, std::size_t k,
                                                             const std::vector<std::set<Simplex>>& drop = {}) {
  auto kept = [&](std::size_t dim) {
    std::vector<std::size_t> ids;
    for (std::size_t i = 0; i < c.cells[dim].size(); ++i)
      if (drop.empty() || !drop[dim].count(c.cells[dim][i])) ids.push_back(i);
    return ids;
  };
  const auto lo = kept(k), hi = kept(k + 1);
  std::map<std::size_t, std::size_t> col;
  for (std::size_t j = 0; j < lo.size(); ++j) col[lo[j]] = j;
  std::vector<std::vector<std::uint64_t>> m(hi.size(), std::vector<std::uint64_t>(lo.size(), 0));
  for (std::size_t r = 0; r < hi.size(); ++r) {
    const Simplex& t = c.cells[k + 1][hi[r]];
    for (std::size_t i = 0; i < t.size(); ++i) {
      Simplex f = t;
      f.erase(f.begin() + static_cast<long>(i));
      const auto it = col.find(c.index[k].at(f));
      if (it != col.end()) m[r][it->second] = to_mod(i % 2 == 0 ? 1 : -1);
    }
  }
  return m;
}

inline std::size_t cell_count(const Closure& c, std::size_t k, const std::vector<std::set<Simplex>>& drop) {
  return c.cells[k].size() - (drop.empty() ? 0 : drop[k].size());
}

/// Betti numbers of the complex spanned by `tops`, or of the pair (tops, sub) when `sub` is given.
inline std::vector<std::size_t> betti(const std::vector<Simplex>& tops, const std::vector<Simplex>& sub = {}) {
  const Closure c = closure(tops);
  std::vector<std::set<Simplex>> drop;
  if (!sub.empty()) {
    const Closure s = closure(sub);
    drop.resize(c.cells.size());
    for (std::size_t k = 0; k < s.cells.size(); ++k) drop[k].insert(s.cells[k].begin(), s.cells[k].end());
  }
  const std::size_t d = c.cells.size() - 1;
  std::vector<std::size_t> rank(d + 2, 0);
  for (std::size_t k = 0; k < d; ++k) rank[k + 1] = rank_mod(coboundary_mod(c, k, drop));
  std::vector<std::size_t> b;
  for (std::size_t k = 0; k <= d; ++k) b.push_back(cell_count(c, k, drop) - rank[k + 1] - rank[k]);
  return b;
}

/// dim im(H²(C, L) → H²(C)) = rank[Z²_rel ; B²] − rank B².
inline std::size_t dim_v(const std::vector<Simplex>& tops) {
  const Closure c = closure(tops);
  const auto link = boundary_faces(c);
  const Closure l = closure(link);
  std::vector<std::set<Simplex>> drop(c.cells.size());
  for (std::size_t k = 0; k < l.cells.size(); ++k) drop[k].insert(l.cells[k].begin(), l.cells[k].end());

  const std::size_t n2 = c.cells[2].size();
  std::vector<std::size_t> rel2;
  for (std::size_t i = 0; i < n2; ++i)
    if (!drop[2].count(c.cells[2][i])) rel2.push_back(i);
  const auto z_rel = kernel_mod(coboundary_mod(c, 2, drop), rel2.size());

  // B² as the row space of δ1ᵀ: δ of each edge indicator.
  const auto d1 = coboundary_mod(c, 1);
  std::vector<std::vector<std::uint64_t>> b2(d1.empty() ? 0 : d1[0].size(), std::vector<std::uint64_t>(n2, 0));
  for (std::size_t r = 0; r < d1.size(); ++r)
    for (std::size_t e = 0; e < d1[r].size(); ++e) b2[e][r] = d1[r][e];
  const std::size_t rb = rank_mod(b2);
  for (const auto& z : z_rel) {
    std::vector<std::uint64_t> full(n2, 0);
    for (std::size_t j = 0; j < rel2.size(); ++j) full[rel2[j]] = z[j];
    b2.push_back(std::move(full));
  }
  return rank_mod(b2) - rb;
}

/// Coherent orientation of a pure 4-dimensional complex by breadth-first propagation across
/// shared 3-faces, relative to sorted tuples. Empty when no coherent orientation exists.
inline std::vector<int> orient(const std::vector<Simplex>& sorted_tops) {
  std::map<Simplex, std::vector<std::pair<std::size_t, std::size_t>>> faces;
  for (std::size_t t = 0; t < sorted_tops.size(); ++t)
    for (std::size_t i = 0; i < sorted_tops[t].size(); ++i) {
      Simplex f = sorted_tops[t];
      f.erase(f.begin() + static_cast<long>(i));
      faces[f].emplace_back(t, i);
    }
  std::vector<int> eps(sorted_tops.size(), 0);
  for (std::size_t seed = 0; seed < sorted_tops.size(); ++seed) {
    if (eps[seed]) continue;
    eps[seed] = 1;
    std::vector<std::size_t> stack{seed};
    while (!stack.empty()) {
      const std::size_t t = stack.back();
      stack.pop_back();
      for (std::size_t i = 0; i < sorted_tops[t].size(); ++i) {
        Simplex f = sorted_tops[t];
        f.erase(f.begin() + static_cast<long>(i));
        for (auto [u, j] : faces[f]) {
          if (u == t) continue;
          // Induced orientations on the shared face must be opposite.
          const int want = -eps[t] * ((i % 2 == 0) ? 1 : -1) * ((j % 2 == 0) ? 1 : -1);
          if (!eps[u]) {
            eps[u] = want;
            stack.push_back(u);
          } else if (eps[u] != want) {
            return {};
          }
        }
      }
    }
  }
  return eps;
}

/// Σ_t ε_t a(t₀t₁t₂) b(t₂t₃t₄) over sorted 4-simplices, by direct face lookup.
inline mpq_class cup(const std::vector<Simplex>& sorted_tops, const std::vector<int>& eps,
                     const std::map<Simplex, mpq_class>& a, const std::map<Simplex, mpq_class>& b) {
  mpq_class s = 0;
  for (std::size_t t = 0; t < sorted_tops.size(); ++t) {
    const auto& v = sorted_tops[t];
    const auto ia = a.find({v[0], v[1], v[2]});
    const auto ib = b.find({v[2], v[3], v[4]});
    if (ia == a.end() || ib == b.end()) continue;
    s += eps[t] * ia->second * ib->second;
  }
  return s;
}

/// Characteristic polynomial det(xI − A) by Faddeev–LeVerrier; coefficients from x^n down.
inline std::vector<mpq_class> charpoly(const std::vector<std::vector<mpq_class>>& a) {
  const std::size_t n = a.size();
  std::vector<mpq_class> c(n + 1);
  c[0] = 1;
  std::vector<std::vector<mpq_class>> m(n, std::vector<mpq_class>(n, 0));  // M_0 = 0
  for (std::size_t k = 1; k <= n; ++k) {
    // M_k = A M_{k-1} + c_{k-1} I
    std::vector<std::vector<mpq_class>> next(n, std::vector<mpq_class>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t l = 0; l < n; ++l) next[i][j] += a[i][l] * m[l][j];
        if (i == j) next[i][j] += c[k - 1];
      }
    m = std::move(next);
    mpq_class tr = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l) tr += a[i][l] * m[l][i];
    c[k] = -tr / static_cast<long>(k);
  }
  return c;
}

inline std::size_t sign_changes(const std::vector<mpq_class>& c) {
  std::size_t n = 0;
  int last = 0;
  for (const auto& v : c) {
    const int s = sgn(v);
    if (s == 0) continue;
    if (last && s != last) ++n;
    last = s;
  }
  return n;
}

/// (positive, negative, zero) eigenvalue counts of a real symmetric matrix. All roots are real,
/// so Descartes' rule is exact once the zero roots are divided out.
struct Inertia {
  std::size_t plus = 0, minus = 0, zero = 0;
};

inline Inertia inertia(const std::vector<std::vector<mpq_class>>& a) {
  auto c = charpoly(a);
  Inertia r;
  while (c.size() > 1 && c.back() == 0) {
    c.pop_back();
    ++r.zero;
  }
  r.plus = sign_changes(c);
  for (std::size_t i = 0; i < c.size(); ++i)
    if ((c.size() - 1 - i) % 2 == 1) c[i] = -c[i];
  r.minus = sign_changes(c);
  return r;
}

/// Eigen-data of the flat torus (R/aZ)³.
struct FlatTorus {
  double period = 1.0;

  double lambda1() const { return 4 * std::numbers::pi * std::numbers::pi / (period * period); }
  double gamma1() const { return 2 * std::numbers::pi / period; }

  /// Scalar Laplacian modes e^{2πi k·x/a} with λ = (2π|k|/a)².
  std::size_t laplace0_multiplicity(double lambda, double rel = 1e-9) const {
    std::size_t n = 0;
    for (int x = -4; x <= 4; ++x)
      for (int y = -4; y <= 4; ++y)
        for (int z = -4; z <= 4; ++z) {
          const double l = lambda1() * (x * x + y * y + z * z);
          if (std::abs(l - lambda) <= rel * std::max(1.0, lambda)) ++n;
        }
    return n;
  }

  /// curl on coexact 1-forms: each k ≠ 0 contributes one transverse mode at +2π|k|/a and one at −2π|k|/a.
  std::size_t curl_multiplicity(double gamma, double rel = 1e-9) const {
    std::size_t n = 0;
    for (int x = -4; x <= 4; ++x)
      for (int y = -4; y <= 4; ++y)
        for (int z = -4; z <= 4; ++z) {
          if (!x && !y && !z) continue;
          const double g = gamma1() * std::sqrt(double(x * x + y * y + z * z));
          if (std::abs(g - std::abs(gamma)) <= rel * std::abs(gamma)) ++n;
        }
    return n;
  }

  /// Walls at ε ≠ 0: Δ-modes with λ = ε² plus curl modes with γ = ε.
  std::size_t wall_multiplicity(double eps) const { return laplace0_multiplicity(eps * eps) + curl_multiplicity(eps); }
};

/// Round unit S³: Δ eigenvalues k(k+2), curl eigenvalues ±(k+1) for k ≥ 1.
struct RoundSphere {
  static double lambda1() { return 3.0; }
  static double gamma1() { return 2.0; }
};

}  // namespace oracle
