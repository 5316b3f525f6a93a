#pragma once

// Cup-product pairing on V and its signature.

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "coassoc/cohomology.hpp"

namespace coassoc {

using exact::RationalMatrix;

struct PairingData {
  RationalMatrix gram;
  std::size_t v_plus = 0;
  std::size_t v_minus = 0;
};

/// Throws NotACocycle unless c is a 2-cocycle of C-bar (and, when `relative`, vanishes on L).
inline void require_cocycle(const ManifoldPair& pair, const Cochain& c, bool relative, const char* what) {
  const CochainComplex cx(pair.total);
  if (!cx.coboundary(2, c).empty()) fail(ErrorKind::NotACocycle, std::string(what) + " is not closed");
  if (relative)
    for (auto i : c.idx)
      if (pair.in_link[2][i]) fail(ErrorKind::NotACocycle, std::string(what) + " does not vanish on the link");
}

namespace detail {

inline std::vector<Rational> dense(const Cochain& c, std::size_t n) {
  std::vector<Rational> v(n, 0);
  for (std::size_t j = 0; j < c.size(); ++j) v[c.idx[j]] = c.val[j];
  return v;
}

/// Front 2-face and back 2-face index of every 4-simplex (Alexander-Whitney on the vertex order).
struct CupFaces {
  std::vector<std::size_t> front, back;
  std::vector<int> sign;
};

inline CupFaces cup_faces(const ManifoldPair& pair) {
  CupFaces f;
  const auto& tops = pair.total.simplices(4);
  for (std::size_t t = 0; t < tops.size(); ++t) {
    const auto& s = tops[t];
    f.front.push_back(*pair.total.index_of({s[0], s[1], s[2]}));
    f.back.push_back(*pair.total.index_of({s[2], s[3], s[4]}));
    f.sign.push_back(pair.top_orientation[t]);
  }
  return f;
}

inline Rational evaluate(const CupFaces& f, const std::vector<Rational>& a, const std::vector<Rational>& b) {
  Rational s = 0;
  for (std::size_t t = 0; t < f.sign.size(); ++t) {
    const auto& x = a[f.front[t]];
    if (sgn(x) == 0) continue;
    const auto& y = b[f.back[t]];
    if (sgn(y) == 0) continue;
    if (f.sign[t] > 0) s += x * y;
    else s -= x * y;
  }
  return s;
}

}  // namespace detail

/// (rel2 ∪ abs2) evaluated on the relative fundamental cycle.
inline Rational cup_pair(const Cochain& rel2, const Cochain& abs2, const ManifoldPair& pair) {
  require_cocycle(pair, rel2, true, "relative factor");
  require_cocycle(pair, abs2, false, "absolute factor");
  const std::size_t n = pair.total.count(2);
  return detail::evaluate(detail::cup_faces(pair), detail::dense(rel2, n), detail::dense(abs2, n));
}

/// Counts of positive and negative pivots of a symmetric LDL^T with symmetric pivoting.
/// Uses 2x2 pivots when the remaining diagonal vanishes. Throws DegenerateForm on a zero block.
inline std::pair<std::size_t, std::size_t> signature_split(const RationalMatrix& g) {
  if (g.rows() != g.cols() || !g.is_symmetric()) fail(ErrorKind::InvalidInput, "signature needs a symmetric matrix");
  std::size_t n = g.rows();
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = g(i, j);
  std::size_t plus = 0, minus = 0;
  auto drop = [&](std::vector<std::size_t> idx) {
    std::sort(idx.rbegin(), idx.rend());
    for (std::size_t i : idx) {
      a.erase(a.begin() + static_cast<long>(i));
      for (auto& row : a) row.erase(row.begin() + static_cast<long>(i));
    }
    n = a.size();
  };
  while (n > 0) {
    std::size_t p = n;
    for (std::size_t i = 0; i < n; ++i)
      if (sgn(a[i][i]) != 0) {
        p = i;
        break;
      }
    if (p < n) {
      const Rational d = a[p][p];
      (sgn(d) > 0 ? plus : minus) += 1;
      for (std::size_t i = 0; i < n; ++i) {
        if (i == p || sgn(a[i][p]) == 0) continue;
        const Rational f = a[i][p] / d;
        for (std::size_t j = 0; j < n; ++j)
          if (j != p) a[i][j] -= f * a[p][j];
      }
      drop({p});
      continue;
    }
    std::size_t r = n, c = n;
    for (std::size_t i = 0; i < n && r == n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (sgn(a[i][j]) != 0) {
          r = i;
          c = j;
          break;
        }
    if (r == n) fail(ErrorKind::DegenerateForm, "cup form has a " + std::to_string(n) + "-dimensional radical");
    // The block [[0, b], [b, 0]] has one positive and one negative eigenvalue.
    const Rational b = a[r][c];
    ++plus;
    ++minus;
    // Schur complement: A_ij -= (A_ir A_cj + A_ic A_rj) / b.
    std::vector<Rational> col_r(n), col_c(n);
    for (std::size_t i = 0; i < n; ++i) {
      col_r[i] = a[i][r];
      col_c[i] = a[i][c];
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == r || i == c) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == r || j == c) continue;
        a[i][j] -= (col_r[i] * col_c[j] + col_c[i] * col_r[j]) / b;
      }
    }
    drop({r, c});
  }
  return {plus, minus};
}

/// Gram matrix of the cup pairing on the given relative 2-cocycles, with signature.
///
/// Each basis element is also perturbed by a relative coboundary (first factor) and an
/// absolute coboundary (second factor); the pairing must not change.
inline PairingData gram_on_V(const ManifoldPair& pair, const std::vector<Cochain>& basis, std::uint64_t seed = 1) {
  const std::size_t m = basis.size();
  const std::size_t n2 = pair.total.count(2);
  for (const auto& c : basis) require_cocycle(pair, c, true, "basis element");
  const auto faces = detail::cup_faces(pair);
  std::vector<std::vector<Rational>> d;
  for (const auto& c : basis) d.push_back(detail::dense(c, n2));

  PairingData out;
  out.gram = RationalMatrix(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) out.gram(i, j) = detail::evaluate(faces, d[i], d[j]);

  if (m > 0) {
    const CochainComplex cx(pair.total);
    std::mt19937_64 rng(seed);
    Cochain eta_abs, eta_rel;
    for (std::size_t e = 0; e < pair.total.count(1); ++e) {
      const long v = static_cast<long>(rng() % 5) - 2;
      if (v != 0) eta_abs.push(static_cast<std::uint32_t>(e), v);
      if (v != 0 && !pair.in_link[1][e]) eta_rel.push(static_cast<std::uint32_t>(e), v);
    }
    const auto da = detail::dense(cx.coboundary(1, eta_abs), n2);
    const auto dr = detail::dense(cx.coboundary(1, eta_rel), n2);
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<Rational> ri = d[i], ai = d[i];
      for (std::size_t k = 0; k < n2; ++k) {
        ri[k] += dr[k];
        ai[k] += da[k];
      }
      for (std::size_t j = 0; j < m; ++j)
        if (detail::evaluate(faces, ri, d[j]) != out.gram(i, j) || detail::evaluate(faces, d[j], ai) != out.gram(j, i))
          fail(ErrorKind::DegenerateForm, "cup pairing depends on the cocycle representative");
    }
  }
  if (!out.gram.is_symmetric()) fail(ErrorKind::DegenerateForm, "cup pairing on V is not symmetric");
  std::tie(out.v_plus, out.v_minus) = signature_split(out.gram);
  return out;
}

}  // namespace coassoc
