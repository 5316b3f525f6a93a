#pragma once

// Exact linear algebra over Q.
//
// Sparse elimination runs on integer vectors and keeps entries small by
// dividing out the content after every combination. The machine-integer
// instantiation detects overflow and callers retry with GMP integers.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "coassoc/error.hpp"

namespace coassoc::exact {

using BigInt = mpz_class;
using Rational = mpq_class;

/// Thrown by the int64 arithmetic path; never escapes a top-level routine.
struct Overflow {};

namespace detail {

inline std::int64_t mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw Overflow{};
  return r;
}
inline std::int64_t sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw Overflow{};
  return r;
}
inline std::int64_t add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw Overflow{};
  return r;
}
inline std::int64_t gcd(std::int64_t a, std::int64_t b) {
  if (a == INT64_MIN || b == INT64_MIN) throw Overflow{};
  return std::gcd(a, b);
}
inline bool is_zero(std::int64_t a) { return a == 0; }
inline bool is_one(std::int64_t a) { return a == 1 || a == -1; }
inline std::int64_t divexact(std::int64_t a, std::int64_t b) { return a / b; }
inline int sign(std::int64_t a) { return (a > 0) - (a < 0); }

inline BigInt mul(const BigInt& a, const BigInt& b) { return a * b; }
inline BigInt sub(const BigInt& a, const BigInt& b) { return a - b; }
inline BigInt add(const BigInt& a, const BigInt& b) { return a + b; }
inline BigInt gcd(const BigInt& a, const BigInt& b) {
  BigInt g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}
inline bool is_zero(const BigInt& a) { return sgn(a) == 0; }
inline bool is_one(const BigInt& a) { return mpz_cmpabs_ui(a.get_mpz_t(), 1) == 0; }
inline BigInt divexact(const BigInt& a, const BigInt& b) {
  BigInt q;
  mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}
inline int sign(const BigInt& a) { return sgn(a); }

template <class Int>
Int from_big(const BigInt& v) {
  if constexpr (std::is_same_v<Int, BigInt>) {
    return v;
  } else {
    if (!v.fits_slong_p()) throw Overflow{};
    return static_cast<std::int64_t>(v.get_si());
  }
}

template <class Int>
BigInt to_big(const Int& v) {
  if constexpr (std::is_same_v<Int, BigInt>) {
    return v;
  } else {
    return BigInt(static_cast<long>(v));
  }
}

}  // namespace detail

/// Sparse integer vector with strictly increasing indices and no stored zeros.
template <class Int>
struct SparseVec {
  std::vector<std::uint32_t> idx;
  std::vector<Int> val;

  bool empty() const { return idx.empty(); }
  std::size_t size() const { return idx.size(); }

  void push(std::uint32_t i, Int v) {
    if (!detail::is_zero(v)) {
      idx.push_back(i);
      val.push_back(std::move(v));
    }
  }

  /// Builds from unsorted (index, value) pairs, summing duplicates.
  static SparseVec from_pairs(std::vector<std::pair<std::uint32_t, Int>> pairs) {
    std::sort(pairs.begin(), pairs.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    SparseVec out;
    for (std::size_t i = 0; i < pairs.size();) {
      std::size_t j = i;
      Int acc = pairs[i].second;
      while (++j < pairs.size() && pairs[j].first == pairs[i].first) acc = detail::add(acc, pairs[j].second);
      out.push(pairs[i].first, std::move(acc));
      i = j;
    }
    return out;
  }

  /// Divides by the gcd of all entries and makes the leading entry positive.
  void normalize() {
    if (idx.empty()) return;
    Int g = val[0];
    if (detail::sign(g) < 0) g = detail::sub(Int(0), g);
    for (std::size_t i = 1; i < val.size() && !detail::is_one(g); ++i) g = detail::gcd(g, val[i]);
    if (detail::sign(val[0]) < 0) g = detail::sub(Int(0), g);
    if (!(g == Int(1))) {
      for (auto& v : val) v = detail::divexact(v, g);
    }
  }
};

/// Returns a*x - b*y, merging by index.
template <class Int>
SparseVec<Int> combine(const Int& a, const SparseVec<Int>& x, const Int& b, const SparseVec<Int>& y) {
  SparseVec<Int> out;
  out.idx.reserve(x.size() + y.size());
  out.val.reserve(x.size() + y.size());
  std::size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x.idx[i] < y.idx[j])) {
      out.push(x.idx[i], detail::mul(a, x.val[i]));
      ++i;
    } else if (i == x.size() || y.idx[j] < x.idx[i]) {
      out.push(y.idx[j], detail::sub(Int(0), detail::mul(b, y.val[j])));
      ++j;
    } else {
      out.push(x.idx[i], detail::sub(detail::mul(a, x.val[i]), detail::mul(b, y.val[j])));
      ++i;
      ++j;
    }
  }
  return out;
}

template <class Int>
SparseVec<Int> convert(const SparseVec<BigInt>& v) {
  SparseVec<Int> out;
  out.idx = v.idx;
  out.val.reserve(v.val.size());
  for (const auto& x : v.val) out.val.push_back(detail::from_big<Int>(x));
  return out;
}

template <class Int>
SparseVec<BigInt> to_big(const SparseVec<Int>& v) {
  SparseVec<BigInt> out;
  out.idx = v.idx;
  out.val.reserve(v.val.size());
  for (const auto& x : v.val) out.val.push_back(detail::to_big(x));
  return out;
}

/// Incrementally built row-echelon basis of a subspace of Q^n.
/// Each stored row has a distinct leading (smallest) index.
template <class Int>
class EchelonBasis {
 public:
  explicit EchelonBasis(std::size_t ambient_dim = 0) : pivot_row_(ambient_dim, -1) {}

  std::size_t ambient_dim() const { return pivot_row_.size(); }
  std::size_t rank() const { return rows_.size(); }
  const std::vector<SparseVec<Int>>& rows() const { return rows_; }

  /// Reduces v against the basis; returns the residual (empty iff v is in the span).
  SparseVec<Int> reduce(SparseVec<Int> v) const {
    while (!v.empty()) {
      const int r = pivot_row_[v.idx[0]];
      if (r < 0) break;
      const auto& row = rows_[static_cast<std::size_t>(r)];
      const Int g = detail::gcd(row.val[0], v.val[0]);
      v = combine(detail::divexact(row.val[0], g), v, detail::divexact(v.val[0], g), row);
      v.normalize();
    }
    return v;
  }

  bool contains(const SparseVec<Int>& v) const { return reduce(v).empty(); }

  /// Adds v to the basis; returns true when it was independent.
  bool insert(SparseVec<Int> v) {
    v.normalize();
    v = reduce(std::move(v));
    if (v.empty()) return false;
    pivot_row_[v.idx[0]] = static_cast<int>(rows_.size());
    rows_.push_back(std::move(v));
    return true;
  }

  bool is_pivot(std::size_t i) const { return pivot_row_[i] >= 0; }

  std::vector<std::uint32_t> pivots() const {
    std::vector<std::uint32_t> out;
    out.reserve(rows_.size());
    for (const auto& r : rows_) out.push_back(r.idx[0]);
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Basis of the orthogonal complement of the row space, i.e. the nullspace of
  /// the matrix whose rows were inserted. One vector per non-pivot column, with
  /// a 1 in that column and zeros in the other non-pivot columns.
  std::vector<std::vector<Rational>> nullspace() const {
    const std::size_t n = ambient_dim();
    std::vector<std::size_t> order;  // rows by decreasing lead
    order.reserve(rows_.size());
    for (std::size_t r = 0; r < rows_.size(); ++r) order.push_back(r);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return rows_[a].idx[0] > rows_[b].idx[0]; });
    std::vector<std::vector<Rational>> basis;
    for (std::size_t free = 0; free < n; ++free) {
      if (is_pivot(free)) continue;
      std::vector<Rational> x(n, Rational(0));
      x[free] = 1;
      for (std::size_t r : order) {
        const auto& row = rows_[r];
        Rational acc = 0;
        for (std::size_t t = 1; t < row.size(); ++t) {
          const auto& xv = x[row.idx[t]];
          if (sgn(xv) != 0) acc += Rational(detail::to_big(row.val[t])) * xv;
        }
        x[row.idx[0]] = -acc / Rational(detail::to_big(row.val[0]));
      }
      basis.push_back(std::move(x));
    }
    return basis;
  }

 private:
  std::vector<int> pivot_row_;
  std::vector<SparseVec<Int>> rows_;
};

/// Scales a rational vector to a primitive integer vector with the same span.
inline SparseVec<BigInt> primitive_integer(std::span<const Rational> x) {
  BigInt denom = 1;
  for (const auto& v : x) {
    if (sgn(v) != 0) mpz_lcm(denom.get_mpz_t(), denom.get_mpz_t(), v.get_den_mpz_t());
  }
  SparseVec<BigInt> out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (sgn(x[i]) == 0) continue;
    BigInt num = x[i].get_num() * (denom / x[i].get_den());
    out.push(static_cast<std::uint32_t>(i), std::move(num));
  }
  out.normalize();
  return out;
}

/// Runs fn<std::int64_t>() and falls back to fn<BigInt>() on overflow.
template <class Fn>
auto with_overflow_fallback(Fn&& fn) {
  try {
    return fn.template operator()<std::int64_t>();
  } catch (const Overflow&) {
    return fn.template operator()<BigInt>();
  }
}

/// Exact rank of the span of the given vectors in Q^n.
inline std::size_t rank_of(std::size_t n, const std::vector<SparseVec<BigInt>>& vectors) {
  return with_overflow_fallback([&]<class Int>() {
    EchelonBasis<Int> basis(n);
    for (const auto& v : vectors) basis.insert(convert<Int>(v));
    return basis.rank();
  });
}

inline std::string to_string(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

/// Dense matrix over Q.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  static RationalMatrix identity(std::size_t n) {
    RationalMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  bool operator==(const RationalMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

  RationalMatrix transpose() const {
    RationalMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  RationalMatrix operator*(const RationalMatrix& o) const {
    if (cols_ != o.rows_) fail(ErrorKind::InvalidInput, "matrix product dimension mismatch");
    RationalMatrix p(rows_, o.cols_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t k = 0; k < cols_; ++k) {
        const Rational& a = (*this)(r, k);
        if (sgn(a) == 0) continue;
        for (std::size_t c = 0; c < o.cols_; ++c) p(r, c) += a * o(k, c);
      }
    return p;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const Rational& q) { return sgn(q) == 0; });
  }

  bool is_symmetric() const {
    if (rows_ != cols_) return false;
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = r + 1; c < cols_; ++c)
        if ((*this)(r, c) != (*this)(c, r)) return false;
    return true;
  }

  /// Rank by fraction-free Bareiss elimination with partial pivoting.
  /// Rows are first scaled to integers; intermediate entries are minors.
  std::size_t rank() const {
    std::vector<std::vector<BigInt>> a(rows_, std::vector<BigInt>(cols_));
    for (std::size_t r = 0; r < rows_; ++r) {
      BigInt den = 1;
      for (std::size_t c = 0; c < cols_; ++c)
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), (*this)(r, c).get_den_mpz_t());
      for (std::size_t c = 0; c < cols_; ++c) {
        const Rational& q = (*this)(r, c);
        a[r][c] = q.get_num() * (den / q.get_den());
      }
    }
    BigInt prev = 1;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols_ && rank < rows_; ++col) {
      // Partial pivoting: smallest nonzero magnitude keeps the minors small.
      std::optional<std::size_t> piv;
      for (std::size_t r = rank; r < rows_; ++r) {
        if (sgn(a[r][col]) == 0) continue;
        if (!piv || mpz_cmpabs(a[r][col].get_mpz_t(), a[*piv][col].get_mpz_t()) < 0) piv = r;
      }
      if (!piv) continue;
      std::swap(a[rank], a[*piv]);
      const BigInt& p = a[rank][col];
      for (std::size_t r = rank + 1; r < rows_; ++r) {
        for (std::size_t c = col + 1; c < cols_; ++c) {
          BigInt v = p * a[r][c] - a[r][col] * a[rank][c];
          mpz_divexact(a[r][c].get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        }
        a[r][col] = 0;
      }
      prev = p;
      ++rank;
    }
    return rank;
  }

  /// Column c as a sparse integer vector (requires integral entries).
  SparseVec<BigInt> integer_column(std::size_t c) const {
    SparseVec<BigInt> v;
    for (std::size_t r = 0; r < rows_; ++r) {
      const Rational& q = (*this)(r, c);
      if (q.get_den() != 1) fail(ErrorKind::InvalidInput, "non-integral entry");
      v.push(static_cast<std::uint32_t>(r), q.get_num());
    }
    return v;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

}  // namespace coassoc::exact
