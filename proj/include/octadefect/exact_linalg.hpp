#pragma once

// Exact integer/rational matrix arithmetic: Hermite and Smith normal forms,
// determinants, ranks over prime fields and linear congruences.
// Everything is arbitrary precision (GMP); there is no floating point here.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "octadefect/errors.hpp"

namespace octadefect {

using Integer = mpz_class;
using Rational = mpq_class;
using IntVector = std::vector<Integer>;
using RationalVector = std::vector<Rational>;
using RationalMatrix = std::vector<RationalVector>;

/// Dense row-major matrix of arbitrary-precision integers.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Integer(0)) {}

  /// Builds from nested rows; all rows must have equal length.
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
      require(row.size() == cols_, "IntMatrix: ragged initializer");
      for (long v : row) data_.emplace_back(v);
    }
  }

  static IntMatrix from_rows(const std::vector<IntVector>& rows, std::size_t cols) {
    IntMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      require(rows[i].size() == cols, "IntMatrix: ragged rows");
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Integer& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Integer& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::span<Integer> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const Integer> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }

  IntVector row_vector(std::size_t i) const {
    auto r = row(i);
    return {r.begin(), r.end()};
  }

  IntVector column(std::size_t j) const {
    IntVector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const Integer& v) { return v == 0; });
  }

  IntMatrix transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  /// Keeps the listed columns, in the listed order.
  IntMatrix select_columns(std::span<const std::size_t> cols) const {
    IntMatrix s(rows_, cols.size());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols.size(); ++k) s(i, k) = (*this)(i, cols[k]);
    return s;
  }

  /// Rows of *this followed by rows of other.
  IntMatrix stacked(const IntMatrix& other) const {
    require(cols_ == other.cols_, "IntMatrix::stacked: column mismatch");
    IntMatrix s(rows_ + other.rows_, cols_);
    std::copy(data_.begin(), data_.end(), s.data_.begin());
    std::copy(other.data_.begin(), other.data_.end(), s.data_.begin() + data_.size());
    return s;
  }

  IntMatrix top_rows(std::size_t count) const {
    IntMatrix s(count, cols_);
    std::copy(data_.begin(), data_.begin() + count * cols_, s.data_.begin());
    return s;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }
  void negate_row(std::size_t i) {
    for (auto& v : row(i)) v = -v;
  }
  /// row[dst] += factor * row[src]
  void add_row_multiple(std::size_t dst, std::size_t src, const Integer& factor) {
    if (factor == 0) return;
    for (std::size_t j = 0; j < cols_; ++j) (*this)(dst, j) += factor * (*this)(src, j);
  }
  /// col[dst] += factor * col[src]
  void add_col_multiple(std::size_t dst, std::size_t src, const Integer& factor) {
    if (factor == 0) return;
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, dst) += factor * (*this)(i, src);
  }
  /// (row[a], row[b]) <- (s*row[a] + t*row[b], u*row[a] + v*row[b])
  void combine_rows(std::size_t a, std::size_t b, const Integer& s, const Integer& t,
                    const Integer& u, const Integer& v) {
    for (std::size_t j = 0; j < cols_; ++j) {
      Integer x = (*this)(a, j);
      Integer y = (*this)(b, j);
      (*this)(a, j) = s * x + t * y;
      (*this)(b, j) = u * x + v * y;
    }
  }

  friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    require(a.cols_ == b.rows_, "IntMatrix product: dimension mismatch");
    IntMatrix p(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Integer& aik = a(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) p(i, j) += aik * b(k, j);
      }
    return p;
  }

  friend std::ostream& operator<<(std::ostream& os, const IntMatrix& m) {
    os << '[';
    for (std::size_t i = 0; i < m.rows_; ++i) {
      os << (i ? ", [" : "[");
      for (std::size_t j = 0; j < m.cols_; ++j) os << (j ? ", " : "") << m(i, j);
      os << ']';
    }
    return os << ']';
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

/// Row vector times matrix.
inline IntVector row_times(std::span<const Integer> v, const IntMatrix& m) {
  require(v.size() == m.rows(), "row_times: dimension mismatch");
  IntVector out(m.cols(), Integer(0));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (v[i] == 0) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) out[j] += v[i] * m(i, j);
  }
  return out;
}

/// Least non-negative residue.
inline Integer mod_floor(const Integer& a, const Integer& m) {
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline bool divides(const Integer& d, const Integer& a) {
  return mpz_divisible_p(a.get_mpz_t(), d.get_mpz_t()) != 0;
}

inline bool is_prime(const Integer& p) {
  return p >= 2 && mpz_probab_prime_p(p.get_mpz_t(), 50) > 0;
}

/// Distinct prime divisors with multiplicities, ascending. Trial division;
/// denominators handled here are desk-scale.
inline std::vector<std::pair<Integer, unsigned>> factorize(Integer n) {
  require(n >= 1, "factorize: argument must be positive");
  std::vector<std::pair<Integer, unsigned>> out;
  for (Integer d = 2; d * d <= n; d += (d == 2 ? 1 : 2)) {
    unsigned e = 0;
    while (divides(d, n)) {
      n /= d;
      ++e;
    }
    if (e) out.emplace_back(d, e);
  }
  if (n > 1) out.emplace_back(n, 1u);
  return out;
}

inline bool is_square_free(const Integer& n) {
  for (const auto& [p, e] : factorize(n))
    if (e > 1) return false;
  return true;
}

inline Integer smallest_prime_factor(const Integer& n) {
  require(n >= 2, "smallest_prime_factor: argument must be >= 2");
  return factorize(n).front().first;
}

// ---------------------------------------------------------------------------
// Hermite normal form

struct HermiteForm {
  IntMatrix H;  ///< nonzero rows only
  IntMatrix U;  ///< unimodular, U * M == [H; 0]
};

/// Row-style Hermite normal form. Pivots are positive, entries above a pivot
/// lie in [0, pivot), zero rows are dropped from H but U keeps full size.
inline HermiteForm hnf(const IntMatrix& M) {
  IntMatrix H = M;
  IntMatrix U = IntMatrix::identity(M.rows());
  const std::size_t r = M.rows();
  std::size_t pivot_row = 0;
  for (std::size_t col = 0; col < M.cols() && pivot_row < r; ++col) {
    for (std::size_t i = pivot_row + 1; i < r; ++i) {
      if (H(i, col) == 0) continue;
      Integer a = H(pivot_row, col);
      Integer b = H(i, col);
      Integer g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
      Integer u = -b / g;
      Integer v = a / g;
      H.combine_rows(pivot_row, i, s, t, u, v);
      U.combine_rows(pivot_row, i, s, t, u, v);
    }
    if (H(pivot_row, col) == 0) continue;
    if (H(pivot_row, col) < 0) {
      H.negate_row(pivot_row);
      U.negate_row(pivot_row);
    }
    const Integer pivot = H(pivot_row, col);
    for (std::size_t k = 0; k < pivot_row; ++k) {
      Integer f = -floor_div(H(k, col), pivot);
      H.add_row_multiple(k, pivot_row, f);
      U.add_row_multiple(k, pivot_row, f);
    }
    ++pivot_row;
  }
  return {H.top_rows(pivot_row), std::move(U)};
}

/// Column index of the first nonzero entry of each row of an echelon matrix.
inline std::vector<std::size_t> pivot_columns(const IntMatrix& H) {
  std::vector<std::size_t> pivots;
  for (std::size_t i = 0; i < H.rows(); ++i) {
    std::size_t j = 0;
    while (j < H.cols() && H(i, j) == 0) ++j;
    pivots.push_back(j);
  }
  return pivots;
}

/// True iff v lies in the integer row span of the echelon matrix H.
inline bool in_row_lattice(const IntMatrix& H, IntVector v) {
  require(v.size() == H.cols(), "in_row_lattice: dimension mismatch");
  const auto pivots = pivot_columns(H);
  std::size_t next_col = 0;
  for (std::size_t i = 0; i < H.rows(); ++i) {
    const std::size_t pc = pivots[i];
    for (; next_col < pc; ++next_col)
      if (v[next_col] != 0) return false;
    if (!divides(H(i, pc), v[pc])) return false;
    Integer f = -(v[pc] / H(i, pc));
    for (std::size_t j = pc; j < H.cols(); ++j) v[j] += f * H(i, j);
    next_col = pc + 1;
  }
  for (; next_col < v.size(); ++next_col)
    if (v[next_col] != 0) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Smith normal form

struct SmithForm {
  IntMatrix S;  ///< diagonal, d_1 | d_2 | ..., same shape as the input
  IntMatrix U;  ///< unimodular rows x rows
  IntMatrix V;  ///< unimodular cols x cols; U * M * V == S
};

inline SmithForm snf(const IntMatrix& M) {
  IntMatrix S = M;
  IntMatrix U = IntMatrix::identity(M.rows());
  IntMatrix V = IntMatrix::identity(M.cols());
  const std::size_t r = M.rows(), c = M.cols();
  const std::size_t diag = std::min(r, c);

  for (std::size_t t = 0; t < diag; ++t) {
    for (;;) {
      // Smallest nonzero entry of the trailing block becomes the pivot.
      std::optional<std::pair<std::size_t, std::size_t>> best;
      for (std::size_t i = t; i < r; ++i)
        for (std::size_t j = t; j < c; ++j)
          if (S(i, j) != 0 && (!best || abs(S(i, j)) < abs(S(best->first, best->second))))
            best = {i, j};
      if (!best) return {std::move(S), std::move(U), std::move(V)};
      S.swap_rows(t, best->first);
      U.swap_rows(t, best->first);
      S.swap_cols(t, best->second);
      V.swap_cols(t, best->second);

      bool clean = true;
      for (std::size_t i = t + 1; i < r; ++i) {
        Integer f = -(S(i, t) / S(t, t));
        S.add_row_multiple(i, t, f);
        U.add_row_multiple(i, t, f);
        if (S(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < c; ++j) {
        Integer f = -(S(t, j) / S(t, t));
        S.add_col_multiple(j, t, f);
        V.add_col_multiple(j, t, f);
        if (S(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      std::optional<std::size_t> offending;
      for (std::size_t i = t + 1; i < r && !offending; ++i)
        for (std::size_t j = t + 1; j < c; ++j)
          if (!divides(S(t, t), S(i, j))) {
            offending = i;
            break;
          }
      if (!offending) break;
      S.add_row_multiple(t, *offending, 1);
      U.add_row_multiple(t, *offending, 1);
    }
    if (S(t, t) < 0) {
      S.negate_row(t);
      U.negate_row(t);
    }
  }
  return {std::move(S), std::move(U), std::move(V)};
}

// ---------------------------------------------------------------------------
// Determinant and ranks

/// Fraction-free (Bareiss) determinant of a square matrix.
inline Integer determinant(const IntMatrix& M) {
  require(M.rows() == M.cols(), "determinant: matrix must be square");
  const std::size_t n = M.rows();
  if (n == 0) return 1;
  IntMatrix a = M;
  Integer sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t swap_with = k + 1;
      while (swap_with < n && a(swap_with, k) == 0) ++swap_with;
      if (swap_with == n) return 0;
      a.swap_rows(k, swap_with);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

/// Determinant of a square rational matrix.
inline Rational determinant(const RationalMatrix& M) {
  const std::size_t n = M.size();
  Integer common = 1;
  for (const auto& row : M) {
    require(row.size() == n, "determinant: matrix must be square");
    for (const auto& x : row) mpz_lcm(common.get_mpz_t(), common.get_mpz_t(), x.get_den_mpz_t());
  }
  IntMatrix scaled(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Rational v = M[i][j] * common;
      scaled(i, j) = v.get_num();
    }
  Rational det(determinant(scaled));
  for (std::size_t i = 0; i < n; ++i) det /= common;
  det.canonicalize();
  return det;
}

/// Incrementally grown set of vectors over the field Z/p, kept in reduced
/// echelon form so independence queries cost one reduction each.
class ModpSpan {
 public:
  ModpSpan(Integer p, std::size_t dim) : p_(std::move(p)), dim_(dim) {}

  std::size_t rank() const noexcept { return basis_.size(); }
  const Integer& prime() const noexcept { return p_; }

  /// Residue of v after elimination against the current span.
  IntVector reduce(std::span<const Integer> v) const {
    require(v.size() == dim_, "ModpSpan: dimension mismatch");
    IntVector w(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) w[i] = mod_floor(v[i], p_);
    for (std::size_t b = 0; b < basis_.size(); ++b) {
      const std::size_t pc = pivots_[b];
      if (w[pc] == 0) continue;
      Integer f = w[pc];
      for (std::size_t j = 0; j < dim_; ++j) w[j] = mod_floor(w[j] - f * basis_[b][j], p_);
    }
    return w;
  }

  bool independent_of(std::span<const Integer> v) const {
    const IntVector w = reduce(v);
    return std::any_of(w.begin(), w.end(), [](const Integer& x) { return x != 0; });
  }

  /// Adds v when it is independent of the span; returns whether it was added.
  bool insert(std::span<const Integer> v) {
    IntVector w = reduce(v);
    auto it = std::find_if(w.begin(), w.end(), [](const Integer& x) { return x != 0; });
    if (it == w.end()) return false;
    const std::size_t pc = static_cast<std::size_t>(it - w.begin());
    Integer inv;
    mpz_invert(inv.get_mpz_t(), w[pc].get_mpz_t(), p_.get_mpz_t());
    for (auto& x : w) x = mod_floor(x * inv, p_);
    for (std::size_t b = 0; b < basis_.size(); ++b) {
      Integer f = basis_[b][pc];
      if (f == 0) continue;
      for (std::size_t j = 0; j < dim_; ++j)
        basis_[b][j] = mod_floor(basis_[b][j] - f * w[j], p_);
    }
    basis_.push_back(std::move(w));
    pivots_.push_back(pc);
    return true;
  }

 private:
  Integer p_;
  std::size_t dim_;
  std::vector<IntVector> basis_;
  std::vector<std::size_t> pivots_;
};

/// Rank of M reduced modulo the prime p.
inline std::size_t rank_mod_p(const IntMatrix& M, const Integer& p) {
  require(is_prime(p), "rank_mod_p: modulus " + p.get_str() + " is not prime");
  ModpSpan span(p, M.cols());
  for (std::size_t i = 0; i < M.rows() && span.rank() < M.cols(); ++i) span.insert(M.row(i));
  return span.rank();
}

/// Finds an integer row vector c with c * M == b (mod q), or nothing when the
/// congruence has no solution. Solved through the Smith form of M.
inline std::optional<IntVector> solve_mod(const IntMatrix& M, std::span<const Integer> b,
                                          const Integer& q) {
  require(b.size() == M.cols(), "solve_mod: right-hand side has wrong length");
  require(q >= 1, "solve_mod: modulus must be positive");
  const SmithForm smith = snf(M);
  const IntVector target = row_times(b, smith.V);
  IntVector y(M.rows(), Integer(0));
  for (std::size_t i = 0; i < M.cols(); ++i) {
    const Integer d = i < M.rows() ? smith.S(i, i) : Integer(0);
    Integer g;
    mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), q.get_mpz_t());
    if (!divides(g, target[i])) return std::nullopt;
    if (i >= M.rows() || d == 0) continue;
    const Integer reduced_mod = q / g;
    Integer inv = 0;
    if (reduced_mod > 1) {
      Integer dg = mod_floor(d / g, reduced_mod);
      mpz_invert(inv.get_mpz_t(), dg.get_mpz_t(), reduced_mod.get_mpz_t());
    }
    y[i] = mod_floor((target[i] / g) * inv, reduced_mod);
  }
  IntVector c = row_times(y, smith.U);
  for (auto& x : c) x = mod_floor(x, q);
  return c;
}

}  // namespace octadefect
