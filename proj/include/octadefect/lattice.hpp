#pragma once

// Rational centerings Z^n ⊆ Λ ⊆ Q^n, stored as a common denominator q and an
// integer matrix A whose rows are q times the added generators.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "octadefect/errors.hpp"
#include "octadefect/exact_linalg.hpp"
#include "octadefect/index_set.hpp"

namespace octadefect {

/// Resource limits for the exhaustive procedures.
struct Guards {
  std::uint64_t max_cosets = std::uint64_t{1} << 20;
  std::size_t max_defect_dim = 12;
};

inline constexpr std::uint64_t kMaxCosetGuard = std::uint64_t{1} << 40;

class RationalLattice {
 public:
  /// Λ = <Z^n, rows(A)/q>. A matrix with no rows stands for Z^n and is stored
  /// as a single zero row over q = 1.
  RationalLattice(Integer q, IntMatrix A) : q_(std::move(q)), A_(std::move(A)) {
    require(q_ >= 1, "lattice denominator must be >= 1, got " + q_.get_str());
    if (A_.rows() == 0) {
      A_ = IntMatrix(1, A_.cols());
      q_ = 1;
    }
  }

  static RationalLattice integer_lattice(std::size_t n) { return {1, IntMatrix(1, n)}; }

  /// Lattice generated by Z^n and the given rational vectors.
  static RationalLattice from_generators(const std::vector<RationalVector>& gens,
                                         std::size_t n) {
    Integer q = 1;
    for (const auto& g : gens) {
      require(g.size() == n, "generator has wrong dimension");
      for (const auto& x : g) mpz_lcm(q.get_mpz_t(), q.get_mpz_t(), x.get_den_mpz_t());
    }
    IntMatrix A(gens.size(), n);
    for (std::size_t i = 0; i < gens.size(); ++i)
      for (std::size_t j = 0; j < n; ++j) {
        Rational v = gens[i][j] * q;
        A(i, j) = v.get_num();
      }
    return {q, std::move(A)};
  }

  std::size_t n() const noexcept { return A_.cols(); }
  std::size_t m() const noexcept { return A_.rows(); }
  const Integer& q() const noexcept { return q_; }
  const IntMatrix& A() const noexcept { return A_; }

  std::vector<RationalVector> generators() const {
    std::vector<RationalVector> gens(m(), RationalVector(n()));
    for (std::size_t i = 0; i < m(); ++i)
      for (std::size_t j = 0; j < n(); ++j) {
        gens[i][j] = Rational(A_(i, j), q_);
        gens[i][j].canonicalize();
      }
    return gens;
  }

  /// gcd(q, entries of A) == 1, i.e. q is the least common denominator.
  bool is_normalized() const {
    Integer g = q_;
    for (std::size_t i = 0; i < m(); ++i)
      for (const auto& x : A_.row(i)) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    return g == 1;
  }

  bool has_square_free_denominator() const { return is_square_free(q_); }

  /// Distinct primes of q, descending.
  std::vector<Integer> primes() const {
    std::vector<Integer> ps;
    for (const auto& [p, e] : factorize(q_)) ps.push_back(p);
    std::reverse(ps.begin(), ps.end());
    return ps;
  }

  friend bool operator==(const RationalLattice&, const RationalLattice&) = default;

 private:
  Integer q_;
  IntMatrix A_;
};

/// Divides out every prime p | q with A ≡ 0 (mod p), to the fixpoint.
inline RationalLattice normalize(const RationalLattice& lattice) {
  Integer g = lattice.q();
  const IntMatrix& A = lattice.A();
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (const auto& x : A.row(i)) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  if (g == 1) return lattice;
  IntMatrix reduced = A;
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (auto& x : reduced.row(i)) x /= g;
  return {lattice.q() / g, std::move(reduced)};
}

namespace detail {

/// Rows q*e_1..q*e_n followed by A; its row lattice is q*Λ.
inline IntMatrix scaled_generators(const RationalLattice& lattice) {
  IntMatrix qI = IntMatrix::identity(lattice.n());
  for (std::size_t i = 0; i < lattice.n(); ++i) qI(i, i) = lattice.q();
  return qI.stacked(lattice.A());
}

/// n×n upper-triangular HNF basis of q*Λ.
inline IntMatrix scaled_basis(const RationalLattice& lattice) {
  return hnf(scaled_generators(lattice)).H;
}

/// HNF of q*Λ after permuting coordinates into `order`.
inline IntMatrix scaled_basis_in_order(const RationalLattice& lattice,
                                       const std::vector<std::size_t>& order) {
  return hnf(scaled_generators(lattice).select_columns(order)).H;
}

inline Rational as_rational(const Integer& num, const Integer& den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

}  // namespace detail

/// Basis of Λ in Hermite shape (upper triangular, positive diagonal).
inline RationalMatrix canonical_basis(const RationalLattice& lattice) {
  const IntMatrix H = detail::scaled_basis(lattice);
  RationalMatrix basis(H.rows(), RationalVector(H.cols()));
  for (std::size_t i = 0; i < H.rows(); ++i)
    for (std::size_t j = 0; j < H.cols(); ++j)
      basis[i][j] = detail::as_rational(H(i, j), lattice.q());
  return basis;
}

/// Covolume of Λ; equals 1 / [Λ : Z^n].
inline Rational det(const RationalLattice& lattice) {
  const IntMatrix H = detail::scaled_basis(lattice);
  Integer num = 1, den = 1;
  for (std::size_t i = 0; i < H.rows(); ++i) {
    num *= H(i, i);
    den *= lattice.q();
  }
  return detail::as_rational(num, den);
}

/// [Λ : Z^n] as an exact integer.
inline Integer group_order(const RationalLattice& lattice) {
  Rational d = det(lattice);
  return d.get_den() / d.get_num();
}

inline bool contains(const RationalLattice& lattice, const RationalVector& x) {
  require(x.size() == lattice.n(), "contains: vector has wrong dimension");
  IntVector scaled(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    Rational v = x[j] * lattice.q();
    if (v.get_den() != 1) return false;
    scaled[j] = v.get_num();
  }
  return in_row_lattice(detail::scaled_basis(lattice), std::move(scaled));
}

/// Class of numerators/q + Z^n in Λ / Z^n.
struct CosetElement {
  std::vector<std::int64_t> numerators;  ///< each in [0, q)
  std::int64_t q = 1;

  bool is_identity() const {
    return std::all_of(numerators.begin(), numerators.end(), [](auto v) { return v == 0; });
  }

  /// Representative with each coordinate in (-1/2, 1/2], the L1-shortest one.
  RationalVector shortest_representative() const {
    RationalVector v(numerators.size());
    for (std::size_t i = 0; i < numerators.size(); ++i) {
      const std::int64_t r = numerators[i];
      const std::int64_t centered = 2 * r > q ? r - q : r;
      v[i] = detail::as_rational(Integer(static_cast<long>(centered)),
                                 Integer(static_cast<long>(q)));
    }
    return v;
  }

  std::string to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < numerators.size(); ++i)
      s += (i ? "," : "") + std::to_string(numerators[i]);
    return s + ")/" + std::to_string(q);
  }

  friend auto operator<=>(const CosetElement&, const CosetElement&) = default;
  friend bool operator==(const CosetElement&, const CosetElement&) = default;
};

/// Visits every element of Λ / Z^n exactly once (in mixed-radix order over the
/// Hermite basis). fn returns false to stop early.
inline void for_each_coset(const RationalLattice& input, const Guards& guards,
                           const std::function<bool(const CosetElement&)>& fn) {
  require(guards.max_cosets <= kMaxCosetGuard, "coset guard above 2^40 is not supported");
  const RationalLattice lattice = normalize(input);
  const Integer order = group_order(lattice);
  if (order > Integer(static_cast<unsigned long>(guards.max_cosets)))
    fail(ErrorKind::guard_exceeded, "coset group of order " + order.get_str() +
                                        " exceeds guard " + std::to_string(guards.max_cosets));
  // The exponent q divides the order, so q and all numerators fit in 64 bits.
  const std::int64_t q = lattice.q().get_si();
  const std::size_t n = lattice.n();
  const IntMatrix H = detail::scaled_basis(lattice);
  std::vector<std::vector<std::int64_t>> rows(n, std::vector<std::int64_t>(n));
  std::vector<std::int64_t> radix(n);
  for (std::size_t i = 0; i < n; ++i) {
    radix[i] = Integer(lattice.q() / H(i, i)).get_si();
    for (std::size_t j = 0; j < n; ++j) rows[i][j] = mod_floor(H(i, j), lattice.q()).get_si();
  }

  CosetElement current{std::vector<std::int64_t>(n, 0), q};
  bool stop = false;
  std::function<void(std::size_t)> visit = [&](std::size_t level) {
    if (stop) return;
    if (level == n) {
      if (!fn(current)) stop = true;
      return;
    }
    const std::vector<std::int64_t> saved = current.numerators;
    for (std::int64_t digit = 0; digit < radix[level] && !stop; ++digit) {
      visit(level + 1);
      for (std::size_t j = 0; j < n; ++j) {
        std::int64_t v = current.numerators[j] + rows[level][j];
        current.numerators[j] = v >= q ? v - q : v;
      }
    }
    current.numerators = saved;
  };
  visit(0);
}

/// All elements of Λ / Z^n, sorted lexicographically (identity first).
inline std::vector<CosetElement> coset_group(const RationalLattice& lattice,
                                             const Guards& guards = {}) {
  std::vector<CosetElement> cosets;
  for_each_coset(lattice, guards, [&](const CosetElement& c) {
    cosets.push_back(c);
    return true;
  });
  std::sort(cosets.begin(), cosets.end());
  return cosets;
}

/// Λ ∩ span{e_i : i ∈ S}, written in the |S| retained coordinates.
inline RationalLattice intersect_coordinate_subspace(const RationalLattice& input,
                                                     const IndexSet& S) {
  const RationalLattice lattice = normalize(input);
  const std::size_t n = lattice.n();
  for (std::size_t i : S) require(i < n, "index set exceeds lattice dimension");
  const IndexSet outside = S.complement(n);
  std::vector<std::size_t> order = outside.items();
  order.insert(order.end(), S.begin(), S.end());
  const IntMatrix H = detail::scaled_basis_in_order(lattice, order);
  // Rows past the first |outside| vanish on the outside coordinates and span
  // q*Λ ∩ span(S).
  IntMatrix block(S.size(), S.size());
  for (std::size_t r = 0; r < S.size(); ++r)
    for (std::size_t c = 0; c < S.size(); ++c) block(r, c) = H(outside.size() + r, outside.size() + c);
  return normalize(RationalLattice(lattice.q(), std::move(block)));
}

/// Whether {e_i : i ∈ I} extends to a basis of Λ, i.e. Λ ∩ span(e_I) = Z^I.
inline bool completable(const RationalLattice& lattice, const IndexSet& I) {
  return intersect_coordinate_subspace(lattice, I).q() == 1;
}

/// Basis of Λ containing e_i for every i in keep, or nothing when keep is not
/// completable. Row i of the result is e_i for kept i; the other rows come
/// from the Hermite form on the remaining coordinates, row i carrying its
/// pivot in coordinate i.
inline std::optional<RationalMatrix> complete_frame_basis(const RationalLattice& input,
                                                          const IndexSet& keep) {
  const RationalLattice lattice = normalize(input);
  const std::size_t n = lattice.n();
  for (std::size_t i : keep) require(i < n, "index set exceeds lattice dimension");
  const IndexSet free = keep.complement(n);
  std::vector<std::size_t> order = free.items();
  order.insert(order.end(), keep.begin(), keep.end());
  const IntMatrix H = detail::scaled_basis_in_order(lattice, order);
  for (std::size_t r = free.size(); r < n; ++r)
    if (H(r, r) != lattice.q()) return std::nullopt;

  RationalMatrix basis(n, RationalVector(n, Rational(0)));
  for (std::size_t k : keep) basis[k][k] = 1;
  for (std::size_t r = 0; r < free.size(); ++r)
    for (std::size_t c = 0; c < n; ++c)
      basis[free[r]][order[c]] = detail::as_rational(H(r, c), lattice.q());
  return basis;
}

/// Every row lies in Λ and |det| equals det Λ, so the rows form a basis of Λ.
inline bool verify_basis(const RationalLattice& lattice, const RationalMatrix& basis) {
  if (basis.size() != lattice.n()) return false;
  for (const auto& row : basis)
    if (row.size() != lattice.n() || !contains(lattice, row)) return false;
  return abs(determinant(basis)) == det(lattice);
}

struct DefectResult {
  std::size_t defect = 0;
  IndexSet keep;  ///< frame vectors kept, |keep| = n - defect
  RationalMatrix basis;
};

/// Exact defect of the standard frame by exhaustive search: subset sizes
/// descending from n, lexicographic within a size, first success wins.
inline DefectResult exact_defect(const RationalLattice& input, const Guards& guards = {}) {
  const RationalLattice lattice = normalize(input);
  const std::size_t n = lattice.n();
  if (n > guards.max_defect_dim)
    fail(ErrorKind::guard_exceeded, "exact defect needs n <= " +
                                        std::to_string(guards.max_defect_dim) + ", got n = " +
                                        std::to_string(n));
  for (std::size_t k = n + 1; k-- > 0;) {
    std::optional<DefectResult> found;
    for_each_subset(n, k, [&](const IndexSet& keep) {
      auto basis = complete_frame_basis(lattice, keep);
      if (!basis) return false;
      found = DefectResult{n - k, keep, std::move(*basis)};
      return true;
    });
    if (found) {
      ensure(verify_basis(lattice, found->basis), "exact_defect: completed basis failed verification");
      return std::move(*found);
    }
  }
  ensure(false, "exact_defect: the empty frame subset must always be completable");
  return {};
}

/// det Λ == ∏_j p_j^(-rank_j) for square-free q.
inline bool check_det_formula(const RationalLattice& input) {
  const RationalLattice lattice = normalize(input);
  if (!lattice.has_square_free_denominator())
    fail(ErrorKind::not_square_free,
         "determinant formula needs a square-free denominator, got q = " + lattice.q().get_str());
  Integer index = 1;
  for (const auto& p : lattice.primes()) {
    Integer power;
    mpz_pow_ui(power.get_mpz_t(), p.get_mpz_t(), rank_mod_p(lattice.A(), p));
    index *= power;
  }
  return det(lattice) == detail::as_rational(Integer(1), index);
}

}  // namespace octadefect
