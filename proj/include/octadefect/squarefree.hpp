#pragma once

// Generator compression and the defect-preserving passage to a sublattice with
// square-free denominators.

#include <map>
#include <vector>

#include "octadefect/lattice.hpp"

namespace octadefect {

/// Given generators of Z^n ⊆ Λ' ⊆ Λ, returns at most m = Λ.m() vectors that
/// generate Λ' together with Z^n. Each generator is written as c·A/q modulo
/// Z^n; the coefficient rows are Hermite-reduced over Z.
inline std::vector<RationalVector> lemma1_compress(const RationalLattice& lattice,
                                                   const std::vector<RationalVector>& gens) {
  const std::size_t n = lattice.n();
  const Integer& q = lattice.q();
  std::vector<IntVector> coefficient_rows;
  for (const auto& g : gens) {
    require(g.size() == n, "lemma1_compress: generator has wrong dimension");
    IntVector scaled(n);
    for (std::size_t j = 0; j < n; ++j) {
      Rational v = g[j] * q;
      require(v.get_den() == 1, "lemma1_compress: generator is not in the lattice");
      scaled[j] = v.get_num();
    }
    auto c = solve_mod(lattice.A(), scaled, q);
    require(c.has_value(), "lemma1_compress: generator is not in the lattice");
    coefficient_rows.push_back(std::move(*c));
  }
  const IntMatrix reduced = hnf(IntMatrix::from_rows(coefficient_rows, lattice.m())).H;

  std::vector<RationalVector> out;
  for (std::size_t i = 0; i < reduced.rows(); ++i) {
    const IntVector v = row_times(reduced.row(i), lattice.A());
    RationalVector x(n);
    bool integral = true;
    for (std::size_t j = 0; j < n; ++j) {
      x[j] = detail::as_rational(mod_floor(v[j], q), q);
      if (x[j] != 0) integral = false;
    }
    if (!integral) out.push_back(std::move(x));
  }
  return out;
}

struct SubsetWitness {
  RationalVector x;   ///< non-integer point of Λ inside span(e_I)
  Integer q;          ///< lcm of the coordinate denominators of x
  Integer p;          ///< smallest prime factor of q
  Integer u;          ///< q / p; u·x has square-free denominators
};

struct ReductionCertificate {
  RationalLattice original;
  RationalLattice reduced;
  std::map<IndexSet, SubsetWitness> per_subset_witnesses;
  std::size_t defect_original = 0;
  std::size_t defect_reduced = 0;
};

namespace detail {

inline Integer denominator_lcm(const RationalVector& x) {
  Integer l = 1;
  for (const auto& v : x) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
  return l;
}

/// Lexicographically least non-integer row of the Hermite basis of
/// Λ ∩ span(e_I), embedded back into n coordinates.
inline std::optional<RationalVector> subspace_witness(const RationalLattice& lattice,
                                                      const IndexSet& I) {
  const RationalMatrix basis = canonical_basis(intersect_coordinate_subspace(lattice, I));
  std::optional<RationalVector> best;
  for (const auto& row : basis) {
    if (denominator_lcm(row) == 1) continue;
    RationalVector x(lattice.n(), Rational(0));
    for (std::size_t k = 0; k < I.size(); ++k) x[I[k]] = row[k];
    if (!best || x < *best) best = std::move(x);
  }
  return best;
}

}  // namespace detail

/// Builds Z^n ⊆ Λ' ⊆ Λ with square-free denominators and the same defect.
/// Already square-free input is returned unchanged.
inline ReductionCertificate squarefree_reduce(const RationalLattice& input,
                                              const Guards& guards = {}) {
  const RationalLattice lattice = normalize(input);
  if (lattice.has_square_free_denominator()) {
    const std::size_t d = exact_defect(lattice, guards).defect;
    return {lattice, lattice, {}, d, d};
  }

  const std::size_t n = lattice.n();
  const std::size_t d = exact_defect(lattice, guards).defect;
  // q > 1 here, so Λ != Z^n and d >= 1.
  const std::size_t k = n - d + 1;
  ReductionCertificate cert{lattice, lattice, {}, d, 0};
  std::vector<RationalVector> scaled_witnesses;
  for_each_subset(n, k, [&](const IndexSet& I) {
    auto x = detail::subspace_witness(lattice, I);
    ensure(x.has_value(), "squarefree_reduce: no witness for subset " + I.to_string() +
                              " although the defect is " + std::to_string(d));
    SubsetWitness w;
    w.x = std::move(*x);
    w.q = detail::denominator_lcm(w.x);
    w.p = smallest_prime_factor(w.q);
    w.u = w.q / w.p;
    RationalVector y(n);
    for (std::size_t j = 0; j < n; ++j) {
      y[j] = w.x[j] * Rational(w.u);
      y[j].canonicalize();
    }
    scaled_witnesses.push_back(std::move(y));
    cert.per_subset_witnesses.emplace(I, std::move(w));
    return false;
  });

  cert.reduced = normalize(
      RationalLattice::from_generators(lemma1_compress(lattice, scaled_witnesses), n));
  ensure(cert.reduced.has_square_free_denominator(),
         "squarefree_reduce: reduced denominator " + cert.reduced.q().get_str() +
             " is not square-free");
  for (const auto& g : cert.reduced.generators())
    ensure(contains(lattice, g), "squarefree_reduce: reduced lattice escapes the original");
  cert.defect_reduced = exact_defect(cert.reduced, guards).defect;
  ensure(cert.defect_reduced == cert.defect_original,
         "squarefree_reduce: defect changed from " + std::to_string(cert.defect_original) +
             " to " + std::to_string(cert.defect_reduced));
  return cert;
}

}  // namespace octadefect
