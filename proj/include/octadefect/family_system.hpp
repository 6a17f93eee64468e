#pragma once

// Per-prime column matroids of A over Z/p_j. The families of maximal
// independent column sets are never materialized; they are queried through
// independence tests instead.

#include <string>
#include <vector>

#include "octadefect/admissibility.hpp"
#include "octadefect/lattice.hpp"
#include "octadefect/log_bounds.hpp"

namespace octadefect {

struct FamilySystem {
  RationalLattice lattice;  ///< normalized, square-free q
  std::vector<Integer> primes;     ///< p_1 > p_2 > ... > p_s
  std::vector<std::size_t> ranks;  ///< rank of A over Z/p_j

  std::size_t size() const noexcept { return primes.size(); }
};

inline FamilySystem build_family_system(const RationalLattice& input) {
  RationalLattice lattice = normalize(input);
  if (!lattice.has_square_free_denominator())
    fail(ErrorKind::not_square_free, "denominator q = " + lattice.q().get_str() +
                                         " is not square-free; run squarefree_reduce first");
  FamilySystem system{lattice, lattice.primes(), {}};
  for (const auto& p : system.primes) {
    const std::size_t rank = rank_mod_p(lattice.A(), p);
    ensure(rank >= 1, "prime " + p.get_str() + " divides every entry of a normalized lattice");
    system.ranks.push_back(rank);
  }
  return system;
}

namespace detail {

inline void check_prime_index(const FamilySystem& system, std::size_t j) {
  require(j < system.size(), "prime index " + std::to_string(j) + " out of range");
}

/// Span of the columns V of A over Z/p_j; V must be independent.
inline ModpSpan column_span(const FamilySystem& system, std::size_t j, const IndexSet& V) {
  check_prime_index(system, j);
  const IntMatrix& A = system.lattice.A();
  ModpSpan span(system.primes[j], A.rows());
  for (std::size_t c : V) {
    require(c < A.cols(), "column index out of range");
    require(span.insert(A.column(c)), "columns " + V.to_string() + " are dependent modulo " +
                                          system.primes[j].get_str());
  }
  return span;
}

}  // namespace detail

/// Greedy ascending extension of seed to a maximal independent column set
/// (size rank_j) over Z/p_j.
inline IndexSet max_independent_set(const FamilySystem& system, std::size_t j,
                                    const IndexSet& seed = {}) {
  ModpSpan span = detail::column_span(system, j, seed);
  IndexSet result = seed;
  const IntMatrix& A = system.lattice.A();
  for (std::size_t c = 0; c < A.cols() && span.rank() < system.ranks[j]; ++c)
    if (!seed.contains(c) && span.insert(A.column(c))) result.insert(c);
  return result;
}

/// Columns c such that V ∪ {c} is independent over Z/p_j.
inline IndexSet extension_set(const FamilySystem& system, std::size_t j, const IndexSet& V) {
  const ModpSpan span = detail::column_span(system, j, V);
  IndexSet result;
  const IntMatrix& A = system.lattice.A();
  for (std::size_t c = 0; c < A.cols(); ++c)
    if (span.independent_of(A.column(c))) result.insert(c);
  return result;
}

struct Lemma4Detail {
  std::size_t prime_index = 0;
  std::size_t prefix_size = 0;     ///< l = |V|
  std::size_t extension_size = 0;  ///< |M̃_j|
  Integer power;                   ///< p_j^(rank_j - l)
  bool factorial_ok = false;       ///< |M̃_j|! >= power
  bool log_form_applicable = false;  ///< p_j >= 5
  bool log_form_ok = true;
};

struct Lemma4Result {
  bool holds = false;
  Lemma4Detail detail;
};

/// Checks |M̃_j|! >= p_j^(rank_j - l) and, for p_j >= 5,
/// |M̃_j| >= (1/2) ln(p_j^(rank_j - l)) / ln ln(p_j^(rank_j - l)).
/// `admissibility` must describe the same lattice and report it admissible.
inline Lemma4Result lemma4_check(const FamilySystem& system,
                                 const AdmissibilityReport& admissibility, std::size_t j,
                                 const IndexSet& V) {
  require(admissibility.admissible, "lemma4_check: the octahedron must be admissible");
  detail::check_prime_index(system, j);
  require(V.size() < system.ranks[j], "lemma4_check: needs |V| < rank_j");

  Lemma4Detail d;
  d.prime_index = j;
  d.prefix_size = V.size();
  d.extension_size = extension_set(system, j, V).size();
  mpz_pow_ui(d.power.get_mpz_t(), system.primes[j].get_mpz_t(), system.ranks[j] - V.size());
  Integer factorial;
  mpz_fac_ui(factorial.get_mpz_t(), d.extension_size);
  d.factorial_ok = factorial >= d.power;
  d.log_form_applicable = system.primes[j] >= 5;
  if (d.log_form_applicable) {
    const auto verdict =
        at_least_half_log_over_loglog(Integer(static_cast<unsigned long>(d.extension_size)), d.power);
    d.log_form_ok = verdict.value_or(false);
  }
  return {d.factorial_ok && d.log_form_ok, std::move(d)};
}

inline Lemma4Result lemma4_check(const FamilySystem& system, std::size_t j, const IndexSet& V,
                                 const Guards& guards = {}) {
  return lemma4_check(system, is_admissible(system.lattice, false, guards), j, V);
}

struct Lemma4Sweep {
  bool all_hold = true;
  std::size_t checks = 0;
  std::vector<Lemma4Detail> violations;
};

/// Runs lemma4_check for every prime and every proper prefix of the greedy
/// maximal independent set.
inline Lemma4Sweep lemma4_sweep(const FamilySystem& system,
                                const AdmissibilityReport& admissibility) {
  Lemma4Sweep sweep;
  for (std::size_t j = 0; j < system.size(); ++j) {
    const IndexSet full = max_independent_set(system, j);
    // Greedy picks are ascending, so prefixes in pick order are sorted prefixes.
    for (std::size_t l = 0; l < full.size(); ++l) {
      IndexSet prefix(std::vector<std::size_t>(full.begin(), full.begin() + l));
      auto result = lemma4_check(system, admissibility, j, prefix);
      ++sweep.checks;
      if (!result.holds) {
        sweep.all_hold = false;
        sweep.violations.push_back(std::move(result.detail));
      }
    }
  }
  return sweep;
}

/// s <= n and q <= n! for an admissible lattice.
inline bool lemma5_check(const FamilySystem& system, const AdmissibilityReport& admissibility) {
  require(admissibility.admissible, "lemma5_check: the octahedron must be admissible");
  const std::size_t n = system.lattice.n();
  Integer factorial;
  mpz_fac_ui(factorial.get_mpz_t(), n);
  return system.size() <= n && system.lattice.q() <= factorial;
}

inline bool lemma5_check(const FamilySystem& system, const Guards& guards = {}) {
  return lemma5_check(system, is_admissible(system.lattice, false, guards));
}

}  // namespace octadefect
