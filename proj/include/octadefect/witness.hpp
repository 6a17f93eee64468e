#pragma once

// Constructive upper bound on the defect: a coordinate set M that contains,
// for every prime of q, a maximal independent column set of A modulo that
// prime. Such an M lets the frame vectors outside M be completed to a basis.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "octadefect/family_system.hpp"
#include "octadefect/lattice.hpp"
#include "octadefect/scr.hpp"
#include "octadefect/squarefree.hpp"

namespace octadefect {

struct WitnessRound {
  std::size_t round = 0;                   ///< r = 1..m
  std::vector<std::size_t> active_primes;  ///< prime indices j with rank_j - |V_j| = m - r + 1
  std::vector<IndexSet> extension_sets;    ///< L_j, parallel to active_primes
  std::vector<Integer> remaining_powers;   ///< p_j^(rank_j - |V_j|) before the pick
  std::vector<std::size_t> picks;          ///< greedy SCR output in pick order
  std::vector<std::size_t> chosen;         ///< element added to V_j, parallel to active_primes
};

struct DefectWitness {
  IndexSet M;
  IndexSet M_prime;  ///< union of the SCR outputs over the rounds
  IndexSet M_star;   ///< maximal independent sets of the small primes
  std::vector<bool> large;                ///< p_j * m >= n, per prime index
  std::vector<WitnessRound> rounds;
  std::vector<IndexSet> per_prime_final;  ///< maximal independent set inside M, per prime
  RationalMatrix basis;                   ///< basis of Λ containing e_i for i outside M
  std::size_t bound = 0;                  ///< |M|
};

struct CertifyResult {
  std::optional<RationalMatrix> basis;
  std::optional<std::size_t> deficient_prime;  ///< set when the cover hypothesis fails

  bool ok() const noexcept { return basis.has_value(); }
};

/// If the columns of A in M have full rank_j modulo every prime, returns a
/// verified basis of Λ containing every e_i with i outside M.
inline CertifyResult certify(const RationalLattice& lattice, const IndexSet& M) {
  const FamilySystem system = build_family_system(lattice);
  for (std::size_t i : M) require(i < system.lattice.n(), "certify: index out of range");
  const IntMatrix restricted = system.lattice.A().select_columns(M.items());
  for (std::size_t j = 0; j < system.size(); ++j)
    if (rank_mod_p(restricted, system.primes[j]) != system.ranks[j])
      return {std::nullopt, j};

  auto basis = complete_frame_basis(system.lattice, M.complement(system.lattice.n()));
  ensure(basis.has_value(), "certify: cover hypothesis holds but the frame is not completable");
  ensure(verify_basis(system.lattice, *basis), "certify: completed basis failed verification");
  return {std::move(basis), std::nullopt};
}

/// Builds M = M' ∪ M*. Small primes (p·m < n) contribute one greedy maximal
/// independent set each to M*. Large primes are served in m rounds: a prime
/// joins at the round where its remaining rank equals m - r + 1, receives one
/// new independent column per round from a greedy SCR over the extension
/// sets, and is complete after round m.
inline DefectWitness build_witness(const RationalLattice& input) {
  const FamilySystem system = build_family_system(input);
  const std::size_t n = system.lattice.n();
  const std::size_t m = system.lattice.m();
  const std::size_t s = system.size();

  DefectWitness w;
  w.large.resize(s);
  w.per_prime_final.resize(s);
  for (std::size_t j = 0; j < s; ++j) {
    w.large[j] = system.primes[j] * Integer(static_cast<unsigned long>(m)) >=
                 Integer(static_cast<unsigned long>(n));
    if (!w.large[j]) {
      w.per_prime_final[j] = max_independent_set(system, j);
      w.M_star = w.M_star.united(w.per_prime_final[j]);
    }
  }

  for (std::size_t r = 1; r <= m; ++r) {
    WitnessRound round;
    round.round = r;
    for (std::size_t j = 0; j < s; ++j)
      if (w.large[j] && system.ranks[j] - w.per_prime_final[j].size() == m - r + 1)
        round.active_primes.push_back(j);
    if (round.active_primes.empty()) continue;

    for (std::size_t j : round.active_primes) {
      IndexSet L = extension_set(system, j, w.per_prime_final[j]);
      ensure(!L.empty(), "build_witness: empty extension set for an incomplete prime");
      round.extension_sets.push_back(std::move(L));
      Integer power;
      mpz_pow_ui(power.get_mpz_t(), system.primes[j].get_mpz_t(),
                 system.ranks[j] - w.per_prime_final[j].size());
      round.remaining_powers.push_back(std::move(power));
    }
    round.picks = greedy_scr_picks(SCRInstance(n, round.extension_sets));
    for (std::size_t a = 0; a < round.active_primes.size(); ++a) {
      const IndexSet& L = round.extension_sets[a];
      const auto it = std::find_if(round.picks.begin(), round.picks.end(),
                                   [&](std::size_t v) { return L.contains(v); });
      ensure(it != round.picks.end(), "build_witness: SCR output misses an extension set");
      round.chosen.push_back(*it);
      w.per_prime_final[round.active_primes[a]].insert(*it);
    }
    for (std::size_t v : round.picks) w.M_prime.insert(v);
    w.rounds.push_back(std::move(round));
  }

  w.M = w.M_prime.united(w.M_star);
  for (std::size_t j = 0; j < s; ++j) {
    const IndexSet& V = w.per_prime_final[j];
    ensure(V.size() == system.ranks[j], "build_witness: prime " + system.primes[j].get_str() +
                                            " did not reach its full rank");
    ensure(V.is_subset_of(w.M), "build_witness: independent set escapes M");
    ensure(extension_set(system, j, V).empty(), "build_witness: independent set is not maximal");
  }
  CertifyResult cert = certify(system.lattice, w.M);
  ensure(cert.ok(), "build_witness: constructed M does not satisfy the cover hypothesis");
  w.basis = std::move(*cert.basis);
  w.bound = w.M.size();
  return w;
}

/// C · (n·ln(m+1) / ln(n/m)) · (ln ln((n/m)^m))², or nothing when
/// ln ln((n/m)^m) <= 0.
inline std::optional<double> theorem2_bound(std::size_t n, std::size_t m, double C) {
  require(m >= 1 && m < n, "theorem2_bound: needs 1 <= m < n");
  const double ratio = static_cast<double>(n) / static_cast<double>(m);
  const double log_power = static_cast<double>(m) * std::log(ratio);
  if (log_power <= 1.0) return std::nullopt;
  const double loglog = std::log(log_power);
  return C * (static_cast<double>(n) * std::log(static_cast<double>(m) + 1.0) / std::log(ratio)) *
         loglog * loglog;
}

/// Largest set of columns of A with no nontrivial combination vanishing
/// modulo `modulus` (coefficients taken in Z/modulus). Brute force.
inline std::size_t max_ring_independent_columns(const IntMatrix& A, std::int64_t modulus,
                                                std::uint64_t guard = 10'000'000) {
  require(modulus >= 2, "modulus must be >= 2");
  const std::size_t cols = A.cols();
  for (std::size_t k = cols; k > 0; --k) {
    const bool found = for_each_subset(cols, k, [&](const IndexSet& S) {
      std::uint64_t combos = 1;
      for (std::size_t i = 0; i < k; ++i) {
        combos *= static_cast<std::uint64_t>(modulus);
        if (combos > guard) fail(ErrorKind::guard_exceeded, "ring independence search too large");
      }
      std::vector<std::int64_t> coeff(k, 0);
      for (std::uint64_t code = 1; code < combos; ++code) {
        std::uint64_t rest = code;
        for (std::size_t i = 0; i < k; ++i) {
          coeff[i] = static_cast<std::int64_t>(rest % static_cast<std::uint64_t>(modulus));
          rest /= static_cast<std::uint64_t>(modulus);
        }
        bool vanishes = true;
        for (std::size_t row = 0; row < A.rows() && vanishes; ++row) {
          Integer sum = 0;
          for (std::size_t i = 0; i < k; ++i) sum += A(row, S[i]) * Integer(static_cast<long>(coeff[i]));
          vanishes = divides(Integer(static_cast<long>(modulus)), sum);
        }
        if (vanishes) return false;
      }
      return true;
    });
    if (found) return k;
  }
  return 0;
}

struct CounterexampleReport {
  Integer p;
  RationalLattice lattice;                  ///< <Z², (1/p², 1/p²), (1/p², 1/p² + 1/p)>
  std::size_t exact_defect = 0;
  std::size_t ring_independent_size = 0;    ///< over Z/p²
  bool old_claim_refuted = false;           ///< exact_defect > ring_independent_size
  bool contains_difference = false;         ///< (0, 1/p) ∈ Λ
  ReductionCertificate reduction;
  DefectWitness corrected;                  ///< built on the square-free reduction
  bool corrected_bound_valid = false;       ///< corrected.bound >= exact_defect
};

/// Rebuilds the two-dimensional lattice on which the ring-rank version of the
/// cover bound fails, and runs the square-free pipeline on it.
inline CounterexampleReport reproduce_counterexample(const Integer& p, const Guards& guards = {}) {
  require(is_prime(p), "counterexample: p = " + p.get_str() + " is not prime");
  require(p < 1000, "counterexample: p must be below 1000");
  const Integer q = p * p;
  IntMatrix A(2, 2);
  A(0, 0) = 1;
  A(0, 1) = 1;
  A(1, 0) = 1;
  A(1, 1) = 1 + p;
  RationalLattice lattice(q, A);

  const std::size_t defect = exact_defect(lattice, guards).defect;
  const std::size_t ring = max_ring_independent_columns(A, q.get_si());
  const RationalVector difference{Rational(0), detail::as_rational(Integer(1), p)};
  ReductionCertificate reduction = squarefree_reduce(lattice, guards);
  DefectWitness corrected = build_witness(reduction.reduced);
  const bool valid = corrected.bound >= defect;
  return {p,
          std::move(lattice),
          defect,
          ring,
          defect > ring,
          contains(RationalLattice(q, A), difference),
          std::move(reduction),
          std::move(corrected),
          valid};
}

}  // namespace octadefect
