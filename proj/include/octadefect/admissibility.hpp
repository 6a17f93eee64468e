#pragma once

// Admissibility of the unit L1 octahedron with respect to Λ.

#include <optional>
#include <utility>

#include "octadefect/lattice.hpp"

namespace octadefect {

struct ShortestCoset {
  Rational norm;         ///< L1 norm of the shortest representative
  CosetElement witness;  ///< lexicographically least coset attaining it
};

struct AdmissibilityReport {
  bool admissible = true;
  bool strict = false;
  std::optional<ShortestCoset> shortest;  ///< absent when Λ = Z^n
};

/// Minimum L1 norm over non-integer points of Λ. A coset with numerators r_i
/// has shortest representative norm Σ min(r_i, q - r_i) / q.
inline std::optional<ShortestCoset> min_noninteger_l1(const RationalLattice& lattice,
                                                      const Guards& guards = {}) {
  std::optional<std::int64_t> best_sum;
  CosetElement best;
  for_each_coset(lattice, guards, [&](const CosetElement& c) {
    if (c.is_identity()) return true;
    std::int64_t sum = 0;
    for (std::int64_t r : c.numerators) sum += std::min(r, c.q - r);
    if (!best_sum || sum < *best_sum || (sum == *best_sum && c < best)) {
      best_sum = sum;
      best = c;
    }
    return true;
  });
  if (!best_sum) return std::nullopt;
  return ShortestCoset{
      detail::as_rational(Integer(static_cast<long>(*best_sum)), Integer(static_cast<long>(best.q))),
      std::move(best)};
}

/// Default: the open octahedron holds no non-integer point (min norm >= 1).
/// strict: every non-integer point has norm > 1.
inline AdmissibilityReport is_admissible(const RationalLattice& lattice, bool strict = false,
                                         const Guards& guards = {}) {
  AdmissibilityReport report;
  report.strict = strict;
  report.shortest = min_noninteger_l1(lattice, guards);
  if (report.shortest)
    report.admissible = strict ? report.shortest->norm > 1 : report.shortest->norm >= 1;
  return report;
}

}  // namespace octadefect
