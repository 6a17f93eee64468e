#pragma once

// Seeded random lattices and the per-instance cross-validation record.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "octadefect/admissibility.hpp"
#include "octadefect/family_system.hpp"
#include "octadefect/lattice.hpp"
#include "octadefect/scr.hpp"
#include "octadefect/witness.hpp"

namespace octadefect {

/// Uniform entries in [0, q) for q = ∏ primes, resampled until every prime
/// leaves some entry non-divisible (so q is the least denominator).
inline RationalLattice sample_lattice(std::mt19937_64& rng, std::size_t n, std::size_t m,
                                      const std::vector<std::uint64_t>& primes) {
  require(n >= 1 && m >= 1, "sample_lattice: needs n, m >= 1");
  std::uint64_t q = 1;
  for (auto p : primes) {
    require(is_prime(Integer(static_cast<unsigned long>(p))), "sample_lattice: " +
                                                                   std::to_string(p) +
                                                                   " is not prime");
    require(q <= (std::uint64_t{1} << 62) / p, "sample_lattice: denominator too large");
    q *= p;
  }
  std::uniform_int_distribution<std::uint64_t> entry(0, q - 1);
  for (;;) {
    IntMatrix A(m, n);
    std::vector<bool> seen(primes.size(), false);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const std::uint64_t v = entry(rng);
        A(i, j) = Integer(static_cast<unsigned long>(v));
        for (std::size_t k = 0; k < primes.size(); ++k)
          if (v % primes[k] != 0) seen[k] = true;
      }
    if (std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }))
      return {Integer(static_cast<unsigned long>(q)), std::move(A)};
  }
}

struct ExperimentRecord {
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::size_t m = 0;
  Integer q;
  bool square_free = false;
  std::optional<bool> admissible;
  std::optional<Rational> min_norm;
  std::optional<std::size_t> exact_defect;
  std::optional<std::size_t> witness_size;
  std::optional<double> theorem2_value;
  std::optional<bool> det_formula_ok;
  std::optional<bool> lemma4_ok;
  std::optional<bool> lemma5_ok;
  std::size_t scr_greedy_size = 0;
  std::optional<std::size_t> scr_optimal_size;
  std::int64_t runtime_ms = 0;

  /// A theorem-guaranteed property failed on this instance.
  bool has_violation() const {
    return det_formula_ok == false || lemma4_ok == false || lemma5_ok == false ||
           (exact_defect && witness_size && *exact_defect > *witness_size);
  }
};

struct ExperimentOptions {
  Guards guards;
  ScrGuards scr_guards;
  bool timing = false;
};

/// Rank-one covering family {columns nonzero mod p_j : all j}; any witness
/// set must hit each member.
inline std::optional<SCRInstance> first_column_family(const FamilySystem& system) {
  if (system.size() == 0) return std::nullopt;
  std::vector<IndexSet> sets;
  for (std::size_t j = 0; j < system.size(); ++j) sets.push_back(extension_set(system, j, {}));
  return SCRInstance(system.lattice.n(), std::move(sets));
}

inline ExperimentRecord evaluate_instance(const RationalLattice& input, std::uint64_t seed,
                                          const ExperimentOptions& options = {}) {
  const auto start = std::chrono::steady_clock::now();
  const RationalLattice lattice = normalize(input);
  ExperimentRecord rec;
  rec.seed = seed;
  rec.n = lattice.n();
  rec.m = lattice.m();
  rec.q = lattice.q();
  rec.square_free = lattice.has_square_free_denominator();

  std::optional<AdmissibilityReport> report;
  try {
    report = is_admissible(lattice, false, options.guards);
    rec.admissible = report->admissible;
    if (report->shortest) rec.min_norm = report->shortest->norm;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::guard_exceeded) throw;
  }
  if (rec.n <= options.guards.max_defect_dim) rec.exact_defect = exact_defect(lattice, options.guards).defect;
  if (rec.m < rec.n) rec.theorem2_value = theorem2_bound(rec.n, rec.m, 1.0);

  if (rec.square_free) {
    const FamilySystem system = build_family_system(lattice);
    rec.witness_size = build_witness(lattice).bound;
    rec.det_formula_ok = check_det_formula(lattice);
    if (report && report->admissible) {
      rec.lemma4_ok = lemma4_sweep(system, *report).all_hold;
      rec.lemma5_ok = lemma5_check(system, *report);
    }
    if (auto family = first_column_family(system)) {
      rec.scr_greedy_size = greedy_scr(*family).size();
      try {
        rec.scr_optimal_size = optimal_scr(*family, options.scr_guards).size();
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::guard_exceeded) throw;
      }
    } else {
      rec.scr_optimal_size = 0;
    }
  }
  if (options.timing)
    rec.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - start)
                         .count();
  return rec;
}

inline std::string csv_header() {
  return "seed,n,m,q,square_free,admissible,min_norm,exact_defect,witness_size,theorem2_value,"
         "det_formula_ok,lemma4_ok,lemma5_ok,scr_greedy_size,scr_optimal_size,runtime_ms";
}

inline std::string to_csv_row(const ExperimentRecord& r) {
  auto flag = [](const std::optional<bool>& b) -> std::string {
    return b ? (*b ? "1" : "0") : "";
  };
  auto count = [](const std::optional<std::size_t>& c) -> std::string {
    return c ? std::to_string(*c) : "";
  };
  std::string theorem2;
  if (r.theorem2_value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", *r.theorem2_value);
    theorem2 = buf;
  }
  std::ostringstream os;
  os << r.seed << ',' << r.n << ',' << r.m << ',' << r.q.get_str() << ','
     << (r.square_free ? "1" : "0") << ',' << flag(r.admissible) << ','
     << (r.min_norm ? r.min_norm->get_str() : "") << ',' << count(r.exact_defect) << ','
     << count(r.witness_size) << ',' << theorem2 << ',' << flag(r.det_formula_ok) << ','
     << flag(r.lemma4_ok) << ',' << flag(r.lemma5_ok) << ',' << r.scr_greedy_size << ','
     << count(r.scr_optimal_size) << ',' << r.runtime_ms;
  return os.str();
}

struct ExperimentConfig {
  std::size_t n = 4;
  std::size_t m = 1;
  std::vector<std::uint64_t> primes{2, 3};
  std::size_t count = 10;
  std::uint64_t seed = 1;
  bool admissible_only = false;
  std::size_t max_rejections = 100'000;
  std::size_t jobs = 1;
  ExperimentOptions options;
};

/// Instance i is drawn from a generator seeded with seed + i; records come
/// back in instance order whatever the number of workers.
inline std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& config) {
  for (std::size_t a = 0; a < config.primes.size(); ++a)
    for (std::size_t b = a + 1; b < config.primes.size(); ++b)
      require(config.primes[a] != config.primes[b], "experiment: primes must be distinct");

  std::vector<std::optional<ExperimentRecord>> records(config.count);
  std::vector<std::optional<Error>> errors(config.count);
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    for (std::size_t i = next++; i < config.count; i = next++) {
      try {
        const std::uint64_t seed = config.seed + i;
        std::mt19937_64 rng(seed);
        for (std::size_t attempt = 0;; ++attempt) {
          if (attempt >= config.max_rejections)
            fail(ErrorKind::sampling_infeasible,
                 "no admissible lattice after " + std::to_string(config.max_rejections) +
                     " samples for instance " + std::to_string(i));
          const RationalLattice lattice = sample_lattice(rng, config.n, config.m, config.primes);
          if (config.admissible_only) {
            std::optional<AdmissibilityReport> report;
            try {
              report = is_admissible(lattice, false, config.options.guards);
            } catch (const Error& e) {
              if (e.kind() != ErrorKind::guard_exceeded) throw;
            }
            if (!report || !report->admissible) continue;
          }
          records[i] = evaluate_instance(lattice, seed, config.options);
          break;
        }
      } catch (const Error& e) {
        errors[i] = e;
      }
    }
  };

  const std::size_t workers = std::max<std::size_t>(1, std::min(config.jobs, config.count));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  std::vector<ExperimentRecord> out;
  out.reserve(config.count);
  for (std::size_t i = 0; i < config.count; ++i) {
    if (errors[i]) throw *errors[i];
    out.push_back(std::move(*records[i]));
  }
  return out;
}

}  // namespace octadefect
