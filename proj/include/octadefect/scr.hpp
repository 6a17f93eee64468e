#pragma once

// Systems of common representatives (hitting sets) over {0..n-1}.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "octadefect/errors.hpp"
#include "octadefect/index_set.hpp"

namespace octadefect {

struct ScrGuards {
  std::size_t max_universe = 20;
  std::size_t max_sets = 15;
};

class SCRInstance {
 public:
  SCRInstance(std::size_t universe_size, std::vector<IndexSet> sets)
      : universe_size_(universe_size), sets_(std::move(sets)) {
    require(!sets_.empty(), "SCR instance needs at least one set");
    for (const auto& s : sets_) {
      require(!s.empty(), "SCR instance cannot contain an empty set");
      require(s.items().back() < universe_size_, "SCR set " + s.to_string() +
                                                     " exceeds the universe");
    }
  }

  std::size_t universe_size() const noexcept { return universe_size_; }
  const std::vector<IndexSet>& sets() const noexcept { return sets_; }

  /// Smallest member size.
  std::size_t min_set_size() const {
    std::size_t k = sets_.front().size();
    for (const auto& s : sets_) k = std::min(k, s.size());
    return k;
  }

  bool is_hit_by(const IndexSet& candidate) const {
    return std::all_of(sets_.begin(), sets_.end(), [&](const IndexSet& s) {
      return std::any_of(s.begin(), s.end(), [&](std::size_t e) { return candidate.contains(e); });
    });
  }

 private:
  std::size_t universe_size_;
  std::vector<IndexSet> sets_;
};

/// Greedy hitting set: repeatedly take the element lying in the most sets not
/// yet hit, smallest index on ties. Elements come back in pick order.
inline std::vector<std::size_t> greedy_scr_picks(const SCRInstance& inst) {
  const auto& sets = inst.sets();
  std::vector<bool> hit(sets.size(), false);
  std::size_t remaining = sets.size();
  std::vector<std::size_t> picks;
  while (remaining > 0) {
    std::vector<std::size_t> coverage(inst.universe_size(), 0);
    for (std::size_t i = 0; i < sets.size(); ++i)
      if (!hit[i])
        for (std::size_t e : sets[i]) ++coverage[e];
    const auto best = static_cast<std::size_t>(
        std::max_element(coverage.begin(), coverage.end()) - coverage.begin());
    picks.push_back(best);
    for (std::size_t i = 0; i < sets.size(); ++i)
      if (!hit[i] && sets[i].contains(best)) {
        hit[i] = true;
        --remaining;
      }
  }
  return picks;
}

inline IndexSet greedy_scr(const SCRInstance& inst) {
  return IndexSet(greedy_scr_picks(inst));
}

/// Minimum hitting set by exhaustive search: sizes ascending, lexicographic
/// within a size. Only elements occurring in some set are candidates, which
/// does not change the first minimum found.
inline IndexSet optimal_scr(const SCRInstance& inst, const ScrGuards& guards = {}) {
  require(guards.max_universe <= 64, "optimal_scr: universe guard above 64 is not supported");
  if (inst.universe_size() > guards.max_universe || inst.sets().size() > guards.max_sets)
    fail(ErrorKind::guard_exceeded, "optimal_scr: instance exceeds guard (n <= " +
                                        std::to_string(guards.max_universe) + ", t <= " +
                                        std::to_string(guards.max_sets) + ")");
  IndexSet support;
  for (const auto& s : inst.sets()) support = support.united(s);
  std::vector<std::uint64_t> masks;
  for (const auto& s : inst.sets()) {
    std::uint64_t mask = 0;
    for (std::size_t e : s) mask |= std::uint64_t{1} << e;
    masks.push_back(mask);
  }
  for (std::size_t k = 1; k <= support.size(); ++k) {
    std::optional<IndexSet> found;
    for_each_subset(support.size(), k, [&](const IndexSet& positions) {
      std::uint64_t chosen = 0;
      for (std::size_t pos : positions) chosen |= std::uint64_t{1} << support[pos];
      for (std::uint64_t mask : masks)
        if ((mask & chosen) == 0) return false;
      std::vector<std::size_t> elements;
      for (std::size_t pos : positions) elements.push_back(support[pos]);
      found = IndexSet(std::move(elements));
      return true;
    });
    if (found) return *found;
  }
  ensure(false, "optimal_scr: the full support must hit every set");
  return {};
}

/// c · (n/k) · max{1, ln(t·k/n)}
inline double theorem5_bound(std::size_t n, std::size_t k, std::size_t t, double c) {
  require(k >= 1 && t >= 1 && n >= 1, "theorem5_bound: needs n, k, t >= 1");
  const double nd = static_cast<double>(n), kd = static_cast<double>(k),
               td = static_cast<double>(t);
  return c * (nd / kd) * std::max(1.0, std::log(td * kd / nd));
}

}  // namespace octadefect
