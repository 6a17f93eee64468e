#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <iterator>
#include <ostream>
#include <string>
#include <vector>

namespace octadefect {

/// Sorted set of distinct 0-based coordinate indices.
class IndexSet {
 public:
  IndexSet() = default;
  IndexSet(std::initializer_list<std::size_t> items) : items_(items) { canonicalize(); }
  explicit IndexSet(std::vector<std::size_t> items) : items_(std::move(items)) {
    canonicalize();
  }

  /// {0, ..., n-1}
  static IndexSet all(std::size_t n) {
    IndexSet s;
    s.items_.resize(n);
    for (std::size_t i = 0; i < n; ++i) s.items_[i] = i;
    return s;
  }

  std::size_t size() const noexcept { return items_.size(); }
  bool empty() const noexcept { return items_.empty(); }
  auto begin() const noexcept { return items_.begin(); }
  auto end() const noexcept { return items_.end(); }
  std::size_t operator[](std::size_t k) const { return items_[k]; }
  const std::vector<std::size_t>& items() const noexcept { return items_; }

  bool contains(std::size_t i) const {
    return std::binary_search(items_.begin(), items_.end(), i);
  }

  void insert(std::size_t i) {
    auto it = std::lower_bound(items_.begin(), items_.end(), i);
    if (it == items_.end() || *it != i) items_.insert(it, i);
  }

  bool is_subset_of(const IndexSet& other) const {
    return std::includes(other.items_.begin(), other.items_.end(), items_.begin(),
                         items_.end());
  }

  /// Indices of {0..n-1} not in this set.
  IndexSet complement(std::size_t n) const {
    IndexSet c;
    for (std::size_t i = 0; i < n; ++i)
      if (!contains(i)) c.items_.push_back(i);
    return c;
  }

  IndexSet united(const IndexSet& other) const {
    IndexSet u;
    std::set_union(items_.begin(), items_.end(), other.items_.begin(), other.items_.end(),
                   std::back_inserter(u.items_));
    return u;
  }

  /// 1-based rendering, e.g. "{1,3}".
  std::string to_string() const {
    std::string s = "{";
    for (std::size_t k = 0; k < items_.size(); ++k) {
      if (k) s += ',';
      s += std::to_string(items_[k] + 1);
    }
    return s + "}";
  }

  friend auto operator<=>(const IndexSet&, const IndexSet&) = default;
  friend bool operator==(const IndexSet&, const IndexSet&) = default;

  friend std::ostream& operator<<(std::ostream& os, const IndexSet& s) {
    return os << s.to_string();
  }

 private:
  void canonicalize() {
    std::sort(items_.begin(), items_.end());
    items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
  }

  std::vector<std::size_t> items_;
};

/// Calls fn(subset) for every k-subset of {0..n-1} in lexicographic order,
/// stopping early when fn returns true. Returns whether it stopped early.
template <class Fn>
bool for_each_subset(std::size_t n, std::size_t k, Fn&& fn) {
  if (k > n) return false;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    if (fn(IndexSet(idx))) return true;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) return false;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace octadefect
