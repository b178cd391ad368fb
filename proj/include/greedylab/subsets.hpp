#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "greedylab/core_spaces.hpp"

namespace greedylab {

/// Binomial coefficient, saturating at UINT64_MAX.
std::uint64_t binomial(std::size_t n, std::size_t k);

/// Number of subsets of an n-element set with at most k elements.
std::uint64_t count_subsets_up_to(std::size_t n, std::size_t k);

/// Random-access enumeration of the subsets of `universe` with at most
/// `max_size` elements, in shortlex order (by size, then lexicographic).
class SubsetEnumerator {
 public:
  SubsetEnumerator(std::vector<std::size_t> universe, std::size_t max_size);

  std::size_t count() const { return offsets_.back(); }
  IndexSet at(std::size_t rank) const;
  /// Writes the subset into `out` (cleared first) without validation.
  void at(std::size_t rank, std::vector<std::size_t>& out) const;
  std::size_t size_at(std::size_t rank) const;

 private:
  std::vector<std::size_t> universe_;
  std::vector<std::size_t> offsets_;  // offsets_[s] = first rank of size s
};

/// All combinations of `k` elements from `pool`, lexicographic, stopping
/// after `cap` results.
std::vector<std::vector<std::size_t>> combinations(const std::vector<std::size_t>& pool, std::size_t k,
                                                   std::size_t cap);

}  // namespace greedylab
