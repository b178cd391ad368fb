#include "greedylab/subsets.hpp"

#include <limits>

#include "greedylab/errors.hpp"

namespace greedylab {

std::uint64_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  unsigned __int128 r = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > kMax) return kMax;
  }
  return static_cast<std::uint64_t>(r);
}

std::uint64_t count_subsets_up_to(std::size_t n, std::size_t k) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t total = 0;
  for (std::size_t s = 0; s <= std::min(n, k); ++s) {
    const auto b = binomial(n, s);
    if (b > kMax - total) return kMax;
    total += b;
  }
  return total;
}

SubsetEnumerator::SubsetEnumerator(std::vector<std::size_t> universe, std::size_t max_size)
    : universe_(std::move(universe)) {
  const std::size_t u = universe_.size();
  const std::size_t top = std::min(u, max_size);
  if (count_subsets_up_to(u, top) > (std::uint64_t{1} << 40))
    throw CapacityError("SubsetEnumerator: too many subsets");
  offsets_.push_back(0);
  for (std::size_t s = 0; s <= top; ++s) offsets_.push_back(offsets_.back() + binomial(u, s));
}

std::size_t SubsetEnumerator::size_at(std::size_t rank) const {
  std::size_t s = 0;
  while (offsets_[s + 1] <= rank) ++s;
  return s;
}

void SubsetEnumerator::at(std::size_t rank, std::vector<std::size_t>& out) const {
  out.clear();
  const std::size_t s = size_at(rank);
  std::size_t c = rank - offsets_[s];
  const std::size_t u = universe_.size();
  std::size_t next = 0;
  for (std::size_t remaining = s; remaining > 0; --remaining) {
    for (std::size_t e = next; e < u; ++e) {
      const auto with_e = binomial(u - e - 1, remaining - 1);
      if (c < with_e) {
        out.push_back(universe_[e]);
        next = e + 1;
        break;
      }
      c -= with_e;
    }
  }
}

IndexSet SubsetEnumerator::at(std::size_t rank) const {
  std::vector<std::size_t> out;
  at(rank, out);
  return IndexSet::from_unsorted(std::move(out));
}

std::vector<std::vector<std::size_t>> combinations(const std::vector<std::size_t>& pool, std::size_t k,
                                                   std::size_t cap) {
  std::vector<std::vector<std::size_t>> out;
  if (k > pool.size() || cap == 0) return out;
  std::vector<std::size_t> pick(k);
  for (std::size_t i = 0; i < k; ++i) pick[i] = i;
  while (true) {
    std::vector<std::size_t> c(k);
    for (std::size_t i = 0; i < k; ++i) c[i] = pool[pick[i]];
    out.push_back(std::move(c));
    if (out.size() >= cap) break;
    std::size_t i = k;
    while (i > 0 && pick[i - 1] == pool.size() - k + i - 1) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
  return out;
}

}  // namespace greedylab
