#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "json.hpp"
#include "greedylab/core_spaces.hpp"
#include "greedylab/parallel.hpp"

namespace greedylab {

/// Permutation listing positions by non-increasing modulus; equal moduli
/// keep lower positions first.
struct GreedyOrdering {
  std::vector<std::size_t> pi;
  /// Consecutive entries of pi sharing the same nonzero modulus.
  std::vector<std::pair<std::size_t, std::size_t>> tie_events;
};

GreedyOrdering greedy_ordering(const CoefVector& x);

/// True when the nonzero coefficient moduli are pairwise distinct.
bool in_xd(const CoefVector& x);

struct GreedySum {
  CoefVector sum;
  IndexSet set;
};

/// P_G(x) for the greedy set G made of the first m entries of the ordering.
GreedySum greedy_sum(const CoefVector& x, std::size_t m);

/// min_{i in A} |x_i| >= max_{i not in A} |x_i|.
bool is_greedy_set(const CoefVector& x, const IndexSet& a);

/// Every greedy set of cardinality m: the strictly-above-threshold
/// positions plus each choice from the tied group, lexicographic, at most
/// `cap` of them. The first entry is always greedy_sum(x, m).set.
std::vector<IndexSet> greedy_sets(const CoefVector& x, std::size_t m, std::size_t cap);

struct ChebyshevResult {
  IndexSet set;
  std::vector<double> coefficients;  // aligned with set
  double residual = 0.0;             // ||x - sum_{i in A} a_i e_i||
  std::size_t iterations = 0;        // Newton iterations of the inner solver
  bool analytic = false;
};

/// Best coefficients supported on A. Coordinate-separable norms are solved
/// in closed form (a_i = x_i); KT blocks go through a log-barrier
/// interior-point solve of the epigraph problem, and direct sums split into
/// independent per-factor problems. The residual never exceeds the
/// projection residual ||x - P_A(x)||.
ChebyshevResult chebyshev_sum(const SpaceSpec& space, const CoefVector& x, const IndexSet& a, double tol = 1e-10);

struct OracleResult {
  std::size_t m = 0;
  double value = 0.0;
  IndexSet witness_set;
  std::vector<double> witness_coefficients;  // aligned with witness_set
  std::size_t solver_iters = 0;

  nlohmann::json to_json() const;
};

/// Largest ambient dimension accepted by sigma_m_oracle.
inline constexpr std::size_t kSigmaMaxDim = 16;
/// Largest number of candidate supports sigma_m_oracle may enumerate
/// (all subsets of size <= 5 of a 16-element set).
inline constexpr std::uint64_t kSigmaMaxSets = 6885;
/// Largest ambient dimension accepted by best_projection_error.
inline constexpr std::size_t kProjectionMaxDim = 20;

/// sigma_m(x) by enumerating every support B with |B| <= m over the whole
/// ambient range (only supp(x) for separable norms, where off-support
/// coordinates cannot help). Ties keep the first B in shortlex order.
OracleResult sigma_m_oracle(const SpaceSpec& space, const CoefVector& x, std::size_t m,
                            Backend backend = kDefaultBackend);

/// sigma_k(x) for k = 0..m_max from a single enumeration.
std::vector<OracleResult> sigma_profile(const SpaceSpec& space, const CoefVector& x, std::size_t m_max,
                                        Backend backend = kDefaultBackend);

/// min_{|B| <= m} ||x - P_B(x)|| and its shortlex-first minimiser.
OracleResult best_projection_error(const SpaceSpec& space, const CoefVector& x, std::size_t m,
                                   Backend backend = kDefaultBackend);

std::vector<OracleResult> best_projection_profile(const SpaceSpec& space, const CoefVector& x, std::size_t m_max,
                                                  Backend backend = kDefaultBackend);

struct OversampleResult {
  double ratio = 0.0;
  bool infinite = false;
  double numerator = 0.0;
  std::size_t set_size = 0;
  IndexSet greedy_set;
  OracleResult sigma;
};

/// ||x - P_A(x)|| / sigma_m(x) with A the greedy set of size ceil(lambda m).
OversampleResult oversampled_greedy_error(const SpaceSpec& space, const CoefVector& x, std::size_t m, double lambda,
                                          Backend backend = kDefaultBackend);

std::size_t oversampled_size(std::size_t m, double lambda);

}  // namespace greedylab
