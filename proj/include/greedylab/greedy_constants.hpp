#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "greedylab/core_spaces.hpp"
#include "greedylab/parallel.hpp"

namespace greedylab {

enum class ConstantKind { K, DeltaD, DeltaS, Cqg, Cg, Cal, Csg, Clambda };

std::string to_string(ConstantKind k);
ConstantKind constant_kind_from_string(const std::string& s);

enum class SampleLaw { uniform, geometric, structured, mixed, alternating };
enum class SampleMode { automatic, exhaustive, sampled };

std::string to_string(SampleLaw law);
std::string to_string(SampleMode mode);
SampleLaw sample_law_from_string(const std::string& s);
SampleMode sample_mode_from_string(const std::string& s);

/// Largest n for which subset and sign families are enumerated in full.
inline constexpr std::size_t kExhaustiveMaxDim = 12;
/// Alternative greedy sets examined per sample at tied thresholds.
inline constexpr std::size_t kTieCap = 10000;

struct SampleConfig {
  std::size_t n = 8;
  std::size_t samples = 100;
  std::uint64_t seed = 0;
  SampleLaw law = SampleLaw::mixed;
  SampleMode mode = SampleMode::automatic;
  Backend backend = kDefaultBackend;

  void validate() const;
  /// Resolves `automatic`; throws for `exhaustive` when n is too large.
  bool exhaustive() const;
};

/// Sample `index` of the family described by cfg. The structured law
/// cycles through alternating +-1/sqrt(j), flat signed indicators, the
/// ((t^2+1)/t^2) 1_A + 1_B discontinuity pairs, the l2 non-linearity
/// vectors and two-level tied vectors; `mixed` adds uniform,
/// permuted geometric and near-tied vectors.
CoefVector draw_sample(const SampleConfig& cfg, std::size_t index);
std::vector<CoefVector> draw_samples(const SampleConfig& cfg);

/// x_j = (-1)^(j+1) / sqrt(j), j = 1..n (position j-1).
CoefVector alternating_vector(std::size_t n);

struct Witness {
  std::size_t n = 0;
  std::vector<double> x;           // empty for indicator-only constants
  std::vector<IndexSet> sets;      // A, then B when two sets are involved
  std::vector<std::vector<int>> signs;  // eps on A, eta on B
  std::size_t m = 0;               // the C_lambda target size
};

struct ConstantEstimate {
  ConstantKind kind = ConstantKind::K;
  double lambda = 0.0;  // C_lambda only
  double value = 0.0;
  Witness witness;
  std::string method;   // "exhaustive" | "sampled"
  std::size_t sample_count = 0;
  std::size_t evaluations = 0;

  nlohmann::json to_json() const;
  static ConstantEstimate from_json(const nlohmann::json& j);
};

/// Recomputes the ratio described by the stored witness.
double replay_ratio(const SpaceSpec& space, const ConstantEstimate& e);

// ---------------------------------------------------------------------------
// Per-sample greedy ratios.

struct GreedyEntry {
  IndexSet set;
  double projection_residual = 0.0;  // ||x - P_A x||
  double chebyshev_residual = 0.0;   // min over coefficients on A
  double quasi = 0.0;                // / ||x||
  double almost = 0.0;               // / best projection error at |A|
  double greedy = 0.0;               // / sigma_|A|
  double semi = 0.0;                 // chebyshev / sigma_|A|
};

struct RowOptions {
  bool projection = true;   // best projection errors (n <= 20)
  bool sigma = true;        // sigma_m oracle (n <= 16)
  bool canonical_only = false;  // skip alternative greedy sets at ties
  std::size_t tie_cap = kTieCap;
};

/// Ratios for every greedy set A with |A| < |supp(x)|. Entries whose
/// oracle is disabled hold NaN. 0/0 never occurs since the denominators
/// vanish only for |A| >= |supp(x)|.
struct SampleRow {
  CoefVector x = CoefVector::zeros(1);
  double norm = 0.0;
  std::vector<double> best_projection;  // index k = |B| bound
  std::vector<double> sigma;
  std::vector<GreedyEntry> entries;
  bool tie_capped = false;
};

SampleRow evaluate_sample(const SpaceSpec& space, const CoefVector& x, const RowOptions& opts);

std::vector<SampleRow> evaluate_samples(const SpaceSpec& space, const SampleConfig& cfg, const RowOptions& opts);

struct GreedyFamily {
  ConstantEstimate quasi;
  ConstantEstimate almost;
  ConstantEstimate greedy;
  ConstantEstimate semi;
  std::size_t chain_checks = 0;
  std::size_t chain_violations = 0;
};

/// Max-reduces rows in order; disabled oracles leave their estimate at 0.
/// chain_checks counts the comparisons quasi <= almost and almost <= greedy.
GreedyFamily summarize_rows(const std::vector<SampleRow>& rows, bool exhaustive);

/// C_qg, C_al, C_g and C_sg from a single pass over the samples.
GreedyFamily greedy_family_estimates(const SpaceSpec& space, const SampleConfig& cfg);

ConstantEstimate quasi_greedy_estimate(const SpaceSpec& space, const SampleConfig& cfg);
ConstantEstimate almost_greedy_estimate(const SpaceSpec& space, const SampleConfig& cfg);
ConstantEstimate greedy_estimate(const SpaceSpec& space, const SampleConfig& cfg);
ConstantEstimate semi_greedy_estimate(const SpaceSpec& space, const SampleConfig& cfg);

/// sup ||x - P_B x|| / ||x|| over B subset of supp(x). The families are
/// closed under complement, so the same value bounds sup ||P_B x|| / ||x||.
ConstantEstimate unconditionality_estimate(const SpaceSpec& space, const SampleConfig& cfg);

/// ||P_B x|| / ||x|| for a fixed B.
double projection_ratio(const SpaceSpec& space, const CoefVector& x, const IndexSet& b);

struct DemocracyProfile {
  std::vector<double> upper;  // index m; upper[0] = lower[0] = 0
  std::vector<double> lower;
  std::vector<IndexSet> upper_sets;
  std::vector<IndexSet> lower_sets;
  std::size_t sets_tested = 0;
  bool exhaustive = false;
  ConstantEstimate delta;
};

/// All subsets for n <= 20; beyond that prefixes, suffixes, even and odd
/// positions, sliding windows and seeded random sets of every size.
DemocracyProfile democracy_profile(const SpaceSpec& space, std::size_t n, std::uint64_t seed = 0,
                                   Backend backend = kDefaultBackend);

/// Same set families paired with sign patterns (all of them when
/// n <= 12, the constant, alternating and a few random ones otherwise).
/// The constant pattern is always present, so the result dominates Delta_d.
ConstantEstimate super_democracy_estimate(const SpaceSpec& space, const SampleConfig& cfg);

/// max ||x - P_A x|| / sigma_m(x) with A greedy of size ceil(lambda m).
ConstantEstimate oversampling_estimate(const SpaceSpec& space, const SampleConfig& cfg, std::size_t m,
                                       double lambda);

// ---------------------------------------------------------------------------
// X_d perturbation.

/// x_j + sign(x_j) eps^(r_j/p) on supp(x). The ranks r_j run 1, 2, ...
/// over the positions of `first` and then over the rest, each in index
/// order; with `first` empty r_j is the 1-based position.
CoefVector xd_perturb(const CoefVector& x, double eps, double p, const IndexSet& first = {});

struct XdEpsRow {
  double eps = 0.0;
  ConstantEstimate almost;   // over the perturbed images
  ConstantEstimate quasi;    // over the perturbed images
  double democracy = 0.0;    // from the (1 -+ eps^(j/p)) pairs
  double agreement = 0.0;    // unrestricted almost / restricted almost
  std::size_t images = 0;    // one per sample and greedy set G
  /// Images whose moduli stay distinct, and images for which G is still
  /// greedy, after rounding; both fall short of `images` once eps^(r/p)
  /// drops below the precision of the coefficients.
  std::size_t images_in_xd = 0;
  std::size_t greedy_preserved = 0;
  std::size_t bound_checks = 0;
  std::size_t bound_failures = 0;
  double worst_bound_slack = 0.0;  // min of (rhs - lhs) / rhs
};

struct XdReport {
  ConstantEstimate unrestricted;
  std::vector<XdEpsRow> rows;
  double p = 1.0;

  nlohmann::json to_json() const;
};

/// Almost-greedy estimate over the samples (every greedy set) against the
/// same estimate over their X_d images, one image per greedy set G built by
/// xd_perturb(x, eps, p, G) and scored with G, for each eps.
XdReport xd_comparison(const SpaceSpec& space, const SampleConfig& cfg,
                       const std::vector<double>& eps_schedule = {1e-2, 1e-3, 1e-4});

}  // namespace greedylab
