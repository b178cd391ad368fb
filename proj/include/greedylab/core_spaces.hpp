#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace greedylab {

/// Coefficients of an element with respect to the canonical coordinate
/// system of a model space. Positions are 0-based; entry i is the value of
/// the (i+1)-th coordinate functional.
class CoefVector {
 public:
  explicit CoefVector(std::vector<double> coeffs);
  static CoefVector zeros(std::size_t n);

  std::size_t size() const { return coeffs_.size(); }
  double operator[](std::size_t i) const { return coeffs_[i]; }
  std::span<const double> values() const { return coeffs_; }
  const std::vector<double>& vec() const { return coeffs_; }

  bool is_zero() const;
  std::vector<std::size_t> support() const;

  friend bool operator==(const CoefVector&, const CoefVector&) = default;

 private:
  std::vector<double> coeffs_;
};

CoefVector operator-(const CoefVector& a, const CoefVector& b);
CoefVector operator+(const CoefVector& a, const CoefVector& b);
CoefVector operator*(double t, const CoefVector& a);

/// Strictly increasing list of 0-based coordinate positions.
class IndexSet {
 public:
  IndexSet() = default;
  explicit IndexSet(std::vector<std::size_t> sorted_indices);
  /// Sorts; rejects duplicates.
  static IndexSet from_unsorted(std::vector<std::size_t> indices);
  static IndexSet range(std::size_t first, std::size_t last);  // [first, last)

  std::size_t size() const { return idx_.size(); }
  bool empty() const { return idx_.empty(); }
  bool contains(std::size_t i) const;
  std::size_t back() const { return idx_.back(); }
  const std::vector<std::size_t>& indices() const { return idx_; }
  auto begin() const { return idx_.begin(); }
  auto end() const { return idx_.end(); }

  IndexSet complement(std::size_t n) const;

  friend bool operator==(const IndexSet&, const IndexSet&) = default;
  friend auto operator<=>(const IndexSet&, const IndexSet&) = default;

 private:
  std::vector<std::size_t> idx_;
};

/// Signs in {+1,-1} attached to each member of an IndexSet.
class SignPattern {
 public:
  SignPattern(IndexSet domain, std::vector<int> signs);
  static SignPattern constant(IndexSet domain, int sign = 1);

  const IndexSet& domain() const { return domain_; }
  const std::vector<int>& signs() const { return signs_; }

 private:
  IndexSet domain_;
  std::vector<int> signs_;
};

class SpaceSpec;

struct LpSpace {
  double p;
};
struct KtSumming {};
struct C0Space {};
/// max{||left||, ||right||}; 0-based even positions feed the left factor,
/// odd positions the right one.
struct DirectSumMax {
  std::shared_ptr<const SpaceSpec> left;
  std::shared_ptr<const SpaceSpec> right;
};

/// Selects the norm or quasi-norm of a finite-dimensional model space.
class SpaceSpec {
 public:
  using Kind = std::variant<LpSpace, KtSumming, DirectSumMax, C0Space>;

  static SpaceSpec lp(double p);
  static SpaceSpec kt();
  static SpaceSpec c0();
  static SpaceSpec direct_sum(SpaceSpec left, SpaceSpec right);

  const Kind& kind() const { return kind_; }

  /// Largest q in (0,1] such that the norm is q-subadditive.
  double convexity_exponent() const;
  /// True when the norm decouples coordinatewise (every leaf is Lp or c0).
  bool separable() const;
  std::string describe() const;

  nlohmann::json to_json() const;
  static SpaceSpec from_json(const nlohmann::json& j);
  /// Accepts "lp:0.5", "kt", "c0", "dsum(kt,c0)" or a JSON object.
  static SpaceSpec parse(const std::string& text);

 private:
  explicit SpaceSpec(Kind k) : kind_(std::move(k)) {}
  Kind kind_;
};

/// Norm of a raw coefficient span (no finiteness validation).
double norm_of(const SpaceSpec& space, std::span<const double> x);

double eval_norm(const SpaceSpec& space, const CoefVector& x);

CoefVector project(const CoefVector& x, const IndexSet& a);

/// ||x - P_A(x)||, evaluated without materialising a CoefVector.
double projection_residual(const SpaceSpec& space, std::span<const double> x,
                           const IndexSet& a);

CoefVector indicator(const IndexSet& a, const SignPattern& eps, std::size_t n);
CoefVector indicator(const IndexSet& a, std::size_t n);

/// c1 = min_i ||e_i||, c2 = max_i ||e_i|| over the canonical vectors.
struct BasisConstants {
  double c1;
  double c2;
};
BasisConstants basis_constants(const SpaceSpec& space, std::size_t n);

struct AxiomReport {
  bool pass = true;
  double exponent = 1.0;
  std::size_t pairs = 0;
  std::size_t homogeneity_failures = 0;
  std::size_t subadditivity_failures = 0;
  std::size_t reverse_law_failures = 0;
  /// Most negative relative slack seen per check (>= -1e-9 means pass).
  double worst_homogeneity = 0.0;
  double worst_subadditivity = 0.0;
  double worst_reverse_law = 0.0;
};

struct SamplePair {
  CoefVector f;
  CoefVector g;
};

inline constexpr double kAxiomRelTol = 1e-9;

/// Homogeneity, q-subadditivity and the reverse triangle law on each pair.
/// `exponent` overrides q; non-positive means the space's own exponent.
AxiomReport verify_space_axioms(const SpaceSpec& space,
                                std::span<const SamplePair> samples,
                                double exponent = 0.0);

/// Splits interleaved coefficients into the left (even positions) and right
/// (odd positions) factors of a DirectSumMax space.
void split_interleaved(std::span<const double> x, std::vector<double>& left,
                       std::vector<double>& right);

}  // namespace greedylab
