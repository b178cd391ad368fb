#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "greedylab/core_spaces.hpp"

namespace greedylab {

/// Finite set of unit-norm atoms spanning R^d. Only one representative of
/// each {g, -g} pair is stored; the sign is chosen during selection.
class Dictionary {
 public:
  /// Atoms must have Euclidean norm 1 within 1e-12 and span R^dim.
  Dictionary(std::size_t dim, std::vector<std::vector<double>> atoms);

  /// Rescales every atom to unit norm first; zero atoms are rejected.
  static Dictionary normalized(std::size_t dim, std::vector<std::vector<double>> atoms);
  static Dictionary orthonormal(std::size_t dim);
  /// Orthonormal basis from the QR factor of a seeded Gaussian matrix.
  static Dictionary rotated(std::size_t dim, std::uint64_t seed);
  static Dictionary random_unit(std::size_t count, std::size_t dim, std::uint64_t seed);
  /// Canonical basis plus the normalised neighbour sums (e_i + e_{i+1})/sqrt(2).
  static Dictionary coherent(std::size_t dim);

  /// "orthonormal:D", "rotated:D[:SEED]", "random:K:D[:SEED]", "coherent:D",
  /// or a path to a JSON dictionary file.
  static Dictionary parse(const std::string& spec);

  static Dictionary from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return atoms_.size() / dim_; }
  std::span<const double> atom(std::size_t i) const {
    return std::span<const double>(atoms_).subspan(i * dim_, dim_);
  }

 private:
  std::size_t dim_;
  std::vector<double> atoms_;  // row-major, one atom per row
};

struct AtomChoice {
  std::size_t index = 0;
  int sign = 1;
  double value = 0.0;       // <f, sign * atom> >= 0
  bool degenerate = false;  // every inner product vanished
};

/// Exhaustive argmax of <f, s*g> over stored atoms g and s in {+1,-1};
/// ties go to the lowest index, then to s = +1.
AtomChoice best_atom(const Dictionary& dict, std::span<const double> f);
AtomChoice best_atom(const Dictionary& dict, const CoefVector& f);

enum class PursuitKind { pga, rga, power_rga };
enum class StopReason { max_iterations, zero_residual };

std::string to_string(PursuitKind k);
std::string to_string(StopReason r);

struct PursuitStep {
  std::size_t m;
  std::size_t atom;
  int sign;
  /// Coefficient put on the newly selected signed atom: <R, g> for a pure
  /// step, 1/m^alpha for a relaxed step.
  double weight;
  double residual;          // Euclidean norm of f - approximant after the step
  double approximant_norm;  // Euclidean norm of the approximant after the step
};

struct PursuitTrace {
  PursuitKind algorithm = PursuitKind::pga;
  double alpha = 1.0;
  std::vector<PursuitStep> steps;
  std::vector<double> approximant;
  std::vector<double> residual;
  StopReason stop = StopReason::max_iterations;
};

/// Residual norm at or below which a run stops: the selection rule is
/// undefined for the zero functional.
inline constexpr double kZeroResidual = 1e-13;

PursuitTrace run_pga(const CoefVector& f, const Dictionary& dict, std::size_t m_max);
PursuitTrace run_rga(const CoefVector& f, const Dictionary& dict, std::size_t m_max);
PursuitTrace run_power_rga(const CoefVector& f, const Dictionary& dict, std::size_t m_max, double alpha);

struct A1Sample {
  CoefVector f;
  std::vector<std::pair<std::size_t, double>> combination;  // (atom, signed weight)
};

/// Draws f = sum a_i g_i over k distinct atoms with sum |a_i| = 1; weights
/// come from the uniform simplex (sorted-gap method), signs are fair coins.
A1Sample sample_a1(const Dictionary& dict, std::size_t k, std::uint64_t seed);

struct RateCheck {
  bool holds = true;
  double worst_margin = 0.0;  // max over m of residual * m^alpha / c
  std::optional<std::size_t> first_violation;
};

/// Checks residual[m] <= c / m^alpha along the trace.
RateCheck verify_rate(const PursuitTrace& trace, double c, double alpha);

/// Columns: m,atom,sign,weight,residual.
void write_trace_csv(std::ostream& os, const PursuitTrace& trace);

double euclidean_norm(std::span<const double> v);
double dot(std::span<const double> a, std::span<const double> b);

}  // namespace greedylab
