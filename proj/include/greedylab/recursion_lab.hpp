#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "greedylab/parallel.hpp"

namespace greedylab {

/// a_1 = A, a_m = max(0, (1 - 2/m^alpha) a_{m-1} + A/m^(2 alpha)).
/// Entry k holds a_{k+1}; the recursion runs in long double.
std::vector<double> extremal_sequence(double A, double alpha, std::size_t m_max);

/// A violation needs a_m > (A/m^alpha)(1 + kBoundSlack).
inline constexpr double kBoundSlack = 1e-12;

struct PowerBoundCheck {
  bool holds = true;
  std::optional<std::size_t> first_violation;  // 1-based m
  double max_ratio = 0.0;                      // max a_m m^alpha / A
};

/// seq[k] is a_{k+1}.
PowerBoundCheck check_power_bound(std::span<const double> seq, double A, double alpha);

/// Smallest m >= 1 with 2/m^alpha <= 1, past which the recursion factor is
/// nonnegative and the clamp never engages.
std::size_t clamp_free_start(double alpha);

struct AlphaRow {
  double alpha = 0.0;
  PowerBoundCheck check;
  std::size_t m_max = 0;
  /// alpha > 1 but no violation up to m_max.
  bool m_max_insufficient = false;
};

std::vector<AlphaRow> alpha_sweep(double A, const std::vector<double>& alphas, std::size_t m_max,
                                  Backend backend = kDefaultBackend);

/// Columns alpha, holds, first_violation, max_ratio, m_max.
void write_sweep_csv(std::ostream& os, const std::vector<AlphaRow>& rows);

}  // namespace greedylab
