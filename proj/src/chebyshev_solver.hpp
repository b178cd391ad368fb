#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "greedylab/core_spaces.hpp"

namespace greedylab::detail {

struct CoefficientSolve {
  std::vector<double> coefficients;  // aligned with positions
  std::size_t iterations = 0;
};

inline constexpr std::size_t kMaxNewtonIterations = 10000;

/// Minimises ||x - sum_{i in positions} a_i e_i|| over the a_i.
CoefficientSolve solve_coefficients(const SpaceSpec& space, std::span<const double> x,
                                    const std::vector<std::size_t>& positions, double tol);

/// Log-barrier solve for the KT norm max(||r||_2, max_k |sum_{j<=k} r_j/sqrt(j)|).
CoefficientSolve solve_kt(std::span<const double> x, const std::vector<std::size_t>& positions, double tol);

}  // namespace greedylab::detail
