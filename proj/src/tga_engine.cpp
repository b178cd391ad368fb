#include "greedylab/tga_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "chebyshev_solver.hpp"
#include "greedylab/errors.hpp"
#include "greedylab/subsets.hpp"

namespace greedylab {

GreedyOrdering greedy_ordering(const CoefVector& x) {
  GreedyOrdering g;
  g.pi.resize(x.size());
  std::iota(g.pi.begin(), g.pi.end(), std::size_t{0});
  std::stable_sort(g.pi.begin(), g.pi.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(x[a]) > std::abs(x[b]); });
  for (std::size_t j = 0; j + 1 < g.pi.size(); ++j) {
    const double a = std::abs(x[g.pi[j]]);
    if (a != 0.0 && a == std::abs(x[g.pi[j + 1]])) g.tie_events.emplace_back(g.pi[j], g.pi[j + 1]);
  }
  return g;
}

bool in_xd(const CoefVector& x) { return greedy_ordering(x).tie_events.empty(); }

GreedySum greedy_sum(const CoefVector& x, std::size_t m) {
  if (m > x.size()) throw InvalidInput("greedy_sum: m exceeds dimension");
  const auto g = greedy_ordering(x);
  std::vector<std::size_t> first(g.pi.begin(), g.pi.begin() + static_cast<std::ptrdiff_t>(m));
  IndexSet set = IndexSet::from_unsorted(std::move(first));
  return {project(x, set), std::move(set)};
}

bool is_greedy_set(const CoefVector& x, const IndexSet& a) {
  if (!a.empty() && a.back() >= x.size()) throw InvalidInput("is_greedy_set: index out of range");
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (a.contains(i))
      lo = std::min(lo, std::abs(x[i]));
    else
      hi = std::max(hi, std::abs(x[i]));
  }
  return lo >= hi;
}

std::vector<IndexSet> greedy_sets(const CoefVector& x, std::size_t m, std::size_t cap) {
  if (m > x.size()) throw InvalidInput("greedy_sets: m exceeds dimension");
  if (m == 0 || cap == 0) return cap == 0 ? std::vector<IndexSet>{} : std::vector<IndexSet>{IndexSet{}};
  const auto g = greedy_ordering(x);
  const double t = std::abs(x[g.pi[m - 1]]);
  std::vector<std::size_t> strict, tied;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double a = std::abs(x[i]);
    if (a > t)
      strict.push_back(i);
    else if (a == t)
      tied.push_back(i);
  }
  std::vector<IndexSet> out;
  for (auto& pick : combinations(tied, m - strict.size(), cap)) {
    pick.insert(pick.end(), strict.begin(), strict.end());
    out.push_back(IndexSet::from_unsorted(std::move(pick)));
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct Candidate {
  double value = 0.0;
  std::vector<double> coefficients;
  std::size_t iterations = 0;
  bool analytic = true;
};

// Best residual over coefficients supported on `positions`; never worse
// than the plain projection on the same positions.
Candidate evaluate_support(const SpaceSpec& space, std::span<const double> x,
                           const std::vector<std::size_t>& positions, double tol) {
  Candidate c;
  std::vector<double> r(x.begin(), x.end());
  for (auto p : positions) r[p] = 0.0;
  const double projected = norm_of(space, r);
  c.coefficients.reserve(positions.size());
  for (auto p : positions) c.coefficients.push_back(x[p]);
  c.value = projected;
  if (space.separable() || projected == 0.0) return c;

  auto solved = detail::solve_coefficients(space, x, positions, tol);
  for (std::size_t i = 0; i < positions.size(); ++i) r[positions[i]] = x[positions[i]] - solved.coefficients[i];
  const double value = norm_of(space, r);
  c.iterations = solved.iterations;
  c.analytic = false;
  if (value < projected) {
    c.value = value;
    c.coefficients = std::move(solved.coefficients);
  }
  return c;
}

OracleResult make_result(std::size_t m, Candidate c, std::vector<std::size_t> set) {
  OracleResult r;
  r.m = m;
  r.value = c.value;
  r.witness_set = IndexSet(std::move(set));
  r.witness_coefficients = std::move(c.coefficients);
  r.solver_iters = c.iterations;
  return r;
}

// Per-size argmin over the enumeration, then prefix minimum over sizes
// 0..k; the first (shortlex) candidate wins ties.
std::vector<OracleResult> profile_from(const SubsetEnumerator& e, std::size_t m_max,
                                       const std::vector<Candidate>& values) {
  const std::size_t top = m_max;
  std::vector<std::size_t> best_rank(top + 1, 0);
  std::vector<bool> seen(top + 1, false);
  for (std::size_t r = 0; r < e.count(); ++r) {
    const std::size_t s = e.size_at(r);
    if (!seen[s] || values[r].value < values[best_rank[s]].value) {
      best_rank[s] = r;
      seen[s] = true;
    }
  }
  std::vector<OracleResult> out;
  std::size_t running = best_rank[0];
  std::size_t iters = 0;
  std::vector<std::size_t> set;
  for (std::size_t k = 0; k <= top; ++k) {
    if (seen[k] && values[best_rank[k]].value < values[running].value) running = best_rank[k];
    e.at(running, set);
    out.push_back(make_result(k, values[running], set));
  }
  for (std::size_t r = 0; r < e.count(); ++r) iters += values[r].iterations;
  for (auto& o : out) o.solver_iters = iters;
  return out;
}

void require_tol(double tol) {
  if (!(tol > 0.0)) throw InvalidInput("chebyshev_sum: tol must be positive");
}

}  // namespace

ChebyshevResult chebyshev_sum(const SpaceSpec& space, const CoefVector& x, const IndexSet& a, double tol) {
  require_tol(tol);
  if (!a.empty() && a.back() >= x.size()) throw InvalidInput("chebyshev_sum: index out of range");
  auto c = evaluate_support(space, x.values(), a.indices(), tol);
  ChebyshevResult r;
  r.set = a;
  r.coefficients = std::move(c.coefficients);
  r.residual = c.value;
  r.iterations = c.iterations;
  r.analytic = c.analytic;
  return r;
}

nlohmann::json OracleResult::to_json() const {
  return {{"m", m},
          {"value", value},
          {"witness_set", witness_set.indices()},
          {"witness_coefficients", witness_coefficients},
          {"solver_iters", solver_iters}};
}

std::vector<OracleResult> sigma_profile(const SpaceSpec& space, const CoefVector& x, std::size_t m_max,
                                        Backend backend) {
  const auto supp = x.support();
  const std::size_t n = x.size();
  // Beyond |supp| - 1 the answer is 0 with supp itself as witness.
  const std::size_t enum_top = std::min(m_max, supp.empty() ? std::size_t{0} : supp.size() - 1);
  std::vector<std::size_t> universe;
  if (space.separable()) {
    universe = supp;
  } else {
    universe.resize(n);
    std::iota(universe.begin(), universe.end(), std::size_t{0});
  }
  if (enum_top > 0) {
    if (n > kSigmaMaxDim)
      throw CapacityError("sigma_m_oracle: dimension " + std::to_string(n) + " exceeds " +
                          std::to_string(kSigmaMaxDim) + "; use best_projection_error instead");
    if (count_subsets_up_to(universe.size(), enum_top) > kSigmaMaxSets)
      throw CapacityError("sigma_m_oracle: more than " + std::to_string(kSigmaMaxSets) +
                          " candidate supports; use best_projection_error instead");
  }
  SubsetEnumerator e(universe, enum_top);
  const auto xs = x.values();
  auto values = kernels::map<Candidate>(e.count(), [&](std::size_t r) {
    std::vector<std::size_t> set;
    e.at(r, set);
    return evaluate_support(space, xs, set, 1e-10);
  }, backend);
  auto out = profile_from(e, enum_top, values);
  for (std::size_t k = enum_top + 1; k <= m_max; ++k) {
    Candidate exact;
    exact.value = 0.0;
    for (auto p : supp) exact.coefficients.push_back(x[p]);
    auto r = make_result(k, std::move(exact), supp);
    r.solver_iters = out.front().solver_iters;
    out.push_back(std::move(r));
  }
  return out;
}

OracleResult sigma_m_oracle(const SpaceSpec& space, const CoefVector& x, std::size_t m, Backend backend) {
  return sigma_profile(space, x, m, backend).back();
}

std::vector<OracleResult> best_projection_profile(const SpaceSpec& space, const CoefVector& x, std::size_t m_max,
                                                  Backend backend) {
  if (x.size() > kProjectionMaxDim)
    throw CapacityError("best_projection_error: dimension " + std::to_string(x.size()) + " exceeds " +
                        std::to_string(kProjectionMaxDim));
  const auto supp = x.support();
  const std::size_t enum_top = std::min(m_max, supp.size());
  SubsetEnumerator e(supp, enum_top);
  const auto xs = x.values();
  auto values = kernels::map<Candidate>(e.count(), [&](std::size_t r) {
    std::vector<std::size_t> set;
    e.at(r, set);
    Candidate c;
    std::vector<double> rest(xs.begin(), xs.end());
    for (auto p : set) {
      rest[p] = 0.0;
      c.coefficients.push_back(xs[p]);
    }
    c.value = norm_of(space, rest);
    return c;
  }, backend);
  auto out = profile_from(e, enum_top, values);
  for (std::size_t k = enum_top + 1; k <= m_max; ++k) {
    auto r = out.back();
    r.m = k;
    out.push_back(std::move(r));
  }
  return out;
}

OracleResult best_projection_error(const SpaceSpec& space, const CoefVector& x, std::size_t m, Backend backend) {
  return best_projection_profile(space, x, m, backend).back();
}

std::size_t oversampled_size(std::size_t m, double lambda) {
  if (!(lambda > 1.0) || !std::isfinite(lambda)) throw InvalidInput("oversampling: lambda must exceed 1");
  const long double v = static_cast<long double>(lambda) * static_cast<long double>(m);
  // Guard against 1.5 * 2 landing a hair above 3.
  return static_cast<std::size_t>(std::ceil(v - 1e-12L));
}

OversampleResult oversampled_greedy_error(const SpaceSpec& space, const CoefVector& x, std::size_t m, double lambda,
                                          Backend backend) {
  const std::size_t size = oversampled_size(m, lambda);
  if (size > x.size()) throw InvalidInput("oversampling: ceil(lambda m) exceeds dimension");
  OversampleResult r;
  r.set_size = size;
  r.greedy_set = greedy_sum(x, size).set;
  r.numerator = projection_residual(space, x.values(), r.greedy_set);
  r.sigma = sigma_m_oracle(space, x, m, backend);
  if (r.numerator == 0.0) {
    r.ratio = 0.0;
  } else if (r.sigma.value == 0.0) {
    r.infinite = true;
    r.ratio = std::numeric_limits<double>::infinity();
  } else {
    r.ratio = r.numerator / r.sigma.value;
  }
  return r;
}

}  // namespace greedylab
