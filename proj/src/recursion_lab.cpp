#include "greedylab/recursion_lab.hpp"

#include <cmath>
#include <cstdio>

#include "greedylab/errors.hpp"

namespace greedylab {

namespace {

void require_args(double A, double alpha, std::size_t m_max) {
  if (!(A > 0.0) || !std::isfinite(A)) throw InvalidInput("recursion: A must be positive");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw InvalidInput("recursion: alpha must be >= 0");
  if (m_max < 1) throw InvalidInput("recursion: m_max must be >= 1");
}

// Streams the extremal sequence, calling visit(m, a_m, m^alpha).
template <class Visit>
void run_recursion(double A, double alpha, std::size_t m_max, Visit&& visit) {
  const long double a0 = A;
  long double a = a0;
  visit(std::size_t{1}, a, 1.0L);
  for (std::size_t m = 2; m <= m_max; ++m) {
    const long double pm = std::pow(static_cast<double>(m), alpha);
    a = (1.0L - 2.0L / pm) * a + a0 / (pm * pm);
    if (a < 0.0L) a = 0.0L;
    visit(m, a, pm);
  }
}

struct BoundTracker {
  long double A;
  PowerBoundCheck out;

  void operator()(std::size_t m, long double a, long double pm) {
    const long double ratio = a * pm / A;
    if (static_cast<double>(ratio) > out.max_ratio || m == 1) out.max_ratio = static_cast<double>(ratio);
    if (ratio > 1.0L + static_cast<long double>(kBoundSlack) && out.holds) {
      out.holds = false;
      out.first_violation = m;
    }
  }
};

}  // namespace

std::vector<double> extremal_sequence(double A, double alpha, std::size_t m_max) {
  require_args(A, alpha, m_max);
  std::vector<double> seq;
  seq.reserve(m_max);
  run_recursion(A, alpha, m_max, [&](std::size_t, long double a, long double) { seq.push_back(static_cast<double>(a)); });
  return seq;
}

PowerBoundCheck check_power_bound(std::span<const double> seq, double A, double alpha) {
  if (!(A > 0.0)) throw InvalidInput("check_power_bound: A must be positive");
  BoundTracker t{A, {}};
  for (std::size_t k = 0; k < seq.size(); ++k) {
    if (!(seq[k] >= 0.0)) throw InvalidInput("check_power_bound: sequence must be nonnegative");
    t(k + 1, seq[k], std::pow(static_cast<double>(k + 1), alpha));
  }
  return t.out;
}

std::size_t clamp_free_start(double alpha) {
  if (!(alpha > 0.0)) throw InvalidInput("clamp_free_start: alpha must be positive");
  // 2/m^alpha <= 1  <=>  m >= 2^(1/alpha)
  auto m = static_cast<std::size_t>(std::ceil(std::pow(2.0, 1.0 / alpha)));
  while (m > 1 && 2.0 / std::pow(static_cast<double>(m - 1), alpha) <= 1.0) --m;
  while (2.0 / std::pow(static_cast<double>(m), alpha) > 1.0) ++m;
  return m;
}

std::vector<AlphaRow> alpha_sweep(double A, const std::vector<double>& alphas, std::size_t m_max, Backend backend) {
  if (alphas.empty()) throw InvalidInput("alpha_sweep: no alphas");
  for (double al : alphas) require_args(A, al, m_max);
  return kernels::map<AlphaRow>(
      alphas.size(),
      [&](std::size_t i) {
        AlphaRow row;
        row.alpha = alphas[i];
        row.m_max = m_max;
        BoundTracker t{A, {}};
        run_recursion(A, alphas[i], m_max, t);
        row.check = t.out;
        row.m_max_insufficient = alphas[i] > 1.0 && row.check.holds;
        return row;
      },
      backend);
}

void write_sweep_csv(std::ostream& os, const std::vector<AlphaRow>& rows) {
  os << "alpha,holds,first_violation,max_ratio,m_max\n";
  char buf[160];
  for (const auto& r : rows) {
    const std::string fv = r.check.first_violation ? std::to_string(*r.check.first_violation) : "";
    std::snprintf(buf, sizeof buf, "%.12g,%d,%s,%.12g,%zu\n", r.alpha, r.check.holds ? 1 : 0, fv.c_str(),
                  r.check.max_ratio, r.m_max);
    os << buf;
  }
}

}  // namespace greedylab
