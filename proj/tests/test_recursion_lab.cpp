#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "greedylab/recursion_lab.hpp"
#include "oracles.hpp"

using namespace greedylab;

TEST_CASE("extremal sequence examples") {
  const auto a = extremal_sequence(4.0, 1.0, 3);
  REQUIRE(a.size() == 3);
  CHECK(a[0] == 4.0);
  CHECK(a[1] == 1.0);
  CHECK(a[2] == doctest::Approx(7.0 / 9.0).epsilon(1e-15));

  // alpha = 0: factor -1, a_m = max(0, -a_{m-1} + A), alternating A, 0, A, ...
  const auto z = extremal_sequence(2.0, 0.0, 6);
  for (std::size_t k = 0; k < 6; ++k) CHECK(z[k] == (k % 2 == 0 ? 2.0 : 0.0));

  for (double alpha : {0.0, 0.3, 1.0, 2.5})
    for (double v : extremal_sequence(3.0, alpha, 2000)) CHECK(v >= 0.0);
}

TEST_CASE("extremal sequence agrees with a plain double recursion") {
  for (double alpha : {0.25, 0.5, 1.0, 1.5}) {
    const auto a = extremal_sequence(4.0, alpha, 5000);
    const auto b = oracle::recursion(4.0, alpha, 5000);
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-10));
  }
}

TEST_CASE("power bound") {
  auto c = check_power_bound(extremal_sequence(4.0, 1.0, 1000000), 4.0, 1.0);
  CHECK(c.holds);
  CHECK(c.max_ratio <= 1.0 + kBoundSlack);
  c = check_power_bound(extremal_sequence(4.0, 0.5, 100000), 4.0, 0.5);
  CHECK(c.holds);
  c = check_power_bound(extremal_sequence(4.0, 1.5, 100000), 4.0, 1.5);
  CHECK_FALSE(c.holds);
  REQUIRE(c.first_violation);
  CHECK(*c.first_violation >= 2);

  const std::vector<double> seq{1.0, 0.6};
  c = check_power_bound(seq, 1.0, 1.0);
  CHECK_FALSE(c.holds);
  CHECK(*c.first_violation == 2);
  CHECK(c.max_ratio == doctest::Approx(1.2));
}

TEST_CASE("homogeneity in A") {
  for (double alpha : {0.5, 1.0, 1.7}) {
    const auto a = extremal_sequence(1.0, alpha, 3000);
    for (double c : {0.25, 3.0, 1e3}) {
      const auto b = extremal_sequence(c, alpha, 3000);
      for (std::size_t k = 0; k < a.size(); ++k) CHECK(b[k] == doctest::Approx(c * a[k]).epsilon(1e-12));
      const auto r1 = check_power_bound(a, 1.0, alpha), rc = check_power_bound(b, c, alpha);
      CHECK(r1.holds == rc.holds);
      CHECK(r1.max_ratio == doctest::Approx(rc.max_ratio).epsilon(1e-12));
    }
  }
}

TEST_CASE("extremal sequence dominates admissible sequences") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double alpha : {0.5, 1.0, 1.5}) {
    const std::size_t m0 = clamp_free_start(alpha);
    CHECK(2.0 / std::pow(double(m0), alpha) <= 1.0);
    if (m0 > 1) CHECK(2.0 / std::pow(double(m0 - 1), alpha) > 1.0);
    const double A = 4.0;
    const auto ext = extremal_sequence(A, alpha, 400);
    // start at m0 with the extremal value, then shrink each step by a random factor
    double b = ext[m0 - 1];
    for (std::size_t m = m0 + 1; m <= 400; ++m) {
      const double pm = std::pow(double(m), alpha);
      b = u(rng) * ((1 - 2 / pm) * b + A / (pm * pm));
      CHECK(b <= ext[m - 1] * (1 + 1e-12));
    }
  }
}

TEST_CASE("alpha sweep") {
  const auto rows = alpha_sweep(4.0, {0.25, 0.5, 0.75, 1.0, 1.1, 1.5, 2.0}, 1000000);
  REQUIRE(rows.size() == 7);
  for (const auto& r : rows) {
    if (r.alpha <= 1.0) {
      CHECK(r.check.holds);
      CHECK(r.check.max_ratio <= 1.0 + 1e-12);
    } else {
      CHECK_FALSE(r.check.holds);
      CHECK(r.check.first_violation.has_value());
      CHECK_FALSE(r.m_max_insufficient);
    }
  }
  const auto short_run = alpha_sweep(4.0, {1.1}, 5);
  CHECK(short_run[0].m_max_insufficient);
  for (double A : {0.1, 4.0, 250.0}) CHECK(alpha_sweep(A, {1.0}, 10000)[0].check.max_ratio <= 1.0 + 1e-12);

  std::ostringstream os;
  write_sweep_csv(os, rows);
  CHECK(os.str().rfind("alpha,holds,first_violation,max_ratio,m_max\n", 0) == 0);
  const auto serial = alpha_sweep(4.0, {0.5, 1.5}, 10000, Backend::serial);
  const auto par = alpha_sweep(4.0, {0.5, 1.5}, 10000, Backend::openmp);
  for (std::size_t i = 0; i < 2; ++i) CHECK(serial[i].check.max_ratio == par[i].check.max_ratio);
}
