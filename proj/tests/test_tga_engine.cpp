#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "greedylab/errors.hpp"
#include "greedylab/tga_engine.hpp"
#include "oracles.hpp"

using namespace greedylab;

namespace {

std::vector<double> uniform_vec(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

}  // namespace

TEST_CASE("greedy ordering") {
  auto o = greedy_ordering(CoefVector({1, -3, 2}));
  CHECK(o.pi == std::vector<std::size_t>{1, 2, 0});
  CHECK(o.tie_events.empty());
  o = greedy_ordering(CoefVector({2, -2, 1}));
  CHECK(o.pi == std::vector<std::size_t>{0, 1, 2});
  CHECK(o.tie_events.size() == 1);
  CHECK(in_xd(CoefVector({0.5, -0.25, 0, 0})));
  CHECK_FALSE(in_xd(CoefVector({0.5, -0.5, 0})));

  std::mt19937_64 rng(1);
  for (int t = 0; t < 100; ++t) {
    auto v = uniform_vec(rng, 9);
    v[rng() % 9] = v[0];
    const CoefVector x(v);
    const auto g = greedy_ordering(x);
    for (std::size_t i = 1; i < 9; ++i) {
      const double a = std::abs(x[g.pi[i - 1]]), b = std::abs(x[g.pi[i]]);
      CHECK(a >= b);
      if (a == b) CHECK(g.pi[i - 1] < g.pi[i]);
    }
  }
}

TEST_CASE("greedy sum examples") {
  const auto g = greedy_sum(CoefVector({1, -3, 2}), 1);
  CHECK(g.sum == CoefVector({0, -3, 0}));
  CHECK(g.set == IndexSet({1}));
  CHECK_THROWS_AS(greedy_sum(CoefVector({1, 2}), 3), InvalidInput);

  const std::size_t m = 5, n = 20;
  const auto a = IndexSet::range(0, m), b = IndexSet::range(m, 2 * m);
  for (double t : {1.0, 2.0, 10.0, 1000.0}) {
    const double c = (t * t + 1) / (t * t);
    const auto f = c * indicator(a, n) + indicator(b, n);
    CHECK(greedy_sum(f, m).sum == c * indicator(a, n));
  }

  const std::size_t k = 5;
  std::vector<double> fv(n), gv(n), expect(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double tail = std::pow(double(j + 1), -3.0);
    fv[j] = j < k ? 1.0 : tail;
    gv[j] = j < k ? -1.0 : tail;
    if (j >= k && j < 2 * k) expect[j] = 2 * tail;
  }
  const CoefVector f(fv), gg(gv);
  CHECK(greedy_sum(f, k).sum == indicator(IndexSet::range(0, k), n));
  CHECK(greedy_sum(gg, k).sum == (-1.0) * indicator(IndexSet::range(0, k), n));
  CHECK(greedy_sum(f + gg, k).sum == CoefVector(expect));
}

TEST_CASE("greedy sets at ties") {
  const CoefVector x({3, 1, -1, 1, 0.5});
  const auto sets = greedy_sets(x, 2, 100);
  REQUIRE(sets.size() == 3);
  CHECK(sets[0] == greedy_sum(x, 2).set);
  CHECK(sets[0] == IndexSet({0, 1}));
  CHECK(sets[1] == IndexSet({0, 2}));
  CHECK(sets[2] == IndexSet({0, 3}));
  for (const auto& s : sets) CHECK(is_greedy_set(x, s));
  CHECK(greedy_sets(x, 2, 2).size() == 2);
  CHECK_FALSE(is_greedy_set(x, IndexSet({0, 4})));
}

TEST_CASE("greedy sum is a projection onto a threshold set") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 200; ++t) {
    auto v = uniform_vec(rng, 7);
    if (t % 3 == 0) v[2] = -v[5];
    const CoefVector x(v);
    for (std::size_t m = 0; m <= 7; ++m) {
      const auto g = greedy_sum(x, m);
      CHECK(g.set.size() == m);
      CHECK(g.sum == project(x, g.set));
      CHECK(is_greedy_set(x, g.set));
    }
  }
}

TEST_CASE("chebyshev examples") {
  const auto r = chebyshev_sum(SpaceSpec::lp(0.5), CoefVector({5, 1, 1}), IndexSet({0}));
  CHECK(r.coefficients == std::vector<double>{5});
  CHECK(r.residual == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(r.analytic);
  CHECK_THROWS_AS(chebyshev_sum(SpaceSpec::kt(), CoefVector({1, 2}), IndexSet({0}), 0.0), InvalidInput);

  std::mt19937_64 rng(3);
  for (int t = 0; t < 30; ++t) {
    auto v = uniform_vec(rng, 6);
    v[t % 6] = 0.0;
    const CoefVector x(v);
    const auto supp = x.support();
    for (const auto& sp : {SpaceSpec::kt(), SpaceSpec::parse("dsum(kt,c0)"), SpaceSpec::lp(1.5)})
      CHECK(chebyshev_sum(sp, x, IndexSet(supp)).residual <= 1e-9);
  }
}

TEST_CASE("chebyshev matches grid search on kt, n = 3") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 30; ++t) {
    const auto v = uniform_vec(rng, 3);
    const std::size_t i = t % 3;
    const double nx = oracle::kt_norm(v);
    const double grid = oracle::grid_min(
        [&](double a) {
          auto y = v;
          y[i] -= a;
          return oracle::kt_norm(y);
        },
        -2 * nx, 2 * nx);
    const auto r = chebyshev_sum(SpaceSpec::kt(), CoefVector(v), IndexSet({i}));
    CHECK(std::abs(r.residual - grid) <= 1e-4);
    CHECK(r.residual <= projection_residual(SpaceSpec::kt(), v, IndexSet({i})));
  }
}

TEST_CASE("chebyshev coefficients are the coordinates on separable spaces") {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 30; ++t) {
    const CoefVector x(uniform_vec(rng, 6));
    const IndexSet a({1, 3, 4});
    for (const auto& sp : {SpaceSpec::lp(0.4), SpaceSpec::lp(2), SpaceSpec::c0(), SpaceSpec::parse("dsum(lp:1,c0)")}) {
      const auto r = chebyshev_sum(sp, x, a);
      CHECK(r.coefficients == std::vector<double>{x[1], x[3], x[4]});
      CHECK(r.residual == projection_residual(sp, x.values(), a));
    }
  }
}

TEST_CASE("sigma and best projection examples") {
  const CoefVector x({3, 2, 1});
  CHECK(sigma_m_oracle(SpaceSpec::lp(2), x, 1).value == doctest::Approx(std::sqrt(5.0)).epsilon(1e-15));
  for (double p : {0.5, 1.0, 2.0}) {
    const auto r = best_projection_error(SpaceSpec::lp(p), x, 1);
    CHECK(r.witness_set == IndexSet({0}));
    CHECK(r.value == doctest::Approx(std::pow(std::pow(2.0, p) + 1.0, 1.0 / p)).epsilon(1e-14));
  }
  for (const auto& sp : {SpaceSpec::kt(), SpaceSpec::lp(0.5)}) {
    CHECK(sigma_m_oracle(sp, x, 0).value == eval_norm(sp, x));
    CHECK(sigma_m_oracle(sp, x, 3).value == 0.0);
    CHECK(sigma_m_oracle(sp, x, 5).value == 0.0);
    const auto b0 = best_projection_error(sp, x, 0);
    CHECK(b0.value == eval_norm(sp, x));
    CHECK(b0.witness_set.empty());
    const auto z = best_projection_error(sp, CoefVector::zeros(4), 2);
    CHECK(z.value == 0.0);
    CHECK(z.witness_set.empty());
  }
}

TEST_CASE("sigma on lp equals the tail of the sorted moduli") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 60; ++t) {
    const auto v = uniform_vec(rng, 10);
    const double p = std::vector<double>{0.5, 1.0, 2.0}[t % 3];
    const auto prof = sigma_profile(SpaceSpec::lp(p), CoefVector(v), 3);
    for (std::size_t m = 0; m <= 3; ++m)
      CHECK(prof[m].value == doctest::Approx(oracle::lp_tail(v, m, p)).epsilon(1e-13));
  }
}

TEST_CASE("sigma on kt agrees with a grid search over one free coefficient") {
  std::mt19937_64 rng(33);
  for (int t = 0; t < 10; ++t) {
    const auto v = uniform_vec(rng, 3);
    const double nx = oracle::kt_norm(v);
    double best = nx;
    for (std::size_t i = 0; i < 3; ++i)
      best = std::min(best, oracle::grid_min(
                                [&](double a) {
                                  auto y = v;
                                  y[i] -= a;
                                  return oracle::kt_norm(y);
                                },
                                -2 * nx, 2 * nx));
    CHECK(std::abs(sigma_m_oracle(SpaceSpec::kt(), CoefVector(v), 1).value - best) <= 1e-4);
  }
}

TEST_CASE("best projection agrees with bitmask enumeration") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 20; ++t) {
    auto v = uniform_vec(rng, 8);
    v[t % 8] = 0.0;
    for (std::size_t m = 0; m <= 4; ++m) {
      CHECK(best_projection_error(SpaceSpec::kt(), CoefVector(v), m).value ==
            doctest::Approx(oracle::best_projection(oracle::kt_norm, v, m)).epsilon(1e-13));
      CHECK(best_projection_error(SpaceSpec::lp(0.7), CoefVector(v), m).value ==
            doctest::Approx(oracle::best_projection([](const auto& y) { return oracle::lp_norm(y, 0.7); }, v, m))
                .epsilon(1e-13));
    }
  }
}

TEST_CASE("oracle chain and monotonicity") {
  std::mt19937_64 rng(44);
  for (const auto& sp : {SpaceSpec::kt(), SpaceSpec::lp(0.5), SpaceSpec::parse("dsum(kt,c0)")}) {
    for (int t = 0; t < 8; ++t) {
      auto v = uniform_vec(rng, 7);
      if (t % 2) v[3] = v[1];
      const CoefVector x(v);
      const auto s = sigma_profile(sp, x, 7);
      const auto b = best_projection_profile(sp, x, 7);
      for (std::size_t m = 0; m <= 7; ++m) {
        CHECK(s[m].value <= b[m].value);
        CHECK(b[m].value <= eval_norm(sp, x));
        if (m > 0) {
          CHECK(s[m].value <= s[m - 1].value);
          CHECK(b[m].value <= b[m - 1].value);
        }
        CHECK(s[m].witness_set.size() <= m);
        CHECK(s[m].witness_coefficients.size() == s[m].witness_set.size());
      }
    }
  }
}

TEST_CASE("sigma guard") {
  CHECK_THROWS_AS(sigma_m_oracle(SpaceSpec::kt(), CoefVector(std::vector<double>(17, 1.0)), 2), CapacityError);
  CHECK_THROWS_AS(sigma_m_oracle(SpaceSpec::kt(), CoefVector(std::vector<double>(16, 1.0)), 6), CapacityError);
  CHECK_NOTHROW(sigma_m_oracle(SpaceSpec::lp(1), CoefVector(std::vector<double>(16, 1.0)), 5));
  CHECK_THROWS_AS(best_projection_error(SpaceSpec::lp(1), CoefVector(std::vector<double>(21, 1.0)), 1),
                  CapacityError);
}

TEST_CASE("oracle json") {
  const auto r = sigma_m_oracle(SpaceSpec::lp(2), CoefVector({3, 2, 1}), 1);
  const auto j = r.to_json();
  CHECK(j["m"] == 1);
  CHECK(j["witness_set"] == nlohmann::json::array({0}));
  CHECK(j.contains("solver_iters"));
  CHECK(j.contains("value"));
}

TEST_CASE("oversampling") {
  CHECK(oversampled_size(2, 1.5) == 3);
  CHECK(oversampled_size(2, 3.0) == 6);
  CHECK_THROWS_AS(oversampled_size(2, 1.0), InvalidInput);
  std::mt19937_64 rng(8);
  for (int t = 0; t < 50; ++t) {
    const CoefVector x(uniform_vec(rng, 6));
    CHECK(oversampled_greedy_error(SpaceSpec::lp(2), x, 1, 2.0).ratio <= 1.0);
  }
  const auto r = oversampled_greedy_error(SpaceSpec::kt(), CoefVector({1, 0, 0, 2, 0}), 2, 1.5);
  CHECK(r.numerator == 0.0);
  CHECK(r.ratio == 0.0);
  CHECK_FALSE(r.infinite);
}

TEST_CASE("serial and openmp oracles are identical") {
  std::mt19937_64 rng(5);
  const CoefVector x(uniform_vec(rng, 9));
  for (const auto& sp : {SpaceSpec::kt(), SpaceSpec::lp(0.5)}) {
    const auto a = sigma_profile(sp, x, 3, Backend::serial), b = sigma_profile(sp, x, 3, Backend::openmp);
    const auto c = best_projection_profile(sp, x, 9, Backend::serial);
    const auto d = best_projection_profile(sp, x, 9, Backend::openmp);
    for (std::size_t m = 0; m <= 3; ++m) {
      CHECK(a[m].value == b[m].value);
      CHECK(a[m].witness_set == b[m].witness_set);
    }
    for (std::size_t m = 0; m <= 9; ++m) {
      CHECK(c[m].value == d[m].value);
      CHECK(c[m].witness_set == d[m].witness_set);
    }
  }
}
