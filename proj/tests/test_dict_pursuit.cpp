#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "greedylab/dict_pursuit.hpp"
#include "greedylab/errors.hpp"

using namespace greedylab;

namespace {

const Dictionary& e12() {
  static const Dictionary d = Dictionary::orthonormal(2);
  return d;
}

std::vector<double> sum_of(const A1Sample& s, const Dictionary& d) {
  std::vector<double> v(d.dim(), 0.0);
  for (auto [i, w] : s.combination)
    for (std::size_t k = 0; k < d.dim(); ++k) v[k] += w * d.atom(i)[k];
  return v;
}

}  // namespace

TEST_CASE("best_atom examples") {
  auto c = best_atom(e12(), CoefVector({0.6, 0.8}));
  CHECK(c.index == 1);
  CHECK(c.sign == 1);
  CHECK(c.value == 0.8);
  c = best_atom(e12(), CoefVector({-1, 0}));
  CHECK(c.index == 0);
  CHECK(c.sign == -1);
  CHECK(c.value == 1.0);
  c = best_atom(e12(), CoefVector({0, 0}));
  CHECK(c.index == 0);
  CHECK(c.sign == 1);
  CHECK(c.value == 0.0);
  CHECK(c.degenerate);
  CHECK_THROWS_AS(best_atom(e12(), CoefVector({1, 0, 0})), InvalidInput);
}

TEST_CASE("dictionary construction") {
  CHECK_THROWS_AS(Dictionary(2, {}), InvalidInput);
  CHECK_THROWS_AS(Dictionary(2, {{1, 0}, {2, 0}}), InvalidInput);  // not unit
  CHECK_THROWS_AS(Dictionary(2, {{1, 0}, {-1, 0}}), InvalidInput);  // rank 1
  const auto r = Dictionary::parse("random:256:64:5");
  CHECK(r.size() == 256);
  CHECK(r.dim() == 64);
  for (std::size_t i = 0; i < r.size(); ++i) CHECK(std::abs(euclidean_norm(r.atom(i)) - 1.0) <= 1e-12);
  const auto rot = Dictionary::parse("rotated:8:3");
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j)
      CHECK(std::abs(dot(rot.atom(i), rot.atom(j)) - (i == j ? 1.0 : 0.0)) <= 1e-12);
  CHECK(Dictionary::parse("coherent:5").size() == 9);
  const auto back = Dictionary::from_json(r.to_json());
  REQUIRE(back.size() == r.size());
  double drift = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t k = 0; k < r.dim(); ++k) drift = std::max(drift, std::abs(back.atom(i)[k] - r.atom(i)[k]));
  CHECK(drift <= 1e-15);
  CHECK_THROWS_AS(Dictionary::parse("no/such/file.json"), InvalidInput);
}

TEST_CASE("pga examples") {
  auto t = run_pga(CoefVector({1, 0}), e12(), 5);
  CHECK(t.steps.size() == 1);
  CHECK(t.steps[0].residual == 0.0);
  CHECK(t.stop == StopReason::zero_residual);

  t = run_pga(CoefVector({0.6, 0.8}), e12(), 1);
  CHECK(t.steps[0].atom == 1);
  CHECK(t.residual == std::vector<double>{0.6, 0.0});
  CHECK_THROWS_AS(run_pga(CoefVector({1, 0, 0}), e12(), 1), InvalidInput);
}

TEST_CASE("pga on an orthonormal basis leaves the smallest coordinates") {
  const auto d = Dictionary::orthonormal(10);
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> v(10);
    for (auto& x : v) x = g(rng);
    const auto t = run_pga(CoefVector(v), d, 10);
    auto sq = v;
    for (auto& x : sq) x *= x;
    std::sort(sq.begin(), sq.end());
    for (std::size_t m = 1; m < t.steps.size(); ++m) {
      double tail = 0.0;
      for (std::size_t k = 0; k < 10 - m; ++k) tail += sq[k];
      CHECK(t.steps[m - 1].residual * t.steps[m - 1].residual == doctest::Approx(tail).epsilon(1e-12));
    }
  }
}

TEST_CASE("pga invariants on a redundant dictionary") {
  const auto d = Dictionary::parse("random:40:8:2");
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = sample_a1(d, 6, seed);
    const auto t = run_pga(s.f, d, 60);
    double prev = euclidean_norm(s.f.values());
    std::vector<double> r = s.f.vec();
    for (const auto& st : t.steps) {
      CHECK(st.residual <= prev);
      prev = st.residual;
      for (std::size_t k = 0; k < 8; ++k) r[k] -= st.weight * st.sign * d.atom(st.atom)[k];
      std::vector<double> a(d.atom(st.atom).begin(), d.atom(st.atom).end());
      CHECK(std::abs(dot(r, a)) <= 1e-9);
    }
    for (std::size_t k = 0; k < 8; ++k) CHECK(std::abs(t.approximant[k] + t.residual[k] - s.f[k]) <= 1e-9);
  }
}

TEST_CASE("rga examples") {
  const auto d = Dictionary::parse("random:30:6:4");
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto s = sample_a1(d, 5, seed);
    const auto r = run_rga(s.f, d, 1);
    const auto p = run_pga(s.f, d, 1);
    CHECK(r.steps[0].atom == p.steps[0].atom);
    CHECK(r.steps[0].sign == p.steps[0].sign);
    CHECK(r.approximant == p.approximant);

    const auto full = run_rga(s.f, d, 100);
    CHECK(verify_rate(full, 2.0, 0.5).holds);
    for (const auto& st : full.steps) CHECK(st.approximant_norm <= 1.0 + 1e-12);
  }
  const auto single = sample_a1(d, 1, 3);
  CHECK(euclidean_norm(single.f.values()) == doctest::Approx(1.0).epsilon(1e-14));
  const auto t = run_rga(single.f, d, 10);
  CHECK(t.steps.size() == 1);
  CHECK(t.stop == StopReason::zero_residual);
}

TEST_CASE("power rga") {
  const auto d = Dictionary::parse("random:30:6:4");
  const auto s = sample_a1(d, 7, 1);
  const auto a = run_power_rga(s.f, d, 50, 1.0);
  const auto b = run_rga(s.f, d, 50);
  CHECK(a.approximant == b.approximant);
  REQUIRE(a.steps.size() == b.steps.size());
  for (std::size_t i = 0; i < a.steps.size(); ++i) {
    CHECK(a.steps[i].residual == b.steps[i].residual);
    CHECK(a.steps[i].atom == b.steps[i].atom);
  }

  // step 1 is the pure step; every relaxed step after it has weight 1
  const auto z = run_power_rga(s.f, d, 10, 0.0);
  for (std::size_t i = 1; i < z.steps.size(); ++i) CHECK(z.steps[i].weight == 1.0);
  const auto& last = z.steps.back();
  for (std::size_t k = 0; k < 6; ++k) CHECK(z.approximant[k] == last.sign * d.atom(last.atom)[k]);

  const auto o = Dictionary::orthonormal(64);
  const auto f = sample_a1(o, 64, 2);
  const auto t2 = run_power_rga(f.f, o, 64, 2.0);
  REQUIRE(t2.steps.size() == 64);
  CHECK(t2.steps[63].residual > 2.0 / 64);
}

TEST_CASE("a1 samples") {
  const auto d = Dictionary::orthonormal(16);
  CHECK_THROWS_AS(sample_a1(d, 0, 1), InvalidInput);
  CHECK_THROWS_AS(sample_a1(d, 17, 1), InvalidInput);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto s = sample_a1(d, 1 + seed % 16, seed);
    double l1 = 0.0;
    for (auto [i, w] : s.combination) l1 += std::abs(w);
    CHECK(l1 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(euclidean_norm(s.f.values()) <= 1.0 + 1e-14);
    const auto v = sum_of(s, d);
    for (std::size_t k = 0; k < 16; ++k) CHECK(std::abs(v[k] - s.f[k]) <= 1e-15);
  }
  const auto a = sample_a1(d, 5, 42), b = sample_a1(d, 5, 42);
  CHECK(a.f == b.f);
}

TEST_CASE("rate check") {
  PursuitTrace flat;
  for (std::size_t m = 1; m <= 8; ++m) flat.steps.push_back({m, 0, 1, 0.0, 1.0, 0.0});
  auto r = verify_rate(flat, 2.0, 0.5);
  CHECK_FALSE(r.holds);
  REQUIRE(r.first_violation);
  CHECK(*r.first_violation == 5);

  PursuitTrace zero;
  zero.steps.push_back({1, 0, 1, 1.0, 0.0, 1.0});
  r = verify_rate(zero, 2.0, 0.5);
  CHECK(r.holds);
  CHECK(r.worst_margin == 0.0);
}

TEST_CASE("trace csv") {
  const auto t = run_pga(CoefVector({0.6, 0.8}), e12(), 2);
  std::ostringstream os;
  write_trace_csv(os, t);
  const auto csv = os.str();
  CHECK(csv.rfind("m,atom,sign,weight,residual\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + static_cast<long>(t.steps.size()));
}
