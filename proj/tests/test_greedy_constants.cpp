#include <cmath>
#include <vector>

#include "doctest.h"
#include "greedylab/errors.hpp"
#include "greedylab/greedy_constants.hpp"
#include "greedylab/tga_engine.hpp"
#include "oracles.hpp"

using namespace greedylab;

namespace {

SampleConfig config(std::size_t n, std::size_t samples, std::uint64_t seed = 0) {
  SampleConfig c;
  c.n = n;
  c.samples = samples;
  c.seed = seed;
  return c;
}

void check_replay(const SpaceSpec& sp, const ConstantEstimate& e) {
  CHECK(std::abs(replay_ratio(sp, e) - e.value) <= 1e-9);
  const auto back = ConstantEstimate::from_json(e.to_json());
  CHECK(std::abs(replay_ratio(sp, back) - e.value) <= 1e-9);
}

}  // namespace

TEST_CASE("sample config") {
  CHECK_THROWS_AS(config(0, 1).validate(), InvalidInput);
  CHECK_THROWS_AS(config(3, 0).validate(), InvalidInput);
  auto c = config(13, 1);
  c.mode = SampleMode::exhaustive;
  CHECK_THROWS_AS(c.exhaustive(), InvalidInput);
  c.mode = SampleMode::automatic;
  CHECK_FALSE(c.exhaustive());
  CHECK(config(12, 1).exhaustive());
  CHECK(sample_law_from_string("geometric") == SampleLaw::geometric);
  CHECK_THROWS_AS(sample_law_from_string("gaussian"), InvalidInput);
  CHECK(to_string(ConstantKind::DeltaS) == "Delta_s");
  CHECK(constant_kind_from_string("C_sg") == ConstantKind::Csg);
}

TEST_CASE("samples are seeded and nonzero") {
  for (auto law : {SampleLaw::uniform, SampleLaw::geometric, SampleLaw::structured, SampleLaw::mixed}) {
    auto c = config(9, 40, 5);
    c.law = law;
    const auto a = draw_samples(c), b = draw_samples(c);
    CHECK(a == b);
    for (const auto& x : a) CHECK_FALSE(x.is_zero());
    c.seed = 6;
    CHECK_FALSE(draw_samples(c) == a);
  }
  const auto alt = alternating_vector(4);
  CHECK(alt[0] == 1.0);
  CHECK(alt[1] == doctest::Approx(-1 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(alt[3] == -0.5);
}

TEST_CASE("lp estimators return exactly one") {
  for (double p : {0.5, 1.0, 2.0}) {
    const auto sp = SpaceSpec::lp(p);
    const auto c = config(7, 40, 3);
    const auto fam = greedy_family_estimates(sp, c);
    for (const auto* e : {&fam.quasi, &fam.almost, &fam.greedy, &fam.semi}) {
      CHECK(std::abs(e->value - 1.0) <= 1e-9);
      CHECK(e->method == "exhaustive");
      check_replay(sp, *e);
    }
    CHECK(fam.chain_violations == 0);
    const auto k = unconditionality_estimate(sp, c);
    CHECK(std::abs(k.value - 1.0) <= 1e-12);
    check_replay(sp, k);
    CHECK(democracy_profile(sp, 7).delta.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(super_democracy_estimate(sp, c).value == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("unconditionality on the alternating vector") {
  for (std::size_t m : {4u, 16u, 64u, 256u, 1024u}) {
    const auto x = alternating_vector(2 * m);
    std::vector<std::size_t> evens;  // 1-based even indices
    for (std::size_t j = 1; j < 2 * m; j += 2) evens.push_back(j);
    const double r = projection_ratio(SpaceSpec::kt(), x, IndexSet(evens));
    CHECK(r >= 0.2 * std::sqrt(std::log(m + 1.0)));
  }
  const CoefVector single({0, 0, 3, 0});
  CHECK(projection_ratio(SpaceSpec::kt(), single, IndexSet({2})) == 1.0);
  CHECK(projection_ratio(SpaceSpec::kt(), single, IndexSet({0})) == 0.0);
}

TEST_CASE("democracy profiles") {
  const auto l1 = democracy_profile(SpaceSpec::lp(1), 9);
  CHECK(l1.exhaustive);
  for (std::size_t m = 1; m <= 9; ++m) {
    CHECK(l1.upper[m] == doctest::Approx(double(m)).epsilon(1e-14));
    CHECK(l1.lower[m] == doctest::Approx(double(m)).epsilon(1e-14));
  }
  CHECK(l1.delta.value == doctest::Approx(1.0).epsilon(1e-14));

  for (std::size_t n : {10u, 40u}) {
    const auto kt = democracy_profile(SpaceSpec::kt(), n);
    for (std::size_t m = 1; m <= n; ++m) {
      CHECK(kt.upper[m] / std::sqrt(double(m)) <= 2.0);
      CHECK(kt.lower[m] / std::sqrt(double(m)) >= 1.0 - 1e-12);
      CHECK(kt.upper_sets[m].size() == m);
    }
    check_replay(SpaceSpec::kt(), kt.delta);
  }

  const auto ds = SpaceSpec::direct_sum(SpaceSpec::lp(2), SpaceSpec::c0());
  for (std::size_t m : {4u, 9u}) {
    const auto prof = democracy_profile(ds, 2 * m);
    CHECK(std::abs(prof.upper[m] / prof.lower[m] - std::sqrt(double(m))) <= 1e-12);
    CHECK(prof.delta.value >= std::sqrt(double(m)) - 1e-12);
  }
}

TEST_CASE("super democracy dominates democracy") {
  for (const auto& sp : {SpaceSpec::kt(), SpaceSpec::parse("dsum(kt,c0)"), SpaceSpec::lp(0.5)}) {
    for (std::size_t n : {6u, 12u, 15u}) {
      const auto c = config(n, 1);
      const auto d = democracy_profile(sp, n).delta;
      const auto s = super_democracy_estimate(sp, c);
      CHECK(d.value >= 1.0);
      CHECK(s.value >= d.value);
      check_replay(sp, s);
    }
  }
}

TEST_CASE("quasi greedy on indicators") {
  const std::size_t n = 10;
  const IndexSet a({1, 2, 5, 7, 8});
  const auto x = indicator(a, n);
  const auto row = evaluate_sample(SpaceSpec::kt(), x, RowOptions{true, false, false, kTieCap});
  CHECK(row.entries.size() > 5);
  for (const auto& e : row.entries) {
    std::vector<std::size_t> rest;
    for (auto i : a)
      if (!e.set.contains(i)) rest.push_back(i);
    const double expect = eval_norm(SpaceSpec::kt(), indicator(IndexSet(rest), n)) / eval_norm(SpaceSpec::kt(), x);
    CHECK(e.quasi == expect);
  }
}

TEST_CASE("greedy rows: chain and chebyshev beats projection") {
  for (const auto& sp : {SpaceSpec::kt(), SpaceSpec::parse("dsum(kt,c0)"), SpaceSpec::lp(0.5)}) {
    const auto rows = evaluate_samples(sp, config(7, 24, 2), RowOptions{});
    const auto fam = summarize_rows(rows, false);
    CHECK(fam.chain_checks > 0);
    CHECK(fam.chain_violations == 0);
    for (const auto& r : rows)
      for (const auto& e : r.entries) {
        CHECK(e.quasi <= e.almost);
        CHECK(e.almost <= e.greedy);
        CHECK(e.chebyshev_residual <= e.projection_residual);
        CHECK(is_greedy_set(r.x, e.set));
      }
    for (const auto* e : {&fam.quasi, &fam.almost, &fam.greedy, &fam.semi}) check_replay(sp, *e);
    CHECK(fam.quasi.value <= fam.almost.value);
    CHECK(fam.almost.value <= fam.greedy.value);
  }
}

TEST_CASE("adding samples never lowers an estimate") {
  const auto sp = SpaceSpec::kt();
  double prev_q = 0.0, prev_k = 0.0;
  for (std::size_t s : {5u, 10u, 20u}) {
    const auto q = quasi_greedy_estimate(sp, config(8, s, 9));
    const auto k = unconditionality_estimate(sp, config(8, s, 9));
    CHECK(q.value >= prev_q);
    CHECK(k.value >= prev_k);
    prev_q = q.value;
    prev_k = k.value;
  }
}

TEST_CASE("almost greedy grows on the direct sum") {
  const auto ds = SpaceSpec::direct_sum(SpaceSpec::lp(2), SpaceSpec::c0());
  double prev = 0.0;
  for (std::size_t n : {8u, 12u, 16u}) {
    auto c = config(n, 16, 1);
    c.law = SampleLaw::structured;
    const double v = almost_greedy_estimate(ds, c).value;
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("xd perturbation") {
  const auto f = xd_perturb(CoefVector({1, 1, 0}), 0.1, 1.0);
  CHECK(f[0] == doctest::Approx(1.1).epsilon(1e-15));
  CHECK(f[1] == doctest::Approx(1.01).epsilon(1e-15));
  CHECK(f[2] == 0.0);
  CHECK(greedy_ordering(f).pi[0] == 0);
  CHECK(greedy_ordering(f).pi[1] == 1);
  CHECK_THROWS_AS(xd_perturb(CoefVector({1.0}), 0.0, 1.0), InvalidInput);
  CHECK_THROWS_AS(xd_perturb(CoefVector({1.0}), 1.0, 1.0), InvalidInput);

  const auto ones = indicator(IndexSet({0, 2, 3, 6}), 8);
  const auto img = xd_perturb(ones, 1e-2, 1.0);
  CHECK(in_xd(img));
  for (std::size_t m = 1; m <= 4; ++m) CHECK(is_greedy_set(ones, greedy_sum(img, m).set));

  for (const auto& sp : {SpaceSpec::lp(0.5), SpaceSpec::kt(), SpaceSpec::lp(2)}) {
    const double p = sp.convexity_exponent();
    const double c2 = basis_constants(sp, 9).c2;
    for (const auto& x : draw_samples(config(9, 50, 4))) {
      double prev = INFINITY, prev_exact = INFINITY;
      for (double eps : {0.1, 0.01, 0.001}) {
        const double d = eval_norm(sp, xd_perturb(x, eps, p) - x);
        CHECK(std::pow(d, p) <= eps * x.support().size() * std::pow(c2, p) * (1 + 1e-9));
        // the rounded difference may vanish once eps^(j/p) is below the precision of x
        CHECK(d <= prev);
        prev = d;
        std::vector<double> bump(9, 0.0);
        for (auto j : x.support()) bump[j] = std::pow(eps, (j + 1) / p);
        const double exact = eval_norm(sp, CoefVector(bump));
        CHECK(exact < prev_exact);
        prev_exact = exact;
      }
      for (std::size_t m = 0; m < x.support().size(); ++m)
        for (const auto& g : greedy_sets(x, m, 64)) {
          const auto img = xd_perturb(x, 1e-3, p, g);
          CHECK(is_greedy_set(x, greedy_sum(img, m).set));
          if (in_xd(img)) CHECK(greedy_sum(img, m).set == g);
        }
    }
  }
  CHECK(xd_perturb(CoefVector({1, 1, 1}), 0.1, 1.0, IndexSet({2})) == CoefVector({1.01, 1.001, 1.1}));
  CHECK(xd_perturb(CoefVector({1, -1}), 0.5, 1.0, IndexSet()) == xd_perturb(CoefVector({1, -1}), 0.5, 1.0));
}

TEST_CASE("xd comparison") {
  const auto lp = xd_comparison(SpaceSpec::lp(2), config(8, 40, 1));
  CHECK(lp.unrestricted.value == doctest::Approx(1.0).epsilon(1e-12));
  for (const auto& r : lp.rows) {
    CHECK(r.agreement == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.bound_failures == 0);
    CHECK(r.images_in_xd <= r.images);
    CHECK(r.greedy_preserved <= r.images);
  }
  CHECK(lp.rows.front().images_in_xd == lp.rows.front().images);
  CHECK(lp.rows.front().greedy_preserved == lp.rows.front().images);
  const auto kt = xd_comparison(SpaceSpec::kt(), config(10, 40, 2));
  CHECK(kt.rows.back().agreement >= 1.0 - 1e-9);
  CHECK(kt.rows.back().agreement <= 1.05);
  CHECK(kt.to_json()["rows"].size() == 3);
}

TEST_CASE("oversampling estimate") {
  auto c = config(8, 30, 5);
  c.law = SampleLaw::uniform;
  const auto e = oversampling_estimate(SpaceSpec::lp(2), c, 1, 2.0);
  CHECK(e.value <= 1.0);
  CHECK(e.kind == ConstantKind::Clambda);
  CHECK(e.lambda == 2.0);
  check_replay(SpaceSpec::lp(2), e);
  CHECK_THROWS_AS(oversampling_estimate(SpaceSpec::lp(2), c, 4, 2.5), InvalidInput);
}

TEST_CASE("estimate json") {
  CHECK_THROWS_AS(ConstantEstimate::from_json(nlohmann::json::array()), InvalidInput);
  const auto e = quasi_greedy_estimate(SpaceSpec::kt(), config(6, 10));
  const auto j = e.to_json();
  CHECK(j["name"] == "C_qg");
  CHECK(ConstantEstimate::from_json(j).to_json() == j);
}
