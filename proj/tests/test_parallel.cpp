#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "greedylab/greedy_constants.hpp"
#include "greedylab/parallel.hpp"

using namespace greedylab;

TEST_CASE("argmin and argmax break ties by lowest index") {
  const std::vector<double> v = {3, 1, 4, 1, 5, 9, 2, 6, 9, 1};
  auto at = [&](std::size_t i) { return v[i]; };
  for (auto b : {Backend::serial, Backend::openmp}) {
    const auto lo = kernels::argmin(v.size(), at, b), hi = kernels::argmax(v.size(), at, b);
    CHECK(lo.index == 1);
    CHECK(lo.value == 1.0);
    CHECK(hi.index == 5);
    CHECK(hi.value == 9.0);
  }
  const auto none = kernels::argmin(3, [](std::size_t) { return NAN; }, Backend::openmp);
  CHECK_FALSE(none.found);
}

TEST_CASE("map keeps order and rethrows") {
  for (auto b : {Backend::serial, Backend::openmp}) {
    const auto sq = kernels::map<std::size_t>(1000, [](std::size_t i) { return i * i; }, b);
    for (std::size_t i = 0; i < sq.size(); ++i) CHECK(sq[i] == i * i);
    CHECK_THROWS_AS(kernels::map<int>(
                        100,
                        [](std::size_t i) -> int {
                          if (i == 57) throw std::runtime_error("boom");
                          return 0;
                        },
                        b),
                    std::runtime_error);
  }
}

TEST_CASE("estimators give the same result on both backends") {
  for (const char* s : {"kt", "dsum(kt,c0)", "lp:0.5"}) {
    const auto sp = SpaceSpec::parse(s);
    SampleConfig a;
    a.n = 7;
    a.samples = 16;
    a.seed = 2;
    a.backend = Backend::serial;
    SampleConfig b = a;
    b.backend = Backend::openmp;
    CHECK(greedy_family_estimates(sp, a).greedy.to_json() == greedy_family_estimates(sp, b).greedy.to_json());
    CHECK(unconditionality_estimate(sp, a).to_json() == unconditionality_estimate(sp, b).to_json());
    CHECK(super_democracy_estimate(sp, a).to_json() == super_democracy_estimate(sp, b).to_json());
    CHECK(democracy_profile(sp, 24, 1, Backend::serial).upper == democracy_profile(sp, 24, 1, Backend::openmp).upper);
    CHECK(xd_comparison(sp, a).to_json() == xd_comparison(sp, b).to_json());
  }
}
