// Serial vs OpenMP timings for the enumeration kernels.
// Usage: kernels_bench [--quick]
// Exits 1 if a parallel result differs from its serial reference.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include <omp.h>

#include "greedylab/greedy_constants.hpp"
#include "greedylab/tga_engine.hpp"

using namespace greedylab;

namespace {

template <class F>
double seconds(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Case {
  std::string name;
  std::function<std::vector<double>(Backend)> run;
};

std::vector<double> values_of(const std::vector<OracleResult>& r) {
  std::vector<double> v;
  for (const auto& o : r) v.push_back(o.value);
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  const bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;
  const std::size_t sigma_n = quick ? 8 : 12;
  const std::size_t proj_n = quick ? 12 : 18;
  const std::size_t dem_n = quick ? 12 : 18;

  SampleConfig sc;
  sc.n = sigma_n;
  sc.samples = 1;
  sc.seed = 3;
  sc.law = SampleLaw::uniform;
  const CoefVector xs = draw_sample(sc, 0);
  sc.n = proj_n;
  const CoefVector xp = draw_sample(sc, 0);

  std::vector<Case> cases = {
      {"sigma_profile kt n=" + std::to_string(sigma_n),
       [&](Backend b) { return values_of(sigma_profile(SpaceSpec::kt(), xs, sigma_n / 2, b)); }},
      {"best_projection kt n=" + std::to_string(proj_n),
       [&](Backend b) { return values_of(best_projection_profile(SpaceSpec::kt(), xp, proj_n, b)); }},
      {"democracy kt n=" + std::to_string(dem_n),
       [&](Backend b) {
         auto p = democracy_profile(SpaceSpec::kt(), dem_n, 0, b);
         p.upper.insert(p.upper.end(), p.lower.begin(), p.lower.end());
         return p.upper;
       }},
      {"greedy rows lp:0.5 n=10",
       [&](Backend b) {
         SampleConfig c;
         c.n = 10;
         c.samples = quick ? 16 : 64;
         c.backend = b;
         std::vector<double> v;
         for (const auto& r : evaluate_samples(SpaceSpec::lp(0.5), c, RowOptions{}))
           for (const auto& e : r.entries) v.push_back(e.greedy);
         return v;
       }},
  };

  std::printf("threads: %d\n", omp_get_max_threads());
  std::printf("%-32s %12s %12s %8s\n", "kernel", "serial [s]", "openmp [s]", "speedup");
  int status = 0;
  for (const auto& c : cases) {
    std::vector<double> ser, par;
    const double ts = seconds([&] { ser = c.run(Backend::serial); });
    const double tp = seconds([&] { par = c.run(Backend::openmp); });
    const bool same = ser.size() == par.size() && std::memcmp(ser.data(), par.data(), ser.size() * sizeof(double)) == 0;
    std::printf("%-32s %12.4f %12.4f %8.2f%s\n", c.name.c_str(), ts, tp, ts / tp, same ? "" : "  MISMATCH");
    if (!same) status = 1;
  }
  return status;
}
