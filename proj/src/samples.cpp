#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "greedylab/errors.hpp"
#include "greedylab/greedy_constants.hpp"
#include "greedylab/rng.hpp"

namespace greedylab {

namespace {

template <class E>
struct Named {
  E value;
  const char* name;
};

constexpr Named<ConstantKind> kKinds[] = {
    {ConstantKind::K, "K"},       {ConstantKind::DeltaD, "Delta_d"}, {ConstantKind::DeltaS, "Delta_s"},
    {ConstantKind::Cqg, "C_qg"},  {ConstantKind::Cg, "C_g"},         {ConstantKind::Cal, "C_al"},
    {ConstantKind::Csg, "C_sg"},  {ConstantKind::Clambda, "C_lambda"}};
constexpr Named<SampleLaw> kLaws[] = {{SampleLaw::uniform, "uniform"},
                                      {SampleLaw::geometric, "geometric"},
                                      {SampleLaw::structured, "structured"},
                                      {SampleLaw::mixed, "mixed"},
                                      {SampleLaw::alternating, "alternating"}};
constexpr Named<SampleMode> kModes[] = {
    {SampleMode::automatic, "auto"}, {SampleMode::exhaustive, "exhaustive"}, {SampleMode::sampled, "sampled"}};

template <class E, std::size_t N>
std::string name_of(const Named<E> (&table)[N], E v) {
  for (const auto& t : table)
    if (t.value == v) return t.name;
  return "?";
}

template <class E, std::size_t N>
E parse_name(const Named<E> (&table)[N], const std::string& s, const char* what) {
  for (const auto& t : table)
    if (s == t.name) return t.value;
  throw InvalidInput(std::string("unknown ") + what + " \"" + s + "\"");
}

using Engine = std::mt19937_64;

double coin(Engine& g) { return std::bernoulli_distribution(0.5)(g) ? 1.0 : -1.0; }

std::size_t uniform_int(Engine& g, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(g);
}

std::vector<std::size_t> permutation(Engine& g, std::size_t n) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  std::shuffle(p.begin(), p.end(), g);
  return p;
}

std::vector<double> alternating_prefix(std::size_t n, std::size_t len) {
  std::vector<double> v(n, 0.0);
  for (std::size_t j = 0; j < len; ++j) v[j] = (j % 2 == 0 ? 1.0 : -1.0) / std::sqrt(static_cast<double>(j + 1));
  return v;
}

std::vector<double> structured(Engine& g, std::size_t n, std::size_t variant) {
  std::vector<double> v(n, 0.0);
  switch (variant) {
    case 0:
      return alternating_prefix(n, uniform_int(g, 1, n));
    case 1: {
      const auto perm = permutation(g, n);
      const std::size_t s = uniform_int(g, 1, n);
      for (std::size_t i = 0; i < s; ++i) v[perm[i]] = coin(g);
      return v;
    }
    case 2: {
      // ((t^2+1)/t^2) on A, 1 on B, disjoint.
      const auto perm = permutation(g, n);
      const auto t = static_cast<double>(uniform_int(g, 1, 5));
      const std::size_t a = uniform_int(g, 1, std::max<std::size_t>(1, n / 2));
      const std::size_t b = n > a ? uniform_int(g, 1, n - a) : 0;
      for (std::size_t i = 0; i < a; ++i) v[perm[i]] = (t * t + 1.0) / (t * t);
      for (std::size_t i = a; i < a + b; ++i) v[perm[i]] = 1.0;
      return v;
    }
    case 3: {
      // +-1 on the first k positions, j^-3 afterwards (or their sum: 0 then 2 j^-3).
      const std::size_t k = uniform_int(g, 1, std::max<std::size_t>(1, n / 2));
      const std::size_t which = uniform_int(g, 0, 2);
      for (std::size_t j = 0; j < n; ++j) {
        const double tail = 1.0 / std::pow(static_cast<double>(j + 1), 3);
        if (j < k)
          v[j] = which == 0 ? 1.0 : which == 1 ? -1.0 : 0.0;
        else
          v[j] = which == 2 ? 2.0 * tail : tail;
      }
      return v;
    }
    default: {
      const double levels[] = {1.0, 0.5, 0.0};
      for (auto& e : v) e = levels[uniform_int(g, 0, 2)] * coin(g);
      return v;
    }
  }
}

std::vector<double> uniform(Engine& g, std::size_t n) {
  std::vector<double> v(n);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::bernoulli_distribution zero(0.2);
  for (auto& e : v) e = zero(g) ? 0.0 : u(g);
  return v;
}

std::vector<double> geometric(Engine& g, std::size_t n) {
  std::vector<double> v(n);
  const double r = std::uniform_real_distribution<double>(0.5, 0.9)(g);
  const auto perm = permutation(g, n);
  for (std::size_t k = 0; k < n; ++k) v[perm[k]] = std::pow(r, static_cast<double>(k)) * coin(g);
  return v;
}

std::vector<double> near_tie(Engine& g, std::size_t n) {
  std::vector<double> v(n);
  const auto perm = permutation(g, n);
  for (std::size_t k = 0; k < n; ++k)
    v[perm[k]] = (1.0 + 1e-3 * static_cast<double>(k) / static_cast<double>(n)) * coin(g);
  return v;
}

}  // namespace

std::string to_string(ConstantKind k) { return name_of(kKinds, k); }
ConstantKind constant_kind_from_string(const std::string& s) { return parse_name(kKinds, s, "constant"); }
std::string to_string(SampleLaw law) { return name_of(kLaws, law); }
std::string to_string(SampleMode mode) { return name_of(kModes, mode); }
SampleLaw sample_law_from_string(const std::string& s) { return parse_name(kLaws, s, "sample law"); }
SampleMode sample_mode_from_string(const std::string& s) { return parse_name(kModes, s, "mode"); }

void SampleConfig::validate() const {
  if (n < 1) throw InvalidInput("SampleConfig: n must be >= 1");
  if (samples < 1) throw InvalidInput("SampleConfig: samples must be >= 1");
  (void)exhaustive();
}

bool SampleConfig::exhaustive() const {
  switch (mode) {
    case SampleMode::exhaustive:
      if (n > kExhaustiveMaxDim)
        throw InvalidInput("SampleConfig: exhaustive mode needs n <= " + std::to_string(kExhaustiveMaxDim));
      return true;
    case SampleMode::sampled:
      return false;
    default:
      return n <= kExhaustiveMaxDim;
  }
}

CoefVector alternating_vector(std::size_t n) {
  if (n == 0) throw InvalidInput("alternating_vector: n must be >= 1");
  return CoefVector(alternating_prefix(n, n));
}

CoefVector draw_sample(const SampleConfig& cfg, std::size_t index) {
  auto g = stream_engine(cfg.seed, index);
  const std::size_t n = cfg.n;
  std::vector<double> v;
  switch (cfg.law) {
    case SampleLaw::uniform:
      v = uniform(g, n);
      break;
    case SampleLaw::geometric:
      v = geometric(g, n);
      break;
    case SampleLaw::alternating:
      v = alternating_prefix(n, n);
      break;
    case SampleLaw::structured:
      v = structured(g, n, index % 5);
      break;
    case SampleLaw::mixed: {
      const std::size_t family = index % 8;
      if (family < 5)
        v = structured(g, n, family);
      else if (family == 5)
        v = uniform(g, n);
      else if (family == 6)
        v = geometric(g, n);
      else
        v = near_tie(g, n);
      break;
    }
  }
  if (std::all_of(v.begin(), v.end(), [](double e) { return e == 0.0; })) v[0] = 1.0;
  return CoefVector(std::move(v));
}

std::vector<CoefVector> draw_samples(const SampleConfig& cfg) {
  cfg.validate();
  std::vector<CoefVector> out;
  out.reserve(cfg.samples);
  for (std::size_t i = 0; i < cfg.samples; ++i) out.push_back(draw_sample(cfg, i));
  return out;
}

}  // namespace greedylab
