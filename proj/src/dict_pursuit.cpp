#include "greedylab/dict_pursuit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <random>

#include <Eigen/Dense>

#include "greedylab/errors.hpp"
#include "greedylab/rng.hpp"

namespace greedylab {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  const std::size_t n = a.size();
#pragma omp simd reduction(+ : s)
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double euclidean_norm(std::span<const double> v) { return std::sqrt(dot(v, v)); }

// ---------------------------------------------------------------------------

Dictionary::Dictionary(std::size_t dim, std::vector<std::vector<double>> atoms) : dim_(dim) {
  if (dim == 0) throw InvalidInput("Dictionary: dimension must be >= 1");
  if (atoms.empty()) throw InvalidInput("Dictionary: no atoms");
  atoms_.reserve(atoms.size() * dim);
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const auto& a = atoms[i];
    if (a.size() != dim) throw InvalidInput("Dictionary: atom " + std::to_string(i) + " has wrong dimension");
    for (double v : a)
      if (!std::isfinite(v)) throw InvalidInput("Dictionary: non-finite entry in atom " + std::to_string(i));
    if (std::abs(euclidean_norm(a) - 1.0) > 1e-12)
      throw InvalidInput("Dictionary: atom " + std::to_string(i) + " is not unit norm");
    atoms_.insert(atoms_.end(), a.begin(), a.end());
  }
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
      atoms_.data(), static_cast<Eigen::Index>(size()), static_cast<Eigen::Index>(dim_));
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m.transpose());
  if (static_cast<std::size_t>(qr.rank()) < dim_)
    throw InvalidInput("Dictionary: atoms do not span R^" + std::to_string(dim_));
}

Dictionary Dictionary::normalized(std::size_t dim, std::vector<std::vector<double>> atoms) {
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const double n = euclidean_norm(atoms[i]);
    if (!(n > 0.0)) throw InvalidInput("Dictionary: atom " + std::to_string(i) + " is zero");
    for (double& v : atoms[i]) v /= n;
  }
  return Dictionary(dim, std::move(atoms));
}

Dictionary Dictionary::orthonormal(std::size_t dim) {
  std::vector<std::vector<double>> atoms(dim, std::vector<double>(dim, 0.0));
  for (std::size_t i = 0; i < dim; ++i) atoms[i][i] = 1.0;
  return Dictionary(dim, std::move(atoms));
}

Dictionary Dictionary::rotated(std::size_t dim, std::uint64_t seed) {
  auto eng = stream_engine(seed, 0);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd g(dim, dim);
  for (Eigen::Index i = 0; i < g.rows(); ++i)
    for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = gauss(eng);
  Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
  std::vector<std::vector<double>> atoms(dim, std::vector<double>(dim));
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) atoms[i][j] = q(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
  return normalized(dim, std::move(atoms));
}

Dictionary Dictionary::random_unit(std::size_t count, std::size_t dim, std::uint64_t seed) {
  auto eng = stream_engine(seed, 1);
  std::normal_distribution<double> gauss;
  std::vector<std::vector<double>> atoms(count, std::vector<double>(dim));
  for (auto& a : atoms)
    for (double& v : a) v = gauss(eng);
  return normalized(dim, std::move(atoms));
}

Dictionary Dictionary::coherent(std::size_t dim) {
  std::vector<std::vector<double>> atoms;
  for (std::size_t i = 0; i < dim; ++i) {
    std::vector<double> e(dim, 0.0);
    e[i] = 1.0;
    atoms.push_back(std::move(e));
  }
  for (std::size_t i = 0; i + 1 < dim; ++i) {
    std::vector<double> e(dim, 0.0);
    e[i] = e[i + 1] = 1.0;
    atoms.push_back(std::move(e));
  }
  return normalized(dim, std::move(atoms));
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

std::size_t to_size(const std::string& s, const std::string& spec) {
  try {
    std::size_t used = 0;
    auto v = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw InvalidInput("Dictionary: bad number \"" + s + "\" in \"" + spec + "\"");
  }
}

}  // namespace

Dictionary Dictionary::parse(const std::string& spec) {
  const auto parts = split(spec, ':');
  const auto& kind = parts[0];
  if (kind == "orthonormal" && parts.size() == 2) return orthonormal(to_size(parts[1], spec));
  if (kind == "coherent" && parts.size() == 2) return coherent(to_size(parts[1], spec));
  if (kind == "rotated" && (parts.size() == 2 || parts.size() == 3))
    return rotated(to_size(parts[1], spec), parts.size() == 3 ? to_size(parts[2], spec) : 0);
  if (kind == "random" && (parts.size() == 3 || parts.size() == 4))
    return random_unit(to_size(parts[1], spec), to_size(parts[2], spec),
                       parts.size() == 4 ? to_size(parts[3], spec) : 0);
  std::ifstream in(spec);
  if (!in) throw InvalidInput("Dictionary: \"" + spec + "\" is neither a generator nor a readable file");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput("Dictionary: " + spec + ": " + e.what());
  }
  return from_json(j);
}

Dictionary Dictionary::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("d") || !j.contains("atoms"))
    throw InvalidInput("Dictionary: JSON needs \"d\" and \"atoms\"");
  try {
    return normalized(j["d"].get<std::size_t>(), j["atoms"].get<std::vector<std::vector<double>>>());
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("Dictionary: ") + e.what());
  }
}

nlohmann::json Dictionary::to_json() const {
  nlohmann::json atoms = nlohmann::json::array();
  for (std::size_t i = 0; i < size(); ++i) {
    auto a = atom(i);
    atoms.push_back(std::vector<double>(a.begin(), a.end()));
  }
  return {{"d", dim_}, {"atoms", atoms}};
}

// ---------------------------------------------------------------------------

AtomChoice best_atom(const Dictionary& dict, std::span<const double> f) {
  if (f.size() != dict.dim()) throw InvalidInput("best_atom: dimension mismatch");
  AtomChoice best;
  best.value = -1.0;
  for (std::size_t i = 0; i < dict.size(); ++i) {
    const double ip = dot(f, dict.atom(i));
    const double v = std::abs(ip);
    if (v > best.value) {
      best.index = i;
      best.sign = ip < 0.0 ? -1 : 1;
      best.value = v;
    }
  }
  best.degenerate = best.value == 0.0;
  return best;
}

AtomChoice best_atom(const Dictionary& dict, const CoefVector& f) { return best_atom(dict, f.values()); }

std::string to_string(PursuitKind k) {
  switch (k) {
    case PursuitKind::pga: return "pga";
    case PursuitKind::rga: return "rga";
    case PursuitKind::power_rga: return "power_rga";
  }
  return "?";
}

std::string to_string(StopReason r) {
  return r == StopReason::zero_residual ? "zero_residual" : "max_iterations";
}

namespace {

void check_dims(const CoefVector& f, const Dictionary& dict) {
  if (f.size() != dict.dim())
    throw InvalidInput("pursuit: input has dimension " + std::to_string(f.size()) + ", dictionary " +
                       std::to_string(dict.dim()));
}

PursuitTrace start_trace(const CoefVector& f, PursuitKind kind, double alpha) {
  PursuitTrace t;
  t.algorithm = kind;
  t.alpha = alpha;
  t.approximant.assign(f.size(), 0.0);
  t.residual = f.vec();
  return t;
}

// First step shared by all three algorithms: G_1 = <f, g> g.
void pure_step(PursuitTrace& t, const Dictionary& dict, std::size_t m) {
  const auto c = best_atom(dict, t.residual);
  const auto a = dict.atom(c.index);
  const double coef = c.value * c.sign;
  for (std::size_t i = 0; i < a.size(); ++i) {
    t.approximant[i] += coef * a[i];
    t.residual[i] -= coef * a[i];
  }
  t.steps.push_back({m, c.index, c.sign, c.value, euclidean_norm(t.residual), euclidean_norm(t.approximant)});
}

template <class WeightFn>
PursuitTrace relaxed(const CoefVector& f, const Dictionary& dict, std::size_t m_max, PursuitKind kind,
                     double alpha, WeightFn weight) {
  check_dims(f, dict);
  if (m_max < 1) throw InvalidInput("relaxed pursuit: m_max must be >= 1");
  auto t = start_trace(f, kind, alpha);
  if (euclidean_norm(t.residual) <= kZeroResidual) {
    t.stop = StopReason::zero_residual;
    return t;
  }
  pure_step(t, dict, 1);
  const auto x = f.values();
  for (std::size_t m = 2; m <= m_max; ++m) {
    if (t.steps.back().residual <= kZeroResidual) {
      t.stop = StopReason::zero_residual;
      return t;
    }
    const auto c = best_atom(dict, t.residual);
    const auto a = dict.atom(c.index);
    const double w = weight(m);
    for (std::size_t i = 0; i < a.size(); ++i) {
      t.approximant[i] = (1.0 - w) * t.approximant[i] + w * (c.sign * a[i]);
      t.residual[i] = x[i] - t.approximant[i];
    }
    t.steps.push_back({m, c.index, c.sign, w, euclidean_norm(t.residual), euclidean_norm(t.approximant)});
  }
  if (t.steps.back().residual <= kZeroResidual) t.stop = StopReason::zero_residual;
  return t;
}

}  // namespace

PursuitTrace run_pga(const CoefVector& f, const Dictionary& dict, std::size_t m_max) {
  check_dims(f, dict);
  auto t = start_trace(f, PursuitKind::pga, 1.0);
  if (euclidean_norm(t.residual) <= kZeroResidual) {
    t.stop = StopReason::zero_residual;
    return t;
  }
  for (std::size_t m = 1; m <= m_max; ++m) {
    pure_step(t, dict, m);
    if (t.steps.back().residual <= kZeroResidual) {
      t.stop = StopReason::zero_residual;
      break;
    }
  }
  return t;
}

PursuitTrace run_rga(const CoefVector& f, const Dictionary& dict, std::size_t m_max) {
  return relaxed(f, dict, m_max, PursuitKind::rga, 1.0,
                 [](std::size_t m) { return 1.0 / static_cast<double>(m); });
}

PursuitTrace run_power_rga(const CoefVector& f, const Dictionary& dict, std::size_t m_max, double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw InvalidInput("run_power_rga: alpha must be >= 0");
  // pow(m, 1.0) == m exactly, so alpha = 1 reproduces run_rga bit for bit.
  return relaxed(f, dict, m_max, PursuitKind::power_rga, alpha,
                 [alpha](std::size_t m) { return 1.0 / std::pow(static_cast<double>(m), alpha); });
}

A1Sample sample_a1(const Dictionary& dict, std::size_t k, std::uint64_t seed) {
  if (k < 1 || k > dict.size())
    throw InvalidInput("sample_a1: k must lie in [1, " + std::to_string(dict.size()) + "]");
  auto eng = stream_engine(seed, 0);

  std::vector<std::size_t> idx(dict.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
    std::swap(idx[i], idx[pick(eng)]);
  }

  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> cuts(k - 1);
  for (double& c : cuts) c = unif(eng);
  std::sort(cuts.begin(), cuts.end());
  cuts.insert(cuts.begin(), 0.0);
  cuts.push_back(1.0);

  std::bernoulli_distribution coin(0.5);
  std::vector<double> f(dict.dim(), 0.0);
  A1Sample s{CoefVector::zeros(dict.dim()), {}};
  for (std::size_t i = 0; i < k; ++i) {
    const double w = (cuts[i + 1] - cuts[i]) * (coin(eng) ? 1.0 : -1.0);
    const auto a = dict.atom(idx[i]);
    for (std::size_t j = 0; j < f.size(); ++j) f[j] += w * a[j];
    s.combination.emplace_back(idx[i], w);
  }
  s.f = CoefVector(std::move(f));
  return s;
}

RateCheck verify_rate(const PursuitTrace& trace, double c, double alpha) {
  RateCheck r;
  for (const auto& st : trace.steps) {
    const double scale = std::pow(static_cast<double>(st.m), alpha);
    const double bound = c / scale;
    r.worst_margin = std::max(r.worst_margin, st.residual * scale / c);
    if (st.residual > bound && !r.first_violation) {
      r.holds = false;
      r.first_violation = st.m;
    }
  }
  return r;
}

void write_trace_csv(std::ostream& os, const PursuitTrace& trace) {
  os << "m,atom,sign,weight,residual\n";
  char buf[128];
  for (const auto& st : trace.steps) {
    std::snprintf(buf, sizeof buf, "%zu,%zu,%d,%.12g,%.12g\n", st.m, st.atom, st.sign, st.weight, st.residual);
    os << buf;
  }
}

}  // namespace greedylab
