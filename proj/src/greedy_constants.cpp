#include "greedylab/greedy_constants.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "greedylab/errors.hpp"
#include "greedylab/rng.hpp"
#include "greedylab/subsets.hpp"
#include "greedylab/tga_engine.hpp"

namespace greedylab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Keeps the first candidate reaching the running maximum, so a serial scan
// in sample order is deterministic regardless of how rows were computed.
struct MaxTracker {
  double value = -std::numeric_limits<double>::infinity();
  Witness witness;
  bool found = false;

  bool offer(double v) { return v == v && (!found || v > value); }
  void take(double v, Witness w) {
    value = v;
    witness = std::move(w);
    found = true;
  }
};

ConstantEstimate finish(ConstantKind kind, const MaxTracker& t, bool exhaustive, std::size_t samples,
                        std::size_t evaluations) {
  ConstantEstimate e;
  e.kind = kind;
  e.value = t.found ? t.value : 0.0;
  e.witness = t.witness;
  e.method = exhaustive ? "exhaustive" : "sampled";
  e.sample_count = samples;
  e.evaluations = evaluations;
  return e;
}

Witness vector_witness(const CoefVector& x, std::vector<IndexSet> sets) {
  Witness w;
  w.n = x.size();
  w.x = x.vec();
  w.sets = std::move(sets);
  return w;
}

double residual_after(const SpaceSpec& space, const CoefVector& x, const IndexSet& a) {
  return projection_residual(space, x.values(), a);
}

nlohmann::json set_json(const IndexSet& s) { return s.indices(); }

IndexSet set_from_json(const nlohmann::json& j) { return IndexSet(j.get<std::vector<std::size_t>>()); }

IndexSet mask_set(std::uint64_t mask) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; mask != 0; ++i, mask >>= 1)
    if (mask & 1u) idx.push_back(i);
  return IndexSet(std::move(idx));
}

std::vector<int> mask_signs(std::size_t size, std::uint64_t bits) {
  std::vector<int> s(size);
  for (std::size_t i = 0; i < size; ++i) s[i] = ((bits >> i) & 1u) ? -1 : 1;
  return s;
}

double signed_indicator_norm(const SpaceSpec& space, const IndexSet& a, const std::vector<int>& signs,
                             std::size_t n, std::vector<double>& buf) {
  buf.assign(n, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) buf[a.indices()[i]] = signs[i];
  return norm_of(space, buf);
}

double indicator_norm(const SpaceSpec& space, const IndexSet& a, std::size_t n, std::vector<double>& buf) {
  buf.assign(n, 0.0);
  for (auto i : a) buf[i] = 1.0;
  return norm_of(space, buf);
}

// Set families for democracy-type constants when full enumeration is out
// of reach: for each size, prefixes, suffixes, even and odd positions,
// windows and seeded random sets.
std::vector<IndexSet> structured_sets(std::size_t n, std::uint64_t seed) {
  std::vector<IndexSet> out;
  auto g = stream_engine(seed, 0x5e75);
  std::vector<std::size_t> perm(n);
  for (std::size_t s = 1; s <= n; ++s) {
    out.push_back(IndexSet::range(0, s));
    out.push_back(IndexSet::range(n - s, n));
    if (2 * s - 1 <= n) {
      std::vector<std::size_t> ev, od;
      for (std::size_t k = 0; k < s; ++k) ev.push_back(2 * k);
      out.emplace_back(std::move(ev));
      if (2 * s <= n) {
        for (std::size_t k = 0; k < s; ++k) od.push_back(2 * k + 1);
        out.emplace_back(std::move(od));
      }
    }
    for (std::size_t off : {n / 4, n / 2})
      if (off + s <= n && off > 0) out.push_back(IndexSet::range(off, off + s));
    for (int r = 0; r < 4; ++r) {
      std::iota(perm.begin(), perm.end(), std::size_t{0});
      std::shuffle(perm.begin(), perm.end(), g);
      out.push_back(IndexSet::from_unsorted({perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(s)}));
    }
  }
  return out;
}

constexpr std::size_t kAllSetsMaxDim = 20;

// max_{m <= m'} upper[m] / lower[m'] with the first maximiser.
struct RatioPick {
  double value = 0.0;
  std::size_t m = 0, m2 = 0;
  bool found = false;
};

RatioPick max_cross_ratio(const std::vector<double>& upper, const std::vector<double>& lower) {
  RatioPick best;
  for (std::size_t m = 1; m < upper.size(); ++m) {
    if (!(upper[m] > 0.0)) continue;
    for (std::size_t m2 = m; m2 < lower.size(); ++m2) {
      if (!(lower[m2] > 0.0)) continue;
      const double r = upper[m] / lower[m2];
      if (!best.found || r > best.value) best = {r, m, m2, true};
    }
  }
  return best;
}

}  // namespace

// ---------------------------------------------------------------------------

nlohmann::json ConstantEstimate::to_json() const {
  nlohmann::json sets = nlohmann::json::array();
  for (const auto& s : witness.sets) sets.push_back(set_json(s));
  nlohmann::json w = {{"n", witness.n}, {"x", witness.x}, {"sets", sets}, {"signs", witness.signs}};
  if (kind == ConstantKind::Clambda) w["m"] = witness.m;
  nlohmann::json j = {{"name", to_string(kind)},
                      {"value", value},
                      {"witness", w},
                      {"method", method},
                      {"sample_count", sample_count},
                      {"evaluations", evaluations}};
  if (kind == ConstantKind::Clambda) j["lambda"] = lambda;
  return j;
}

ConstantEstimate ConstantEstimate::from_json(const nlohmann::json& j) {
  try {
    ConstantEstimate e;
    e.kind = constant_kind_from_string(j.at("name").get<std::string>());
    e.value = j.at("value").get<double>();
    e.method = j.value("method", std::string("sampled"));
    e.sample_count = j.value("sample_count", std::size_t{0});
    e.evaluations = j.value("evaluations", std::size_t{0});
    e.lambda = j.value("lambda", 0.0);
    const auto& w = j.at("witness");
    e.witness.n = w.at("n").get<std::size_t>();
    e.witness.x = w.value("x", std::vector<double>{});
    for (const auto& s : w.at("sets")) e.witness.sets.push_back(set_from_json(s));
    e.witness.signs = w.value("signs", std::vector<std::vector<int>>{});
    e.witness.m = w.value("m", std::size_t{0});
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw InvalidInput(std::string("ConstantEstimate: malformed JSON: ") + ex.what());
  }
}

double replay_ratio(const SpaceSpec& space, const ConstantEstimate& e) {
  const auto& w = e.witness;
  auto need_sets = [&](std::size_t k) {
    if (w.sets.size() < k) throw InvalidInput("replay: witness lacks index sets");
  };
  switch (e.kind) {
    case ConstantKind::DeltaD: {
      need_sets(2);
      std::vector<double> buf;
      return indicator_norm(space, w.sets[0], w.n, buf) / indicator_norm(space, w.sets[1], w.n, buf);
    }
    case ConstantKind::DeltaS: {
      need_sets(2);
      if (w.signs.size() < 2) throw InvalidInput("replay: witness lacks sign patterns");
      const double a = eval_norm(space, indicator(w.sets[0], SignPattern(w.sets[0], w.signs[0]), w.n));
      const double b = eval_norm(space, indicator(w.sets[1], SignPattern(w.sets[1], w.signs[1]), w.n));
      return a / b;
    }
    default:
      break;
  }
  need_sets(1);
  const CoefVector x(w.x);
  const IndexSet& a = w.sets[0];
  const double num = residual_after(space, x, a);
  switch (e.kind) {
    case ConstantKind::K:
    case ConstantKind::Cqg:
      return num / eval_norm(space, x);
    case ConstantKind::Cal:
      return num / best_projection_error(space, x, a.size(), Backend::serial).value;
    case ConstantKind::Cg:
      return num / sigma_m_oracle(space, x, a.size(), Backend::serial).value;
    case ConstantKind::Csg:
      return chebyshev_sum(space, x, a).residual / sigma_m_oracle(space, x, a.size(), Backend::serial).value;
    case ConstantKind::Clambda: {
      const double s = sigma_m_oracle(space, x, w.m, Backend::serial).value;
      return num == 0.0 ? 0.0 : num / s;
    }
    default:
      throw InvalidInput("replay: unsupported constant");
  }
}

// ---------------------------------------------------------------------------

SampleRow evaluate_sample(const SpaceSpec& space, const CoefVector& x, const RowOptions& opts) {
  SampleRow row;
  row.x = x;
  row.norm = eval_norm(space, x);
  const std::size_t s = x.support().size();
  if (s == 0) return row;
  const std::size_t top = s - 1;
  if (opts.projection)
    for (const auto& r : best_projection_profile(space, x, top, Backend::serial)) row.best_projection.push_back(r.value);
  if (opts.sigma)
    for (const auto& r : sigma_profile(space, x, top, Backend::serial)) row.sigma.push_back(r.value);

  for (std::size_t m = 0; m <= top; ++m) {
    std::vector<IndexSet> sets;
    if (opts.canonical_only) {
      sets.push_back(greedy_sum(x, m).set);
    } else {
      sets = greedy_sets(x, m, opts.tie_cap);
      if (sets.size() >= opts.tie_cap) row.tie_capped = true;
    }
    for (auto& a : sets) {
      GreedyEntry e;
      e.projection_residual = residual_after(space, x, a);
      e.chebyshev_residual = opts.sigma ? chebyshev_sum(space, x, a).residual : kNaN;
      e.quasi = e.projection_residual / row.norm;
      e.almost = opts.projection ? e.projection_residual / row.best_projection[m] : kNaN;
      e.greedy = opts.sigma ? e.projection_residual / row.sigma[m] : kNaN;
      e.semi = opts.sigma ? e.chebyshev_residual / row.sigma[m] : kNaN;
      e.set = std::move(a);
      row.entries.push_back(std::move(e));
    }
  }
  return row;
}

std::vector<SampleRow> evaluate_samples(const SpaceSpec& space, const SampleConfig& cfg, const RowOptions& opts) {
  cfg.validate();
  return kernels::map<SampleRow>(
      cfg.samples, [&](std::size_t i) { return evaluate_sample(space, draw_sample(cfg, i), opts); }, cfg.backend);
}

GreedyFamily summarize_rows(const std::vector<SampleRow>& rows, bool exhaustive) {
  MaxTracker q, al, g, sg;
  GreedyFamily f;
  std::size_t evals = 0;
  bool capped = false;
  for (const auto& row : rows) {
    capped = capped || row.tie_capped;
    for (const auto& e : row.entries) {
      ++evals;
      if (q.offer(e.quasi)) q.take(e.quasi, vector_witness(row.x, {e.set}));
      if (al.offer(e.almost)) al.take(e.almost, vector_witness(row.x, {e.set}));
      if (g.offer(e.greedy)) g.take(e.greedy, vector_witness(row.x, {e.set}));
      if (sg.offer(e.semi)) sg.take(e.semi, vector_witness(row.x, {e.set}));
      if (e.almost == e.almost) {
        ++f.chain_checks;
        if (!(e.quasi <= e.almost)) ++f.chain_violations;
      }
      if (e.greedy == e.greedy) {
        ++f.chain_checks;
        if (!(e.almost != e.almost || e.almost <= e.greedy)) ++f.chain_violations;
      }
    }
  }
  const bool ex = exhaustive && !capped;
  f.quasi = finish(ConstantKind::Cqg, q, ex, rows.size(), evals);
  f.almost = finish(ConstantKind::Cal, al, ex, rows.size(), evals);
  f.greedy = finish(ConstantKind::Cg, g, ex, rows.size(), evals);
  f.semi = finish(ConstantKind::Csg, sg, ex, rows.size(), evals);
  return f;
}

GreedyFamily greedy_family_estimates(const SpaceSpec& space, const SampleConfig& cfg) {
  const auto rows = evaluate_samples(space, cfg, RowOptions{});
  return summarize_rows(rows, cfg.exhaustive());
}

ConstantEstimate quasi_greedy_estimate(const SpaceSpec& space, const SampleConfig& cfg) {
  RowOptions o;
  o.projection = false;
  o.sigma = false;
  return summarize_rows(evaluate_samples(space, cfg, o), cfg.exhaustive()).quasi;
}

ConstantEstimate almost_greedy_estimate(const SpaceSpec& space, const SampleConfig& cfg) {
  RowOptions o;
  o.sigma = false;
  return summarize_rows(evaluate_samples(space, cfg, o), cfg.exhaustive()).almost;
}

ConstantEstimate greedy_estimate(const SpaceSpec& space, const SampleConfig& cfg) {
  RowOptions o;
  o.projection = false;
  return summarize_rows(evaluate_samples(space, cfg, o), cfg.exhaustive()).greedy;
}

ConstantEstimate semi_greedy_estimate(const SpaceSpec& space, const SampleConfig& cfg) {
  RowOptions o;
  o.projection = false;
  return summarize_rows(evaluate_samples(space, cfg, o), cfg.exhaustive()).semi;
}

// ---------------------------------------------------------------------------

double projection_ratio(const SpaceSpec& space, const CoefVector& x, const IndexSet& b) {
  return eval_norm(space, project(x, b)) / eval_norm(space, x);
}

ConstantEstimate unconditionality_estimate(const SpaceSpec& space, const SampleConfig& cfg) {
  cfg.validate();
  const bool exhaustive = cfg.exhaustive();
  struct Local {
    double value = 0.0;
    IndexSet set;
    std::size_t evals = 0;
  };
  auto per_sample = [&](std::size_t i) {
    const CoefVector x = draw_sample(cfg, i);
    const auto supp = x.support();
    const double norm = eval_norm(space, x);
    Local best;
    best.value = -1.0;
    std::vector<double> buf;
    auto offer = [&](const std::vector<std::size_t>& b) {
      buf.assign(x.values().begin(), x.values().end());
      for (auto p : b) buf[p] = 0.0;
      const double r = norm_of(space, buf) / norm;
      ++best.evals;
      if (r > best.value) {
        best.value = r;
        best.set = IndexSet(b);
      }
    };
    const std::size_t s = supp.size();
    if (s <= kExhaustiveMaxDim) {
      std::vector<std::size_t> b;
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << s); ++mask) {
        b.clear();
        for (std::size_t k = 0; k < s; ++k)
          if ((mask >> k) & 1u) b.push_back(supp[k]);
        offer(b);
      }
      return best;
    }
    std::vector<std::vector<std::size_t>> fam;
    std::vector<std::size_t> ev, od;
    for (std::size_t k = 0; k < s; ++k) (k % 2 == 0 ? ev : od).push_back(supp[k]);
    fam.push_back({});
    fam.push_back(ev);
    fam.push_back(od);
    for (std::size_t k = 1; k < s; ++k) {
      fam.emplace_back(supp.begin(), supp.begin() + static_cast<std::ptrdiff_t>(k));
      fam.emplace_back(supp.begin() + static_cast<std::ptrdiff_t>(k), supp.end());
    }
    auto g = stream_engine(cfg.seed ^ 0x9e3779b97f4a7c15ull, i);
    std::bernoulli_distribution half(0.5);
    for (int r = 0; r < 32; ++r) {
      std::vector<std::size_t> b, c;
      for (auto p : supp) (half(g) ? b : c).push_back(p);
      fam.push_back(std::move(b));
      fam.push_back(std::move(c));
    }
    for (const auto& b : fam) offer(b);
    // complements of the structured members are already present
    return best;
  };
  const auto locals = kernels::map<Local>(cfg.samples, per_sample, cfg.backend);
  MaxTracker t;
  std::size_t evals = 0;
  bool all_exhaustive = exhaustive;
  for (std::size_t i = 0; i < locals.size(); ++i) {
    evals += locals[i].evals;
    if (t.offer(locals[i].value)) t.take(locals[i].value, vector_witness(draw_sample(cfg, i), {locals[i].set}));
    if (draw_sample(cfg, i).support().size() > kExhaustiveMaxDim) all_exhaustive = false;
  }
  return finish(ConstantKind::K, t, all_exhaustive, cfg.samples, evals);
}

// ---------------------------------------------------------------------------

DemocracyProfile democracy_profile(const SpaceSpec& space, std::size_t n, std::uint64_t seed, Backend backend) {
  if (n < 1) throw InvalidInput("democracy_profile: n must be >= 1");
  DemocracyProfile prof;
  prof.upper.assign(n + 1, 0.0);
  prof.lower.assign(n + 1, 0.0);
  prof.upper_sets.assign(n + 1, IndexSet{});
  prof.lower_sets.assign(n + 1, IndexSet{});
  std::vector<bool> seen(n + 1, false);

  auto record = [&](const IndexSet& a, double v) {
    const std::size_t m = a.size();
    if (m == 0) return;
    if (!seen[m] || v > prof.upper[m]) {
      prof.upper[m] = v;
      prof.upper_sets[m] = a;
    }
    if (!seen[m] || v < prof.lower[m]) {
      prof.lower[m] = v;
      prof.lower_sets[m] = a;
    }
    seen[m] = true;
  };

  if (n <= kAllSetsMaxDim) {
    prof.exhaustive = true;
    const std::uint64_t total = std::uint64_t{1} << n;
    const auto norms = kernels::map<double>(
        static_cast<std::size_t>(total),
        [&](std::size_t mask) {
          std::vector<double> buf;
          return indicator_norm(space, mask_set(mask), n, buf);
        },
        backend);
    for (std::uint64_t mask = 1; mask < total; ++mask) {
      const auto m = static_cast<std::size_t>(std::popcount(mask));
      const double v = norms[mask];
      if (!seen[m] || v > prof.upper[m]) {
        prof.upper[m] = v;
        prof.upper_sets[m] = mask_set(mask);
      }
      if (!seen[m] || v < prof.lower[m]) {
        prof.lower[m] = v;
        prof.lower_sets[m] = mask_set(mask);
      }
      seen[m] = true;
    }
    prof.sets_tested = static_cast<std::size_t>(total - 1);
  } else {
    const auto fam = structured_sets(n, seed);
    const auto norms = kernels::map<double>(
        fam.size(),
        [&](std::size_t i) {
          std::vector<double> buf;
          return indicator_norm(space, fam[i], n, buf);
        },
        backend);
    for (std::size_t i = 0; i < fam.size(); ++i) record(fam[i], norms[i]);
    prof.sets_tested = fam.size();
  }

  const auto pick = max_cross_ratio(prof.upper, prof.lower);
  MaxTracker t;
  if (pick.found) {
    Witness w;
    w.n = n;
    w.sets = {prof.upper_sets[pick.m], prof.lower_sets[pick.m2]};
    t.take(pick.value, std::move(w));
  }
  prof.delta = finish(ConstantKind::DeltaD, t, prof.exhaustive, 0, prof.sets_tested);
  return prof;
}

ConstantEstimate super_democracy_estimate(const SpaceSpec& space, const SampleConfig& cfg) {
  cfg.validate();
  const std::size_t n = cfg.n;
  const bool all_signs = n <= kExhaustiveMaxDim;
  std::vector<IndexSet> fam;
  if (n <= kAllSetsMaxDim) {
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) fam.push_back(mask_set(mask));
  } else {
    fam = structured_sets(n, cfg.seed);
  }

  struct Extremes {
    double hi = 0.0, lo = 0.0;
    std::vector<int> hi_signs, lo_signs;
    std::size_t evals = 0;
  };
  auto per_set = [&](std::size_t i) {
    const IndexSet& a = fam[i];
    const std::size_t m = a.size();
    std::vector<std::vector<int>> patterns;
    if (all_signs) {
      for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << m); ++bits) patterns.push_back(mask_signs(m, bits));
    } else {
      patterns.push_back(std::vector<int>(m, 1));
      std::vector<int> alt(m);
      for (std::size_t k = 0; k < m; ++k) alt[k] = k % 2 == 0 ? 1 : -1;
      patterns.push_back(alt);
      auto g = stream_engine(cfg.seed, 0x51'0000'0000ull + i);
      std::bernoulli_distribution half(0.5);
      for (int r = 0; r < 3; ++r) {
        std::vector<int> s(m);
        for (auto& e : s) e = half(g) ? 1 : -1;
        patterns.push_back(std::move(s));
      }
    }
    Extremes ex;
    std::vector<double> buf;
    for (std::size_t k = 0; k < patterns.size(); ++k) {
      const double v = signed_indicator_norm(space, a, patterns[k], n, buf);
      if (k == 0 || v > ex.hi) {
        ex.hi = v;
        ex.hi_signs = patterns[k];
      }
      if (k == 0 || v < ex.lo) {
        ex.lo = v;
        ex.lo_signs = patterns[k];
      }
      ++ex.evals;
    }
    return ex;
  };
  const auto per = kernels::map<Extremes>(fam.size(), per_set, cfg.backend);

  std::vector<double> upper(n + 1, 0.0), lower(n + 1, 0.0);
  std::vector<std::size_t> up_at(n + 1, 0), lo_at(n + 1, 0);
  std::vector<bool> seen(n + 1, false);
  std::size_t evals = 0;
  for (std::size_t i = 0; i < fam.size(); ++i) {
    const std::size_t m = fam[i].size();
    evals += per[i].evals;
    if (!seen[m] || per[i].hi > upper[m]) {
      upper[m] = per[i].hi;
      up_at[m] = i;
    }
    if (!seen[m] || per[i].lo < lower[m]) {
      lower[m] = per[i].lo;
      lo_at[m] = i;
    }
    seen[m] = true;
  }
  const auto pick = max_cross_ratio(upper, lower);
  MaxTracker t;
  if (pick.found) {
    Witness w;
    w.n = n;
    w.sets = {fam[up_at[pick.m]], fam[lo_at[pick.m2]]};
    w.signs = {per[up_at[pick.m]].hi_signs, per[lo_at[pick.m2]].lo_signs};
    t.take(pick.value, std::move(w));
  }
  return finish(ConstantKind::DeltaS, t, all_signs, 0, evals);
}

ConstantEstimate oversampling_estimate(const SpaceSpec& space, const SampleConfig& cfg, std::size_t m,
                                       double lambda) {
  cfg.validate();
  const std::size_t size = oversampled_size(m, lambda);
  if (size > cfg.n) throw InvalidInput("oversampling: ceil(lambda m) exceeds n");
  const auto results = kernels::map<OversampleResult>(
      cfg.samples,
      [&](std::size_t i) { return oversampled_greedy_error(space, draw_sample(cfg, i), m, lambda, Backend::serial); },
      cfg.backend);
  MaxTracker t;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    if (r.infinite) throw CapacityError("oversampling: sigma_m vanished with a nonzero greedy residual");
    if (t.offer(r.ratio)) {
      auto w = vector_witness(draw_sample(cfg, i), {r.greedy_set});
      w.m = m;
      t.take(r.ratio, std::move(w));
    }
  }
  auto e = finish(ConstantKind::Clambda, t, false, cfg.samples, cfg.samples);
  e.lambda = lambda;
  return e;
}

// ---------------------------------------------------------------------------

CoefVector xd_perturb(const CoefVector& x, double eps, double p, const IndexSet& first) {
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidInput("xd_perturb: eps must lie in (0,1)");
  if (!(p > 0.0)) throw InvalidInput("xd_perturb: p must be positive");
  if (!first.empty() && first.back() >= x.size()) throw InvalidInput("xd_perturb: index out of range");
  std::vector<std::size_t> rank(x.size());
  std::size_t next = 1;
  for (auto j : first) rank[j] = next++;
  for (std::size_t j = 0; j < x.size(); ++j)
    if (!first.contains(j)) rank[j] = next++;
  std::vector<double> v = x.vec();
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (v[j] == 0.0) continue;
    const double bump = std::pow(eps, static_cast<double>(rank[j]) / p);
    v[j] += v[j] > 0.0 ? bump : -bump;
  }
  return CoefVector(std::move(v));
}

namespace {

// ||sum_A (1 - eps^(j/p)) e_j|| / ||sum_B (1 + eps^(j/p)) e_j|| over
// disjoint A, B with 0 < |A| <= |B|; every such x lies in X_d and its
// greedy set of size |B| is B.
double democracy_from_xd(const SpaceSpec& space, std::size_t n, double eps, double p, std::uint64_t seed) {
  std::vector<double> bump(n);
  for (std::size_t j = 0; j < n; ++j) bump[j] = std::pow(eps, static_cast<double>(j + 1) / p);
  std::vector<double> a(n), b(n);
  double best = 0.0;
  auto offer = [&](const std::vector<int>& label) {  // 1 -> A, 2 -> B
    std::size_t na = 0, nb = 0;
    for (std::size_t j = 0; j < n; ++j) {
      a[j] = label[j] == 1 ? 1.0 - bump[j] : 0.0;
      b[j] = label[j] == 2 ? 1.0 + bump[j] : 0.0;
      na += label[j] == 1;
      nb += label[j] == 2;
    }
    if (na == 0 || na > nb) return;
    best = std::max(best, norm_of(space, a) / norm_of(space, b));
  };
  std::vector<int> label(n, 0);
  if (n <= 10) {
    std::size_t total = 1;
    for (std::size_t j = 0; j < n; ++j) total *= 3;
    for (std::size_t code = 0; code < total; ++code) {
      std::size_t c = code;
      for (std::size_t j = 0; j < n; ++j, c /= 3) label[j] = static_cast<int>(c % 3);
      offer(label);
    }
    return best;
  }
  auto g = stream_engine(seed, 0xd3);
  std::uniform_int_distribution<int> tri(0, 2);
  for (std::size_t s = 1; 2 * s <= n; ++s) {
    for (std::size_t j = 0; j < n; ++j) label[j] = j < 2 * s ? (j % 2 == 0 ? 1 : 2) : 0;
    offer(label);
    for (std::size_t j = 0; j < n; ++j) label[j] = j < 2 * s ? (j % 2 == 0 ? 2 : 1) : 0;
    offer(label);
    for (std::size_t j = 0; j < n; ++j) label[j] = j < s ? 1 : j < 2 * s ? 2 : 0;
    offer(label);
  }
  for (int r = 0; r < 2000; ++r) {
    for (auto& l : label) l = tri(g);
    offer(label);
  }
  return best;
}

}  // namespace

XdReport xd_comparison(const SpaceSpec& space, const SampleConfig& cfg, const std::vector<double>& eps_schedule) {
  cfg.validate();
  XdReport rep;
  rep.p = space.convexity_exponent();
  const double c2 = basis_constants(space, cfg.n).c2;
  const auto samples = draw_samples(cfg);

  RowOptions unrestricted;
  unrestricted.sigma = false;
  const auto rows = kernels::map<SampleRow>(
      samples.size(), [&](std::size_t i) { return evaluate_sample(space, samples[i], unrestricted); }, cfg.backend);
  rep.unrestricted = summarize_rows(rows, cfg.exhaustive()).almost;

  struct Best {
    double value = -1.0;
    CoefVector image = CoefVector::zeros(1);
    IndexSet set;
  };
  struct Local {
    Best almost, quasi;
    std::size_t images = 0, in_xd = 0, preserved = 0, checks = 0, failures = 0, evals = 0;
    double slack = std::numeric_limits<double>::infinity();
  };
  for (double eps : eps_schedule) {
    // One image per (x, G): G takes the largest bumps, so it is the unique
    // greedy set of the image once eps is small enough.
    auto per_sample = [&](std::size_t i) {
      const CoefVector& x = samples[i];
      Local l;
      const std::size_t s = x.support().size();
      const double rhs = eps * static_cast<double>(s) * std::pow(c2, rep.p);
      for (std::size_t m = 0; m + 1 <= s; ++m) {
        for (const auto& g : greedy_sets(x, m, kTieCap)) {
          const CoefVector f = xd_perturb(x, eps, rep.p, g);
          ++l.images;
          l.in_xd += in_xd(f);
          l.preserved += is_greedy_set(f, g);
          const double lhs = std::pow(eval_norm(space, f - x), rep.p);
          ++l.checks;
          if (lhs > rhs * (1.0 + kAxiomRelTol)) ++l.failures;
          l.slack = std::min(l.slack, (rhs - lhs) / rhs);
          const double num = residual_after(space, f, g);
          const double almost = num / best_projection_error(space, f, m, Backend::serial).value;
          const double quasi = num / eval_norm(space, f);
          ++l.evals;
          if (almost > l.almost.value) l.almost = {almost, f, g};
          if (quasi > l.quasi.value) l.quasi = {quasi, f, g};
        }
      }
      return l;
    };
    const auto locals = kernels::map<Local>(samples.size(), per_sample, cfg.backend);
    XdEpsRow er;
    er.eps = eps;
    er.worst_bound_slack = std::numeric_limits<double>::infinity();
    MaxTracker al, qg;
    std::size_t evals = 0;
    for (const auto& l : locals) {
      er.images += l.images;
      er.images_in_xd += l.in_xd;
      er.greedy_preserved += l.preserved;
      er.bound_checks += l.checks;
      er.bound_failures += l.failures;
      er.worst_bound_slack = std::min(er.worst_bound_slack, l.slack);
      evals += l.evals;
      if (l.almost.value >= 0.0 && al.offer(l.almost.value))
        al.take(l.almost.value, vector_witness(l.almost.image, {l.almost.set}));
      if (l.quasi.value >= 0.0 && qg.offer(l.quasi.value))
        qg.take(l.quasi.value, vector_witness(l.quasi.image, {l.quasi.set}));
    }
    er.almost = finish(ConstantKind::Cal, al, false, samples.size(), evals);
    er.quasi = finish(ConstantKind::Cqg, qg, false, samples.size(), evals);
    er.agreement = rep.unrestricted.value / er.almost.value;
    er.democracy = democracy_from_xd(space, cfg.n, eps, rep.p, cfg.seed);
    rep.rows.push_back(std::move(er));
  }
  return rep;
}

nlohmann::json XdReport::to_json() const {
  nlohmann::json rs = nlohmann::json::array();
  for (const auto& r : rows)
    rs.push_back({{"eps", r.eps},
                  {"almost_xd", r.almost.to_json()},
                  {"quasi_xd", r.quasi.to_json()},
                  {"democracy_xd", r.democracy},
                  {"agreement", r.agreement},
                  {"images", r.images},
                  {"images_in_xd", r.images_in_xd},
                  {"greedy_preserved", r.greedy_preserved},
                  {"bound_checks", r.bound_checks},
                  {"bound_failures", r.bound_failures},
                  {"worst_bound_slack", r.worst_bound_slack}});
  return {{"p", p}, {"unrestricted", unrestricted.to_json()}, {"rows", rs}};
}

}  // namespace greedylab
