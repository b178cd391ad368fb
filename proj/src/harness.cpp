#include "greedylab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <set>
#include <sstream>

#include "greedylab/dict_pursuit.hpp"
#include "greedylab/errors.hpp"
#include "greedylab/greedy_constants.hpp"
#include "greedylab/recursion_lab.hpp"
#include "greedylab/rng.hpp"
#include "greedylab/tga_engine.hpp"

namespace greedylab {

namespace {

using nlohmann::json;

// Typed access to a flat configuration object; records the effective
// value of every key so the report can echo it back.
class Params {
 public:
  Params(const json& j, std::set<std::string> allowed) : in_(j.is_null() ? json::object() : j) {
    if (!in_.is_object()) throw InvalidInput("config must be a JSON object");
    for (auto it = in_.begin(); it != in_.end(); ++it)
      if (!allowed.count(it.key())) throw InvalidInput("unknown config key \"" + it.key() + "\"");
  }

  template <class T>
  T get(const std::string& key, T def) {
    T v = def;
    if (in_.contains(key)) {
      try {
        v = in_.at(key).get<T>();
      } catch (const json::exception&) {
        throw InvalidInput("config key \"" + key + "\" has the wrong type");
      }
    }
    used_[key] = v;
    return v;
  }

  std::size_t count(const std::string& key, std::size_t def) {
    if (in_.contains(key) && !(in_.at(key).is_number_integer() || in_.at(key).is_number_unsigned()))
      throw InvalidInput("config key \"" + key + "\" must be an integer");
    if (in_.contains(key) && in_.at(key).get<long long>() < 0)
      throw InvalidInput("config key \"" + key + "\" must be nonnegative");
    return get<std::size_t>(key, def);
  }

  // Accepts an array of numbers or a comma separated string.
  std::vector<double> doubles(const std::string& key, std::vector<double> def) {
    std::vector<double> v = std::move(def);
    if (in_.contains(key)) {
      const auto& e = in_.at(key);
      v.clear();
      if (e.is_string()) {
        std::stringstream ss(e.get<std::string>());
        std::string tok;
        while (std::getline(ss, tok, ',')) {
          try {
            std::size_t used = 0;
            v.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
          } catch (const std::exception&) {
            throw InvalidInput("config key \"" + key + "\": bad number \"" + tok + "\"");
          }
        }
      } else if (e.is_array()) {
        for (const auto& x : e) {
          if (!x.is_number()) throw InvalidInput("config key \"" + key + "\" must hold numbers");
          v.push_back(x.get<double>());
        }
      } else if (e.is_number()) {
        v.push_back(e.get<double>());
      } else {
        throw InvalidInput("config key \"" + key + "\" must be a list of numbers");
      }
    }
    used_[key] = v;
    return v;
  }

  std::vector<std::string> strings(const std::string& key, std::vector<std::string> def) {
    std::vector<std::string> v = std::move(def);
    if (in_.contains(key)) {
      const auto& e = in_.at(key);
      v.clear();
      if (e.is_string()) {
        std::stringstream ss(e.get<std::string>());
        std::string tok;
        while (std::getline(ss, tok, ','))
          if (!tok.empty()) v.push_back(tok);
      } else if (e.is_array()) {
        for (const auto& x : e) {
          if (!x.is_string()) throw InvalidInput("config key \"" + key + "\" must hold strings");
          v.push_back(x.get<std::string>());
        }
      } else {
        throw InvalidInput("config key \"" + key + "\" must be a list of names");
      }
    }
    used_[key] = v;
    return v;
  }

  const json& used() const { return used_; }

 private:
  json in_;
  json used_ = json::object();
};

std::string fmt(double v) { return format_double(v); }

Assertion check(std::string invariant, bool passed, std::string detail) {
  return {std::move(invariant), passed, std::move(detail)};
}

// ---------------------------------------------------------------------------

ExperimentReport run_pursuit(const json& cfg) {
  Params p(cfg, {"algo", "alpha", "dict", "samples", "mmax", "seed", "k"});
  const auto algo = p.get<std::string>("algo", "rga");
  const double alpha = p.get<double>("alpha", 1.0);
  const auto dict_spec = p.get<std::string>("dict", "orthonormal:64");
  const std::size_t samples = p.count("samples", 200);
  const std::size_t mmax = p.count("mmax", 128);
  const auto seed = p.get<std::uint64_t>("seed", 7);
  if (algo != "pga" && algo != "rga" && algo != "power") throw InvalidInput("algo must be pga, rga or power");
  if (samples < 1) throw InvalidInput("samples must be >= 1");
  const Dictionary dict = Dictionary::parse(dict_spec);
  const std::size_t k = p.count("k", std::min<std::size_t>(dict.size(), 16));

  struct Run {
    A1Sample sample{CoefVector::zeros(1), {}};
    PursuitTrace trace;
  };
  const auto runs = kernels::map<Run>(
      samples,
      [&](std::size_t i) {
        Run r;
        r.sample = sample_a1(dict, k, stream_engine(seed, i)());
        if (algo == "pga")
          r.trace = run_pga(r.sample.f, dict, mmax);
        else if (algo == "rga")
          r.trace = run_rga(r.sample.f, dict, mmax);
        else
          r.trace = run_power_rga(r.sample.f, dict, mmax, alpha);
        return r;
      },
      kDefaultBackend);

  ExperimentReport rep;
  rep.experiment = "pursuit";
  rep.detail.header = {"sample", "m", "atom", "sign", "weight", "residual"};
  const bool relaxed = algo != "pga";
  const bool rate_declared = algo == "rga" || (algo == "power" && alpha == 1.0);
  std::size_t rate_violations = 0, approx_violations = 0, monotone_violations = 0, recon_violations = 0;
  std::size_t recursion_violations = 0, early_stops = 0;
  double worst_margin = 0.0, worst_recursion = 0.0;
  std::vector<double> max_res(mmax + 1, 0.0);
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& t = runs[i].trace;
    const auto rc = verify_rate(t, 2.0, 0.5);
    if (!rc.holds) ++rate_violations;
    worst_margin = std::max(worst_margin, rc.worst_margin);
    if (t.stop == StopReason::zero_residual) ++early_stops;
    std::vector<double> sq;
    for (std::size_t s = 0; s < t.steps.size(); ++s) {
      const auto& st = t.steps[s];
      rep.detail.add({std::to_string(i), std::to_string(st.m), std::to_string(st.atom), std::to_string(st.sign),
                      fmt(st.weight), fmt(st.residual)});
      max_res[st.m] = std::max(max_res[st.m], st.residual);
      if (relaxed && st.approximant_norm > 1.0 + 1e-12) ++approx_violations;
      if (s > 0 && st.residual > t.steps[s - 1].residual + 1e-12) ++monotone_violations;
      sq.push_back(st.residual * st.residual);
    }
    const auto pb = check_power_bound(sq, 4.0, 1.0);
    if (!pb.holds) ++recursion_violations;
    worst_recursion = std::max(worst_recursion, pb.max_ratio);
    double err = 0.0;
    for (std::size_t j = 0; j < t.approximant.size(); ++j)
      err = std::max(err, std::abs(t.approximant[j] + t.residual[j] - runs[i].sample.f[j]));
    if (err > 1e-9) ++recon_violations;
  }
  rep.assertions.push_back(check("dict_pursuit.approximant_plus_residual", recon_violations == 0,
                                 std::to_string(recon_violations) + " traces off by more than 1e-9"));
  if (algo == "pga")
    rep.assertions.push_back(check("dict_pursuit.pga_monotone", monotone_violations == 0,
                                   std::to_string(monotone_violations) + " increases"));
  if (relaxed)
    rep.assertions.push_back(check("dict_pursuit.approximant_norm_le_1", approx_violations == 0,
                                   std::to_string(approx_violations) + " steps above 1"));
  if (rate_declared) {
    rep.assertions.push_back(check("dict_pursuit.rga_rate_2_over_sqrt_m", rate_violations == 0,
                                   std::to_string(rate_violations) + " traces violate; worst residual*sqrt(m)/2 = " +
                                       fmt(worst_margin)));
    rep.assertions.push_back(check("recursion_lab.rga_squared_residuals_le_4_over_m", recursion_violations == 0,
                                   "max a_m m / 4 = " + fmt(worst_recursion)));
  }
  for (std::size_t m = 1; m <= mmax; ++m) {
    rep.plot.push_back({"max_residual", static_cast<double>(m), max_res[m]});
    rep.plot.push_back({"bound_2_over_sqrt_m", static_cast<double>(m), 2.0 / std::sqrt(static_cast<double>(m))});
  }
  rep.results = {{"dictionary_size", dict.size()},
                 {"dimension", dict.dim()},
                 {"rate_violations", rate_violations},
                 {"worst_rate_margin", worst_margin},
                 {"max_squared_residual_ratio", worst_recursion},
                 {"early_stops", early_stops}};
  rep.config = p.used();
  return rep;
}

// ---------------------------------------------------------------------------

ExperimentReport run_tga(const json& cfg) {
  Params p(cfg, {"space", "n", "m", "k", "tmax", "samples", "seed", "oracle_n"});
  const auto space = SpaceSpec::parse(p.get<std::string>("space", "lp:2"));
  const std::size_t n = p.count("n", 20);
  const std::size_t m = p.count("m", 5);
  const std::size_t k = p.count("k", 5);
  const std::size_t tmax = p.count("tmax", 8);
  const std::size_t samples = p.count("samples", 50);
  const auto seed = p.get<std::uint64_t>("seed", 1);
  const std::size_t on = p.count("oracle_n", 8);
  if (2 * m > n || 2 * k > n || m < 1 || k < 1) throw InvalidInput("need 1 <= m, k and 2m, 2k <= n");
  if (tmax < 1) throw InvalidInput("tmax must be >= 1");

  ExperimentReport rep;
  rep.experiment = "tga";
  rep.detail.header = {"sample", "m", "norm", "best_projection", "sigma", "greedy_residual", "chebyshev_residual"};

  // Discontinuity: f_t = ((t^2+1)/t^2) 1_A + 1_B, g_t = 1_A + ((t^2+1)/t^2) 1_B.
  const IndexSet a = IndexSet::range(0, m), b = IndexSet::range(m, 2 * m);
  const CoefVector one_a = indicator(a, n), one_b = indicator(b, n);
  const CoefVector one_ab = one_a + one_b;
  bool disc_ok = true;
  double gap_min = std::numeric_limits<double>::infinity();
  for (std::size_t t = 1; t <= tmax; ++t) {
    const double c = (double(t) * double(t) + 1.0) / (double(t) * double(t));
    const CoefVector f = c * one_a + one_b, g = one_a + c * one_b;
    const auto gf = greedy_sum(f, m), gg = greedy_sum(g, m);
    disc_ok = disc_ok && gf.set == a && gg.set == b && gf.sum == c * one_a && gg.sum == c * one_b;
    const double df = eval_norm(space, gf.sum - one_a), dg = eval_norm(space, gg.sum - one_b);
    const double din = eval_norm(space, f - one_ab);
    const double gap = eval_norm(space, gf.sum - gg.sum);
    gap_min = std::min(gap_min, gap);
    rep.plot.push_back({"dist_Gf_to_1A", double(t), df});
    rep.plot.push_back({"dist_Gg_to_1B", double(t), dg});
    rep.plot.push_back({"dist_f_to_1AuB", double(t), din});
    rep.plot.push_back({"dist_Gf_to_Gg", double(t), gap});
  }
  const double one_ab_gap = eval_norm(space, one_a - one_b);
  rep.assertions.push_back(check("tga_engine.greedy_sum_discontinuity", disc_ok && gap_min >= one_ab_gap,
                                 "G_m(f_t) = c_t 1_A and G_m(g_t) = c_t 1_B for t <= " + std::to_string(tmax) +
                                     "; min ||G_m(f_t) - G_m(g_t)|| = " + fmt(gap_min)));

  // Non-additivity: f = 1_[1..k] + sum_{j>k} j^-3 e_j, g = -1_[1..k] + sum_{j>k} j^-3 e_j.
  std::vector<double> fv(n), gv(n), expect(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double tail = 1.0 / std::pow(double(j + 1), 3);
    fv[j] = j < k ? 1.0 : tail;
    gv[j] = j < k ? -1.0 : tail;
    if (j >= k && j < 2 * k) expect[j] = 2.0 * tail;
  }
  const CoefVector f(fv), g(gv);
  const auto gf = greedy_sum(f, k).sum, gg = greedy_sum(g, k).sum, gfg = greedy_sum(f + g, k).sum;
  const IndexSet first_k = IndexSet::range(0, k);
  const bool nonlin = gf == indicator(first_k, n) && gg == (-1.0) * indicator(first_k, n) &&
                      gfg == CoefVector(expect) && (gf + gg).is_zero() && !gfg.is_zero();
  rep.assertions.push_back(check("tga_engine.greedy_sum_non_additive", nonlin,
                                 "G_k(f+g) = 2 sum_{k<j<=2k} j^-3 e_j while G_k(f) + G_k(g) = 0"));

  // Oracle chain and threshold property on random samples.
  SampleConfig sc;
  sc.n = on;
  sc.samples = samples;
  sc.seed = seed;
  const auto xs = draw_samples(sc);
  struct Row {
    std::vector<OracleResult> sigma, bp;
    std::vector<double> greedy, cheb;
    bool threshold = true;
  };
  const auto rows = kernels::map<Row>(
      xs.size(),
      [&](std::size_t i) {
        Row r;
        r.sigma = sigma_profile(space, xs[i], on, Backend::serial);
        r.bp = best_projection_profile(space, xs[i], on, Backend::serial);
        for (std::size_t mm = 0; mm <= on; ++mm) {
          const auto gs = greedy_sum(xs[i], mm);
          r.threshold = r.threshold && is_greedy_set(xs[i], gs.set) && gs.sum == project(xs[i], gs.set);
          r.greedy.push_back(projection_residual(space, xs[i].values(), gs.set));
          r.cheb.push_back(chebyshev_sum(space, xs[i], gs.set).residual);
        }
        return r;
      },
      kDefaultBackend);
  std::size_t chain_bad = 0, mono_bad = 0, cheb_bad = 0, thr_bad = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double norm = eval_norm(space, xs[i]);
    const auto& r = rows[i];
    thr_bad += !r.threshold;
    for (std::size_t mm = 0; mm <= on; ++mm) {
      chain_bad += !(r.sigma[mm].value <= r.bp[mm].value && r.bp[mm].value <= norm);
      if (mm > 0) mono_bad += !(r.sigma[mm].value <= r.sigma[mm - 1].value && r.bp[mm].value <= r.bp[mm - 1].value);
      cheb_bad += !(r.cheb[mm] <= r.greedy[mm]);
      rep.detail.add({std::to_string(i), std::to_string(mm), fmt(norm), fmt(r.bp[mm].value), fmt(r.sigma[mm].value),
                      fmt(r.greedy[mm]), fmt(r.cheb[mm])});
    }
  }
  rep.assertions.push_back(check("tga_engine.sigma_le_best_projection_le_norm", chain_bad == 0,
                                 std::to_string(chain_bad) + " violations"));
  rep.assertions.push_back(check("tga_engine.oracles_non_increasing_in_m", mono_bad == 0,
                                 std::to_string(mono_bad) + " violations"));
  rep.assertions.push_back(check("tga_engine.chebyshev_le_projection", cheb_bad == 0,
                                 std::to_string(cheb_bad) + " violations"));
  rep.assertions.push_back(check("tga_engine.greedy_threshold_property", thr_bad == 0,
                                 std::to_string(thr_bad) + " samples violate"));
  rep.results = {{"space", space.to_json()},
                 {"discontinuity_min_gap", gap_min},
                 {"oracle_samples", xs.size()},
                 {"nonlinearity_G_k_f_plus_g", gfg.vec()}};
  rep.config = p.used();
  return rep;
}

// ---------------------------------------------------------------------------

bool is_lp(const SpaceSpec& s) { return std::holds_alternative<LpSpace>(s.kind()); }

ExperimentReport run_constants(const json& cfg) {
  Params p(cfg, {"space", "n", "samples", "seed", "law", "mode", "constants", "lambdas", "m", "xd", "eps"});
  const auto space = SpaceSpec::parse(p.get<std::string>("space", "lp:2"));
  SampleConfig sc;
  sc.n = p.count("n", 8);
  sc.samples = p.count("samples", 100);
  sc.seed = p.get<std::uint64_t>("seed", 0);
  sc.law = sample_law_from_string(p.get<std::string>("law", "mixed"));
  sc.mode = sample_mode_from_string(p.get<std::string>("mode", "auto"));
  sc.validate();
  auto names = p.strings("constants", {"all"});
  const auto lambdas = p.doubles("lambdas", {});
  const std::size_t m = p.count("m", 2);
  const bool xd = p.get<bool>("xd", false);
  const auto eps = p.doubles("eps", {1e-2, 1e-3, 1e-4});

  const bool all = names.size() == 1 && names[0] == "all";
  if (all) {
    names = {"K", "Delta_d", "Delta_s", "C_qg"};
    if (sc.n <= kProjectionMaxDim && sc.n <= 16) names.push_back("C_al");
    if (sc.n <= kExhaustiveMaxDim) {
      names.push_back("C_g");
      names.push_back("C_sg");
    }
  }
  std::set<ConstantKind> want;
  for (const auto& nm : names) {
    const auto kind = constant_kind_from_string(nm);
    if (kind == ConstantKind::Clambda) throw InvalidInput("request C_lambda through \"lambdas\"");
    want.insert(kind);
  }
  if ((want.count(ConstantKind::Cg) || want.count(ConstantKind::Csg)) && sc.n > kExhaustiveMaxDim)
    throw CapacityError("C_g and C_sg need n <= " + std::to_string(kExhaustiveMaxDim) + " for the sigma_m oracle");
  if (want.count(ConstantKind::Cal) && sc.n > 16)
    throw CapacityError("C_al needs n <= 16 for the best projection oracle");

  ExperimentReport rep;
  rep.experiment = "constants";
  std::vector<ConstantEstimate> est;
  json extra = json::object();

  if (want.count(ConstantKind::K)) est.push_back(unconditionality_estimate(space, sc));
  std::optional<DemocracyProfile> dem;
  if (want.count(ConstantKind::DeltaD)) {
    dem = democracy_profile(space, sc.n, sc.seed);
    est.push_back(dem->delta);
    for (std::size_t k = 1; k <= sc.n; ++k) {
      rep.plot.push_back({"phi_upper", double(k), dem->upper[k]});
      rep.plot.push_back({"phi_lower", double(k), dem->lower[k]});
    }
    extra["democracy"] = {{"upper", dem->upper}, {"lower", dem->lower}, {"sets_tested", dem->sets_tested}};
  }
  std::optional<double> delta_s;
  if (want.count(ConstantKind::DeltaS)) {
    est.push_back(super_democracy_estimate(space, sc));
    delta_s = est.back().value;
  }
  const bool need_sigma = want.count(ConstantKind::Cg) || want.count(ConstantKind::Csg);
  const bool need_proj = want.count(ConstantKind::Cal) > 0;
  std::optional<GreedyFamily> fam;
  if (need_sigma || need_proj || want.count(ConstantKind::Cqg)) {
    RowOptions o;
    o.sigma = need_sigma;
    o.projection = need_proj;
    fam = summarize_rows(evaluate_samples(space, sc, o), sc.exhaustive());
    if (want.count(ConstantKind::Cqg)) est.push_back(fam->quasi);
    if (want.count(ConstantKind::Cal)) est.push_back(fam->almost);
    if (want.count(ConstantKind::Cg)) est.push_back(fam->greedy);
    if (want.count(ConstantKind::Csg)) est.push_back(fam->semi);
  }
  const std::size_t trivial_count = est.size();  // estimates whose families contain a ratio-1 candidate
  for (double lambda : lambdas) est.push_back(oversampling_estimate(space, sc, m, lambda));

  rep.detail.header = {"constant", "lambda", "value", "method", "sample_count", "evaluations"};
  json ests = json::array();
  std::size_t replay_bad = 0;
  double replay_worst = 0.0;
  for (const auto& e : est) {
    rep.detail.add({to_string(e.kind), e.kind == ConstantKind::Clambda ? fmt(e.lambda) : "", fmt(e.value), e.method,
                    std::to_string(e.sample_count), std::to_string(e.evaluations)});
    ests.push_back(e.to_json());
    const double dv = std::abs(replay_ratio(space, e) - e.value);
    replay_worst = std::max(replay_worst, dv);
    replay_bad += !(dv <= 1e-9);
    if (e.kind == ConstantKind::Clambda) rep.plot.push_back({"C_lambda", e.lambda, e.value});
  }
  rep.assertions.push_back(check("greedy_constants.witness_replay", replay_bad == 0,
                                 "max |replay - value| = " + fmt(replay_worst)));
  bool ge1 = true;
  for (std::size_t i = 0; i < trivial_count; ++i) ge1 = ge1 && est[i].value >= 1.0 - 1e-12;
  rep.assertions.push_back(check("greedy_constants.estimates_at_least_1", ge1, "trivial candidates give ratio 1"));
  if (fam && fam->chain_checks > 0)
    rep.assertions.push_back(check("greedy_constants.quasi_le_almost_le_greedy", fam->chain_violations == 0,
                                   std::to_string(fam->chain_checks) + " comparisons, " +
                                       std::to_string(fam->chain_violations) + " violations"));
  if (dem && delta_s)
    rep.assertions.push_back(check("greedy_constants.delta_s_ge_delta_d", *delta_s >= dem->delta.value,
                                   "Delta_s = " + fmt(*delta_s) + ", Delta_d = " + fmt(dem->delta.value)));
  if (is_lp(space)) {
    double worst = 0.0;
    for (std::size_t i = 0; i < trivial_count; ++i) worst = std::max(worst, std::abs(est[i].value - 1.0));
    rep.assertions.push_back(
        check("greedy_constants.lp_constants_equal_1", worst <= 1e-9, "max |estimate - 1| = " + fmt(worst)));
  }
  if (xd) {
    const auto r = xd_comparison(space, sc, eps);
    std::size_t failures = 0, images = 0;
    for (const auto& row : r.rows) {
      failures += row.bound_failures;
      images += row.images;
      rep.plot.push_back({"xd_agreement", row.eps, row.agreement});
    }
    rep.assertions.push_back(check("greedy_constants.xd_perturbation_bound", failures == 0,
                                   std::to_string(failures) + " of " + std::to_string(images) +
                                       " images exceed eps |supp| c2^p"));
    extra["xd"] = r.to_json();
  }
  extra["space"] = space.to_json();
  extra["estimates"] = ests;
  rep.results = extra;
  rep.config = p.used();
  return rep;
}

// ---------------------------------------------------------------------------

ExperimentReport run_recursion(const json& cfg) {
  Params p(cfg, {"A", "alphas", "mmax"});
  const double a = p.get<double>("A", 4.0);
  const auto alphas = p.doubles("alphas", {0.5, 1.0, 1.5});
  const std::size_t mmax = p.count("mmax", 1000000);
  const auto rows = alpha_sweep(a, alphas, mmax);

  ExperimentReport rep;
  rep.experiment = "recursion";
  rep.detail.header = {"alpha", "holds", "first_violation", "max_ratio", "m_max"};
  bool dichotomy = true;
  json table = json::array();
  for (const auto& r : rows) {
    const bool expected = r.alpha <= 1.0 ? r.check.holds : !r.check.holds;
    dichotomy = dichotomy && expected;
    const std::string fv = r.check.first_violation ? std::to_string(*r.check.first_violation) : "";
    rep.detail.add({fmt(r.alpha), r.check.holds ? "1" : "0", fv, fmt(r.check.max_ratio), std::to_string(r.m_max)});
    rep.plot.push_back({"max_ratio", r.alpha, r.check.max_ratio});
    table.push_back({{"alpha", r.alpha},
                     {"holds", r.check.holds},
                     {"first_violation", r.check.first_violation ? json(*r.check.first_violation) : json(nullptr)},
                     {"max_ratio", r.check.max_ratio},
                     {"m_max_insufficient", r.m_max_insufficient}});
  }
  rep.assertions.push_back(check("recursion_lab.threshold_alpha_le_1", dichotomy,
                                 "bound holds exactly for the alphas <= 1 and fails for those > 1"));
  rep.results = {{"rows", table}};
  rep.config = p.used();
  return rep;
}

ExperimentReport run_replay(const json& cfg) {
  Params p(cfg, {"file", "space"});
  const auto file = p.get<std::string>("file", "");
  if (file.empty()) throw InvalidInput("replay needs a witness file");
  json doc;
  try {
    doc = json::parse(read_file(file));
  } catch (const json::exception& e) {
    throw InvalidInput("replay: " + file + " is not valid JSON: " + e.what());
  }
  std::string space_text = p.get<std::string>("space", "");
  json list = json::array();
  if (doc.contains("results") && doc["results"].contains("estimates")) {
    list = doc["results"]["estimates"];
    if (space_text.empty() && doc["results"].contains("space")) space_text = doc["results"]["space"].dump();
  } else if (doc.is_array()) {
    list = doc;
  } else {
    list.push_back(doc);
  }
  if (space_text.empty()) throw InvalidInput("replay: no space given and none stored in the file");
  const auto space = SpaceSpec::parse(space_text);

  ExperimentReport rep;
  rep.experiment = "replay";
  rep.detail.header = {"constant", "stored", "replayed", "abs_diff"};
  std::size_t bad = 0;
  for (const auto& j : list) {
    const auto e = ConstantEstimate::from_json(j);
    const double v = replay_ratio(space, e);
    const double d = std::abs(v - e.value);
    bad += !(d <= 1e-9);
    rep.detail.add({to_string(e.kind), fmt(e.value), fmt(v), fmt(d)});
  }
  rep.assertions.push_back(check("greedy_constants.witness_replay", bad == 0,
                                 std::to_string(list.size()) + " witnesses, " + std::to_string(bad) + " off by > 1e-9"));
  rep.results = {{"space", space.to_json()}, {"witnesses", list.size()}};
  rep.config = p.used();
  return rep;
}

}  // namespace

bool ExperimentReport::all_passed() const { return first_failure() == nullptr; }

const Assertion* ExperimentReport::first_failure() const {
  for (const auto& a : assertions)
    if (!a.passed) return &a;
  return nullptr;
}

nlohmann::json ExperimentReport::summary() const {
  json as = json::array();
  for (const auto& a : assertions) as.push_back({{"invariant", a.invariant}, {"passed", a.passed}, {"detail", a.detail}});
  return {{"experiment", experiment},
          {"config", config},
          {"results", results},
          {"assertions", as},
          {"passed", all_passed()},
          {"detail_rows", detail.rows.size()}};
}

ExperimentReport run_experiment(const std::string& experiment, const nlohmann::json& config) {
  if (experiment == "pursuit") return run_pursuit(config);
  if (experiment == "tga") return run_tga(config);
  if (experiment == "constants") return run_constants(config);
  if (experiment == "recursion") return run_recursion(config);
  if (experiment == "replay") return run_replay(config);
  throw InvalidInput("unknown experiment \"" + experiment + "\"");
}

void emit_report(const ExperimentReport& report, const std::filesystem::path& out_dir, bool plot_data) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create " + out_dir.string() + ": " + ec.message());
  write_file(out_dir / "summary.json", canonical_json(report.summary()));
  std::ostringstream csv;
  report.detail.write(csv);
  write_file(out_dir / "detail.csv", csv.str());
  if (plot_data) {
    std::ostringstream pc;
    plot_table(report.plot).write(pc);
    write_file(out_dir / "plot.csv", pc.str());
  }
}

}  // namespace greedylab
