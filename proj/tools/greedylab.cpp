// Command-line front end: greedylab <pursuit|tga|constants|recursion|replay> [flags]

#include <cstdlib>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <omp.h>

#include "CLI11.hpp"
#include "greedylab/errors.hpp"
#include "greedylab/harness.hpp"
#include "greedylab/report.hpp"

namespace {

using nlohmann::json;

enum class Kind { integer, real, text, flag };

struct Flag {
  const char* name;
  const char* key;
  Kind kind;
  const char* help;
};

const std::map<std::string, std::vector<Flag>> kFlags = {
    {"pursuit",
     {{"--algo", "algo", Kind::text, "pga | rga | power"},
      {"--alpha", "alpha", Kind::real, "power for the relaxed weight 1/m^alpha"},
      {"--dict", "dict", Kind::text, "orthonormal:D | rotated:D[:S] | random:K:D[:S] | coherent:D | file"},
      {"--samples", "samples", Kind::integer, "number of A_1 samples"},
      {"--mmax", "mmax", Kind::integer, "iterations per run"},
      {"--seed", "seed", Kind::integer, "64-bit seed"},
      {"--k", "k", Kind::integer, "atoms per A_1 sample"}}},
    {"tga",
     {{"--space", "space", Kind::text, "lp:P | kt | c0 | dsum(a,b)"},
      {"--n", "n", Kind::integer, "dimension of the pathology examples"},
      {"--m", "m", Kind::integer, "greedy size for the discontinuity example"},
      {"--k", "k", Kind::integer, "greedy size for the non-additivity example"},
      {"--tmax", "tmax", Kind::integer, "largest t in ((t^2+1)/t^2) 1_A + 1_B"},
      {"--samples", "samples", Kind::integer, "random vectors for the oracle checks"},
      {"--seed", "seed", Kind::integer, "64-bit seed"},
      {"--oracle-n", "oracle_n", Kind::integer, "dimension of the oracle checks"}}},
    {"constants",
     {{"--space", "space", Kind::text, "lp:P | kt | c0 | dsum(a,b)"},
      {"--n", "n", Kind::integer, "dimension"},
      {"--samples", "samples", Kind::integer, "sample vectors"},
      {"--seed", "seed", Kind::integer, "64-bit seed"},
      {"--law", "law", Kind::text, "uniform | geometric | structured | mixed | alternating"},
      {"--mode", "mode", Kind::text, "auto | exhaustive | sampled"},
      {"--constants", "constants", Kind::text, "comma list of K,Delta_d,Delta_s,C_qg,C_al,C_g,C_sg or all"},
      {"--lambdas", "lambdas", Kind::text, "comma list of oversampling factors > 1"},
      {"--m", "m", Kind::integer, "target size for C_lambda"},
      {"--xd", "xd", Kind::flag, "run the X_d comparison"},
      {"--eps", "eps", Kind::text, "comma list of perturbation sizes"}}},
    {"recursion",
     {{"--A", "A", Kind::real, "initial value and numerator constant"},
      {"--alphas", "alphas", Kind::text, "comma list of powers"},
      {"--mmax", "mmax", Kind::integer, "sequence length"}}},
    {"replay",
     {{"--file", "file", Kind::text, "summary.json or estimate JSON holding witnesses"},
      {"--space", "space", Kind::text, "override the stored space"}}},
};

const std::map<std::string, std::string> kAbout = {
    {"pursuit", "PGA / RGA / power-RGA runs on A_1 samples and the 2/sqrt(m) rate check"},
    {"tga", "thresholding pathologies and the sigma / best-projection / Chebyshev oracles"},
    {"constants", "witnessed lower bounds for K, Delta_d, Delta_s, C_qg, C_al, C_g, C_sg, C_lambda"},
    {"recursion", "extremal sequences of the power recursion and the alpha <= 1 threshold"},
    {"replay", "recompute stored witnesses and compare against their values"},
};

json convert(const Flag& f, const std::string& raw) {
  try {
    std::size_t used = 0;
    switch (f.kind) {
      case Kind::integer: {
        if (!raw.empty() && raw[0] == '-') throw std::invalid_argument(raw);
        const unsigned long long v = std::stoull(raw, &used);
        if (used != raw.size()) throw std::invalid_argument(raw);
        return v;
      }
      case Kind::real: {
        const double v = std::stod(raw, &used);
        if (used != raw.size()) throw std::invalid_argument(raw);
        return v;
      }
      case Kind::flag:
        return true;
      case Kind::text:
        return raw;
    }
  } catch (const std::exception&) {
    throw greedylab::InvalidInput(std::string(f.name) + ": invalid value \"" + raw + "\"");
  }
  return raw;
}

void cap_threads() {
  const char* env = std::getenv("GREEDYLAB_THREADS");
  if (!env || !*env) return;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1) throw greedylab::InvalidInput("GREEDYLAB_THREADS must be a positive integer");
  omp_set_num_threads(static_cast<int>(std::min<long>(v, omp_get_max_threads())));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Greedy approximation laboratory"};
  app.require_subcommand(0, 1);
  std::string config_path, out_dir = "out", replay_file;
  bool plot_data = false;
  app.add_option("--config", config_path, "JSON file with experiment settings; flags override it");
  app.add_option("--out", out_dir, "output directory for summary.json and detail.csv");
  app.add_flag("--plot-data", plot_data, "also write plot.csv (series,x,y)");
  app.add_option("--replay", replay_file, "recompute the witnesses stored in a file");

  std::map<std::string, CLI::App*> subs;
  std::map<std::string, std::map<std::string, std::string>> raw;
  std::map<std::string, std::map<std::string, bool>> flags;
  for (const auto& [name, list] : kFlags) {
    auto* sub = app.add_subcommand(name, kAbout.at(name));
    sub->fallthrough();
    subs[name] = sub;
    for (const auto& f : list) {
      if (f.kind == Kind::flag)
        sub->add_flag(f.name, flags[name][f.key], f.help);
      else
        sub->add_option(f.name, raw[name][f.key], f.help);
    }
  }
  std::string replay_positional;
  subs["replay"]->add_option("path", replay_positional, "witness file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? greedylab::kExitOk : greedylab::kExitUsage;
  }

  try {
    cap_threads();
    std::string experiment;
    for (const auto& [name, sub] : subs)
      if (sub->parsed()) experiment = name;
    if (experiment.empty()) {
      if (replay_file.empty()) throw greedylab::InvalidInput("a subcommand is required (see --help)");
      experiment = "replay";
    }

    json cfg = json::object();
    if (!config_path.empty()) {
      try {
        cfg = json::parse(greedylab::read_file(config_path));
      } catch (const json::exception& e) {
        throw greedylab::InvalidInput(config_path + ": " + e.what());
      }
      if (!cfg.is_object()) throw greedylab::InvalidInput(config_path + ": expected a JSON object");
    }
    for (const auto& f : kFlags.at(experiment)) {
      auto* opt = subs[experiment]->get_option(f.name);
      if (opt->count() == 0) continue;
      cfg[f.key] = f.kind == Kind::flag ? json(true) : convert(f, raw[experiment][f.key]);
    }
    if (experiment == "replay") {
      if (!replay_positional.empty()) cfg["file"] = replay_positional;
      if (!replay_file.empty()) cfg["file"] = replay_file;
    }

    const auto report = greedylab::run_experiment(experiment, cfg);
    greedylab::emit_report(report, out_dir, plot_data);
    for (const auto& a : report.assertions)
      std::cout << (a.passed ? "ok   " : "FAIL ") << a.invariant << "  " << a.detail << "\n";
    std::cout << "wrote " << out_dir << "/summary.json\n";
    if (const auto* bad = report.first_failure()) {
      std::cerr << "assertion failed: " << bad->invariant << ": " << bad->detail << "\n";
      return greedylab::kExitAssertion;
    }
    return greedylab::kExitOk;
  } catch (const greedylab::InvalidInput& e) {
    std::cerr << "usage error: " << e.what() << "\n";
  } catch (const greedylab::CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return greedylab::kExitUsage;
}
