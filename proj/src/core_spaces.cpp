#include "greedylab/core_spaces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "greedylab/errors.hpp"

namespace greedylab {

CoefVector::CoefVector(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw InvalidInput("CoefVector: dimension must be >= 1");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (!std::isfinite(coeffs_[i])) {
      throw InvalidInput("CoefVector: non-finite entry at position " + std::to_string(i));
    }
  }
}

CoefVector CoefVector::zeros(std::size_t n) { return CoefVector(std::vector<double>(n, 0.0)); }

bool CoefVector::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](double v) { return v == 0.0; });
}

std::vector<std::size_t> CoefVector::support() const {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    if (coeffs_[i] != 0.0) s.push_back(i);
  return s;
}

namespace {

void require_same_size(const CoefVector& a, const CoefVector& b) {
  if (a.size() != b.size()) throw InvalidInput("CoefVector: dimension mismatch");
}

}  // namespace

CoefVector operator-(const CoefVector& a, const CoefVector& b) {
  require_same_size(a, b);
  std::vector<double> r(a.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] - b[i];
  return CoefVector(std::move(r));
}

CoefVector operator+(const CoefVector& a, const CoefVector& b) {
  require_same_size(a, b);
  std::vector<double> r(a.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] + b[i];
  return CoefVector(std::move(r));
}

CoefVector operator*(double t, const CoefVector& a) {
  std::vector<double> r(a.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = t * a[i];
  return CoefVector(std::move(r));
}

// ---------------------------------------------------------------------------

IndexSet::IndexSet(std::vector<std::size_t> sorted_indices) : idx_(std::move(sorted_indices)) {
  for (std::size_t i = 1; i < idx_.size(); ++i) {
    if (idx_[i] <= idx_[i - 1]) throw InvalidInput("IndexSet: indices must be strictly increasing");
  }
}

IndexSet IndexSet::from_unsorted(std::vector<std::size_t> indices) {
  std::sort(indices.begin(), indices.end());
  if (std::adjacent_find(indices.begin(), indices.end()) != indices.end())
    throw InvalidInput("IndexSet: duplicate index");
  return IndexSet(std::move(indices));
}

IndexSet IndexSet::range(std::size_t first, std::size_t last) {
  std::vector<std::size_t> v;
  for (std::size_t i = first; i < last; ++i) v.push_back(i);
  return IndexSet(std::move(v));
}

bool IndexSet::contains(std::size_t i) const { return std::binary_search(idx_.begin(), idx_.end(), i); }

IndexSet IndexSet::complement(std::size_t n) const {
  std::vector<std::size_t> c;
  std::size_t j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (j < idx_.size() && idx_[j] == i) {
      ++j;
    } else {
      c.push_back(i);
    }
  }
  return IndexSet(std::move(c));
}

SignPattern::SignPattern(IndexSet domain, std::vector<int> signs)
    : domain_(std::move(domain)), signs_(std::move(signs)) {
  if (signs_.size() != domain_.size()) throw InvalidInput("SignPattern: domain/sign count mismatch");
  for (int s : signs_)
    if (s != 1 && s != -1) throw InvalidInput("SignPattern: signs must be +1 or -1");
}

SignPattern SignPattern::constant(IndexSet domain, int sign) {
  std::vector<int> s(domain.size(), sign);
  return SignPattern(std::move(domain), std::move(s));
}

// ---------------------------------------------------------------------------

SpaceSpec SpaceSpec::lp(double p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw InvalidInput("SpaceSpec: Lp requires 0 < p < inf");
  return SpaceSpec(LpSpace{p});
}
SpaceSpec SpaceSpec::kt() { return SpaceSpec(KtSumming{}); }
SpaceSpec SpaceSpec::c0() { return SpaceSpec(C0Space{}); }
SpaceSpec SpaceSpec::direct_sum(SpaceSpec left, SpaceSpec right) {
  return SpaceSpec(DirectSumMax{std::make_shared<const SpaceSpec>(std::move(left)),
                                std::make_shared<const SpaceSpec>(std::move(right))});
}

double SpaceSpec::convexity_exponent() const {
  return std::visit(
      [](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, LpSpace>) {
          return std::min(k.p, 1.0);
        } else if constexpr (std::is_same_v<T, DirectSumMax>) {
          return std::min(k.left->convexity_exponent(), k.right->convexity_exponent());
        } else {
          return 1.0;
        }
      },
      kind_);
}

bool SpaceSpec::separable() const {
  return std::visit(
      [](const auto& k) -> bool {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, KtSumming>) {
          return false;
        } else if constexpr (std::is_same_v<T, DirectSumMax>) {
          return k.left->separable() && k.right->separable();
        } else {
          return true;
        }
      },
      kind_);
}

std::string SpaceSpec::describe() const {
  return std::visit(
      [](const auto& k) -> std::string {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, LpSpace>) {
          std::ostringstream os;
          os << "lp:" << k.p;
          return os.str();
        } else if constexpr (std::is_same_v<T, KtSumming>) {
          return "kt";
        } else if constexpr (std::is_same_v<T, C0Space>) {
          return "c0";
        } else {
          return "dsum(" + k.left->describe() + "," + k.right->describe() + ")";
        }
      },
      kind_);
}

nlohmann::json SpaceSpec::to_json() const {
  return std::visit(
      [](const auto& k) -> nlohmann::json {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, LpSpace>) {
          return {{"kind", "lp"}, {"p", k.p}};
        } else if constexpr (std::is_same_v<T, KtSumming>) {
          return {{"kind", "kt"}};
        } else if constexpr (std::is_same_v<T, C0Space>) {
          return {{"kind", "c0"}};
        } else {
          return {{"kind", "dsum"}, {"left", k.left->to_json()}, {"right", k.right->to_json()}};
        }
      },
      kind_);
}

SpaceSpec SpaceSpec::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw InvalidInput("SpaceSpec: JSON object with a \"kind\" string expected");
  const auto kind = j["kind"].get<std::string>();
  if (kind == "lp") {
    if (!j.contains("p") || !j["p"].is_number()) throw InvalidInput("SpaceSpec: lp needs numeric \"p\"");
    return lp(j["p"].get<double>());
  }
  if (kind == "kt") return kt();
  if (kind == "c0") return c0();
  if (kind == "dsum") {
    if (!j.contains("left") || !j.contains("right"))
      throw InvalidInput("SpaceSpec: dsum needs \"left\" and \"right\"");
    return direct_sum(from_json(j["left"]), from_json(j["right"]));
  }
  throw InvalidInput("SpaceSpec: unknown kind \"" + kind + "\"");
}

namespace {

class SpecParser {
 public:
  explicit SpecParser(const std::string& s) : s_(s) {}

  SpaceSpec parse_all() {
    auto spec = parse_one();
    if (pos_ != s_.size()) fail("trailing characters");
    return spec;
  }

 private:
  SpaceSpec parse_one() {
    if (consume("dsum(")) {
      auto left = parse_one();
      if (!consume(",")) fail("expected ','");
      auto right = parse_one();
      if (!consume(")")) fail("expected ')'");
      return SpaceSpec::direct_sum(std::move(left), std::move(right));
    }
    if (consume("kt")) return SpaceSpec::kt();
    if (consume("c0")) return SpaceSpec::c0();
    if (consume("lp:")) {
      std::size_t used = 0;
      double p = 0.0;
      try {
        p = std::stod(s_.substr(pos_), &used);
      } catch (const std::exception&) {
        fail("bad exponent");
      }
      pos_ += used;
      return SpaceSpec::lp(p);
    }
    fail("unknown space");
  }

  bool consume(const std::string& tok) {
    if (s_.compare(pos_, tok.size(), tok) == 0) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& why) const {
    throw InvalidInput("SpaceSpec: cannot parse \"" + s_ + "\" at " + std::to_string(pos_) + ": " + why);
  }

  std::string s_;
  std::size_t pos_ = 0;
};

}  // namespace

SpaceSpec SpaceSpec::parse(const std::string& text) {
  auto first = text.find_first_not_of(" \t");
  if (first != std::string::npos && text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw InvalidInput(std::string("SpaceSpec: invalid JSON: ") + e.what());
    }
    return from_json(j);
  }
  std::string compact;
  for (char c : text)
    if (c != ' ' && c != '\t') compact += c;
  return SpecParser(compact).parse_all();
}

// ---------------------------------------------------------------------------

void split_interleaved(std::span<const double> x, std::vector<double>& left, std::vector<double>& right) {
  left.clear();
  right.clear();
  for (std::size_t i = 0; i < x.size(); ++i) (i % 2 == 0 ? left : right).push_back(x[i]);
}

namespace {

// Sums are accumulated in index order without rescaling, so zeroing entries
// can never increase a computed Lp or KT l2 value.
double lp_norm(double p, std::span<const double> x) {
  double s = 0.0;
  if (p == 1.0) {
    for (double v : x) s += std::abs(v);
    return s;
  }
  if (p == 2.0) {
    for (double v : x) s += v * v;
    return std::sqrt(s);
  }
  if (p == 0.5) {
    for (double v : x) s += std::sqrt(std::abs(v));
    return s * s;
  }
  for (double v : x) s += std::pow(std::abs(v), p);
  return std::pow(s, 1.0 / p);
}

double kt_norm(std::span<const double> x) {
  double sq = 0.0;
  double partial = 0.0;
  double best_partial = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    sq += x[j] * x[j];
    partial += x[j] / std::sqrt(static_cast<double>(j + 1));
    best_partial = std::max(best_partial, std::abs(partial));
  }
  return std::max(std::sqrt(sq), best_partial);
}

}  // namespace

double norm_of(const SpaceSpec& space, std::span<const double> x) {
  return std::visit(
      [x](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, LpSpace>) {
          return lp_norm(k.p, x);
        } else if constexpr (std::is_same_v<T, KtSumming>) {
          return kt_norm(x);
        } else if constexpr (std::is_same_v<T, C0Space>) {
          double m = 0.0;
          for (double v : x) m = std::max(m, std::abs(v));
          return m;
        } else {
          std::vector<double> left, right;
          split_interleaved(x, left, right);
          return std::max(norm_of(*k.left, left), norm_of(*k.right, right));
        }
      },
      space.kind());
}

double eval_norm(const SpaceSpec& space, const CoefVector& x) { return norm_of(space, x.values()); }

namespace {

void check_within(const IndexSet& a, std::size_t n) {
  if (!a.empty() && a.back() >= n)
    throw InvalidInput("index " + std::to_string(a.back()) + " out of range for dimension " + std::to_string(n));
}

}  // namespace

CoefVector project(const CoefVector& x, const IndexSet& a) {
  check_within(a, x.size());
  std::vector<double> r(x.size(), 0.0);
  for (auto i : a) r[i] = x[i];
  return CoefVector(std::move(r));
}

double projection_residual(const SpaceSpec& space, std::span<const double> x, const IndexSet& a) {
  std::vector<double> r(x.begin(), x.end());
  for (auto i : a) r[i] = 0.0;
  return norm_of(space, r);
}

CoefVector indicator(const IndexSet& a, const SignPattern& eps, std::size_t n) {
  if (!(eps.domain() == a)) throw InvalidInput("indicator: sign pattern domain differs from index set");
  if (n == 0) throw InvalidInput("indicator: dimension must be >= 1");
  check_within(a, n);
  std::vector<double> r(n, 0.0);
  for (std::size_t k = 0; k < a.size(); ++k) r[a.indices()[k]] = eps.signs()[k];
  return CoefVector(std::move(r));
}

CoefVector indicator(const IndexSet& a, std::size_t n) { return indicator(a, SignPattern::constant(a), n); }

BasisConstants basis_constants(const SpaceSpec& space, std::size_t n) {
  BasisConstants c{std::numeric_limits<double>::infinity(), 0.0};
  std::vector<double> e(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    e[i] = 1.0;
    double v = norm_of(space, e);
    e[i] = 0.0;
    c.c1 = std::min(c.c1, v);
    c.c2 = std::max(c.c2, v);
  }
  return c;
}

AxiomReport verify_space_axioms(const SpaceSpec& space, std::span<const SamplePair> samples, double exponent) {
  if (samples.empty()) throw InvalidInput("verify_space_axioms: no samples");
  AxiomReport rep;
  const double q = exponent > 0.0 ? exponent : space.convexity_exponent();
  rep.exponent = q;
  constexpr double kTiny = 1e-300;
  constexpr double kScales[] = {2.0, -1.0, 0.5, -3.75};

  for (const auto& [f, g] : samples) {
    ++rep.pairs;
    const double nf = eval_norm(space, f);
    const double ng = eval_norm(space, g);

    for (double t : kScales) {
      const double lhs = eval_norm(space, t * f);
      const double rhs = std::abs(t) * nf;
      const double slack = -std::abs(lhs - rhs) / std::max(rhs, kTiny);
      rep.worst_homogeneity = std::min(rep.worst_homogeneity, slack);
      if (slack < -kAxiomRelTol) ++rep.homogeneity_failures;
    }

    const double nfq = std::pow(nf, q);
    const double ngq = std::pow(ng, q);
    const double sum_q = std::pow(eval_norm(space, f + g), q);
    const double sub_slack = (nfq + ngq - sum_q) / std::max(nfq + ngq, kTiny);
    rep.worst_subadditivity = std::min(rep.worst_subadditivity, sub_slack);
    if (sub_slack < -kAxiomRelTol) ++rep.subadditivity_failures;

    const double diff_q = std::pow(eval_norm(space, f - g), q);
    const double rev_slack = (diff_q - std::abs(nfq - ngq)) / std::max(nfq + ngq, kTiny);
    rep.worst_reverse_law = std::min(rep.worst_reverse_law, rev_slack);
    if (rev_slack < -kAxiomRelTol) ++rep.reverse_law_failures;
  }
  rep.pass = rep.homogeneity_failures == 0 && rep.subadditivity_failures == 0 && rep.reverse_law_failures == 0;
  return rep;
}

}  // namespace greedylab
