#include "bergman/conditions.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <utility>

#include "bergman/error.hpp"

namespace bergman::conditions {
namespace {

struct Name {
  Condition id;
  const char* role;
  const char* short_id;
};

constexpr std::array<Name, 14> kNames{{
    {Condition::ConjugateTail, "conjugate-tail", "T4c"},
    {Condition::HardyPointwise, "hardy-pointwise", "T4d"},
    {Condition::HardyProduct, "hardy-product", "T4e"},
    {Condition::RootTail, "root-tail", "T4f"},
    {Condition::RootHardy, "root-hardy", "T4g"},
    {Condition::Improving, "improving", "EImpr"},
    {Condition::L1Hardy, "l1-hardy", "T5c"},
    {Condition::L1Tail, "l1-tail", "T5d"},
    {Condition::KernelMeans, "kernel-means", "C2mean"},
    {Condition::KernelNorms, "kernel-norms", "C2norm"},
    {Condition::RegularityHead, "regularity-head", "L9ii"},
    {Condition::RegularityProduct, "regularity-product", "L9iii"},
    {Condition::RegularityRoot, "regularity-root", "L9iv"},
    {Condition::KappaRatio, "kappa-ratio", "KappaCrit"},
}};

std::string lower(std::string s) {
  for (char& c : s) c = char(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::vector<double> levels(const Settings& cfg) {
  if (cfg.grid_depth < 4 || cfg.grid_depth > kMaxGridDepth)
    throw DomainError("grid depth must lie in [4, " + std::to_string(kMaxGridDepth) + "]");
  std::vector<double> s;
  for (int k = 1; k <= cfg.grid_depth; ++k) s.push_back(std::ldexp(1.0, -k));
  return s;
}

template <class F>
quad::SupVerdict scan(const F& f, const Settings& cfg) {
  std::vector<double> values;
  for (double s : levels(cfg)) values.push_back(f(s));
  return quad::sup_verdict(std::move(values), 1, cfg);
}

using Cum = quad::Cumulative;

// integral over [r, 1) of g, as a function of s = 1 - r
Cum tail_of(std::function<double(double)> g, const Settings& cfg) {
  return Cum([g](quad::Node n) { return g(n.s); }, Cum::From::Zero, cfg.tol * 0.1);
}
// integral over [0, r]
Cum head_of(std::function<double(double)> g, const Settings& cfg) {
  return Cum([g](quad::Node n) { return g(n.s); }, Cum::From::One, cfg.tol * 0.1);
}

void need_p_above_one(double p) {
  if (!(p > 1.0)) throw DomainError("condition needs p > 1");
}

quad::SupVerdict improving_scan(const RadialWeight& w, const RadialWeight& v, double q,
                                const Settings& cfg) {
  const auto head = head_of(
      [&](double s) { return std::exp(std::log(v.tail_s(s)) - q * std::log(w.tail_s(s)) - std::log(s)); },
      cfg);
  return scan(
      [&](double s) { return std::exp(q * std::log(w.tail_s(s)) - std::log(v.tail_s(s))) * head(s); },
      cfg);
}

// partial integrals over [1 - 2^-k, ... ] toward the boundary, as a verdict on convergence
quad::SupVerdict improving_total_scan(const RadialWeight& w, const RadialWeight& v, double q,
                                      const Settings& cfg) {
  const auto head = head_of(
      [&](double s) { return std::exp(std::log(v.tail_s(s)) - q * std::log(w.tail_s(s)) - std::log(s)); },
      cfg);
  return scan([&](double s) { return head(s); }, cfg);
}

quad::SupVerdict from_flag(bool ok, double value, bool unknown = false) {
  quad::SupVerdict out;
  out.sup_value = value;
  out.verdict = unknown ? quad::Verdict::Inconclusive
                        : ok ? quad::Verdict::Bounded : quad::Verdict::Divergent;
  return out;
}

}  // namespace

std::string to_string(Condition c) {
  for (const auto& n : kNames)
    if (n.id == c) return n.role;
  return "unknown";
}

Condition parse_condition(const std::string& text) {
  const auto t = lower(text);
  for (const auto& n : kNames)
    if (t == n.role || t == lower(n.short_id)) return n.id;
  throw ParseError("unknown condition", text);
}

const std::vector<Condition>& all_conditions() {
  static const std::vector<Condition> all = [] {
    std::vector<Condition> v;
    for (const auto& n : kNames) v.push_back(n.id);
    return v;
  }();
  return all;
}

std::vector<Condition> default_conditions(double p) {
  if (p == 1.0) return {Condition::Improving, Condition::L1Hardy, Condition::L1Tail};
  return {Condition::ConjugateTail, Condition::HardyPointwise, Condition::HardyProduct,
          Condition::RootTail,      Condition::RootHardy,      Condition::Improving};
}

std::string to_string(Overall o) {
  switch (o) {
    case Overall::Bounded: return "Bounded";
    case Overall::Unbounded: return "Unbounded";
    case Overall::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

quad::SupVerdict eval_condition(Condition c, const RadialWeight& w, const RadialWeight& v,
                                double p, int N, const Settings& cfg) {
  auto lw = [&](double s) { return w.log_at_s(s); };
  auto lv = [&](double s) { return v.log_at_s(s); };
  auto wh = [&](double s) { return w.tail_s(s); };
  auto vh = [&](double s) { return v.tail_s(s); };
  switch (c) {
    case Condition::ConjugateTail: {
      need_p_above_one(p);
      const double q = p / (p - 1.0);
      const auto conj = tail_of([&](double s) { return std::exp(q * lw(s) - (q - 1.0) * lv(s)); }, cfg);
      return scan([&](double s) { return std::pow(vh(s), 1.0 / p) * std::pow(conj(s), 1.0 / q) / wh(s); },
                  cfg);
    }
    case Condition::HardyPointwise: {
      need_p_above_one(p);
      const auto hardy =
          head_of([&](double s) { return std::exp(lv(s) - p * lw(s) - p * std::log(s)); }, cfg);
      return scan(
          [&](double s) { return std::exp(p * lw(s) + (p - 1.0) * std::log(s) - lv(s)) * hardy(s); },
          cfg);
    }
    case Condition::HardyProduct: {
      need_p_above_one(p);
      const double q = p / (p - 1.0);
      const auto hardy =
          head_of([&](double s) { return std::exp(lv(s) - p * lw(s) - p * std::log(s)); }, cfg);
      const auto conj = tail_of([&](double s) { return std::exp(q * lw(s) - (q - 1.0) * lv(s)); }, cfg);
      return scan([&](double s) { return std::pow(hardy(s), 1.0 / p) * std::pow(conj(s), 1.0 / q); },
                  cfg);
    }
    case Condition::RootTail: {
      need_p_above_one(p);
      const auto root =
          tail_of([&](double s) { return std::exp(lw(s) - (std::log(s) + lv(s)) / p); }, cfg);
      return scan([&](double s) { return std::pow(vh(s), 1.0 / p) * root(s) / wh(s); }, cfg);
    }
    case Condition::RootHardy: {
      need_p_above_one(p);
      const double q = p / (p - 1.0);
      const auto root = head_of(
          [&](double s) { return std::exp(lv(s) / p - lw(s) - (1.0 + 1.0 / q) * std::log(s)); }, cfg);
      return scan(
          [&](double s) { return std::exp(lw(s) + std::log(s) / q - lv(s) / p) * root(s); }, cfg);
    }
    case Condition::Improving:
      if (!(p > 0.0)) throw DomainError("condition needs p > 0");
      return improving_scan(w, v, p, cfg);
    case Condition::L1Hardy: {
      const auto head = head_of([&](double s) { return vh(s) / (wh(s) * s); }, cfg);
      return scan([&](double s) { return std::exp(lw(s) - lv(s)) * head(s); }, cfg);
    }
    case Condition::L1Tail: {
      const auto tail = tail_of([&](double s) { return std::exp(lw(s) - lv(s) - std::log(s)); }, cfg);
      return scan([&](double s) { return vh(s) / wh(s) * tail(s); }, cfg);
    }
    case Condition::KernelMeans:
    case Condition::KernelNorms: {
      if (!(p > 0.0)) throw DomainError("condition needs p > 0");
      if (N < 0) throw DomainError("derivative order must be nonnegative");
      const bool norms = c == Condition::KernelNorms;
      const double e = p * (N + 1);
      const auto head = head_of(
          [&](double s) {
            return std::exp((norms ? std::log(vh(s)) : 0.0) - p * std::log(wh(s)) - e * std::log(s));
          },
          cfg);
      return scan(
          [&](double s) {
            return std::exp(p * std::log(wh(s)) + (e - 1.0) * std::log(s) -
                            (norms ? std::log(vh(s)) : 0.0)) *
                   head(s);
          },
          cfg);
    }
    case Condition::RegularityHead: {
      const auto r = regularity_check(w, p, cfg);
      auto out = r.head_up;
      if (!r.errors.empty() && r.head_up.values.empty()) return from_flag(false, INFINITY, true);
      out.verdict = r.head ? quad::Verdict::Bounded
                           : (r.head_up.verdict == quad::Verdict::Divergent ||
                              r.head_down.verdict == quad::Verdict::Divergent)
                                 ? quad::Verdict::Divergent
                                 : quad::Verdict::Inconclusive;
      return out;
    }
    case Condition::RegularityProduct: {
      const auto r = regularity_check(w, p, cfg);
      auto out = r.product;
      if (!r.product_ok && (r.product.verdict == quad::Verdict::Divergent ||
                            r.local.verdict == quad::Verdict::Divergent))
        out.verdict = quad::Verdict::Divergent;
      else if (!r.product_ok)
        out.verdict = quad::Verdict::Inconclusive;
      return out;
    }
    case Condition::RegularityRoot: {
      const auto r = regularity_check(w, p, cfg);
      return from_flag(r.root, r.root ? 1.0 : INFINITY, r.root_class == WeightClass::Inconclusive);
    }
    case Condition::KappaRatio: {
      const auto k = kappa_criterion(w, v, p, cfg);
      return from_flag(k.holds, k.ratio, k.boundary);
    }
  }
  throw DomainError("unknown condition");
}

KappaCriterion kappa_criterion(const RadialWeight& w, const RadialWeight& v, double p,
                               const Settings& cfg) {
  const auto kw = kappa(w, cfg), kv = kappa(v, cfg);
  if (!kw.converged || !kv.converged)
    throw ConvergenceError("kappa limit does not exist for " + (kw.converged ? v.label() : w.label()),
                           {});
  KappaCriterion out;
  out.ratio = kw.value / kv.value;
  const double err = out.ratio * (kw.error / kw.value + kv.error / kv.value);
  out.margin = std::max(10.0 * err, 1e-6);
  out.boundary = std::abs(out.ratio - p) <= out.margin;
  out.holds = out.ratio < p - out.margin;
  return out;
}

ConditionReport check_pair(const RadialWeight& w, const RadialWeight& v, double p,
                           std::vector<Condition> conditions, int N, const Settings& cfg) {
  ConditionReport rep;
  rep.omega = w.label();
  rep.v = v.label();
  rep.p = p;
  rep.N = N;
  if (conditions.empty()) conditions = default_conditions(p);
  for (const auto* x : {&w, &v}) {
    try {
      const auto c = classify(*x, cfg).cls;
      if (c != WeightClass::Regular)
        rep.warnings.push_back(x->label() + " classifies as " + to_string(c));
    } catch (const Error& e) {
      rep.warnings.push_back(x->label() + ": " + e.what());
    }
  }
  for (auto id : conditions) {
    ConditionResult r{id, {}, {}};
    try {
      r.verdict = eval_condition(id, w, v, p, N, cfg);
    } catch (const Error& e) {
      r.error = e.what();
    }
    rep.results.push_back(std::move(r));
  }
  const std::size_t n = rep.results.size();
  rep.agreement.assign(n, std::vector<bool>(n, true));
  bool any_bounded = false, any_divergent = false;
  for (std::size_t i = 0; i < n; ++i) {
    const auto a = rep.results[i].verdict.verdict;
    any_bounded |= a == quad::Verdict::Bounded;
    any_divergent |= a == quad::Verdict::Divergent;
    for (std::size_t j = 0; j < n; ++j) {
      const auto b = rep.results[j].verdict.verdict;
      rep.agreement[i][j] = !((a == quad::Verdict::Bounded && b == quad::Verdict::Divergent) ||
                              (a == quad::Verdict::Divergent && b == quad::Verdict::Bounded));
    }
  }
  if (any_bounded && !any_divergent) rep.overall = Overall::Bounded;
  if (any_divergent && !any_bounded) rep.overall = Overall::Unbounded;
  try {
    rep.kappa = kappa_criterion(w, v, p, cfg);
    rep.boundary = rep.kappa->boundary;
  } catch (const Error& e) {
    rep.warnings.push_back(std::string("kappa criterion: ") + e.what());
  }
  if (rep.boundary)
    rep.warnings.push_back("kappa ratio equals p within its error; the strict inequality fails there");
  return rep;
}

ExponentWindow exponent_window(const RadialWeight& w, const RadialWeight& v, double p,
                               const Settings& cfg) {
  if (!(p > 0.0)) throw DomainError("exponent_window: p must be positive");
  if (improving_scan(w, v, p, cfg).verdict != quad::Verdict::Bounded)
    throw PreconditionError("improving condition does not hold at p = " + std::to_string(p));
  constexpr double kTol = 1e-3;
  auto bisect = [&](double lo, double hi, auto&& good_at_hi) {
    while (hi - lo > kTol) {
      const double mid = 0.5 * (lo + hi);
      (good_at_hi(mid) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
  };
  ExponentWindow out;
  // predicate true above m
  out.m = bisect(0.0, p, [&](double d) {
    return improving_scan(w, v, p - d, cfg).verdict != quad::Verdict::Bounded;
  });
  auto converges = [&](double d) {
    return improving_total_scan(w, v, p - d, cfg).verdict == quad::Verdict::Bounded;
  };
  out.M = bisect(converges(0.0) ? -p : 0.0, p, converges);
  return out;
}

double hardy_K(const RadialWeight& w, double r) {
  if (!(r >= 0.0 && r < 1.0)) throw DomainError("hardy_K needs r in [0,1)");
  if (r == 0.0) return 0.0;
  return quad::integrate_s([&](quad::Node n) { return 1.0 / (w.tail_s(n.s) * n.s); }, 1.0 - r, 1.0,
                           1e-12)
      .value;
}

RegularityReport regularity_check(const RadialWeight& w, double a, const Settings& cfg) {
  if (!(a > 1.0)) throw DomainError("regularity_check: exponent must exceed 1");
  RegularityReport out;
  out.exponent = a;
  auto l1 = [&](double s) { return (1.0 - a) * w.log_at_s(s) - a * std::log(s); };
  try {
    const auto head = head_of([&](double s) { return std::exp(l1(s)); }, cfg);
    std::vector<double> up, down, prod, local;
    for (double s : levels(cfg)) {
      const double ratio = std::exp(std::log(head(s)) - l1(s) - std::log(s));
      up.push_back(ratio);
      down.push_back(1.0 / ratio);
      prod.push_back(ratio * std::pow(psi_s(w, s) / s, a - 1.0));
      const double q = std::exp(w.log_at_s(s) - w.log_at_s(0.5 * s));
      local.push_back(std::max(q, 1.0 / q));
    }
    out.head_up = quad::sup_verdict(up, 1, cfg);
    out.head_down = quad::sup_verdict(down, 1, cfg);
    out.head = out.head_up.verdict == quad::Verdict::Bounded &&
               out.head_down.verdict == quad::Verdict::Bounded;
    out.product = quad::sup_verdict(prod, 1, cfg);
    out.local = quad::sup_verdict(local, 1, cfg);
    out.product_ok = out.product.verdict == quad::Verdict::Bounded &&
                     out.local.verdict == quad::Verdict::Bounded;
  } catch (const Error& e) {
    out.errors.push_back(e.what());
  }
  try {
    auto l2 = [w, a](double s) { return (1.0 - 1.0 / a) * w.log_at_s(s) - std::log(s) / a; };
    const auto w2 = make_function_weight([l2](double s) { return std::exp(l2(s)); },
                                         w.label() + " root", l2);
    out.root_class = classify(w2, cfg).cls;
    out.root = out.root_class == WeightClass::Regular;
  } catch (const Error& e) {
    out.root_class = WeightClass::NonDoubling;
    out.errors.push_back(e.what());
  }
  return out;
}

}  // namespace bergman::conditions
