#include "bergman/weights.hpp"

#include <algorithm>
#include <charconv>
#include <cfloat>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>

// boost 1.74 pchip calls isnan unqualified
namespace boost::math::interpolators {
using std::isnan;
}
#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "bergman/error.hpp"

namespace bergman {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

// iterated logs L_1 = log(e/s), L_{k+1} = 1 + log L_k
struct LogChain {
  double product = 1.0;  // L_1 ... L_depth
  double last = 0.0;     // L_{depth+1}
};

LogChain log_chain(double s, int depth) {
  LogChain c;
  double L = 1.0 - std::log(s);
  for (int k = 0; k < depth; ++k) {
    c.product *= L;
    L = 1.0 + std::log(L);
  }
  c.last = L;
  return c;
}

// associated weight of the constant weight, 1/2 log(1/r) - (1 - r^2)/4
double constant_star(double s) {
  if (s < 0.25) {
    double sum = 0.5 * s * s, term = s * s;
    for (int k = 3; k < 200; ++k) {
      term *= s;
      const double add = term / (2.0 * k);
      sum += add;
      if (add < 1e-18 * sum) break;
    }
    return sum;
  }
  return -0.5 * std::log1p(-s) - 0.25 * s * (2.0 - s);
}

}  // namespace

std::string to_string(Family f) {
  switch (f) {
    case Family::Std: return "std";
    case Family::Pow: return "pow";
    case Family::Log: return "log";
    case Family::RegLog: return "reglog";
    case Family::Exp: return "exp";
    case Family::Tabulated: return "tabulated";
  }
  return "?";
}

std::string to_string(WeightClass c) {
  switch (c) {
    case WeightClass::Regular: return "Regular";
    case WeightClass::RapidlyIncreasing: return "RapidlyIncreasing";
    case WeightClass::DoublingOnly: return "DoublingOnly";
    case WeightClass::NonDoubling: return "NonDoubling";
    case WeightClass::Inconclusive: return "Inconclusive";
  }
  return "?";
}

struct RadialWeight::Impl {
  Family family;
  std::map<std::string, double> params;
  Evaluator eval;
  Evaluator log_eval;
  ClosedForms closed;
  std::string label;
  bool normalized = false;

  mutable std::once_flag tail_once, head_once;
  mutable std::unique_ptr<quad::Cumulative> tail_cum, head_cum;
};

RadialWeight::RadialWeight(Family family, std::map<std::string, double> params,
                           Evaluator eval, ClosedForms closed, std::string label,
                           Evaluator log_eval) {
  auto impl = std::make_shared<Impl>();
  impl->family = family;
  impl->params = std::move(params);
  impl->eval = std::move(eval);
  impl->log_eval = std::move(log_eval);
  impl->closed = std::move(closed);
  impl->label = std::move(label);
  impl_ = std::move(impl);
}

namespace {

double checked(const RadialWeight::Impl& im, double s) {
  if (!(s > 0.0 && s <= 1.0))
    throw DomainError("weight evaluated outside s in (0,1]: s = " + fmt(s));
  const double v = im.eval(s);
  if (!(v >= 0.0))
    throw DomainError("weight " + im.label + " is negative or NaN at s = " + fmt(s));
  return v;
}

}  // namespace

double RadialWeight::at_s(double s) const { return checked(*impl_, s); }

double RadialWeight::log_at_s(double s) const {
  if (!impl_->log_eval) return std::log(checked(*impl_, s));
  if (!(s > 0.0 && s <= 1.0))
    throw DomainError("weight evaluated outside s in (0,1]: s = " + fmt(s));
  const double v = impl_->log_eval(s);
  if (std::isnan(v) || v == INFINITY)
    throw DomainError("weight " + impl_->label + " has no finite logarithm at s = " + fmt(s));
  return v;
}

Family RadialWeight::family() const { return impl_->family; }
const std::map<std::string, double>& RadialWeight::params() const { return impl_->params; }
const std::string& RadialWeight::label() const { return impl_->label; }
bool RadialWeight::normalized() const { return impl_->normalized; }
const RadialWeight::ClosedForms& RadialWeight::closed_forms() const { return impl_->closed; }

double RadialWeight::tail_s(double s) const {
  if (!(s >= 0.0 && s <= 1.0)) throw DomainError("tail requested outside [0,1]: s = " + fmt(s));
  if (s == 0.0) return 0.0;
  if (impl_->closed.tail) return impl_->closed.tail(s);
  std::call_once(impl_->tail_once, [this] {
    // raw pointer: the cache lives inside the impl it refers to
    const Impl* im = impl_.get();
    impl_->tail_cum = std::make_unique<quad::Cumulative>(
        [im](quad::Node n) { return checked(*im, n.s); }, quad::Cumulative::From::Zero);
  });
  return (*impl_->tail_cum)(s);
}

double RadialWeight::head_s(double s) const {
  if (!(s >= 0.0 && s <= 1.0)) throw DomainError("head requested outside [0,1]: s = " + fmt(s));
  if (s == 1.0) return 0.0;
  std::call_once(impl_->head_once, [this] {
    // raw pointer: the cache lives inside the impl it refers to
    const Impl* im = impl_.get();
    impl_->head_cum = std::make_unique<quad::Cumulative>(
        [im](quad::Node n) { return checked(*im, n.s); }, quad::Cumulative::From::One);
  });
  return (*impl_->head_cum)(s);
}

RadialWeight RadialWeight::scaled(double c) const {
  if (!(c > 0.0 && std::isfinite(c))) throw DomainError("scale factor must be positive");
  const auto& cl = impl_->closed;
  ClosedForms sc;
  if (cl.tail) sc.tail = [f = cl.tail, c](double s) { return c * f(s); };
  if (cl.moment) sc.moment = [f = cl.moment, c](double x) { return c * f(x); };
  if (cl.star) sc.star = [f = cl.star, c](double s) { return c * f(s); };
  auto params = impl_->params;
  params["scale"] = (params.count("scale") ? params["scale"] : 1.0) * c;
  Evaluator lg;
  if (impl_->log_eval) lg = [f = impl_->log_eval, lc = std::log(c)](double s) { return lc + f(s); };
  RadialWeight out(impl_->family, std::move(params),
                   [f = impl_->eval, c](double s) { return c * f(s); }, std::move(sc),
                   c == 1.0 ? impl_->label : fmt(c) + "*" + impl_->label, std::move(lg));
  return out;
}

RadialWeight RadialWeight::normalize() const {
  RadialWeight out = scaled(1.0 / tail_s(1.0));
  std::const_pointer_cast<Impl>(out.impl_)->normalized = true;
  return out;
}

// ---------------------------------------------------------------- families

RadialWeight make_pow(double a) {
  if (!(a > -1.0)) throw DomainError("pow exponent must exceed -1, got " + fmt(a));
  RadialWeight::ClosedForms cf;
  cf.tail = [a](double s) { return std::pow(s, a + 1.0) / (a + 1.0); };
  cf.moment = [a](double x) { return boost::math::beta(2.0 * x + 2.0, a + 1.0); };
  if (a == 0.0) cf.star = constant_star;
  return RadialWeight(Family::Pow, {{"a", a}}, [a](double s) { return std::pow(s, a); },
                      std::move(cf), "pow:a=" + fmt(a), [a](double s) { return a * std::log(s); });
}

RadialWeight make_std(double a) {
  if (!(a > -1.0)) throw DomainError("std exponent must exceed -1, got " + fmt(a));
  RadialWeight::ClosedForms cf;
  // substitute u = 2v in (a+1) u^a (2-u)^a
  cf.tail = [a](double s) {
    return (a + 1.0) * std::exp2(2.0 * a + 1.0) * boost::math::beta(a + 1.0, a + 1.0, 0.5 * s);
  };
  cf.moment = [a](double x) { return 0.5 * (a + 1.0) * boost::math::beta(x + 1.0, a + 1.0); };
  if (a == 0.0) cf.star = constant_star;
  return RadialWeight(Family::Std, {{"a", a}},
                      [a](double s) { return (a + 1.0) * std::pow(s * (2.0 - s), a); },
                      std::move(cf), "std:a=" + fmt(a),
                      [a](double s) { return std::log(a + 1.0) + a * std::log(s * (2.0 - s)); });
}

RadialWeight make_log(double a, int depth) {
  if (!(a > 1.0)) throw DomainError("log exponent must exceed 1, got " + fmt(a));
  if (depth < 0) throw DomainError("log depth must be nonnegative");
  RadialWeight::ClosedForms cf;
  cf.tail = [a, depth](double s) {
    return std::pow(log_chain(s, depth).last, 1.0 - a) / (a - 1.0);
  };
  return RadialWeight(
      Family::Log, {{"a", a}, {"N", double(depth)}},
      [a, depth](double s) {
        const auto c = log_chain(s, depth);
        return 1.0 / (s * c.product * std::pow(c.last, a));
      },
      std::move(cf), "log:a=" + fmt(a) + ",N=" + std::to_string(depth),
      [a, depth](double s) {
        const auto c = log_chain(s, depth);
        return -std::log(s) - std::log(c.product) - a * std::log(c.last);
      });
}

RadialWeight make_reglog(double a, double b) {
  if (!(a > -1.0 || (a == -1.0 && b < -1.0)))
    throw DomainError("reglog:a=" + fmt(a) + ",b=" + fmt(b) + " is not integrable");
  return RadialWeight(Family::RegLog, {{"a", a}, {"b", b}},
                      [a, b](double s) { return std::pow(s, a) * std::pow(1.0 - std::log(s), b); },
                      {}, "reglog:a=" + fmt(a) + ",b=" + fmt(b),
                      [a, b](double s) { return a * std::log(s) + b * std::log(1.0 - std::log(s)); });
}

RadialWeight make_exp(double c) {
  if (!(c > 0.0)) throw DomainError("exp rate must be positive, got " + fmt(c));
  return RadialWeight(Family::Exp, {{"c", c}}, [c](double s) { return std::exp(-c / s); }, {},
                      "exp:c=" + fmt(c), [c](double s) { return -c / s; });
}

RadialWeight make_function_weight(RadialWeight::Evaluator eval, std::string label,
                                  RadialWeight::Evaluator log_eval) {
  return RadialWeight(Family::Tabulated, {}, std::move(eval), {}, std::move(label),
                      std::move(log_eval));
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& tok) {
  double v = 0.0;
  const char* first = tok.data();
  const char* last = first + tok.size();
  if (!tok.empty() && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (tok.empty() || res.ec != std::errc() || res.ptr != last || !std::isfinite(v))
    throw ParseError("expected a decimal number", tok);
  return v;
}

}  // namespace

RadialWeight make_tabulated_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open weight table", path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty weight table", path);
  {
    std::string h = trim(line);
    h.erase(std::remove(h.begin(), h.end(), ' '), h.end());
    if (h != "s,omega") throw ParseError("table header must be 's,omega'", trim(line));
  }
  std::vector<std::pair<double, double>> rows;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ParseError("expected 's,omega' row", line);
    const double s = parse_number(trim(line.substr(0, comma)));
    const double w = parse_number(trim(line.substr(comma + 1)));
    if (!(s > 0.0 && s <= 1.0)) throw ParseError("table s must lie in (0,1]", line);
    if (!(w >= 0.0)) throw ParseError("table omega must be nonnegative", line);
    rows.emplace_back(s, w);
  }
  if (rows.size() < 4) throw ParseError("weight table needs at least 4 rows", path);
  std::sort(rows.begin(), rows.end());
  const bool positive = std::all_of(rows.begin(), rows.end(), [](auto& r) { return r.second > 0; });
  std::vector<double> x, y;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0 && rows[i].first == rows[i - 1].first)
      throw ParseError("duplicate s in weight table", fmt(rows[i].first));
    x.push_back(std::log(rows[i].first));
    y.push_back(positive ? std::log(rows[i].second) : rows[i].second);
  }
  const double s_min = rows.front().first, s_max = rows.back().first;
  auto interp = std::make_shared<boost::math::interpolators::pchip<std::vector<double>>>(
      std::move(x), std::move(y));
  auto eval = [interp, s_min, s_max, positive](double s) {
    if (s < s_min || s > s_max)
      throw DomainError("tabulated weight extrapolated to s = " + fmt(s) + " outside [" +
                        fmt(s_min) + ", " + fmt(s_max) + "]");
    const double v = (*interp)(std::log(s));
    return positive ? std::exp(v) : std::max(v, 0.0);
  };
  return RadialWeight(Family::Tabulated, {}, eval, {}, "tabulated:file=" + path);
}

RadialWeight parse_weight(const std::string& text_in) {
  const std::string text = trim(text_in);
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ParseError("expected family:key=value", text);
  const std::string family = text.substr(0, colon);
  static const std::map<std::string, std::vector<std::string>> keys = {
      {"std", {"a", "norm"}},      {"pow", {"a", "norm"}},
      {"log", {"a", "N", "norm"}}, {"reglog", {"a", "b", "norm"}},
      {"exp", {"c", "norm"}},      {"tabulated", {"file", "norm"}}};
  const auto fam = keys.find(family);
  if (fam == keys.end()) throw ParseError("unknown weight family", family);

  std::map<std::string, std::string> kv;
  std::string rest = text.substr(colon + 1);
  if (rest.empty()) throw ParseError("expected key=value after ':'", text);
  std::size_t pos = 0;
  while (true) {
    const auto comma = rest.find(',', pos);
    const std::string item = rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == item.size())
      throw ParseError("expected key=value", item);
    const std::string key = item.substr(0, eq), value = item.substr(eq + 1);
    const auto& allowed = fam->second;
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ParseError("unknown key for family " + family, key);
    if (!kv.emplace(key, value).second) throw ParseError("duplicate key", key);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }

  auto num = [&](const std::string& k, std::optional<double> def) {
    const auto it = kv.find(k);
    if (it == kv.end()) {
      if (!def) throw ParseError("missing key '" + k + "'", text);
      return *def;
    }
    return parse_number(it->second);
  };

  std::optional<RadialWeight> w;
  if (family == "std") {
    w = make_std(num("a", std::nullopt));
  } else if (family == "pow") {
    w = make_pow(num("a", std::nullopt));
  } else if (family == "log") {
    const double N = num("N", 0.0);
    if (N != std::floor(N) || N < 0 || N > 16) throw ParseError("N must be an integer in [0,16]", kv["N"]);
    w = make_log(num("a", std::nullopt), int(N));
  } else if (family == "reglog") {
    w = make_reglog(num("a", 1.0), num("b", 1.0));
  } else if (family == "exp") {
    w = make_exp(num("c", 1.0));
  } else {
    const auto it = kv.find("file");
    if (it == kv.end()) throw ParseError("missing key 'file'", text);
    w = make_tabulated_csv(it->second);
  }
  const double norm = num("norm", 0.0);
  if (norm != 0.0 && norm != 1.0) throw ParseError("norm must be 0 or 1", kv["norm"]);
  return norm == 1.0 ? w->normalize() : *w;
}

// ------------------------------------------------------------- functionals

double tail_integral(const RadialWeight& w, double r) {
  if (!(r >= 0.0 && r < 1.0)) throw DomainError("tail_integral needs r in [0,1), got " + fmt(r));
  return w.tail_s(1.0 - r);
}

double associated_weight_s(const RadialWeight& w, double s) {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("associated weight needs r in (0,1)");
  if (w.closed_forms().star) return w.closed_forms().star(s);
  const double rs = 1.0 - s, half = 0.5 * s;
  // u = 1 - sigma, log(u/r) = log1p(gap/r) with gap = s - sigma; the inner half
  // is integrated in the gap itself so that it stays exact near sigma = s
  auto in_sigma = [&](quad::Node n) { return w.at_s(n.s) * n.t * std::log1p((s - n.s) / rs); };
  auto in_gap = [&](quad::Node n) {
    const double sigma = s - n.s;
    return w.at_s(sigma) * (rs + n.s) * std::log1p(n.s / rs);
  };
  return quad::integrate_s(in_sigma, 0.0, half, 1e-12).value +
         quad::integrate_s(in_gap, 0.0, s - half, 1e-12).value;
}

double associated_weight(const RadialWeight& w, double r) {
  if (r == 0.0) throw DomainError("associated weight is singular at r = 0");
  if (!(r > 0.0 && r < 1.0)) throw DomainError("associated weight needs r in (0,1)");
  return associated_weight_s(w, 1.0 - r);
}

double moment(const RadialWeight& w, double x) {
  if (!(x >= 0.0)) throw DomainError("moment order must be nonnegative");
  if (w.closed_forms().moment) return w.closed_forms().moment(x);
  const double e = 2.0 * x + 1.0;
  return quad::integrate_s([&](quad::Node n) { return std::pow(n.t, e) * w.at_s(n.s); }, 0.0, 1.0,
                           1e-12)
      .value;
}

double associated_moment(const RadialWeight& w, double x) {
  if (!(x >= 0.0)) throw DomainError("moment order must be nonnegative");
  // w*(r) = A(s) - log(r) B(s) with running integrals from the boundary
  quad::Cumulative A([&](quad::Node n) { return w.at_s(n.s) * n.t * std::log1p(-n.s); },
                     quad::Cumulative::From::Zero);
  quad::Cumulative B([&](quad::Node n) { return w.at_s(n.s) * n.t; },
                     quad::Cumulative::From::Zero);
  const double e = 2.0 * x + 1.0;
  return quad::integrate_s(
             [&](quad::Node n) {
               if (n.t == 0.0) return 0.0;
               const double logr = n.s < 0.5 ? std::log1p(-n.s) : std::log(n.t);
               const double star = A(n.s) - logr * B(n.s);
               return std::pow(n.t, e) * star;
             },
             0.0, 1.0, 1e-12)
      .value;
}

double psi_s(const RadialWeight& w, double s) {
  const double v = w.at_s(s);
  if (v == 0.0) throw DomainError("psi: weight vanishes at r = 1 - " + fmt(s));
  return w.tail_s(s) / v;
}

double psi(const RadialWeight& w, double r) {
  if (!(r >= 0.0 && r < 1.0)) throw DomainError("psi needs r in [0,1)");
  return psi_s(w, 1.0 - r);
}

double psi_tilde(const RadialWeight& w, double r) {
  if (!(r >= 0.0 && r < 1.0)) throw DomainError("psi_tilde needs r in [0,1)");
  const double v = w.at_s(1.0 - r);
  if (v == 0.0) throw DomainError("psi_tilde: weight vanishes at r = " + fmt(r));
  return w.head_s(1.0 - r) / v;
}

double area_mass(const RadialWeight& w) {
  if (w.closed_forms().moment) return 2.0 * w.closed_forms().moment(0.0);
  return 2.0 * quad::integrate_s([&](quad::Node n) { return n.t * w.at_s(n.s); }, 0.0, 1.0, 1e-12)
                   .value;
}

// ----------------------------------------------------------------- classes

DoublingReport doubling_report(const RadialWeight& w, const Settings& cfg) {
  DoublingReport rep;
  const int K = cfg.grid_depth;
  std::vector<double> tails;
  for (int k = 0; k <= K; ++k) {
    const double t = w.tail_s(std::ldexp(1.0, -k));
    if (!(t > 1e3 * DBL_MIN) || !std::isfinite(t)) {
      rep.truncated = true;
      break;
    }
    tails.push_back(t);
  }
  rep.depth = int(tails.size()) - 1;
  std::vector<double> ratios;
  for (std::size_t k = 1; k < tails.size(); ++k) ratios.push_back(tails[k - 1] / tails[k]);
  for (std::size_t i = 0; i < tails.size(); ++i)
    for (std::size_t j = i + 1; j < tails.size(); ++j)
      rep.beta = std::max(rep.beta, std::log2(tails[i] / tails[j]) / double(j - i));
  if (rep.truncated) ratios.push_back(INFINITY);  // tail vanished numerically
  rep.trend = quad::sup_verdict(ratios, 1, cfg);
  rep.ok = rep.trend.verdict == quad::Verdict::Bounded;
  rep.C = rep.trend.verdict == quad::Verdict::Divergent
              ? INFINITY
              : *std::max_element(ratios.begin(), ratios.end());
  return rep;
}

namespace {

std::vector<double> regularity_ratios(const RadialWeight& w, int depth) {
  std::vector<double> R;
  for (int k = 1; k <= depth; ++k) {
    const double s = std::ldexp(1.0, -k);
    const double v = w.at_s(s);
    if (!(v > 0.0)) break;
    const double q = w.tail_s(s) / v / s;
    if (!std::isfinite(q) || q <= 0.0) break;
    R.push_back(q);
  }
  return R;
}

}  // namespace

ClassificationReport classify(const RadialWeight& w, const Settings& cfg) {
  ClassificationReport rep;
  rep.doubling = doubling_report(w, cfg);
  rep.doubling_constant = rep.doubling.C;
  rep.doubling_exponent = rep.doubling.beta;
  rep.ratios = regularity_ratios(w, std::min(cfg.grid_depth, std::max(rep.doubling.depth, 1)));
  if (!rep.ratios.empty()) {
    rep.ratio_min = *std::min_element(rep.ratios.begin(), rep.ratios.end());
    rep.ratio_max = *std::max_element(rep.ratios.begin(), rep.ratios.end());
  }
  const auto dv = rep.doubling.trend.verdict;
  if (dv == quad::Verdict::Divergent) {
    rep.cls = WeightClass::NonDoubling;
    return rep;
  }
  if (dv != quad::Verdict::Bounded || rep.ratios.size() < 4) {
    rep.cls = WeightClass::Inconclusive;
    return rep;
  }
  std::vector<double> inv(rep.ratios.size());
  std::transform(rep.ratios.begin(), rep.ratios.end(), inv.begin(), [](double q) { return 1.0 / q; });
  const auto up = quad::sup_verdict(rep.ratios, 1, cfg);
  const auto down = quad::sup_verdict(inv, 1, cfg);

  bool increasing = true;
  for (std::size_t k = rep.ratios.size() / 2; k + 1 < rep.ratios.size(); ++k)
    if (rep.ratios[k + 1] * cfg.essential_factor < rep.ratios[k]) increasing = false;

  if (up.verdict == quad::Verdict::Bounded && down.verdict == quad::Verdict::Bounded &&
      rep.ratio_max / rep.ratio_min <= cfg.regular_bound) {
    rep.cls = WeightClass::Regular;
    try {
      const auto lim = quad::extrapolate_limit(rep.ratios);
      rep.kappa = KappaEstimate{lim.value, lim.error, true, rep.ratio_min, rep.ratio_max};
    } catch (const ConvergenceError&) {
    }
  } else if (up.verdict == quad::Verdict::Divergent && increasing) {
    rep.cls = WeightClass::RapidlyIncreasing;
  } else if (up.verdict == quad::Verdict::Inconclusive || down.verdict == quad::Verdict::Inconclusive) {
    rep.cls = WeightClass::Inconclusive;
  } else {
    rep.cls = WeightClass::DoublingOnly;
  }
  return rep;
}

KappaEstimate kappa(const RadialWeight& w, const Settings& cfg) {
  const auto rep = classify(w, cfg);
  if (rep.cls != WeightClass::Regular)
    return KappaEstimate{NAN, INFINITY, false, rep.ratio_min, rep.ratio_max};
  const auto lim = quad::extrapolate_limit(rep.ratios);
  return KappaEstimate{lim.value, lim.error, true, rep.ratio_min, rep.ratio_max};
}

// -------------------------------------------------------------- transforms

namespace {

void probe_mass(const RadialWeight& w) {
  try {
    const double m = quad::integrate_s([&](quad::Node n) { return w.at_s(n.s); }, 0.0, 1.0, 1e-10).value;
    if (!(m > 0.0) || !std::isfinite(m)) throw DomainError("weight " + w.label() + " has no positive finite mass");
  } catch (const DivergentIntegral&) {
    throw DomainError("weight " + w.label() + " is not integrable");
  }
}

}  // namespace

RadialWeight conjugate_weight(const RadialWeight& omega, const RadialWeight& v, double q) {
  const auto fo = omega.family(), fv = v.family();
  if (fo == fv && (fo == Family::Pow || fo == Family::Std) && !omega.params().count("scale") &&
      !v.params().count("scale")) {
    const double ao = omega.params().at("a"), av = v.params().at("a");
    const double a = q * (ao - av) + av;
    if (!(a > -1.0)) throw DomainError("conjugate weight is not integrable (exponent " + fmt(a) + ")");
    if (fo == Family::Pow) return make_pow(a);
    const double c = std::pow((ao + 1.0) / (av + 1.0), q) * (av + 1.0) / (a + 1.0);
    return make_std(a).scaled(c);
  }
  auto log_eval = [omega, v, q](double s) {
    const double lv = v.log_at_s(s);
    if (lv == -INFINITY) throw DomainError("conjugate weight needs v > 0, fails at s = " + fmt(s));
    return q * omega.log_at_s(s) + (1.0 - q) * lv;
  };
  RadialWeight out = make_function_weight(
      [log_eval](double s) { return std::exp(log_eval(s)); },
      "(" + omega.label() + "/" + v.label() + ")^" + fmt(q) + "*" + v.label(), log_eval);
  probe_mass(out);
  return out;
}

RadialWeight transform_V(const RadialWeight& omega, const RadialWeight& v, double p) {
  if (!(p > 1.0)) throw DomainError("transform_V needs p > 1, got " + fmt(p));
  return conjugate_weight(omega, v, p / (p - 1.0));
}

RadialWeight shift_weight(const RadialWeight& w, double beta) {
  if (w.family() == Family::Pow && !w.params().count("scale")) {
    const double a = w.params().at("a") + beta;
    if (!(a > -1.0)) throw DomainError("shifted weight is not integrable (exponent " + fmt(a) + ")");
    return make_pow(a);
  }
  auto log_eval = [w, beta](double s) { return beta * std::log(s) + w.log_at_s(s); };
  RadialWeight out = make_function_weight(
      [log_eval](double s) { return std::exp(log_eval(s)); },
      "(1-r)^" + fmt(beta) + "*" + w.label(), log_eval);
  probe_mass(out);
  return out;
}

}  // namespace bergman
