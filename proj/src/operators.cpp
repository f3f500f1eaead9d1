#include "bergman/operators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <optional>

#include "bergman/error.hpp"

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

namespace bergman::operators {
namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

constexpr int kPerOctave = 16;

// log f on knots u = j / kPerOctave, u = -log2(1 - x), as a cubic spline
std::function<double(double)> log_spline(const std::vector<double>& logs) {
  using Spline = boost::math::interpolators::cardinal_cubic_b_spline<double>;
  auto sp = std::make_shared<Spline>(logs.begin(), logs.end(), 0.0, 1.0 / kPerOctave);
  return [sp](double u) { return std::exp((*sp)(u)); };
}

quad::SupVerdict geometric_scan(int n_max, const std::function<double(int)>& f, const Settings& cfg) {
  std::vector<double> values;
  for (long n = 1; n <= n_max; n *= 2) {
    const double x = f(int(n));
    values.push_back(x);
    if (!std::isfinite(x)) break;
  }
  return quad::sup_verdict(std::move(values), 1, cfg);
}

}  // namespace

RadialFunction::RadialFunction(Kind kind, std::function<double(double)> eval, std::string label,
                               double start)
    : kind_(kind), eval_(std::move(eval)), label_(std::move(label)), start_(start) {}

RadialFunction RadialFunction::monomial(int n) {
  if (n < 0) throw DomainError("monomial degree must be nonnegative");
  return RadialFunction(
      Kind::Monomial, [n](double s) { return std::pow(1.0 - s, n); }, "r^" + std::to_string(n), 0.0);
}

RadialFunction RadialFunction::indicator(double t) {
  if (!(t >= 0.0 && t < 1.0)) throw DomainError("indicator needs t in [0,1)");
  const double st = 1.0 - t;
  return RadialFunction(
      Kind::Indicator, [st](double s) { return s <= st ? 1.0 : 0.0; }, "1[" + fmt(t) + ",1)", t);
}

RadialFunction RadialFunction::tabulated(std::function<double(double s)> eval, std::string label) {
  return RadialFunction(Kind::Tabulated, std::move(eval), std::move(label), 0.0);
}

double RadialFunction::norm(const RadialWeight& v, double p) const {
  if (!(p > 0.0)) throw DomainError("norm: p must be positive");
  const double I = quad::integrate_s(
                       [&](quad::Node n) {
                         return 2.0 * std::pow(std::abs(eval_(n.s)), p) * v.at_s(n.s) * n.t;
                       },
                       0.0, 1.0 - start_, 1e-12)
                       .value;
  return std::pow(I, 1.0 / p);
}

std::vector<double> m1_profile(const kernel::KernelCoeffs& K, const std::vector<double>& xs,
                               const Settings& cfg) {
  std::vector<double> out;
  for (double x : xs) out.push_back(kernel::series_mean(K, x, 1.0, cfg));
  return out;
}

kernel::KernelCoeffs coeffs_for_depth(const RadialWeight& w, int depth, const Settings& cfg) {
  if (depth < 1 || depth > 20) throw DomainError("operator depth must lie in [1, 20]");
  return kernel::KernelCoeffs(w, 64 * (1 << (depth + 2)) + 256, cfg);
}

M1Table::M1Table(const kernel::KernelCoeffs& K, int depth, const Settings& cfg) : c0_(K[0]) {
  const int last = kPerOctave * (depth + 2);
  std::vector<double> y;
  for (int j = 0; j <= last; ++j) {
    const double s = std::exp2(-double(j) / kPerOctave);
    y.push_back(std::log(kernel::series_mean(K, 1.0 - s, 1.0, cfg)));
  }
  x_limit_ = 1.0 - std::exp2(-double(depth + 2));
  interp_ = log_spline(y);
}

double M1Table::operator()(double x) const {
  if (x <= 0.0) return c0_;
  if (x > x_limit_) throw DomainError("M1Table: x beyond the tabulated range");
  return interp_(-std::log2(1.0 - x));
}

namespace {

double pplus_at(const M1Table& m1, const RadialWeight& w, const RadialFunction& phi, double y) {
  return quad::integrate_s(
             [&](quad::Node n) {
               const double f = phi.at_s(n.s);
               return f == 0.0 ? 0.0 : 2.0 * f * m1(n.t * y) * n.t * w.at_s(n.s);
             },
             0.0, 1.0 - phi.start(), 1e-10)
      .value;
}

}  // namespace

std::vector<double> apply_Pplus_radial(const kernel::KernelCoeffs& K, const RadialFunction& phi,
                                       const std::vector<double>& z_grid, const Settings& cfg) {
  double top = 0.0;
  for (double z : z_grid) {
    if (!(z >= 0.0 && z < 1.0)) throw DomainError("apply_Pplus_radial: need 0 <= |z| < 1");
    top = std::max(top, z);
  }
  const int depth = std::max(1, int(std::ceil(-std::log2(1.0 - top))));
  const M1Table m1(K, depth, cfg);
  std::vector<double> out;
  for (double z : z_grid) out.push_back(pplus_at(m1, K.weight(), phi, z));
  return out;
}

double radial_projection_constant(const kernel::KernelCoeffs& K, const RadialFunction& phi) {
  const auto& w = K.weight();
  const double I = quad::integrate_s(
                       [&](quad::Node n) { return 2.0 * phi.at_s(n.s) * n.t * w.at_s(n.s); }, 0.0,
                       1.0 - phi.start(), 1e-12)
                       .value;
  return I * K[0];
}

quad::SupVerdict moment_necessity(const RadialWeight& w, const RadialWeight& v, double p, int n_max,
                                  const Settings& cfg) {
  if (!(p > 1.0)) throw DomainError("moment_necessity needs p > 1");
  const double q = p / (p - 1.0);
  std::optional<RadialWeight> conj;
  try {
    conj = conjugate_weight(w, v, q);
  } catch (const DomainError&) {
    // (w/v)^{p'} v is not integrable: every A_n is infinite
    return quad::sup_verdict(std::vector<double>{INFINITY}, 1, cfg);
  }
  return geometric_scan(
      n_max,
      [&](int n) {
        const double a = moment(v, n) / moment(w, n);
        const double den = moment(v, 0.5 * n * q);
        const double num = moment(*conj, 0.5 * n * q);
        if (!(den > 0.0) || !(num > 0.0)) throw NumericError("moment underflow at n = " + std::to_string(n), 1.0);
        return std::exp(q * std::log(a) + std::log(num) - std::log(den));
      },
      cfg);
}

namespace {

struct QParts {
  quad::Cumulative K;
  quad::Cumulative outer;
};

std::unique_ptr<QParts> q_parts(const RadialWeight& w, double p) {
  if (!(p > 1.0)) throw DomainError("indicator test needs p > 1");
  auto K = quad::Cumulative([&w](quad::Node n) { return 1.0 / (w.tail_s(n.s) * n.s); },
                            quad::Cumulative::From::One);
  // K is copied into the outer integrand through a shared handle
  auto Kp = std::make_shared<quad::Cumulative>(K);
  auto outer = quad::Cumulative(
      [&w, Kp, p](quad::Node n) {
        const double k = (*Kp)(n.s);
        return k == 0.0 ? 0.0 : std::exp(p * std::log(k) + w.log_at_s(n.s));
      },
      quad::Cumulative::From::One);
  return std::make_unique<QParts>(QParts{std::move(K), std::move(outer)});
}

}  // namespace

double indicator_Q(const RadialWeight& w, double p, double t) {
  if (!(t >= 0.0 && t < 1.0)) throw DomainError("indicator_Q needs t in [0,1)");
  if (t == 0.0) return 0.0;
  const auto q = q_parts(w, p);
  const double s = 1.0 - t;
  return std::pow(w.tail_s(s), p - 1.0) * q->outer(s);
}

quad::SupVerdict indicator_test(const RadialWeight& w, double p, const Settings& cfg) {
  const auto q = q_parts(w, p);
  std::vector<double> values;
  for (int k = 1; k <= cfg.grid_depth; ++k) {
    const double s = std::ldexp(1.0, -k);
    values.push_back(std::exp((p - 1.0) * std::log(w.tail_s(s)) + std::log(q->outer(s))));
  }
  return quad::sup_verdict(std::move(values), 1, cfg);
}

std::vector<RadialFunction> default_tests(int depth) {
  std::vector<RadialFunction> out;
  out.push_back(RadialFunction::monomial(0));
  for (int n = 1; n <= 256; n *= 2) out.push_back(RadialFunction::monomial(n));
  for (int k = 1; k <= depth; ++k) out.push_back(RadialFunction::indicator(1.0 - std::ldexp(1.0, -k)));
  return out;
}

OperatorEstimate opnorm_lower(const kernel::KernelCoeffs& K, const RadialWeight& v, double p,
                              const std::vector<RadialFunction>& tests, int depth,
                              const Settings& cfg) {
  if (!(p >= 1.0)) throw DomainError("opnorm_lower needs p >= 1");
  if (tests.empty()) throw DomainError("opnorm_lower: no test functions");
  const M1Table m1(K, depth, cfg);
  const auto& w = K.weight();
  OperatorEstimate out;
  out.truncation_trend.assign(depth, 0.0);
  for (const auto& phi : tests) {
    const double base = phi.norm(v, p);
    if (!(base > 0.0) || !std::isfinite(base))
      throw DomainError("test function " + phi.label() + " has no finite positive norm");
    // P+ phi is radial and smooth in -log2(1 - |z|): tabulate, then integrate the spline
    std::vector<double> logs;
    for (int j = 0; j <= kPerOctave * depth; ++j)
      logs.push_back(std::log(pplus_at(m1, w, phi, 1.0 - std::exp2(-double(j) / kPerOctave))));
    const auto P = log_spline(logs);
    double acc = 0.0;
    for (int j = 1; j <= depth; ++j) {
      const double s_hi = std::ldexp(1.0, -(j - 1)), s_lo = std::ldexp(1.0, -j);
      acc += quad::integrate_s(
                 [&](quad::Node n) {
                   return 2.0 * std::pow(P(-std::log2(n.s)), p) * v.at_s(n.s) * n.t;
                 },
                 s_lo, s_hi, 1e-10)
                 .value;
      const double ratio = std::pow(acc, 1.0 / p) / base;
      if (ratio > out.truncation_trend[j - 1]) {
        out.truncation_trend[j - 1] = ratio;
        if (j == depth) out.witness = phi.label();
      }
    }
  }
  out.lower_bound = out.truncation_trend.back();
  out.trend = quad::sup_verdict(out.truncation_trend, 1, cfg);
  return out;
}

double bloch_norm_monomial(int k) {
  if (k < 0) throw DomainError("monomial degree must be nonnegative");
  if (k <= 1) return 1.0;
  const double r2 = double(k - 1) / double(k + 1);
  return k * std::pow(r2, 0.5 * (k - 1)) * (1.0 - r2);
}

double bloch_value(const RadialWeight& w, int k) {
  if (k == 0) return 1.0;
  return bloch_norm_monomial(k) * moment(w, 0.5 * k) / moment(w, k);
}

quad::SupVerdict bloch_probe(const RadialWeight& w, int k_max, const Settings& cfg) {
  return geometric_scan(k_max, [&](int k) { return bloch_value(w, k); }, cfg);
}

}  // namespace bergman::operators
