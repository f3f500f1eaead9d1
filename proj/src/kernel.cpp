#include "bergman/kernel.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <fftw3.h>

#include "bergman/error.hpp"

namespace bergman::kernel {
namespace {

double falling(int n, int N) {
  double f = 1.0;
  for (int i = 0; i < N; ++i) f *= double(n - i);
  return f;
}

void check_order(int N) {
  if (N < 0 || N > kMaxDerivative)
    throw DomainError("derivative order must lie in [0, " + std::to_string(kMaxDerivative) + "]");
}

// bound exponent for term ratios beyond index n: x exp(g/n + N/(n-N+1))
double ratio_bound(double x, double g, int n, int N) {
  return x * std::exp(g / n + double(N) / double(n - N + 1));
}

// Extrapolates c_n ~ c_last (n/last)^g beyond the table to size the request.
long required_terms(const KernelCoeffs& K, double x, int N, double tol) {
  const int last = K.n_max();
  const double g = K.growth_exponent() + 1.0;
  double sum = 0.0;
  for (long n = std::max(N, 1); n < 4'000'000'000L; n = n < last ? n + 1 : long(n * 1.01) + 1) {
    const double c = n <= last ? K[int(n)] : K[last] * std::pow(double(n) / last, g);
    const double u = c * std::pow(double(n), N) * std::pow(x, double(n));
    sum = std::max(sum, u);
    const double y = ratio_bound(x, g, int(std::min<long>(n, 2'000'000'000L)), N);
    if (y < 1.0 && u * y / (1.0 - y) <= tol * sum) return n + 1;
  }
  return -1;
}

}  // namespace

std::vector<double> moment_table(const RadialWeight& w, int n_max) {
  if (n_max < 0) throw DomainError("moment_table: n_max must be nonnegative");
  std::vector<double> m(n_max + 1);
  if (w.closed_forms().moment) {
    for (int n = 0; n <= n_max; ++n) m[n] = w.closed_forms().moment(n);
    return m;
  }
  // 16-point Gauss-Legendre on 8 equal panels per octave of sigma = 1 - r,
  // octaves 2^-64..1; nodes ascending in sigma
  using GL = boost::math::quadrature::gauss<double, 16>;
  constexpr int kOctaves = 64, kPanels = 8;
  std::vector<double> sig, W;
  for (int j = kOctaves - 1; j >= 0; --j) {
    const double lo = std::ldexp(1.0, -j - 1), width = lo / kPanels;
    for (int k = 0; k < kPanels; ++k) {
      const double a = lo + k * width, half = 0.5 * width, mid = a + half;
      std::vector<std::pair<double, double>> nodes;
      const auto& x = GL::abscissa();
      const auto& wt = GL::weights();
      for (std::size_t i = 0; i < x.size(); ++i) {
        nodes.emplace_back(mid - half * x[i], half * wt[i]);
        nodes.emplace_back(mid + half * x[i], half * wt[i]);
      }
      std::sort(nodes.begin(), nodes.end());
      for (auto& [s, h] : nodes) {
        sig.push_back(s);
        W.push_back(h * w.at_s(s));
      }
    }
  }
  const double deep = w.tail_s(std::ldexp(1.0, -kOctaves));
  std::vector<double> f(sig.size()), b(sig.size()), lg(sig.size());
  for (std::size_t i = 0; i < sig.size(); ++i) {
    lg[i] = std::log1p(-sig[i]);
    b[i] = (1.0 - sig[i]) * (1.0 - sig[i]);
  }
  std::size_t end = sig.size();
  for (int n = 0; n <= n_max; ++n) {
    if (n % 64 == 0)
      for (std::size_t i = 0; i < end; ++i) f[i] = std::exp((2.0 * n + 1.0) * lg[i]);
    double sum = deep;
    for (std::size_t i = 0; i < end; ++i) sum += W[i] * f[i];
    m[n] = sum;
    for (std::size_t i = 0; i < end; ++i) f[i] *= b[i];
    while (end > 0 && f[end - 1] < 1e-280) --end;
  }
  return m;
}

KernelCoeffs::KernelCoeffs(RadialWeight w, int n_max, const Settings& cfg) : w_(std::move(w)) {
  if (n_max < 1) throw DomainError("kernel_coeffs: n_max must be at least 1");
  m_ = moment_table(w_, n_max);
  c_.resize(m_.size());
  for (int n = 0; n <= n_max; ++n) {
    if (!(m_[n] > 0.0) || !std::isfinite(m_[n]))
      throw NumericError("moment underflow at n = " + std::to_string(n), 1.0);
    c_[n] = 0.5 / m_[n];
    if (n > 0 && c_[n] < c_[n - 1] * (1.0 - 1e-10))
      throw NumericError("kernel coefficients decrease at n = " + std::to_string(n),
                         (c_[n - 1] - c_[n]) / c_[n - 1]);
  }
  const auto d = doubling_report(w_, cfg);
  gamma_ = std::isfinite(d.beta) ? d.beta : 0.0;
  for (int n = 1; 2 * n <= n_max; n *= 2) gamma_ = std::max(gamma_, std::log2(c_[2 * n] / c_[n]));
}

KernelCoeffs kernel_coeffs(const RadialWeight& w, int n_max, const Settings& cfg) {
  return KernelCoeffs(w, n_max, cfg);
}

int terms_needed(const KernelCoeffs& K, double x, int N, double tol) {
  check_order(N);
  if (!(x >= 0.0 && x < 1.0)) throw DomainError("terms_needed: need 0 <= x < 1");
  if (x == 0.0 || N > K.n_max()) {
    if (N > K.n_max()) throw TruncationError("derivative order beyond the coefficient table", N + 1);
    return N + 1;
  }
  const double g = K.growth_exponent() + 1.0;
  double sum = 0.0, xp = std::pow(x, double(std::max(N, 1)));
  if (N == 0) sum = K[0];
  for (int n = std::max(N, 1); n <= K.n_max(); ++n, xp *= x) {
    const double u = K[n] * falling(n, N) * xp;
    sum += u;
    const double y = ratio_bound(x, g, n, N);
    if (y < 1.0 && u * y / (1.0 - y) <= tol * sum) return n + 1;
    if (xp == 0.0) return n + 1;
  }
  throw TruncationError("kernel series needs more coefficients than " + std::to_string(K.n_max()),
                        required_terms(K, x, N, tol));
}

cplx kernel_eval(const KernelCoeffs& K, cplx a, cplx z, int N, double tol, const Settings& cfg) {
  check_order(N);
  const double aa = std::abs(a), az = std::abs(z);
  if (!(aa < 1.0 && az < 1.0)) throw DomainError("kernel_eval: need |a| < 1 and |z| < 1");
  const double x = aa * az;
  if (x > cfg.x_max) throw DomainError("kernel_eval: |a||z| exceeds x_max");
  const cplx ca = std::conj(a);
  const cplx aN = std::pow(ca, N);
  if (aa == 0.0) return N == 0 ? cplx(K[0]) : cplx(0.0);
  if (az == 0.0) return K[N] * falling(N, N) * aN;
  const double g = K.growth_exponent() + 1.0;
  const cplx w = ca * z;
  cplx sum = 0.0, wp = 1.0;  // wp = w^{n-N}
  double mag = std::pow(aa, N);  // |a|^N x^{n-N}
  for (int n = N; n <= K.n_max(); ++n) {
    const double coef = K[n] * falling(n, N);
    sum += coef * aN * wp;
    if (n >= 1) {
      const double u = coef * mag;
      const double y = ratio_bound(x, g, n, N);
      if ((y < 1.0 && u * y / (1.0 - y) <= tol * std::abs(sum)) || u == 0.0) return sum;
    }
    wp *= w;
    mag *= x;
  }
  throw TruncationError("kernel series needs more coefficients than " + std::to_string(K.n_max()),
                        required_terms(K, x, N, tol));
}

namespace {

// b_k = c_{k+N} (k+N)!/k! |a|^{k+N} r^k, k = 0..
std::vector<double> circle_coeffs(const KernelCoeffs& K, double aa, double r, int N, double tol) {
  const int count = terms_needed(K, aa * r, N, tol);
  std::vector<double> b;
  b.reserve(count);
  double amp = std::pow(aa, N);
  for (int n = N; n < count; ++n) {
    b.push_back(K[n] * falling(n, N) * amp);
    amp *= aa * r;
  }
  return b;
}

void check_mean_args(const KernelCoeffs& K, cplx a, double r, double p, int N, const Settings& cfg) {
  check_order(N);
  (void)K;
  if (!(p > 0.0)) throw DomainError("circle_mean: p must be positive");
  if (!(r >= 0.0 && r < 1.0)) throw DomainError("circle_mean: need 0 <= r < 1");
  if (!(std::abs(a) < 1.0)) throw DomainError("circle_mean: need |a| < 1");
  if (std::abs(a) * r > cfg.x_max) throw DomainError("circle_mean: r|a| exceeds x_max");
}

double trapezoid_mean(const std::vector<double>& b, double p, double x) {
  if (b.size() == 1) return std::pow(std::abs(b[0]), p);
  constexpr int kMaxPoints = 1 << 23;
  const int guard = int(std::min<double>(double(b.size()), 4.0 / (1.0 - x)));
  double prev = NAN;
  for (int M = 64; M <= kMaxPoints; M *= 2) {
    fftw_complex* buf = fftw_alloc_complex(M);
    for (int m = 0; m < M; ++m) buf[m][0] = buf[m][1] = 0.0;
    for (std::size_t k = 0; k < b.size(); ++k) buf[k % M][0] += b[k];
    fftw_plan plan = fftw_plan_dft_1d(M, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    double sum = 0.0;
    for (int j = 0; j < M; ++j) sum += std::pow(std::hypot(buf[j][0], buf[j][1]), p);
    fftw_destroy_plan(plan);
    fftw_free(buf);
    const double mean = sum / M;
    if (!std::isfinite(mean)) throw NumericError("circle mean is not finite", INFINITY);
    if (M >= guard && std::abs(mean - prev) <= 1e-10 * mean) return mean;
    prev = mean;
  }
  throw NumericError("theta resolution not converged", std::abs(prev));
}

}  // namespace

double circle_mean_trapezoid(const KernelCoeffs& K, cplx a, double r, double p, int N,
                             const Settings& cfg) {
  check_mean_args(K, a, r, p, N, cfg);
  const double aa = std::abs(a);
  return trapezoid_mean(circle_coeffs(K, aa, r, N, 1e-17), p, aa * r);
}

double circle_mean(const KernelCoeffs& K, cplx a, double r, double p, int N, const Settings& cfg) {
  check_mean_args(K, a, r, p, N, cfg);
  const double aa = std::abs(a);
  const auto b = circle_coeffs(K, aa, r, N, 1e-17);
  if (p != 2.0) return trapezoid_mean(b, p, aa * r);
  double sum = 0.0;
  for (double c : b) sum += c * c;
  return sum;
}

double series_mean(const KernelCoeffs& K, double x, double p, const Settings& cfg) {
  if (!(p > 0.0)) throw DomainError("series_mean: p must be positive");
  if (!(x >= 0.0 && x <= cfg.x_max)) throw DomainError("series_mean: need 0 <= x <= x_max");
  const auto b = circle_coeffs(K, x, 1.0, 0, 1e-17);
  if (p != 2.0) return trapezoid_mean(b, p, x);
  double sum = 0.0;
  for (double c : b) sum += c * c;
  return sum;
}

double bergman_norm(const KernelCoeffs& K, cplx a, const RadialWeight& v, double p, int N,
                    const Settings& cfg) {
  check_order(N);
  const double aa = std::abs(a);
  if (!(aa < 1.0)) throw DomainError("bergman_norm: need |a| < 1");
  if (!(p > 0.0)) throw DomainError("bergman_norm: p must be positive");
  if (p == 2.0) {
    // |f|^2 averages to sum b_k^2 r^{2k}; integrating against 2 r v(r) gives 2 v_k
    const auto b = circle_coeffs(K, aa, 1.0, N, 1e-17);
    const auto vm = moment_table(v, int(b.size()));
    double sum = 0.0;
    for (std::size_t k = 0; k < b.size(); ++k) sum += b[k] * b[k] * 2.0 * vm[k];
    return sum;
  }
  const auto direct = [&] {
    return quad::integrate(
               [&](quad::Node n) {
                 // the mean is continuous up to radius 1; nodes that round onto it move inside
                 const double r = std::min(n.t, std::nextafter(1.0, 0.0));
                 return 2.0 * circle_mean(K, a, r, p, N, cfg) * r * v.at_s(n.s);
               },
               0.0, 1.0, 1e-10)
        .value;
  };
  if (aa <= 0.5) return direct();

  // The mean over |z| = t is smooth in u = -log2(1 - |a| t): tabulate its log
  // on 32 knots per octave and integrate the spline.
  const double u_max = -std::log2(1.0 - aa);
  const int J = std::max(8, int(std::ceil(32.0 * u_max)));
  const double h = u_max / J;
  std::vector<double> logs;
  for (int j = 0; j <= J; ++j) {
    const double t = j == J ? 1.0 : std::min((1.0 - std::exp2(-j * h)) / aa, 1.0);
    const double m = circle_mean(K, a, std::min(t, std::nextafter(1.0, 0.0)), p, N, cfg);
    if (!(m > 0.0) || !std::isfinite(m)) return direct();
    logs.push_back(std::log(m));
  }
  const boost::math::interpolators::cardinal_cubic_b_spline<double> spline(logs.begin(), logs.end(),
                                                                           0.0, h);
  return quad::integrate(
             [&](quad::Node n) {
               const double u = std::min(-std::log2(1.0 - aa * n.t), u_max);
               return 2.0 * std::exp(spline(u)) * n.t * v.at_s(n.s);
             },
             0.0, 1.0, 1e-10)
      .value;
}

double mean_comparand(const RadialWeight& w, double p, int N, double x) {
  check_order(N);
  if (!(x >= 0.0 && x < 1.0)) throw DomainError("mean_comparand: need 0 <= x < 1");
  if (x == 0.0) return 0.0;
  const double e = p * (N + 1);
  return quad::integrate_s(
             [&](quad::Node n) { return 1.0 / (std::pow(w.tail_s(n.s), p) * std::pow(n.s, e)); },
             1.0 - x, 1.0, 1e-11)
      .value;
}

double norm_comparand(const RadialWeight& w, const RadialWeight& v, double p, int N, double a_abs) {
  check_order(N);
  if (!(a_abs >= 0.0 && a_abs < 1.0)) throw DomainError("norm_comparand: need 0 <= |a| < 1");
  if (a_abs == 0.0) return 0.0;
  const double e = p * (N + 1);
  return quad::integrate_s(
             [&](quad::Node n) {
               return v.tail_s(n.s) / (std::pow(w.tail_s(n.s), p) * std::pow(n.s, e));
             },
             1.0 - a_abs, 1.0, 1e-11)
      .value;
}

double local_comparand(const RadialWeight& w, const RadialWeight& v, double p, int N, double a_abs) {
  check_order(N);
  if (!(a_abs >= 0.0 && a_abs < 1.0)) throw DomainError("local_comparand: need 0 <= |a| < 1");
  const double s = 1.0 - a_abs;
  return v.tail_s(s) / (std::pow(w.tail_s(s), p) * std::pow(s, p * (N + 1) - 1.0));
}

RatioScan ratio_scan(const std::vector<double>& measured, const std::vector<double>& comparand,
                     int first_level, const Settings& cfg) {
  if (measured.size() != comparand.size()) throw DomainError("ratio_scan: length mismatch");
  std::vector<double> up, down;
  for (std::size_t i = 0; i < measured.size(); ++i) {
    if (!(measured[i] > 0.0) || !(comparand[i] > 0.0))
      throw DomainError("ratio_scan: values must be positive (level " +
                        std::to_string(first_level + int(i)) + ")");
    up.push_back(measured[i] / comparand[i]);
    down.push_back(comparand[i] / measured[i]);
  }
  RatioScan out;
  out.up = quad::sup_verdict(up, first_level, cfg);
  out.down = quad::sup_verdict(down, first_level, cfg);
  out.equivalent = out.up.verdict == quad::Verdict::Bounded && out.down.verdict == quad::Verdict::Bounded;
  return out;
}

RatioScan ratio_scan(const std::function<double(double r, double s)>& measured,
                     const std::function<double(double r, double s)>& comparand,
                     const quad::DyadicGrid& grid, const Settings& cfg) {
  std::vector<double> m, c;
  for (int k = 1; k <= grid.depth(); ++k) {
    m.push_back(measured(grid.r(k), grid.s(k)));
    c.push_back(comparand(grid.r(k), grid.s(k)));
  }
  return ratio_scan(m, c, 1, cfg);
}

LP1Result lp1_check(const CoeffPoly& f, const RadialWeight& w) {
  LP1Result out;
  for (std::size_t n = 0; n < f.size(); ++n) {
    const double c2 = std::norm(f[n]);
    if (c2 == 0.0) continue;
    out.lhs += c2 * 2.0 * moment(w, double(n));
    if (n > 0) out.rhs += 4.0 * double(n * n) * c2 * 2.0 * associated_moment(w, double(n - 1));
  }
  if (!f.empty()) out.rhs += area_mass(w) * std::norm(f[0]);
  out.rel_err = out.lhs == 0.0 ? std::abs(out.rhs) : std::abs(out.lhs - out.rhs) / std::abs(out.lhs);
  return out;
}

cplx poly_eval(const CoeffPoly& f, cplx z) {
  cplx acc = 0.0;
  for (auto it = f.rbegin(); it != f.rend(); ++it) acc = acc * z + *it;
  return acc;
}

cplx reproduce(const CoeffPoly& f, const KernelCoeffs& K, cplx a) {
  if (!(std::abs(a) < 1.0)) throw DomainError("reproduce: need |a| < 1");
  constexpr int M = 512;
  const double pi = std::acos(-1.0);
  auto avg = [&](double r) {
    cplx s = 0.0;
    for (int j = 0; j < M; ++j) {
      const cplx z = std::polar(r, 2.0 * pi * j / M);
      s += poly_eval(f, z) * std::conj(kernel_eval(K, a, z));
    }
    return s / double(M);
  };
  const RadialWeight& w = K.weight();
  auto part = [&](bool imag) {
    return quad::integrate(
               [&](quad::Node n) {
                 if (n.t >= 1.0) return 0.0;
                 const cplx v = avg(n.t);
                 return 2.0 * n.t * w.at_s(n.s) * (imag ? v.imag() : v.real());
               },
               0.0, 1.0, 1e-11)
        .value;
  };
  return {part(false), part(true)};
}

}  // namespace bergman::kernel
