#include "bergman/quad.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>

#include <array>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "bergman/error.hpp"

namespace bergman::quad {
namespace {

using GL = boost::math::quadrature::gauss<double, 16>;

constexpr int kMaxLevels = 1100;
constexpr int kMaxPanelDepth = 40;
constexpr int kPanelBudget = 2000;

struct Sum {
  double value = 0.0;
  double abs = 0.0;
};

// 16-point Gauss-Legendre of f over [x0, x1].
template <class F>
Sum gl16(const F& f, double x0, double x1) {
  const auto& x = GL::abscissa();
  const auto& w = GL::weights();
  const double half = 0.5 * (x1 - x0);
  const double mid = x0 + half;
  Sum out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double fl = f(mid - half * x[i]);
    const double fr = f(mid + half * x[i]);
    out.value += w[i] * (fl + fr);
    out.abs += w[i] * (std::abs(fl) + std::abs(fr));
  }
  out.value *= half;
  out.abs *= std::abs(half);
  return out;
}

template <class F>
Sum adaptive(const F& f, double x0, double x1, const Sum& whole, double tol,
             int depth, double& err, int& budget) {
  --budget;
  const double m = 0.5 * (x0 + x1);
  const Sum left = gl16(f, x0, m);
  const Sum right = gl16(f, m, x1);
  Sum halves{left.value + right.value, left.abs + right.abs};
  const double diff = std::abs(halves.value - whole.value);
  if (!std::isfinite(halves.value)) return halves;
  if (diff <= tol * halves.abs + DBL_MIN || depth >= kMaxPanelDepth ||
      budget <= 0 || m <= x0 || m >= x1) {
    err += diff;
    return halves;
  }
  const Sum a = adaptive(f, x0, m, left, tol, depth + 1, err, budget);
  const Sum b = adaptive(f, m, x1, right, tol, depth + 1, err, budget);
  return {a.value + b.value, a.abs + b.abs};
}

template <class F>
Sum adaptive_panel(const F& f, double x0, double x1, double tol, double& err) {
  // noise-level integrands would otherwise split down to kMaxPanelDepth everywhere
  int budget = kPanelBudget;
  return adaptive(f, x0, x1, gl16(f, x0, x1), tol, 0, err, budget);
}

// Integral over L in [L_min, inf) of exp(c0 + c1 log L + c2 L + c3 / L).
double log_power_tail(const std::array<double, 4>& c, double L_min) {
  if (c[2] > 1e-6 || (c[2] > -1e-6 && c[1] > -1.0 - 1e-6))
    throw DivergentIntegral("endpoint integrand decays too slowly");
  boost::math::quadrature::tanh_sinh<double> ts;
  // L = L_min / u
  return ts.integrate(
      [&](double u) {
        if (u <= 0.0) return 0.0;
        const double L = L_min / u;
        const double e = c[0] + c[1] * std::log(L) + c[2] * L + c[3] / L;
        return std::exp(e + std::log(L_min) - 2.0 * std::log(u));
      },
      0.0, 1.0);
}

// Fits log(d g(d)) against L = log(1/d) on samples L_k and solves for the
// coefficients of {1, log L, L, 1/L} (the last one dropped when m = 3).
std::array<double, 4> fit_log_power(const std::vector<double>& L, const std::vector<double>& y, int m) {
  double A[4][5] = {};
  for (int i = 0; i < m; ++i) {
    const double basis[4] = {1.0, std::log(L[i]), L[i], 1.0 / L[i]};
    for (int j = 0; j < m; ++j) A[i][j] = basis[j];
    A[i][m] = y[i];
  }
  for (int col = 0; col < m; ++col) {
    int piv = col;
    for (int i = col + 1; i < m; ++i)
      if (std::abs(A[i][col]) > std::abs(A[piv][col])) piv = i;
    std::swap(A[piv], A[col]);
    for (int i = 0; i < m; ++i) {
      if (i == col) continue;
      const double f = A[i][col] / A[col][col];
      for (int j = col; j <= m; ++j) A[i][j] -= f * A[col][j];
    }
  }
  std::array<double, 4> c{};
  for (int i = 0; i < m; ++i) c[i] = A[i][m] / A[i][i];
  return c;
}

// Integral of g over offsets (0, D] when the endpoint sits at zero. After
// d = D exp(1 - 1/v) the slowly decaying 1/(d log^a(1/d)) family becomes a
// bounded integrand in v. Offsets below 1e-300 are not representable; there
// d g(d) is continued by a log-power-exponential model in L = log(1/d).
template <class G>
Sum remap_tail(const G& g, double D, double tol, double& err) {
  constexpr double kSmallest = 1e-300;
  const double v_min = 1.0 / (1.0 - std::log(kSmallest / D));
  auto h = [&](double v) {
    const double d = D * std::exp(1.0 - 1.0 / v);
    return g(d) * d / (v * v);
  };
  Sum total;
  for (double hi = 1.0; hi > v_min; hi *= 0.5) {
    const Sum c = adaptive_panel(h, std::max(v_min, 0.5 * hi), hi, tol, err);
    if (!std::isfinite(c.value))
      throw DivergentIntegral("integrand is not finite near the endpoint");
    total.value += c.value;
    total.abs += c.abs;
  }
  const double L_min = -std::log(kSmallest);
  const double L_D = -std::log(D);
  std::vector<double> Ls, ys;
  for (double f : {1.0, 0.75, 0.5, 0.25}) {
    const double L = L_D + f * (L_min - L_D);
    const double d = std::exp(-L);
    const double y = g(d) * d;
    if (!(y > 0.0) || !std::isfinite(y)) {
      if (Ls.empty() && y == 0.0) return total;  // vanishes at the endpoint
      break;
    }
    Ls.push_back(L);
    ys.push_back(std::log(y));
  }
  double rem;
  if (Ls.size() == 4) {
    rem = log_power_tail(fit_log_power(Ls, ys, 4), L_min);
    double rem3;
    try {
      rem3 = log_power_tail(fit_log_power(Ls, ys, 3), L_min);
    } catch (const DivergentIntegral&) {
      rem3 = 0.0;
    }
    err += std::abs(rem - rem3);
  } else {
    rem = std::abs(h(v_min)) * v_min;
    err += rem;
  }
  total.value += rem;
  total.abs += std::abs(rem);
  return total;
}

// One half of the interval: offsets d in (0, width] away from an endpoint,
// split into panels [width 2^{-j-1}, width 2^{-j}]. Refinement stops once d
// no longer resolves the smaller of the endpoint's two coordinates.
template <class MakeNode>
Sum side(const Integrand& f, const MakeNode& make, double anchor, double width,
         double tol, double& err) {
  auto g = [&](double d) { return f(make(d)); };
  bool vanishes_at_anchor = false;
  try {
    vanishes_at_anchor = f(make(0.0)) == 0.0;
  } catch (const Error&) {
  }
  Sum total;
  std::vector<double> mags;
  mags.reserve(128);
  for (int j = 0; j < kMaxLevels; ++j) {
    const double d1 = std::ldexp(width, -j);
    const double d0 = 0.5 * d1;
    if (anchor != 0.0 && d0 < 4.0 * std::abs(anchor) * DBL_EPSILON) return total;
    if (d0 < DBL_MIN) break;
    const Sum c = adaptive_panel(g, d0, d1, tol, err);
    if (!std::isfinite(c.value))
      throw DivergentIntegral("integrand is not finite near the endpoint");
    total.value += c.value;
    total.abs += c.abs;
    mags.push_back(c.abs);
    const std::size_t n = mags.size();
    if (n < 4) continue;
    const double cur = mags[n - 1];
    const double prev = mags[n - 2];
    if (cur == 0.0 && prev == 0.0 && total.abs > 0.0) return total;
    if (total.abs == 0.0 && n >= 8 && vanishes_at_anchor) return total;
    if (prev > 0.0 && cur < prev) {
      const double q = cur / prev;
      const double tail = cur * q / (1.0 - q);
      if (tail <= 0.25 * tol * total.abs) {
        // geometric continuation of the remaining panels
        total.value += c.value * q / (1.0 - q);
        err += 0.1 * tail;
        return total;
      }
    }
    if (anchor == 0.0 && n >= 40) {
      const Sum rest = remap_tail(g, d0, tol, err);
      total.value += rest.value;
      total.abs += rest.abs;
      return total;
    }
    if (n >= 64) {
      bool flat = true;
      for (std::size_t i = n - 16; i < n; ++i)
        if (mags[i] < 0.999 * mags[i - 1]) flat = false;
      if (flat) throw DivergentIntegral("panel contributions do not decay");
    }
  }
  const std::size_t n = mags.size();
  const double last = n ? mags.back() : 0.0;
  throw NumericError("endpoint refinement exhausted",
                     total.abs > 0 ? last / total.abs : last);
}

}  // namespace

Result integrate_s(const Integrand& f, double s_lo, double s_hi, double tol) {
  if (!(s_lo <= s_hi)) throw DomainError("integrate_s: need s_lo <= s_hi");
  if (s_lo < 0.0 || s_hi > 1.0) throw DomainError("integrate_s: outside [0,1]");
  if (s_lo == s_hi) return {};
  const double width = 0.5 * (s_hi - s_lo);
  const double t_lo = 1.0 - s_lo;  // t at the s_lo end
  const double t_hi = 1.0 - s_hi;  // t at the s_hi end
  double err = 0.0;
  const Sum a = side(
      f, [&](double d) { return Node{t_lo - d, s_lo + d}; },
      std::min(s_lo, t_lo), width, tol, err);
  const Sum b = side(
      f, [&](double d) { return Node{t_hi + d, s_hi - d}; },
      std::min(s_hi, t_hi), width, tol, err);
  return {a.value + b.value, err};
}

Result integrate(const Integrand& f, double a, double b, double tol) {
  if (!(a <= b)) throw DomainError("integrate: need a <= b");
  if (a < 0.0 || b > 1.0) throw DomainError("integrate: outside [0,1]");
  return integrate_s(f, 1.0 - b, 1.0 - a, tol);
}

double panel_s(const Integrand& f, double s0, double s1, double tol) {
  if (s0 == s1) return 0.0;
  double err = 0.0;
  auto g = [&](double s) { return f(Node{1.0 - s, s}); };
  return adaptive_panel(g, s0, s1, tol, err).value;
}

// ---------------------------------------------------------------------------

Cumulative::Cumulative(Integrand g, From from, double tol, int octaves,
                       int per_octave)
    : g_(std::move(g)), from_(from), tol_(tol), per_octave_(per_octave),
      last_(octaves * per_octave), cum_(last_ + 1, 0.0) {
  if (from_ == From::Zero) {
    double base;
    try {
      base = integrate_s(g_, 0.0, knot(last_), tol_).value;
    } catch (const DivergentIntegral&) {
      base = std::numeric_limits<double>::infinity();
    }
    cum_[last_] = base;
    for (int j = last_ - 1; j >= 0; --j)
      cum_[j] = cum_[j + 1] + panel_s(g_, knot(j + 1), knot(j), tol_);
  } else {
    for (int j = 0; j < last_; ++j)
      cum_[j + 1] = cum_[j] + panel_s(g_, knot(j + 1), knot(j), tol_);
  }
}

double Cumulative::knot(int j) const {
  return std::ldexp(std::exp2(-static_cast<double>(j % per_octave_) / per_octave_),
                    -(j / per_octave_));
}

double Cumulative::operator()(double s) const {
  if (!(s >= 0.0 && s <= 1.0)) throw DomainError("Cumulative: s outside [0,1]");
  if (s == 0.0) return from_ == From::Zero ? 0.0 : total();
  int j = static_cast<int>(std::floor(-per_octave_ * std::log2(s)));
  if (j < last_) {
    while (j > 0 && knot(j) < s) --j;
    while (j + 1 <= last_ && knot(j + 1) > s) ++j;
  }
  if (j >= last_) {
    if (from_ == From::Zero) {
      try {
        return integrate_s(g_, 0.0, s, tol_).value;
      } catch (const DivergentIntegral&) {
        return std::numeric_limits<double>::infinity();
      }
    }
    return cum_[last_] + integrate_s(g_, s, knot(last_), tol_).value;
  }
  if (s == knot(j)) return cum_[j];
  if (from_ == From::Zero) return cum_[j + 1] + panel_s(g_, knot(j + 1), s, tol_);
  return cum_[j] + panel_s(g_, s, knot(j), tol_);
}

double Cumulative::total() const {
  if (from_ == From::Zero) return cum_[0];
  try {
    return cum_[last_] + integrate_s(g_, 0.0, knot(last_), tol_).value;
  } catch (const DivergentIntegral&) {
    return std::numeric_limits<double>::infinity();
  }
}

// ---------------------------------------------------------------------------

DyadicGrid::DyadicGrid(int depth) : depth_(depth) {
  if (depth < 3 || depth > kMaxGridDepth)
    throw DomainError("grid depth must lie in [3, 48]");
}

double DyadicGrid::s(int level) const { return std::ldexp(1.0, -level); }
double DyadicGrid::r(int level) const { return 1.0 - std::ldexp(1.0, -level); }

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Bounded: return "Bounded";
    case Verdict::Divergent: return "Divergent";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

namespace {

// Least-squares slope of y against x.
double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  if (x.size() < 2) return 0.0;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0 ? sxy / sxx : 0.0;
}

// Growth order of F over levels [i0, i1): slope of log2 F vs log2 level.
double growth_order(const std::vector<double>& f, int first_level,
                    std::size_t i0, std::size_t i1) {
  std::vector<double> x, y;
  for (std::size_t i = i0; i < i1; ++i) {
    if (!(f[i] > 0.0)) continue;
    x.push_back(std::log2(static_cast<double>(first_level + static_cast<int>(i))));
    y.push_back(std::log2(f[i]));
  }
  return ls_slope(x, y);
}

}  // namespace

SupVerdict sup_verdict(std::vector<double> values, int first_level,
                       const Settings& cfg) {
  if (first_level < 1) throw DomainError("sup_verdict: levels start at 1");
  SupVerdict out;
  out.first_level = first_level;
  out.values = std::move(values);
  const auto& f = out.values;
  const std::size_t n = f.size();
  if (n == 0) return out;

  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(f[i])) {
      out.sup_value = std::numeric_limits<double>::infinity();
      out.argmax_level = first_level + static_cast<int>(i);
      out.tail_slope = std::numeric_limits<double>::infinity();
      out.increment_ratio = std::numeric_limits<double>::infinity();
      out.verdict = Verdict::Divergent;
      return out;
    }
  }
  const auto it = std::max_element(f.begin(), f.end());
  out.sup_value = *it;
  out.argmax_level = first_level + static_cast<int>(it - f.begin());
  if (n < 4) return out;

  const std::size_t third = std::max<std::size_t>(3, n / 3);
  const std::size_t t0 = n - std::min(third, n - 1);
  const std::size_t m0 = t0 >= third ? t0 - third : 0;
  const double tail_max = *std::max_element(f.begin() + t0, f.end());
  const double mid_max =
      t0 > m0 ? *std::max_element(f.begin() + m0, f.begin() + t0) : f[0];

  out.tail_slope = growth_order(f, first_level, t0, n);
  const std::size_t half = t0 + (n - t0) / 2;
  const double slope_a = growth_order(f, first_level, t0, half + 1);
  const double slope_b = growth_order(f, first_level, half, n);

  // Increments over the tail window.
  std::vector<double> inc;
  for (std::size_t i = t0; i + 1 < n; ++i) inc.push_back(f[i + 1] - f[i]);
  double inc_max = 0.0;
  for (double d : inc) inc_max = std::max(inc_max, std::abs(d));
  const bool flat = inc_max <= 1e-12 * std::abs(tail_max);
  const bool rising = std::all_of(inc.begin(), inc.end(), [](double d) { return d > 0; });
  const bool falling = std::all_of(inc.begin(), inc.end(), [](double d) { return d < 0; });
  double q = 0.0;
  if (rising && inc.size() >= 2) {
    std::vector<double> x, y;
    for (std::size_t i = 0; i < inc.size(); ++i) {
      x.push_back(static_cast<double>(i));
      y.push_back(std::log2(inc[i]));
    }
    q = std::exp2(ls_slope(x, y));
  }
  out.increment_ratio = q;

  constexpr double kDecayMargin = 1e-3;
  if (flat || falling) {
    out.verdict = Verdict::Bounded;
  } else if (rising && q <= 1.0 - kDecayMargin) {
    out.verdict = Verdict::Bounded;
  } else if (rising && q >= 1.0 - kDecayMargin && out.tail_slope >= cfg.slope_min) {
    out.verdict = Verdict::Divergent;
  } else if (out.tail_slope <= cfg.slope_tol && tail_max <= 2.0 * mid_max) {
    out.verdict = Verdict::Bounded;
  } else if (slope_a >= cfg.slope_min && slope_b >= cfg.slope_min) {
    out.verdict = Verdict::Divergent;
  } else {
    out.verdict = Verdict::Inconclusive;
  }
  return out;
}

SupVerdict sup_verdict(const std::function<double(double, double)>& F,
                       const DyadicGrid& grid, const Settings& cfg) {
  std::vector<double> values;
  values.reserve(grid.depth());
  for (int k = 1; k <= grid.depth(); ++k) {
    const double v = F(grid.r(k), grid.s(k));
    values.push_back(v);
    if (!std::isfinite(v)) break;
  }
  return sup_verdict(std::move(values), 1, cfg);
}

Limit extrapolate_limit(const std::vector<double>& values) {
  const std::size_t n = values.size();
  if (n < 6) throw DomainError("extrapolate_limit: need at least 6 values");
  for (double v : values)
    if (!std::isfinite(v)) throw ConvergenceError("non-finite value in sequence", values);

  double scale = 0.0;
  for (double v : values) scale = std::max(scale, std::abs(v));
  const double noise = 64.0 * DBL_EPSILON * std::max(scale, DBL_MIN);

  std::vector<double> d(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) d[i] = values[i + 1] - values[i];

  // Deepest index whose increment is still above rounding noise.
  std::size_t last = n - 1;
  while (last > 0 && std::abs(d[last - 1]) <= noise) --last;
  if (last == 0) return {values.back(), 0.0};  // constant sequence

  const std::vector<double> tail(values.begin() + (n > 6 ? n - 6 : 0), values.end());
  // Increment magnitudes must shrink over the usable part of the tail.
  if (last >= 4) {
    const double a = std::abs(d[last - 1]);
    const double b = std::abs(d[last - 4]);
    if (a > 0.9 * b) throw ConvergenceError("tail increments do not decay", tail);
  } else if (last < n - 1) {
    // Sequence became flat early; accept the plateau.
    return {values[last], std::abs(d[last - 1])};
  } else {
    throw ConvergenceError("too few informative values", tail);
  }

  auto aitken = [&](std::size_t i) {  // uses values i, i+1, i+2
    const double d1 = values[i + 1] - values[i];
    const double d2 = values[i + 2] - values[i + 1];
    const double den = d2 - d1;
    if (std::abs(den) <= noise) return values[i + 2];
    return values[i + 2] - d2 * d2 / den;
  };
  // Last triple whose two increments are informative.
  const std::size_t i = last - 2;
  const double a_last = aitken(i);
  const double a_prev = i > 0 ? aitken(i - 1) : values[i + 1];
  if (last < n - 1) {
    // Deeper values are flat: the plateau agrees with the extrapolation.
    return {a_last, std::max(std::abs(a_last - a_prev), std::abs(values.back() - a_last))};
  }
  return {a_last, std::abs(a_last - a_prev)};
}

}  // namespace bergman::quad
