#pragma once

// Boundary-aware integration on (0,1), dyadic probe grids, limit
// extrapolation and the sup-verdict engine.
//
// Every integrand receives both coordinates of its abscissa: t in [0,1] and
// the distance to the boundary s = 1 - t. The engine generates s exactly near
// the right endpoint, so integrands with (1-t)^{-q} factors should be written
// as s^{-q}.

#include <functional>
#include <string>
#include <vector>

#include "bergman/settings.hpp"

namespace bergman::quad {

struct Node {
  double t;  ///< abscissa in [0,1]
  double s;  ///< 1 - t, accurate near t = 1
};

using Integrand = std::function<double(Node)>;

struct Result {
  double value = 0.0;
  double error = 0.0;  ///< absolute error estimate
};

/// Integral of f over t in [a,b] subset of [0,1]. Composite 16-point
/// Gauss-Legendre on dyadic panels refined toward both endpoints.
/// Throws DivergentIntegral when panel contributions stop decaying and
/// NumericError when the tail tolerance is not met at maximal refinement.
Result integrate(const Integrand& f, double a, double b, double tol = 1e-12);

/// Same engine on the boundary-distance interval s in [s_lo, s_hi]
/// (t = 1 - s). Preferred when the endpoint of interest is t = 1.
Result integrate_s(const Integrand& f, double s_lo, double s_hi,
                   double tol = 1e-12);

/// Adaptive Gauss-Legendre on a panel [s0, s1] with no endpoint refinement.
double panel_s(const Integrand& f, double s0, double s1, double tol);

/// Running integral of g over (0, s] or [s, 1], precomputed on geometric
/// knots s_j = 2^{-j/per_octave} so that repeated queries at many radii
/// share the same panels. Immutable after construction.
class Cumulative {
 public:
  enum class From { Zero, One };

  Cumulative(Integrand g, From from, double tol = 1e-13, int octaves = 60,
             int per_octave = 8);

  /// From::Zero -> integral over (0, s]; From::One -> integral over [s, 1].
  /// May be +inf when the integral diverges at s = 0 (From::Zero only).
  double operator()(double s) const;

  double total() const;  ///< integral over (0, 1]

 private:
  double knot(int j) const;

  Integrand g_;
  From from_;
  double tol_;
  int per_octave_;
  int last_;                  // index of the deepest knot
  std::vector<double> cum_;   // cumulative value at each knot
};

/// r_k = 1 - 2^{-k}, k = 1..depth, stored through s_k = 2^{-k}.
class DyadicGrid {
 public:
  explicit DyadicGrid(int depth = 36);

  int depth() const noexcept { return depth_; }
  double s(int level) const;  ///< 2^{-level}
  double r(int level) const;  ///< 1 - 2^{-level}

 private:
  int depth_;
};

enum class Verdict { Bounded, Divergent, Inconclusive };

std::string to_string(Verdict v);

struct SupVerdict {
  double sup_value = 0.0;
  int argmax_level = 0;
  double tail_slope = 0.0;       ///< LS slope of log2 F against log2 level
  double increment_ratio = 0.0;  ///< geometric decay ratio of tail increments
  Verdict verdict = Verdict::Inconclusive;
  int first_level = 1;
  std::vector<double> values;    ///< F at each level, starting at first_level
};

/// Decides whether the sequence F(level), level = first_level.., stays
/// bounded. Non-finite values make the verdict Divergent at that level.
SupVerdict sup_verdict(std::vector<double> values, int first_level = 1,
                       const Settings& cfg = {});

/// Samples F(r, s) on the grid and applies sup_verdict.
SupVerdict sup_verdict(const std::function<double(double r, double s)>& F,
                       const DyadicGrid& grid, const Settings& cfg = {});

struct Limit {
  double value = 0.0;
  double error = 0.0;  ///< last extrapolation increment
};

/// Aitken/Richardson limit of F(r_k) assuming F = L + c 2^{-gamma k}.
/// Needs at least 6 values; throws ConvergenceError on a non-Cauchy tail.
Limit extrapolate_limit(const std::vector<double>& values);

}  // namespace bergman::quad
