#pragma once

namespace bergman {

/// Numerical knobs shared by every module. Defaults are the documented ones;
/// the CLI overrides them from flags.
struct Settings {
  int grid_depth = 36;        ///< dyadic levels r_k = 1 - 2^-k, k = 1..depth
  double tol = 1e-12;         ///< relative quadrature tolerance
  double slope_tol = 0.02;    ///< Bounded if the tail growth order is below this
  double slope_min = 0.2;     ///< Divergent if the tail growth order exceeds this
  double x_max = 0.999999;    ///< largest |a||z| accepted by kernel sums
  double regular_bound = 1e3; ///< max/min of psi/(1-r) allowed for class Regular
  double essential_factor = 1.05;  ///< tolerance for "essentially monotone"
};

inline constexpr int kMaxGridDepth = 48;

}  // namespace bergman
