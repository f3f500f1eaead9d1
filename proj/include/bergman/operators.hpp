#pragma once

// The positive Bergman projection restricted to radial functions, and the
// test families that detect its unboundedness.

#include <functional>
#include <string>
#include <vector>

#include "bergman/kernel.hpp"
#include "bergman/quad.hpp"
#include "bergman/settings.hpp"
#include "bergman/weights.hpp"

namespace bergman::operators {

class RadialFunction {
 public:
  enum class Kind { Monomial, Indicator, Tabulated };

  static RadialFunction monomial(int n);
  /// characteristic function of [t, 1)
  static RadialFunction indicator(double t);
  static RadialFunction tabulated(std::function<double(double s)> eval, std::string label);

  Kind kind() const { return kind_; }
  const std::string& label() const { return label_; }
  /// value at radius 1 - s
  double at_s(double s) const { return eval_(s); }
  double operator()(double r) const { return eval_(1.0 - r); }
  /// support starts here (0 unless an indicator)
  double start() const { return start_; }

  /// (2 int_0^1 |phi|^p v r dr)^{1/p}
  double norm(const RadialWeight& v, double p) const;

 private:
  RadialFunction(Kind kind, std::function<double(double)> eval, std::string label, double start);
  Kind kind_;
  std::function<double(double)> eval_;
  std::string label_;
  double start_;
};

/// p = 1 circle means of the kernel series at each x.
std::vector<double> m1_profile(const kernel::KernelCoeffs& K, const std::vector<double>& xs,
                               const Settings& cfg = {});

/// Kernel size needed to resolve m1 up to x = 1 - 2^-(depth+2).
kernel::KernelCoeffs coeffs_for_depth(const RadialWeight& w, int depth, const Settings& cfg = {});

/// m1 on geometric knots in 1 - x, monotone cubic interpolation in log-log.
class M1Table {
 public:
  M1Table(const kernel::KernelCoeffs& K, int depth, const Settings& cfg = {});
  double operator()(double x) const;
  double x_limit() const { return x_limit_; }

 private:
  std::function<double(double)> interp_;
  double c0_;
  double x_limit_;
};

/// P+ phi at |z| for each z in the grid: 2 int phi(r) m1(r|z|) r w(r) dr.
std::vector<double> apply_Pplus_radial(const kernel::KernelCoeffs& K, const RadialFunction& phi,
                                       const std::vector<double>& z_grid, const Settings& cfg = {});

/// Constant value of P phi for radial phi.
double radial_projection_constant(const kernel::KernelCoeffs& K, const RadialFunction& phi);

/// Adjoint test with monomials on n = 1, 2, 4, .., n_max.
quad::SupVerdict moment_necessity(const RadialWeight& omega, const RadialWeight& v, double p,
                                  int n_max = 1 << 16, const Settings& cfg = {});

/// Hardy-type quantity what(t)^{p-1} int_0^t K(r)^p w(r) dr with
/// K(r) = int_0^r dt / (what(t)(1-t)).
double indicator_Q(const RadialWeight& omega, double p, double t);
/// indicator_Q over the dyadic t-grid.
quad::SupVerdict indicator_test(const RadialWeight& omega, double p, const Settings& cfg = {});

struct OperatorEstimate {
  double lower_bound = 0.0;
  std::string witness;
  std::vector<double> truncation_trend;  ///< best ratio at depth 1, 2, ..
  quad::SupVerdict trend;
};

std::vector<RadialFunction> default_tests(int depth);

/// Lower bound for the norm of P+ on L^p_v from radial test functions; the
/// outer integral is truncated at |z| = 1 - 2^-depth.
OperatorEstimate opnorm_lower(const kernel::KernelCoeffs& K, const RadialWeight& v, double p,
                              const std::vector<RadialFunction>& tests, int depth = 10,
                              const Settings& cfg = {});

/// Bloch norm of z^k: sup_r k r^{k-1} (1 - r^2); 1 for k = 0.
double bloch_norm_monomial(int k);
/// Bloch norm of P applied to the unimodular family (zeta/|zeta|)^k.
double bloch_value(const RadialWeight& omega, int k);
/// bloch_value on k = 1, 2, 4, .., k_max.
quad::SupVerdict bloch_probe(const RadialWeight& omega, int k_max = 1 << 16,
                             const Settings& cfg = {});

}  // namespace bergman::operators
