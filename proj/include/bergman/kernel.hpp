#pragma once

// Reproducing kernels of radial-weight Bergman spaces through their Taylor
// coefficients 1/(2 w_n), circle means, norms and the comparison integrals
// that describe their growth.

#include <complex>
#include <functional>
#include <vector>

#include "bergman/quad.hpp"
#include "bergman/settings.hpp"
#include "bergman/weights.hpp"

namespace bergman::kernel {

using cplx = std::complex<double>;
using CoeffPoly = std::vector<cplx>;

inline constexpr int kMaxDerivative = 4;

/// Moments w_0..w_{n_max}. Closed forms when the weight has them, otherwise a
/// fixed geometric Gauss-Legendre rule shared by all orders.
std::vector<double> moment_table(const RadialWeight& w, int n_max);

class KernelCoeffs {
 public:
  KernelCoeffs(RadialWeight w, int n_max, const Settings& cfg = {});

  const RadialWeight& weight() const { return w_; }
  int n_max() const { return int(c_.size()) - 1; }
  double operator[](int n) const { return c_[n]; }
  const std::vector<double>& coeffs() const { return c_; }
  const std::vector<double>& moments() const { return m_; }
  /// gamma with c_n <~ n^gamma
  double growth_exponent() const { return gamma_; }

 private:
  RadialWeight w_;
  std::vector<double> m_;
  std::vector<double> c_;
  double gamma_ = 0.0;
};

KernelCoeffs kernel_coeffs(const RadialWeight& w, int n_max, const Settings& cfg = {});

/// Number of coefficients needed so that the certified tail of the N-th
/// derivative series at |a||z| = x is below tol relative to its partial sum.
/// Throws TruncationError when the table is too short.
int terms_needed(const KernelCoeffs& K, double x, int N, double tol);

/// N-th z-derivative of the kernel at a, evaluated at z.
cplx kernel_eval(const KernelCoeffs& K, cplx a, cplx z, int N = 0, double tol = 1e-13,
                 const Settings& cfg = {});

/// p-th power of the p-mean of the N-th derivative over |z| = r.
double circle_mean(const KernelCoeffs& K, cplx a, double r, double p, int N = 0,
                   const Settings& cfg = {});
/// Same quantity through the trapezoid rule only (p = 2 included).
double circle_mean_trapezoid(const KernelCoeffs& K, cplx a, double r, double p, int N = 0,
                             const Settings& cfg = {});

/// p-th power of the p-mean over theta of sum c_n x^n e^{in theta}.
double series_mean(const KernelCoeffs& K, double x, double p, const Settings& cfg = {});

/// p-th power of the A^p_v norm of the N-th derivative of the kernel at a.
double bergman_norm(const KernelCoeffs& K, cplx a, const RadialWeight& v, double p, int N = 0,
                    const Settings& cfg = {});

/// Integral over [0, x] of dt / (what(t)^p (1-t)^{p(N+1)}).
double mean_comparand(const RadialWeight& w, double p, int N, double x);
/// Integral over [0, |a|] of vhat / (what^p (1-t)^{p(N+1)}).
double norm_comparand(const RadialWeight& w, const RadialWeight& v, double p, int N, double a_abs);
/// vhat(a) / (what(a)^p (1-|a|)^{p(N+1)-1}).
double local_comparand(const RadialWeight& w, const RadialWeight& v, double p, int N, double a_abs);

struct RatioScan {
  quad::SupVerdict up;    ///< measured / comparand
  quad::SupVerdict down;  ///< comparand / measured
  bool equivalent = false;
};

RatioScan ratio_scan(const std::vector<double>& measured, const std::vector<double>& comparand,
                     int first_level = 1, const Settings& cfg = {});
RatioScan ratio_scan(const std::function<double(double r, double s)>& measured,
                     const std::function<double(double r, double s)>& comparand,
                     const quad::DyadicGrid& grid, const Settings& cfg = {});

struct LP1Result {
  double lhs = 0.0;
  double rhs = 0.0;
  double rel_err = 0.0;
};

/// Norm of f in A^2_w from coefficients against the derivative form with the
/// associated weight; both sides from independent quadratures.
LP1Result lp1_check(const CoeffPoly& f, const RadialWeight& w);

cplx poly_eval(const CoeffPoly& f, cplx z);

/// <f, B_a> in A^2_w through quadrature in r and the trapezoid rule in theta.
cplx reproduce(const CoeffPoly& f, const KernelCoeffs& K, cplx a);

}  // namespace bergman::kernel
