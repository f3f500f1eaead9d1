#pragma once

// Closed forms for the standard weights (alpha+1)(1-r^2)^alpha and the power
// weights (1-r)^beta. Independent of the quadrature code paths.

#include <complex>
#include <string>

namespace bergman::oracle {

/// (alpha+1) B(n+1, alpha+1) / 2, through lgamma.
double std_moment(double alpha, double n);

/// (1 - z conj(a))^{-(2+alpha)}, principal branch.
std::complex<double> std_kernel(double alpha, std::complex<double> a,
                                std::complex<double> z);

enum class StdVerdict { True, False, Boundary };

std::string to_string(StdVerdict v);

/// Boundedness on L^p_v for omega = std:alpha, v = std:beta:
/// beta + 1 < p (alpha + 1).
StdVerdict std_verdict(double alpha, double beta, double p);

double std_kappa(double alpha);

/// Integral over [0, |a|] of vhat / (omegahat^p (1-r)^p) for the power
/// weights omega = (1-r)^alpha, v = (1-r)^beta.
double forelli_rudin(double alpha, double beta, double p, double a_abs);

}  // namespace bergman::oracle
