#include "bergman/oracle.hpp"

#include <cmath>

#include "bergman/error.hpp"

namespace bergman::oracle {

double std_moment(double alpha, double n) {
  if (!(alpha > -1.0)) throw DomainError("std_moment: alpha must exceed -1");
  if (!(n >= 0.0)) throw DomainError("std_moment: n must be nonnegative");
  const double log_beta = std::lgamma(n + 1.0) + std::lgamma(alpha + 1.0) - std::lgamma(n + alpha + 2.0);
  return 0.5 * (alpha + 1.0) * std::exp(log_beta);
}

std::complex<double> std_kernel(double alpha, std::complex<double> a, std::complex<double> z) {
  if (!(std::abs(a) * std::abs(z) < 1.0)) throw DomainError("std_kernel: need |a z| < 1");
  return std::pow(1.0 - z * std::conj(a), -(2.0 + alpha));
}

std::string to_string(StdVerdict v) {
  switch (v) {
    case StdVerdict::True: return "true";
    case StdVerdict::False: return "false";
    case StdVerdict::Boundary: return "boundary";
  }
  return "?";
}

StdVerdict std_verdict(double alpha, double beta, double p) {
  const double lhs = beta + 1.0, rhs = p * (alpha + 1.0);
  if (std::abs(lhs - rhs) <= 1e-12 * std::max(std::abs(lhs), std::abs(rhs))) return StdVerdict::Boundary;
  return lhs < rhs ? StdVerdict::True : StdVerdict::False;
}

double std_kappa(double alpha) {
  if (!(alpha > -1.0)) throw DomainError("std_kappa: alpha must exceed -1");
  return 1.0 / (alpha + 1.0);
}

double forelli_rudin(double alpha, double beta, double p, double a_abs) {
  if (!(alpha > -1.0 && beta > -1.0 && p >= 1.0)) throw DomainError("forelli_rudin: inadmissible exponents");
  if (!(a_abs >= 0.0 && a_abs < 1.0)) throw DomainError("forelli_rudin: need 0 <= |a| < 1");
  // integrand c (1-r)^e
  const double c = std::pow(alpha + 1.0, p) / (beta + 1.0);
  const double e1 = beta + 2.0 - p * (alpha + 2.0);  // e + 1
  const double lg = std::log1p(-a_abs);              // log(1 - |a|)
  if (std::abs(e1) < 1e-14) return -c * lg;
  return -c * std::expm1(e1 * lg) / e1;
}

}  // namespace bergman::oracle
