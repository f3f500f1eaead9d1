#pragma once

// Radial weights on the unit disc and their derived functionals.
//
// A weight is stored through s = 1 - r. All functionals take r but evaluate
// in s, so radii such as 1 - 2^-40 keep full relative accuracy when they are
// passed in as s (the *_s variants).

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bergman/quad.hpp"
#include "bergman/settings.hpp"

namespace bergman {

enum class Family { Std, Pow, Log, RegLog, Exp, Tabulated };

std::string to_string(Family f);

class RadialWeight {
 public:
  using Evaluator = std::function<double(double s)>;

  struct ClosedForms {
    std::function<double(double s)> tail;    // integral of the weight over [r,1)
    std::function<double(double x)> moment;  // integral of r^{2x+1} w(r)
    std::function<double(double s)> star;    // associated weight
  };

  /// log_eval, when given, returns log w(1 - s) and is used wherever weights
  /// are combined, so that compositions survive underflow of the factors.
  RadialWeight(Family family, std::map<std::string, double> params,
               Evaluator eval, ClosedForms closed, std::string label,
               Evaluator log_eval = {});

  double at_s(double s) const;  ///< w(1 - s), s in (0,1]
  double log_at_s(double s) const;
  double operator()(double r) const { return at_s(1.0 - r); }

  Family family() const;
  const std::map<std::string, double>& params() const;
  const std::string& label() const;
  bool normalized() const;
  const ClosedForms& closed_forms() const;

  /// Tail integral at s = 1 - r. Closed form when present, otherwise a
  /// cached running integral.
  double tail_s(double s) const;
  /// Integral of the weight over [0, r], r = 1 - s.
  double head_s(double s) const;

  RadialWeight scaled(double c) const;
  /// Rescaled so that the integral over (0,1) equals 1.
  RadialWeight normalize() const;

  struct Impl;

 private:
  std::shared_ptr<const Impl> impl_;
};

RadialWeight make_std(double a);
RadialWeight make_pow(double a);
RadialWeight make_log(double a, int depth = 0);
RadialWeight make_reglog(double a, double b);
RadialWeight make_exp(double c);
RadialWeight make_tabulated_csv(const std::string& path);
/// Function-backed weight with no closed forms.
RadialWeight make_function_weight(RadialWeight::Evaluator eval,
                                  std::string label,
                                  RadialWeight::Evaluator log_eval = {});

RadialWeight parse_weight(const std::string& text);

double tail_integral(const RadialWeight& w, double r);
double associated_weight(const RadialWeight& w, double r);
double associated_weight_s(const RadialWeight& w, double s);
double moment(const RadialWeight& w, double x);
/// Moment of the associated weight, computed from its own values.
double associated_moment(const RadialWeight& w, double x);
double psi(const RadialWeight& w, double r);
double psi_s(const RadialWeight& w, double s);
double psi_tilde(const RadialWeight& w, double r);
double area_mass(const RadialWeight& w);

struct DoublingReport {
  double C = 0.0;
  double beta = 0.0;
  bool ok = false;
  int depth = 0;  ///< deepest level with a representable tail
  bool truncated = false;
  quad::SupVerdict trend;
};

DoublingReport doubling_report(const RadialWeight& w, const Settings& cfg = {});

enum class WeightClass { Regular, RapidlyIncreasing, DoublingOnly, NonDoubling, Inconclusive };

std::string to_string(WeightClass c);

struct KappaEstimate {
  double value = 0.0;
  double error = 0.0;
  bool converged = false;
  double range_min = 0.0;
  double range_max = 0.0;
};

struct ClassificationReport {
  double doubling_constant = 0.0;
  double doubling_exponent = 0.0;
  double ratio_min = 0.0;
  double ratio_max = 0.0;
  WeightClass cls = WeightClass::Inconclusive;
  std::optional<KappaEstimate> kappa;
  DoublingReport doubling;
  std::vector<double> ratios;  ///< psi(r_k)/(1-r_k), k = 1..
};

ClassificationReport classify(const RadialWeight& w, const Settings& cfg = {});

/// Limit of psi(r)/(1-r). Non-regular weights get converged = false and the
/// ratio range; a non-Cauchy tail throws ConvergenceError.
KappaEstimate kappa(const RadialWeight& w, const Settings& cfg = {});

/// (omega/v)^q v as a function-backed weight.
RadialWeight conjugate_weight(const RadialWeight& omega, const RadialWeight& v,
                              double q);
/// V with exponent p/(p-1).
RadialWeight transform_V(const RadialWeight& omega, const RadialWeight& v,
                         double p);
/// (1-r)^beta w(r).
RadialWeight shift_weight(const RadialWeight& w, double beta);

}  // namespace bergman
