#pragma once

// Integral conditions on a pair of radial weights (omega, v) that decide
// boundedness of the weighted Bergman projection on L^p_v, evaluated as
// suprema over the dyadic grid.

#include <optional>
#include <string>
#include <vector>

#include "bergman/quad.hpp"
#include "bergman/settings.hpp"
#include "bergman/weights.hpp"

namespace bergman::conditions {

enum class Condition {
  ConjugateTail,      ///< vhat^{1/p} (int_r^1 (w/v)^{p'} v)^{1/p'} / what
  HardyPointwise,     ///< w^p (1-r)^{p-1} / v * int_0^r v / (w^p (1-s)^p)
  HardyProduct,       ///< (int_0^r v / (w^p (1-s)^p))^{1/p} (int_r^1 (w/v)^{p'} v)^{1/p'}
  RootTail,           ///< vhat^{1/p} int_r^1 w / ((1-s) v)^{1/p} / what
  RootHardy,          ///< w (1-r)^{1/p'} / v^{1/p} * int_0^r v^{1/p} / (w (1-s)^{1+1/p'})
  Improving,          ///< what^p / vhat * int_0^r vhat / (what^p (1-s))
  L1Hardy,            ///< w / v * int_0^r vhat / (what (1-s))
  L1Tail,             ///< vhat / what * int_r^1 w / (v (1-s))
  KernelMeans,        ///< mean comparand against its local size
  KernelNorms,        ///< norm comparand against its local size
  RegularityHead,     ///< psi-tilde of w^{1-a} (1-r)^{-a} over (1-r), both ways
  RegularityProduct,  ///< Muckenhoupt-type product plus local comparability
  RegularityRoot,     ///< (w (1-r))^{-1/a} w is regular
  KappaRatio,         ///< kappa_w / kappa_v < p
};

std::string to_string(Condition c);
/// Accepts role names ("hardy-pointwise") and the short ids T4c..T4g, EImpr,
/// T5c, T5d, C2mean, C2norm, L9ii..L9iv, KappaCrit; case-insensitive.
Condition parse_condition(const std::string& text);
const std::vector<Condition>& all_conditions();

/// Conditions checked by check_pair: the p > 1 set, or the p = 1 set.
std::vector<Condition> default_conditions(double p);

/// Supremum verdict for one condition. For the regularity conditions p is
/// the exponent a > 1 and v is ignored; for KappaRatio sup_value holds the
/// ratio and the verdict is Bounded / Divergent / Inconclusive (boundary).
quad::SupVerdict eval_condition(Condition c, const RadialWeight& omega, const RadialWeight& v,
                                double p, int N = 0, const Settings& cfg = {});

struct KappaCriterion {
  double ratio = 0.0;
  double margin = 0.0;
  bool holds = false;
  bool boundary = false;  ///< |ratio - p| <= margin
};

KappaCriterion kappa_criterion(const RadialWeight& omega, const RadialWeight& v, double p,
                               const Settings& cfg = {});

enum class Overall { Bounded, Unbounded, Inconclusive };
std::string to_string(Overall o);

struct ConditionResult {
  Condition id;
  quad::SupVerdict verdict;
  std::string error;  ///< set when evaluation threw; verdict is Inconclusive
};

struct ConditionReport {
  std::string omega;
  std::string v;
  double p = 0.0;
  int N = 0;
  std::vector<ConditionResult> results;
  std::vector<std::vector<bool>> agreement;  ///< no Bounded/Divergent clash
  Overall overall = Overall::Inconclusive;
  bool boundary = false;  ///< kappa ratio equals p within its error
  std::optional<KappaCriterion> kappa;
  std::vector<std::string> warnings;
};

ConditionReport check_pair(const RadialWeight& omega, const RadialWeight& v, double p,
                           std::vector<Condition> conditions = {}, int N = 0,
                           const Settings& cfg = {});

struct ExponentWindow {
  double m = 0.0;
  double M = 0.0;
};

/// Largest loss of exponent keeping Improving bounded (m), and smallest
/// exponent loss making its full integral converge (M), by bisection.
ExponentWindow exponent_window(const RadialWeight& omega, const RadialWeight& v, double p,
                               const Settings& cfg = {});

/// Integral over [0, r] of dt / (what(t) (1-t)).
double hardy_K(const RadialWeight& omega, double r);

struct RegularityReport {
  double exponent = 0.0;
  quad::SupVerdict head_up, head_down;  ///< psi-tilde ratio and its inverse
  bool head = false;
  quad::SupVerdict product;
  quad::SupVerdict local;  ///< max(w(r)/w(t), w(t)/w(r)), t half way to 1
  bool product_ok = false;
  WeightClass root_class = WeightClass::Inconclusive;
  bool root = false;
  std::vector<std::string> errors;
};

RegularityReport regularity_check(const RadialWeight& w, double a, const Settings& cfg = {});

}  // namespace bergman::conditions
