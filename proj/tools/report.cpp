#include "report.hpp"

#include <cmath>

namespace bergman::report {
namespace {

// non-finite numbers become strings so they survive a round trip
json num(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

json nums(const std::vector<double>& xs) {
  json a = json::array();
  for (double x : xs) a.push_back(num(x));
  return a;
}

}  // namespace

json to_json(const Settings& cfg) {
  return {{"grid_depth", cfg.grid_depth},   {"tol", cfg.tol},
          {"slope_tol", cfg.slope_tol},     {"slope_min", cfg.slope_min},
          {"x_max", cfg.x_max},             {"regular_bound", cfg.regular_bound},
          {"essential_factor", cfg.essential_factor}};
}

json to_json(const quad::SupVerdict& v, bool with_values) {
  json j = {{"verdict", quad::to_string(v.verdict)},
            {"sup_value", num(v.sup_value)},
            {"argmax_level", v.argmax_level},
            {"tail_slope", num(v.tail_slope)},
            {"increment_ratio", num(v.increment_ratio)},
            {"first_level", v.first_level}};
  if (with_values) j["values"] = nums(v.values);
  return j;
}

json to_json(const ClassificationReport& r) {
  json j = {{"class", to_string(r.cls)},
            {"doubling_constant", num(r.doubling_constant)},
            {"doubling_exponent", num(r.doubling_exponent)},
            {"ratio_min", num(r.ratio_min)},
            {"ratio_max", num(r.ratio_max)},
            {"doubling",
             {{"C", num(r.doubling.C)},
              {"beta", num(r.doubling.beta)},
              {"ok", r.doubling.ok},
              {"depth", r.doubling.depth},
              {"truncated", r.doubling.truncated},
              {"trend", to_json(r.doubling.trend)}}},
            {"ratios", nums(r.ratios)}};
  if (r.kappa)
    j["kappa"] = {{"value", num(r.kappa->value)},         {"error", num(r.kappa->error)},
                  {"converged", r.kappa->converged},      {"range_min", num(r.kappa->range_min)},
                  {"range_max", num(r.kappa->range_max)}};
  else
    j["kappa"] = nullptr;
  return j;
}

json to_json(const conditions::ConditionReport& r) {
  json conds = json::array();
  for (const auto& c : r.results) {
    json e = to_json(c.verdict);
    e["id"] = conditions::to_string(c.id);
    if (!c.error.empty()) e["error"] = c.error;
    conds.push_back(std::move(e));
  }
  json j = {{"omega", r.omega},
            {"v", r.v},
            {"p", r.p},
            {"N", r.N},
            {"conditions", std::move(conds)},
            {"agreement", r.agreement},
            {"overall", conditions::to_string(r.overall)},
            {"boundary", r.boundary},
            {"warnings", r.warnings}};
  if (r.kappa)
    j["kappa"] = {{"ratio", num(r.kappa->ratio)},
                  {"margin", num(r.kappa->margin)},
                  {"holds", r.kappa->holds}};
  else
    j["kappa"] = nullptr;
  return j;
}

json envelope(const std::string& command, const std::vector<std::string>& args,
              const Settings& cfg, json result) {
  return {{"schema", kSchema},
          {"command", command},
          {"invocation", {{"args", args}, {"settings", to_json(cfg)}}},
          {"result", std::move(result)}};
}

}  // namespace bergman::report
