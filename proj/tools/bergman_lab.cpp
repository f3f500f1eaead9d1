// bergman-lab: classify radial weights, evaluate kernels, check projection
// conditions and sweep profiles. JSON reports echo their invocation so that
// --replay reproduces them.

#include <charconv>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bergman/conditions.hpp"
#include "bergman/error.hpp"
#include "bergman/kernel.hpp"
#include "bergman/operators.hpp"
#include "bergman/oracle.hpp"
#include "bergman/weights.hpp"
#include "report.hpp"

namespace {

using namespace bergman;
using report::json;

enum Exit { kOk = 0, kParse = 2, kNumeric = 3, kPrecondition = 4 };

struct Options {
  std::string weight, omega, v = "pow:a=0";
  double p = 2.0;
  int N = 0;
  std::string conditions;
  std::string a = "0", z = "0";
  double r = 0.0;
  std::string mode = "eval";
  std::string kind = "indicator";
  int depth = 8;
  int n_max = 0;
  std::string quantity;
  std::string levels;
  std::string p_range;
  std::string format = "json";
  std::string out;
  std::string replay;
  unsigned long seed = 1;
  Settings cfg;
};

double parse_real(const std::string& s) {
  double x = 0.0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, x);
  if (ec != std::errc() || ptr != end) throw ParseError("expected a number", s);
  return x;
}

// "x" or "x,y"
std::complex<double> parse_complex(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) return parse_real(s);
  return {parse_real(s.substr(0, comma)), parse_real(s.substr(comma + 1))};
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

json cplx_json(std::complex<double> c) { return {{"re", c.real()}, {"im", c.imag()}}; }

struct Row {
  double p;  // NaN outside a p sweep
  int level;
  double r, s, value;
  std::string verdict;
};

std::string rows_csv(const std::vector<Row>& rows) {
  const bool with_p = !rows.empty() && !std::isnan(rows.front().p);
  std::string out = with_p ? "p,level,r,s,value,verdict\n" : "level,r,s,value,verdict\n";
  char buf[200];
  for (const auto& row : rows) {
    if (with_p) {
      std::snprintf(buf, sizeof buf, "%.17g,", row.p);
      out += buf;
    }
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%s\n", row.level, row.r, row.s, row.value,
                  row.verdict.c_str());
    out += buf;
  }
  return out;
}

json rows_json(const std::vector<Row>& rows) {
  json a = json::array();
  for (const auto& row : rows)
    a.push_back({{"p", std::isnan(row.p) ? json(nullptr) : json(row.p)},
                 {"level", row.level}, {"r", row.r}, {"s", row.s},
                 {"value", std::isfinite(row.value) ? json(row.value) : json("inf")},
                 {"verdict", row.verdict}});
  return a;
}

std::vector<Row> profile_rows(const quad::SupVerdict& v, int lo, int hi) {
  std::vector<Row> rows;
  for (std::size_t i = 0; i < v.values.size(); ++i) {
    const int k = v.first_level + int(i);
    if (k < lo || k > hi) continue;
    rows.push_back({NAN, k, 1.0 - std::ldexp(1.0, -k), std::ldexp(1.0, -k), v.values[i],
                    quad::to_string(v.verdict)});
  }
  return rows;
}

Row sup_row(const quad::SupVerdict& v, double p) {
  const int k = v.argmax_level;
  return {p, k, 1.0 - std::ldexp(1.0, -k), std::ldexp(1.0, -k), v.sup_value,
          quad::to_string(v.verdict)};
}

struct Output {
  std::string text;
};

Output cmd_classify(const Options& o, const std::vector<std::string>& args) {
  const auto w = parse_weight(o.weight);
  const auto rep = classify(w, o.cfg);
  if (o.format == "csv") {
    std::vector<Row> rows;
    for (std::size_t i = 0; i < rep.ratios.size(); ++i) {
      const int k = int(i) + 1;
      rows.push_back({NAN, k, 1.0 - std::ldexp(1.0, -k), std::ldexp(1.0, -k), rep.ratios[i], to_string(rep.cls)});
    }
    return {rows_csv(rows)};
  }
  json res = report::to_json(rep);
  res["weight"] = w.label();
  return {report::envelope("classify", args, o.cfg, std::move(res)).dump(2) + "\n"};
}

Output cmd_check(const Options& o, const std::vector<std::string>& args) {
  if (o.format == "csv") throw ParseError("csv output is available for classify and sweep", "csv");
  const auto w = parse_weight(o.omega), v = parse_weight(o.v);
  std::vector<conditions::Condition> ids;
  for (const auto& s : split(o.conditions, ',')) ids.push_back(conditions::parse_condition(s));
  const auto rep = conditions::check_pair(w, v, o.p, ids, o.N, o.cfg);
  return {report::envelope("check", args, o.cfg, report::to_json(rep)).dump(2) + "\n"};
}

int default_n_max(double x) {
  const double n = 80.0 / std::max(1e-7, 1.0 - x) + 256.0;
  return int(std::min(n, double(1 << 24)));
}

Output cmd_kernel(const Options& o, const std::vector<std::string>& args) {
  if (o.format == "csv") throw ParseError("csv output is available for classify and sweep", "csv");
  const auto w = parse_weight(o.weight);
  const auto a = parse_complex(o.a);
  json res = {{"weight", w.label()}, {"mode", o.mode}, {"a", cplx_json(a)}, {"N", o.N}};
  json oracle = nullptr;
  const bool std_family = w.family() == Family::Std && !w.params().count("scale");
  if (o.mode == "eval") {
    const auto z = parse_complex(o.z);
    const kernel::KernelCoeffs K(w, o.n_max ? o.n_max : default_n_max(std::abs(a) * std::abs(z)), o.cfg);
    const auto val = kernel::kernel_eval(K, a, z, o.N, 1e-13, o.cfg);
    res["z"] = cplx_json(z);
    res["value"] = cplx_json(val);
    if (std_family && o.N == 0) {
      const auto want = oracle::std_kernel(w.params().at("a"), a, z);
      oracle = {{"value", cplx_json(want)}, {"rel_err", std::abs(val - want) / std::abs(want)}};
    }
  } else if (o.mode == "mean") {
    const kernel::KernelCoeffs K(w, o.n_max ? o.n_max : default_n_max(std::abs(a) * o.r), o.cfg);
    const double val = kernel::circle_mean(K, a, o.r, o.p, o.N, o.cfg);
    res["r"] = o.r;
    res["p"] = o.p;
    res["value"] = val;
    res["comparand"] = kernel::mean_comparand(w, o.p, o.N, std::abs(a) * o.r);
  } else if (o.mode == "norm") {
    const auto v = parse_weight(o.v);
    const kernel::KernelCoeffs K(w, o.n_max ? o.n_max : default_n_max(std::abs(a)), o.cfg);
    const double val = kernel::bergman_norm(K, a, v, o.p, o.N, o.cfg);
    res["v"] = v.label();
    res["p"] = o.p;
    res["value"] = val;
    res["comparand"] = kernel::norm_comparand(w, v, o.p, o.N, std::abs(a));
    res["local"] = kernel::local_comparand(w, v, o.p, o.N, std::abs(a));
  } else {
    throw ParseError("mode must be eval, mean or norm", o.mode);
  }
  res["oracle"] = oracle;
  return {report::envelope("kernel", args, o.cfg, std::move(res)).dump(2) + "\n"};
}

std::pair<int, int> parse_levels(const std::string& s, int depth) {
  if (s.empty()) return {1, depth};
  const auto parts = split(s, ':');
  if (parts.size() != 2) throw ParseError("levels must be lo:hi", s);
  return {int(parse_real(parts[0])), int(parse_real(parts[1]))};
}

std::vector<double> parse_p_range(const std::string& s) {
  const auto parts = split(s, ':');
  if (parts.size() != 3) throw ParseError("p range must be lo:hi:count", s);
  const double lo = parse_real(parts[0]), hi = parse_real(parts[1]);
  const int n = int(parse_real(parts[2]));
  std::vector<double> ps;
  if (n <= 0 || hi < lo) return ps;
  for (int i = 0; i < n; ++i) ps.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
  return ps;
}

Output cmd_sweep(const Options& o, const std::vector<std::string>& args) {
  const std::string q = o.quantity;
  std::function<quad::SupVerdict(double p)> run;
  if (q == "indicator") {
    const auto w = parse_weight(o.weight);
    run = [w, &o](double p) { return operators::indicator_test(w, p, o.cfg); };
  } else if (q == "psi-ratio") {
    const auto w = parse_weight(o.weight);
    run = [w, &o](double) {
      return quad::sup_verdict(classify(w, o.cfg).ratios, 1, o.cfg);
    };
  } else if (q == "bloch") {
    const auto w = parse_weight(o.weight);
    run = [w, &o](double) { return operators::bloch_probe(w, 1 << 16, o.cfg); };
  } else {
    const auto id = conditions::parse_condition(q);
    const auto w = parse_weight(o.omega), v = parse_weight(o.v);
    run = [=, &o](double p) { return conditions::eval_condition(id, w, v, p, o.N, o.cfg); };
  }
  std::vector<Row> rows;
  if (!o.p_range.empty()) {
    for (double p : parse_p_range(o.p_range)) rows.push_back(sup_row(run(p), p));
  } else {
    const auto [lo, hi] = parse_levels(o.levels, o.cfg.grid_depth);
    if (lo <= hi) rows = profile_rows(run(o.p), lo, hi);
  }
  if (o.format == "csv") return {rows_csv(rows)};
  json res = {{"quantity", q}, {"p_range", !o.p_range.empty()}, {"rows", rows_json(rows)}};
  return {report::envelope("sweep", args, o.cfg, std::move(res)).dump(2) + "\n"};
}

Output cmd_probe(const Options& o, const std::vector<std::string>& args) {
  if (o.format == "csv") throw ParseError("csv output is available for classify and sweep", "csv");
  const auto w = parse_weight(o.weight);
  json res = {{"weight", w.label()}, {"kind", o.kind}, {"p", o.p}};
  if (o.kind == "indicator") {
    res["verdict"] = report::to_json(operators::indicator_test(w, o.p, o.cfg));
  } else if (o.kind == "bloch") {
    res["verdict"] = report::to_json(operators::bloch_probe(w, 1 << 16, o.cfg));
  } else if (o.kind == "moment") {
    const auto v = parse_weight(o.v);
    res["v"] = v.label();
    res["verdict"] = report::to_json(operators::moment_necessity(w, v, o.p, 1 << 16, o.cfg));
  } else {
    const auto v = parse_weight(o.v);
    const int depth = o.depth;
    const auto K = operators::coeffs_for_depth(w, depth, o.cfg);
    const auto est = operators::opnorm_lower(K, v, o.p, operators::default_tests(depth), depth, o.cfg);
    res["v"] = v.label();
    res["depth"] = depth;
    res["lower_bound"] = est.lower_bound;
    res["witness"] = est.witness;
    res["verdict"] = report::to_json(est.trend);
  }
  return {report::envelope("probe", args, o.cfg, std::move(res)).dump(2) + "\n"};
}

Output cmd_window(const Options& o, const std::vector<std::string>& args) {
  if (o.format == "csv") throw ParseError("csv output is available for classify and sweep", "csv");
  const auto w = parse_weight(o.omega), v = parse_weight(o.v);
  const auto win = conditions::exponent_window(w, v, o.p, o.cfg);
  json res = {{"omega", w.label()}, {"v", v.label()}, {"p", o.p}, {"m", win.m}, {"M", win.M}};
  return {report::envelope("window", args, o.cfg, std::move(res)).dump(2) + "\n"};
}

void write_atomically(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw DomainError("cannot write " + tmp);
    f << text;
    if (!f) throw DomainError("write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

// Arguments recorded in reports: everything except where the output goes.
std::vector<std::string> recorded_args(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const auto& a = args[i];
    if (a == "--out" || a == "--replay") {
      ++i;
      continue;
    }
    if (a.rfind("--out=", 0) == 0 || a.rfind("--replay=", 0) == 0) continue;
    out.push_back(a);
  }
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& os);

int replay(const Options& o, std::ostream& os) {
  std::ifstream f(o.replay);
  if (!f) throw ParseError("cannot read replay file", o.replay);
  json j;
  try {
    j = json::parse(f);
  } catch (const json::exception& e) {
    throw ParseError(std::string("replay file is not JSON: ") + e.what(), o.replay);
  }
  if (!j.contains("schema") || j["schema"] != report::kSchema || !j.contains("invocation"))
    throw ParseError("replay file has no schema 1 invocation", o.replay);
  auto args = j["invocation"]["args"].get<std::vector<std::string>>();
  if (!o.out.empty()) {
    args.push_back("--out");
    args.push_back(o.out);
  }
  return run(args, os);
}

int run(const std::vector<std::string>& args, std::ostream& os) {
  CLI::App app{"Radial-weight Bergman kernel and projection lab"};
  app.require_subcommand(0, 1);
  Options o;
  auto settings = [&o](CLI::App* c) {
    c->add_option("--grid-depth", o.cfg.grid_depth, "dyadic levels")->check(CLI::Range(4, kMaxGridDepth));
    c->add_option("--tol", o.cfg.tol, "quadrature tolerance")->check(CLI::PositiveNumber);
    c->add_option("--slope-tol", o.cfg.slope_tol)->check(CLI::PositiveNumber);
    c->add_option("--slope-min", o.cfg.slope_min)->check(CLI::PositiveNumber);
    c->add_option("--x-max", o.cfg.x_max)->check(CLI::Range(0.0, 1.0));
    c->add_option("--n-max", o.n_max, "kernel coefficients (0 = automatic)");
    c->add_option("--seed", o.seed);
    c->add_option("--format", o.format)->check(CLI::IsMember({"json", "csv"}));
    c->add_option("--out", o.out, "output path");
  };
  app.add_option("--replay", o.replay, "re-run the invocation stored in a JSON report");
  app.add_option("--out", o.out, "output path");

  auto* classify_cmd = app.add_subcommand("classify", "classify a weight");
  classify_cmd->add_option("--weight", o.weight)->required();
  settings(classify_cmd);

  auto* check_cmd = app.add_subcommand("check", "projection conditions for a pair of weights");
  check_cmd->add_option("--omega", o.omega)->required();
  check_cmd->add_option("--v", o.v)->required();
  check_cmd->add_option("--p", o.p)->required();
  check_cmd->add_option("--N", o.N);
  check_cmd->add_option("--conditions", o.conditions, "comma separated ids");
  settings(check_cmd);

  auto* kernel_cmd = app.add_subcommand("kernel", "kernel values, means and norms");
  kernel_cmd->add_option("--weight", o.weight)->required();
  kernel_cmd->add_option("--a", o.a, "x or x,y");
  kernel_cmd->add_option("--z", o.z, "x or x,y");
  kernel_cmd->add_option("--r", o.r);
  kernel_cmd->add_option("--p", o.p);
  kernel_cmd->add_option("--N", o.N);
  kernel_cmd->add_option("--v", o.v);
  kernel_cmd->add_option("--mode", o.mode)->check(CLI::IsMember({"eval", "mean", "norm"}));
  settings(kernel_cmd);

  auto* sweep_cmd = app.add_subcommand("sweep", "per-level profiles or sup over a p range");
  sweep_cmd->add_option("--quantity", o.quantity, "condition id, indicator, psi-ratio or bloch")->required();
  sweep_cmd->add_option("--weight", o.weight);
  sweep_cmd->add_option("--omega", o.omega);
  sweep_cmd->add_option("--v", o.v);
  sweep_cmd->add_option("--p", o.p);
  sweep_cmd->add_option("--N", o.N);
  sweep_cmd->add_option("--levels", o.levels, "lo:hi");
  sweep_cmd->add_option("--p-range", o.p_range, "lo:hi:count");
  settings(sweep_cmd);

  auto* probe_cmd = app.add_subcommand("probe", "operator tests on one weight");
  probe_cmd->add_option("--weight", o.weight)->required();
  probe_cmd->add_option("--kind", o.kind)->check(CLI::IsMember({"indicator", "bloch", "moment", "opnorm"}));
  probe_cmd->add_option("--v", o.v);
  probe_cmd->add_option("--p", o.p);
  probe_cmd->add_option("--depth", o.depth, "opnorm truncation depth")->check(CLI::Range(1, 20));
  settings(probe_cmd);

  auto* window_cmd = app.add_subcommand("window", "exponent window of the improving condition");
  window_cmd->add_option("--omega", o.omega)->required();
  window_cmd->add_option("--v", o.v)->required();
  window_cmd->add_option("--p", o.p)->required();
  settings(window_cmd);

  std::vector<std::string> argv_store{"bergman-lab"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());
  try {
    app.parse(int(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParse;
  }

  if (!o.replay.empty()) return replay(o, os);
  const auto rec = recorded_args(args);
  Output out;
  if (*classify_cmd) out = cmd_classify(o, rec);
  else if (*check_cmd) out = cmd_check(o, rec);
  else if (*kernel_cmd) out = cmd_kernel(o, rec);
  else if (*sweep_cmd) out = cmd_sweep(o, rec);
  else if (*probe_cmd) out = cmd_probe(o, rec);
  else if (*window_cmd) out = cmd_window(o, rec);
  else {
    std::cerr << app.help();
    return kParse;
  }
  if (o.out.empty()) os << out.text;
  else write_atomically(o.out, out.text);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return run(args, std::cout);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition: " << e.what() << "\n";
    return kPrecondition;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumeric;
  }
}
