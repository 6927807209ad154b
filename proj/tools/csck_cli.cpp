// csck: command-line front end. See README for the subcommands.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "csck/csck.hpp"

namespace {

using nlohmann::json;
using namespace csck;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNonexistent = 2;
constexpr int kExitUsage = 64;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  int n = 2;
  std::optional<double> scalar;
  std::optional<std::string> curvature_sign;
  double lambda = 0.0;
  double mu = 0.0;
  int branch = 0;
  std::optional<std::string> anchor;
  std::optional<double> gauge_c;
  bool ball_normalize = false;
  bool finite_extension = false;
  double s_min = 1e-2;
  double s_max = 1e2;
  bool s_range_given = false;
  int samples = 200;
  double tol = 1e-5;
  std::uint64_t seed = 42;
  std::optional<std::string> format;
  std::optional<std::string> output;
  std::optional<std::string> input;
  std::string which = "J";
  std::optional<std::string> label;
  std::vector<std::string> params;
  int grid = 0;
  double grid_range = 10.0;
};

// Numbers as JSON; infinities and NaN have no JSON spelling and become null.
json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double resolve_R(const RunConfig& cfg) {
  if (cfg.scalar) return *cfg.scalar;
  const double norm = cfg.n * (cfg.n + 1.0);
  if (cfg.curvature_sign) {
    if (*cfg.curvature_sign == "neg") return -norm;
    if (*cfg.curvature_sign == "zero") return 0.0;
    if (*cfg.curvature_sign == "pos") return norm;
  }
  if (cfg.command == "ball") return -norm;
  throw UsageError("one of --scalar or --curvature-sign is required");
}

RadialProblem problem_of(const RunConfig& cfg) { return {cfg.n, resolve_R(cfg), cfg.lambda, cfg.mu}; }

json to_json(const RadialProblem& p) { return {{"n", p.n}, {"R", p.R}, {"lambda", p.lambda}, {"mu", p.mu}}; }

json to_json(const Branch& b) {
  return {{"A", b.A},
          {"B", num(b.B)},
          {"kind", std::string(to_string(b.kind))},
          {"diverges_left", b.diverges_left},
          {"diverges_right", b.diverges_right},
          {"mult_left", b.mult_left},
          {"mult_right", b.mult_right},
          {"lelong", lelong_number(b)}};
}

json to_json(const CaseReport& r) {
  json branches = json::array();
  for (std::size_t i = 0; i < r.branches.size(); ++i) {
    json b = to_json(r.branches[i]);
    b["label"] = r.labels[i];
    branches.push_back(b);
  }
  return {{"report", "case"},
          {"problem", to_json(r.problem)},
          {"verdict", std::string(to_string(r.verdict))},
          {"branches", branches},
          {"matched_case", r.matched_case ? json(*r.matched_case) : json(nullptr)},
          {"diagnostics", r.diagnostics}};
}

json to_json(const MetricSample& m) {
  return {{"s", m.s}, {"g", m.g}, {"u", m.u}, {"up", m.up}, {"upp", m.upp}, {"f", m.f}, {"R_num", m.R_num}};
}

json residuals_json(const VerifyReport& v, double tol) {
  const bool pass = v.used > 0 && v.max_R_residual < tol && v.max_fd_gap < tol && v.min_positivity > 0.0 &&
                    v.max_det_residual < 1e-9;
  return {{"samples", v.samples.size()},
          {"used", v.used},
          {"excluded", v.excluded},
          {"fd_skipped", v.fd_skipped},
          {"R_target", v.R_target},
          {"max_R_residual", v.max_R_residual},
          {"max_R_fd_residual", v.max_R_fd_residual},
          {"max_fd_gap", v.max_fd_gap},
          {"max_det_residual", v.max_det_residual},
          {"min_positivity", num(v.min_positivity)},
          {"R_mean", v.R_mean},
          {"R_stddev", v.R_stddev},
          {"tol", tol},
          {"pass", pass}};
}

std::pair<double, double> parse_pair(const std::string& text, const char* what) {
  std::stringstream ss(text);
  double a = 0.0;
  double b = 0.0;
  char comma = 0;
  if (!(ss >> a >> comma >> b) || comma != ',' || !ss.eof())
    throw UsageError(std::string(what) + " expects two comma-separated numbers, got '" + text + "'");
  return {a, b};
}

Params parse_params(const std::vector<std::string>& items, Params base) {
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("--param expects name=value, got '" + item + "'");
    try {
      base[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw UsageError("--param value is not a number: '" + item + "'");
    }
  }
  return base;
}

/// Writes to --output when given, otherwise stdout.
void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.output) {
    std::ofstream out(*cfg.output, std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot open output file " + *cfg.output);
    out << text;
  } else {
    std::cout << text;
  }
}

void emit_json(const RunConfig& cfg, const json& j) { emit(cfg, j.dump(2) + "\n"); }

std::string samples_csv(const std::vector<MetricSample>& rows) {
  std::string out = "s,g,u,up,upp,f,R_num\n";
  for (const auto& m : rows) {
    for (double v : {m.s, m.g, m.u, m.up, m.upp, m.f})
      out += fmt17(v) + ",";
    out += fmt17(m.R_num) + "\n";
  }
  return out;
}

std::string format_of(const RunConfig& cfg, const char* fallback) {
  const std::string f = cfg.format.value_or(fallback);
  if (f != "json" && f != "csv") throw UsageError("--format must be json or csv");
  return f;
}

struct Solved {
  CaseReport report;
  std::optional<RadialSolution> solution;
};

/// classify, pick the branch, fix the gauge.
Solved build_solution(const RunConfig& cfg, const RadialProblem& problem, bool ball) {
  Solved out{classify(problem, ball || cfg.finite_extension || cfg.ball_normalize), std::nullopt};
  if (out.report.branches.empty()) return out;
  if (cfg.branch < 0 || cfg.branch >= static_cast<int>(out.report.branches.size()))
    throw Error(ErrorCode::InvalidArgument, "branch index " + std::to_string(cfg.branch) + " out of range");
  const OdeData ode = build_ode(problem);
  const Branch& b = out.report.branches[static_cast<std::size_t>(cfg.branch)];
  const AntiderivativeF F = partial_fractions(ode, b);
  if (ball || cfg.ball_normalize) {
    out.solution.emplace(ball_normalize(ode, b, F));
  } else if (cfg.anchor) {
    const auto [s0, g0] = parse_pair(*cfg.anchor, "--anchor");
    out.solution.emplace(gauge_from_anchor(ode, b, F, s0, g0));
  } else {
    out.solution.emplace(gauge_from_constant(ode, b, F, cfg.gauge_c.value_or(0.0)));
  }
  return out;
}

json solution_header(const RadialSolution& sol) {
  return {{"branch", to_json(sol.branch())}, {"c", sol.c()}, {"s_lo", sol.s_lo()}, {"s_hi", num(sol.s_hi())}};
}

std::vector<MetricSample> sample_solution(const RadialSolution& sol, double lo, double hi, int count) {
  std::vector<MetricSample> rows;
  for (double s : log_spaced(lo, hi, count)) rows.push_back(metric_sample(sol, s));
  return rows;
}

SampleRange range_for(const RunConfig& cfg, const RadialSolution& sol) {
  return cfg.s_range_given ? SampleRange{cfg.s_min, cfg.s_max} : default_range(sol);
}

// -----------------------------------------------------------------------------

int run_classify(const RunConfig& cfg) {
  const RadialProblem base = problem_of(cfg);
  if (cfg.grid == 0) {
    emit_json(cfg, to_json(classify(base, cfg.finite_extension)));
    return kExitOk;
  }
  if (cfg.grid < 2) throw UsageError("--grid must be at least 2");
  std::map<std::string, int> counts;
  json cells = json::array();
  const double L = cfg.grid_range;
  for (int i = 0; i < cfg.grid; ++i) {
    for (int j = 0; j < cfg.grid; ++j) {
      RadialProblem p = base;
      p.lambda = -L + 2.0 * L * i / (cfg.grid - 1);
      p.mu = -L + 2.0 * L * j / (cfg.grid - 1);
      const std::string v(to_string(classify(p, cfg.finite_extension).verdict));
      ++counts[v];
      cells.push_back({{"lambda", p.lambda}, {"mu", p.mu}, {"verdict", v}});
    }
  }
  emit_json(cfg, {{"report", "classify_grid"},
                  {"n", base.n},
                  {"R", base.R},
                  {"range", L},
                  {"size", cfg.grid},
                  {"counts", counts},
                  {"cells", cells}});
  return kExitOk;
}

int run_solve(const RunConfig& cfg, bool ball) {
  const RadialProblem problem = problem_of(cfg);
  const Solved solved = build_solution(cfg, problem, ball);
  if (!solved.solution) {
    emit_json(cfg, to_json(solved.report));
    return kExitNonexistent;
  }
  const RadialSolution& sol = *solved.solution;
  const SampleRange r = range_for(cfg, sol);
  const auto rows = sample_solution(sol, r.s_min, r.s_max, cfg.samples);
  if (format_of(cfg, "csv") == "csv") {
    emit(cfg, samples_csv(rows));
    return kExitOk;
  }
  json j = solution_header(sol);
  j["report"] = ball ? "ball" : "solve";
  j["problem"] = to_json(problem);
  j["rows"] = json::array();
  for (const auto& m : rows) j["rows"].push_back(to_json(m));
  if (ball) {
    // The independent integrator must stop at a finite s as well.
    const double s0 = std::sqrt(r.s_min * r.s_max);
    const ShootResult shot = shoot_ode(sol.ode(), s0, sol.g(s0), {2.0 * sol.s_hi()});
    j["shoot_domain_end"] = shot.domain_end ? json(*shot.domain_end) : json(nullptr);
    j["residuals"] = residuals_json(verify_solution(sol, cfg.samples, r), cfg.tol);
  }
  emit_json(cfg, j);
  return kExitOk;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

/// Re-reads a solve CSV and checks it against the equation and the target R.
json verify_csv(const RunConfig& cfg, const RadialProblem& problem) {
  std::ifstream in(*cfg.input);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open input file " + *cfg.input);
  std::string line;
  std::getline(in, line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "s,g,u,up,upp,f,R_num") throw Error(ErrorCode::InvalidArgument, "unexpected CSV header: " + line);
  std::vector<OdeSample> smp;
  double max_R = 0.0;
  double max_g = 0.0;
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 7) throw Error(ErrorCode::InvalidArgument, "CSV row with " + std::to_string(cells.size()) + " cells");
    std::vector<double> v;
    for (const auto& c : cells) v.push_back(std::stod(c));
    const double s = v[0], g = v[1], up = v[3], upp = v[4], R_num = v[6];
    smp.push_back({s, g, up + s * upp});
    max_R = std::max(max_R, std::abs(R_num - problem.R));
    max_g = std::max(max_g, std::abs(g - s * up) / (1.0 + std::abs(g)));
    ++rows;
  }
  const OdeData ode = build_ode(problem);
  const double res = ode_residual(smp, ode);
  return {{"report", "verify_csv"},
          {"problem", to_json(problem)},
          {"rows", rows},
          {"ode_residual", res},
          {"max_R_residual", max_R},
          {"max_g_consistency", max_g},
          {"tol", cfg.tol},
          {"pass", rows > 0 && res < cfg.tol && max_R < cfg.tol && max_g < 1e-12}};
}

int run_verify(const RunConfig& cfg) {
  const RadialProblem problem = problem_of(cfg);
  if (cfg.input) {
    emit_json(cfg, verify_csv(cfg, problem));
    return kExitOk;
  }
  const Solved solved = build_solution(cfg, problem, false);
  if (!solved.solution) {
    emit_json(cfg, to_json(solved.report));
    return kExitNonexistent;
  }
  const RadialSolution& sol = *solved.solution;
  json j = solution_header(sol);
  j["report"] = "verify";
  j["problem"] = to_json(problem);
  j["residuals"] = residuals_json(verify_solution(sol, cfg.samples, range_for(cfg, sol)), cfg.tol);
  emit_json(cfg, j);
  return kExitOk;
}

int run_catalog(const RunConfig& cfg) {
  if (!cfg.label) {
    std::vector<std::string> labels;
    if (cfg.curvature_sign) {
      const std::string& s = *cfg.curvature_sign;
      const CurvatureSign sign = s == "neg" ? CurvatureSign::Negative : s == "zero" ? CurvatureSign::Zero
                                                                                   : CurvatureSign::Positive;
      labels = enumerate_cases(cfg.n, sign);
    } else {
      for (const auto& f : fixtures()) labels.push_back(f.label);
    }
    json cases = json::array();
    for (const auto& l : labels) {
      const CaseFixture& f = fixture(l);
      cases.push_back({{"label", f.label},
                       {"params", f.param_names},
                       {"default_params", f.default_params},
                       {"printed_defaults", f.printed_defaults},
                       {"ball", f.ball},
                       {"closed_form", f.closed_form_g.has_value()},
                       {"reference_formula", f.reference_F.has_value()}});
    }
    emit_json(cfg, {{"report", "catalog_list"}, {"cases", cases}});
    return kExitOk;
  }
  const CaseFixture& f = fixture(*cfg.label);
  const Params params = parse_params(cfg.params, f.default_params);
  const CrossCheckReport rep = cross_check(*cfg.label, params, cfg.samples);
  json formula = nullptr;
  if (rep.formula)
    formula = {{"scale", rep.formula->scale}, {"deviation", rep.formula->deviation}, {"matches", rep.formula->matches}};
  auto opt = [](const std::optional<double>& x) { return x ? num(*x) : json(nullptr); };
  emit_json(cfg, {{"report", "cross_check"},
                  {"label", rep.label},
                  {"params", params},
                  {"problem", to_json(rep.problem)},
                  {"branch", to_json(rep.branch)},
                  {"matched_case", rep.matched_case},
                  {"range_error", rep.range_error},
                  {"formula", formula},
                  {"closed_form_residual", opt(rep.closed_form_residual)},
                  {"closed_form_gap", opt(rep.closed_form_gap)},
                  {"oracle_gap", num(rep.oracle_gap)},
                  {"residuals", residuals_json(rep.verify, cfg.tol)}});
  return kExitOk;
}

int run_lemmas(const RunConfig& cfg) {
  if (cfg.which != "J" && cfg.which != "I") throw UsageError("--which must be J or I");
  if (cfg.samples < 1) throw UsageError("--samples must be at least 1");
  const Certificate c = certify_negative(cfg.which == "J" ? Inequality::J : Inequality::I, cfg.samples, cfg.seed);
  emit_json(cfg, {{"report", "lemmas"},
                  {"which", cfg.which},
                  {"samples", c.samples},
                  {"seed", cfg.seed},
                  {"climbs", c.climbs},
                  {"max_found", c.max_found},
                  {"negative", c.max_found < 0.0},
                  {"witness",
                   {{"point", c.witness.point},
                    {"constraint_residuals", c.witness.constraint_residuals},
                    {"objective", c.witness.objective}}}});
  return kExitOk;
}

void check_config(const RunConfig& cfg) {
  if (!(cfg.s_min > 0.0) || !(cfg.s_min < cfg.s_max)) throw UsageError("need 0 < s_min < s_max");
  if (cfg.samples < 2 && cfg.command != "lemmas") throw UsageError("--samples must be at least 2");
  if (!(cfg.tol > 0.0)) throw UsageError("--tol must be positive");
  if (cfg.n < 2) throw UsageError("--n must be at least 2");
}

/// Turns a JSON config object into flag tokens. Keys mirror the long flag names.
std::vector<std::string> config_tokens(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  std::vector<std::string> out;
  for (const auto& [key, value] : j.items()) {
    const std::string flag = "--" + key;
    if (value.is_boolean()) {
      if (value.get<bool>()) out.push_back(flag);
    } else if (value.is_array()) {
      for (const auto& v : value) {
        out.push_back(flag);
        out.push_back(v.is_string() ? v.get<std::string>() : v.dump());
      }
    } else {
      out.push_back(flag);
      out.push_back(value.is_string() ? value.get<std::string>() : value.dump());
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"Rotation invariant constant scalar curvature Kahler metrics"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config();  // disable CLI11's own config handling; --config is JSON and handled below

  std::string config_path;
  app.add_option("--config", config_path, "JSON file whose keys mirror the flag names");
  app.add_option("--n", cfg.n, "complex dimension");
  app.add_option("--scalar", cfg.scalar, "scalar curvature R");
  app.add_option("--curvature-sign", cfg.curvature_sign, "R as -n(n+1), 0 or n(n+1)")
      ->check(CLI::IsMember({"neg", "zero", "pos"}));
  app.add_option("--lambda", cfg.lambda, "first integration constant");
  app.add_option("--mu", cfg.mu, "second integration constant");
  app.add_option("--branch", cfg.branch, "branch index in classify order");
  app.add_option("--anchor", cfg.anchor, "gauge by g(s0) = g0, given as s0,g0");
  app.add_option("--gauge-c", cfg.gauge_c, "gauge constant c in F(g) = log s + c");
  app.add_flag("--ball-normalize", cfg.ball_normalize, "choose c so the domain ends at s = 1");
  app.add_flag("--finite-extension", cfg.finite_extension, "also report branches on finite s-intervals");
  auto* smin = app.add_option("--s-min", cfg.s_min, "smallest sample s");
  auto* smax = app.add_option("--s-max", cfg.s_max, "largest sample s");
  app.add_option("--samples", cfg.samples, "number of samples");
  app.add_option("--tol", cfg.tol, "pass threshold for residual reports");
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--output", cfg.output, "output file (default stdout)");
  app.add_option("--input", cfg.input, "solve CSV to re-check (verify)");
  app.add_option("--which", cfg.which, "J or I (lemmas)");
  app.add_option("--label", cfg.label, "case label (catalog)");
  app.add_option("--param", cfg.params, "case parameter name=value (catalog, repeatable)");
  app.add_option("--grid", cfg.grid, "classify on a grid x grid sweep of (lambda, mu)");
  app.add_option("--grid-range", cfg.grid_range, "sweep (lambda, mu) over [-L, L]^2");

  for (const char* name : {"classify", "solve", "verify", "catalog", "ball", "lemmas"})
    app.add_subcommand(name)->fallthrough();

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    // A JSON config contributes flags that the command line did not set.
    for (std::size_t i = 0; i + 1 < args.size(); ++i) {
      if (args[i] != "--config") continue;
      std::vector<std::string> extra;
      for (auto& tok : config_tokens(args[i + 1])) extra.push_back(tok);
      std::vector<std::string> merged;
      for (std::size_t k = 0; k < extra.size(); ++k) {
        const std::string& flag = extra[k];
        const bool is_flag_only = k + 1 >= extra.size() || extra[k + 1].rfind("--", 0) == 0;
        const bool given = std::find(args.begin(), args.end(), flag) != args.end();
        if (!given || flag == "--param") {
          merged.push_back(flag);
          if (!is_flag_only) merged.push_back(extra[k + 1]);
        }
        if (!is_flag_only) ++k;
      }
      args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
      args.insert(args.end(), merged.begin(), merged.end());
      break;
    }
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  cfg.s_range_given = smin->count() > 0 || smax->count() > 0;

  try {
    check_config(cfg);
    if (cfg.command == "classify") return run_classify(cfg);
    if (cfg.command == "solve") return run_solve(cfg, false);
    if (cfg.command == "ball") return run_solve(cfg, true);
    if (cfg.command == "verify") return run_verify(cfg);
    if (cfg.command == "catalog") return run_catalog(cfg);
    if (cfg.command == "lemmas") return run_lemmas(cfg);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
