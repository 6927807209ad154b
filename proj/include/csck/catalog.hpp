#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "csck/classify.hpp"
#include "csck/error.hpp"
#include "csck/geometry.hpp"
#include "csck/poly.hpp"
#include "csck/quadrature.hpp"
#include "csck/reduction.hpp"

namespace csck {

using Params = std::map<std::string, double>;

/// One stated constraint of a case, with the text used in error reports.
struct Clause {
  std::string text;
  std::function<bool(const Params&)> holds;
};

/// Roots of the case's displayed polynomial, repeated by multiplicity.
struct RootPattern {
  std::vector<double> reals;
  std::vector<QuadFactor> quads;
};

struct CaseFixture {
  std::string label;
  std::vector<std::string> param_names;
  std::vector<Clause> clauses;
  std::function<RadialProblem(const Params&)> problem_shape;  // n and R; lambda, mu filled by Vieta
  std::function<RootPattern(const Params&)> roots;
  double display_sign = 1.0;  // displayed polynomial = display_sign * H
  std::function<std::pair<double, double>(const Params&)> range;  // (A, B) of g
  bool ball = false;
  std::optional<std::function<double(const Params&, double)>> closed_form_g;
  std::optional<std::function<double(const Params&, double)>> closed_form_dg;
  std::optional<std::function<double(const Params&, double)>> reference_F;
  Params default_params;
  bool printed_defaults = false;  // default_params are the printed data
};

struct Instance {
  const CaseFixture* fixture = nullptr;
  Params params;
  RadialProblem problem;
  double A = 0.0;
  double B = INFINITY;
};

namespace detail {

inline constexpr double kEqTol = 1e-12;

inline double par(const Params& p, const std::string& name) {
  const auto it = p.find(name);
  if (it == p.end()) throw Error(ErrorCode::InvalidArgument, "missing parameter " + name);
  return it->second;
}

inline bool near_eq(double lhs, double rhs, double scale = 1.0) {
  return std::abs(lhs - rhs) <= kEqTol * (1.0 + std::abs(scale));
}

inline Poly displayed_poly(const RootPattern& r) {
  Poly P = expand_roots(r.reals);
  for (const auto& q : r.quads) P = P * Poly{q.beta * q.beta + q.gamma * q.gamma, -2.0 * q.beta, 1.0};
  return P;
}

inline double sq(double x) { return x * x; }

// Shorthand for clause construction.
inline Clause clause(std::string text, std::function<bool(const Params&)> f) { return {std::move(text), std::move(f)}; }

inline std::function<RadialProblem(const Params&)> shape(int n, double R) {
  return [n, R](const Params&) { return RadialProblem{n, R, 0.0, 0.0}; };
}

inline std::function<std::pair<double, double>(const Params&)> range_of(std::function<double(const Params&)> a,
                                                                       std::function<double(const Params&)> b) {
  return [a = std::move(a), b = std::move(b)](const Params& p) { return std::pair{a(p), b(p)}; };
}

inline std::function<double(const Params&)> get(std::string name) {
  return [name = std::move(name)](const Params& p) { return par(p, name); };
}

inline std::function<double(const Params&)> constant(double v) {
  return [v](const Params&) { return v; };
}

inline int dimension_param(const Params& p) {
  const auto it = p.find("n");
  const double n = it == p.end() ? 2.0 : it->second;
  if (!(n >= 2.0) || n != std::floor(n) || n > 64.0)
    throw Error(ErrorCode::ConstraintViolation, "n must be an integer >= 2");
  return static_cast<int>(n);
}

// Three simple roots a < b < c: sum of (residue) log terms of the printed
// form with the denominator (b - a)(c - b)(c - a).
inline double three_log_form(double ca, double cb, double cc, double a, double b, double c, double x,
                             bool last_reversed) {
  const double lc = last_reversed ? std::log(c - x) : std::log(x - c);
  return (ca * std::log(x - a) + cb * std::log(x - b) + cc * lc) / ((b - a) * (c - b) * (c - a));
}

// -----------------------------------------------------------------------------
// The registry.

inline std::vector<CaseFixture> build_registry() {
  using std::log;
  std::vector<CaseFixture> out;
  const auto a_pos = clause("a > 0", [](const Params& p) { return par(p, "a") > 0.0; });
  const auto linear_g = [](const Params& p, double s) { return par(p, "a") * s; };
  const auto linear_dg = [](const Params& p, double) { return par(p, "a"); };
  const auto fs_g = [](const Params& p, double s) { return s / (s + par(p, "a")); };
  const auto fs_dg = [](const Params& p, double s) { return par(p, "a") / sq(s + par(p, "a")); };
  const auto log_F = [](const Params&, double x) { return log(x); };
  const auto fs_F = [](const Params&, double x) { return log(x) - log(1.0 - x); };

  // Smooth metrics on all of C^n.
  {
    CaseFixture f;
    f.label = "1.1.1";
    f.param_names = {"a", "n"};
    f.clauses = {a_pos};
    f.problem_shape = [](const Params& p) { return RadialProblem{dimension_param(p), 0.0, 0.0, 0.0}; };
    f.roots = [](const Params& p) { return RootPattern{std::vector<double>(dimension_param(p), 0.0), {}}; };
    f.range = range_of(constant(0.0), constant(INFINITY));
    f.closed_form_g = linear_g;
    f.closed_form_dg = linear_dg;
    f.reference_F = log_F;
    f.default_params = {{"a", 1.0}, {"n", 4.0}};
    out.push_back(f);

    f.label = "1.1.2";
    f.problem_shape = [](const Params& p) {
      const int n = dimension_param(p);
      return RadialProblem{n, n * (n + 1.0), 0.0, 0.0};
    };
    f.roots = [](const Params& p) {
      std::vector<double> r(dimension_param(p), 0.0);
      r.push_back(1.0);
      return RootPattern{r, {}};
    };
    f.display_sign = -1.0;
    f.range = range_of(constant(0.0), constant(1.0));
    f.closed_form_g = fs_g;
    f.closed_form_dg = fs_dg;
    f.reference_F = fs_F;
    out.push_back(f);
  }

  // n = 2, R = 0. Displayed polynomial x^2 + lambda x + mu.
  {
    CaseFixture f;
    f.label = "1.2.1";
    f.param_names = {"a"};
    f.clauses = {a_pos};
    f.problem_shape = shape(2, 0.0);
    f.roots = [](const Params&) { return RootPattern{{0.0, 0.0}, {}}; };
    f.range = range_of(constant(0.0), constant(INFINITY));
    f.closed_form_g = linear_g;
    f.closed_form_dg = linear_dg;
    f.reference_F = log_F;
    f.default_params = {{"a", 2.0}};
    out.push_back(f);
  }
  {
    CaseFixture f;
    f.label = "1.2.2";
    f.param_names = {"a", "b"};
    f.clauses = {a_pos, clause("b > 0", [](const Params& p) { return par(p, "b") > 0.0; })};
    f.problem_shape = shape(2, 0.0);
    f.roots = [](const Params& p) { return RootPattern{{0.0, par(p, "b")}, {}}; };
    f.range = range_of(get("b"), constant(INFINITY));
    f.closed_form_g = [](const Params& p, double s) { return par(p, "a") * s + par(p, "b"); };
    f.closed_form_dg = linear_dg;
    f.reference_F = [](const Params& p, double x) { return log(x - par(p, "b")); };
    f.default_params = {{"a", 1.0}, {"b", 1.0}};
    out.push_back(f);
  }
  {
    CaseFixture f;
    f.label = "1.2.3";
    f.param_names = {"alpha", "beta"};
    f.clauses = {clause("alpha != 0", [](const Params& p) { return par(p, "alpha") != 0.0; }),
                 clause("beta > 0", [](const Params& p) { return par(p, "beta") > 0.0; }),
                 clause("alpha < beta", [](const Params& p) { return par(p, "alpha") < par(p, "beta"); })};
    f.problem_shape = shape(2, 0.0);
    f.roots = [](const Params& p) { return RootPattern{{par(p, "alpha"), par(p, "beta")}, {}}; };
    f.range = range_of(get("beta"), constant(INFINITY));
    f.reference_F = [](const Params& p, double x) {
      const double a = par(p, "alpha"), b = par(p, "beta");
      return (b * log(x - b) - a * log(x - a)) / (b - a);
    };
    f.default_params = {{"alpha", -0.5}, {"beta", 1.5}};
    out.push_back(f);
  }
  {
    CaseFixture f;
    f.label = "1.2.4";
    f.param_names = {"alpha"};
    f.clauses = {clause("alpha > 0", [](const Params& p) { return par(p, "alpha") > 0.0; })};
    f.problem_shape = shape(2, 0.0);
    f.roots = [](const Params& p) { return RootPattern{{par(p, "alpha"), par(p, "alpha")}, {}}; };
    f.range = range_of(get("alpha"), constant(INFINITY));
    f.reference_F = [](const Params& p, double x) {
      const double a = par(p, "alpha");
      return log(x - a) - a / (x - a);
    };
    f.default_params = {{"alpha", 1.0}};
    out.push_back(f);
  }

  // n = 2, R = 6. Displayed polynomial x^3 - x^2 - lambda x - mu = -H.
  {
    CaseFixture f;
    f.label = "1.3.1";
    f.param_names = {"a"};
    f.clauses = {a_pos};
    f.problem_shape = shape(2, 6.0);
    f.roots = [](const Params&) { return RootPattern{{0.0, 0.0, 1.0}, {}}; };
    f.display_sign = -1.0;
    f.range = range_of(constant(0.0), constant(1.0));
    f.closed_form_g = fs_g;
    f.closed_form_dg = fs_dg;
    f.reference_F = fs_F;
    f.default_params = {{"a", 1.0}};
    out.push_back(f);
  }
  {
    // alpha = (1 - k)/2 and beta = (1 + k)/2 are the roots of x^2 - x - lambda.
    CaseFixture f;
    f.label = "1.3.2";
    f.param_names = {"a", "k"};
    f.clauses = {a_pos, clause("0 < k", [](const Params& p) { return par(p, "k") > 0.0; }),
                 clause("k < 1", [](const Params& p) { return par(p, "k") < 1.0; })};
    f.problem_shape = shape(2, 6.0);
    f.roots = [](const Params& p) {
      const double k = par(p, "k");
      return RootPattern{{0.0, 0.5 * (1.0 - k), 0.5 * (1.0 + k)}, {}};
    };
    f.display_sign = -1.0;
    f.range = range_of([](const Params& p) { return 0.5 * (1.0 - par(p, "k")); },
                       [](const Params& p) { return 0.5 * (1.0 + par(p, "k")); });
    f.closed_form_g = [](const Params& p, double s) {
      const double a = par(p, "a"), k = par(p, "k");
      return 0.5 * (k + 1.0) - k * a / (std::pow(s, k) + a);
    };
    f.closed_form_dg = [](const Params& p, double s) {
      const double a = par(p, "a"), k = par(p, "k");
      return k * k * a * std::pow(s, k - 1.0) / sq(std::pow(s, k) + a);
    };
    f.reference_F = [](const Params& p, double x) {
      const double k = par(p, "k");
      return (log(x - 0.5 * (1.0 - k)) - log(0.5 * (1.0 + k) - x)) / k;
    };
    f.default_params = {{"a", 1.0}, {"k", 0.5}};
    out.push_back(f);
  }
  {
    CaseFixture f;
    f.label = "1.3.3";
    f.param_names = {"alpha", "beta", "gamma"};
    f.clauses = {
        clause("alpha != 0", [](const Params& p) { return par(p, "alpha") != 0.0; }),
        clause("beta > 0", [](const Params& p) { return par(p, "beta") > 0.0; }),
        clause("alpha < beta", [](const Params& p) { return par(p, "alpha") < par(p, "beta"); }),
        clause("beta < gamma", [](const Params& p) { return par(p, "beta") < par(p, "gamma"); }),
        clause("alpha + beta + gamma = 1",
               [](const Params& p) { return near_eq(par(p, "alpha") + par(p, "beta") + par(p, "gamma"), 1.0); })};
    f.problem_shape = shape(2, 6.0);
    f.roots = [](const Params& p) { return RootPattern{{par(p, "alpha"), par(p, "beta"), par(p, "gamma")}, {}}; };
    f.display_sign = -1.0;
    f.range = range_of(get("beta"), get("gamma"));
    f.reference_F = [](const Params& p, double x) {
      const double a = par(p, "alpha"), b = par(p, "beta"), c = par(p, "gamma");
      return three_log_form(-a * (c - b), b * (c - a), -c * (b - a), a, b, c, x, true);
    };
    f.default_params = {{"alpha", -0.5}, {"beta", 0.5}, {"gamma", 1.0}};
    out.push_back(f);
  }
  {
    CaseFixture f;
    f.label = "1.3.4";
    f.param_names = {"alpha", "beta"};
    f.clauses = {clause("0 < beta", [](const Params& p) { return par(p, "beta") > 0.0; }),
                 clause("beta < alpha", [](const Params& p) { return par(p, "beta") < par(p, "alpha"); }),
                 clause("alpha + 2 beta = 1",
                        [](const Params& p) { return near_eq(par(p, "alpha") + 2.0 * par(p, "beta"), 1.0); })};
    f.problem_shape = shape(2, 6.0);
    f.roots = [](const Params& p) { return RootPattern{{par(p, "beta"), par(p, "beta"), par(p, "alpha")}, {}}; };
    f.display_sign = -1.0;
    f.range = range_of(get("beta"), get("alpha"));
    f.reference_F = [](const Params& p, double x) {
      const double a = par(p, "alpha"), b = par(p, "beta");
      return (a * log(x - b) - a * log(a - x) + b * (b - a) / (x - b)) / sq(b - a);
    };
    f.default_params = {{"alpha", 0.5}, {"beta", 0.25}};
    out.push_back(f);
  }

  // n = 3, R = 0. Displayed polynomial x^3 + lambda x + mu.
  {
    CaseFixture f;
    f.label = "1.4.1";
    f.param_names = {"a"};
    f.clauses = {a_pos};
    f.problem_shape = shape(3, 0.0);
    f.roots = [](const Params&) { return RootPattern{{0.0, 0.0, 0.0}, {}}; };
    f.range = range_of(constant(0.0), constant(INFINITY));
    f.closed_form_g = linear_g;
    f.closed_form_dg = linear_dg;
    f.reference_F = log_F;
    f.default_params = {{"a", 1.0}};
    out.push_back(f);
  }
  {
    CaseFixture f;
    f.label = "1.4.2";
    f.param_names = {"a", "b"};
    f.clauses = {a_pos, clause("b > 0", [](const Params& p) { return par(p, "b") > 0.0; })};
    f.problem_shape = shape(3, 0.0);
    f.roots = [](const Params& p) {
      const double A = par(p, "a") * par(p, "b");
      return RootPattern{{-A, 0.0, A}, {}};
    };
    f.range = range_of([](const Params& p) { return par(p, "a") * par(p, "b"); }, constant(INFINITY));
    f.closed_form_g = [](const Params& p, double s) { return par(p, "a") * std::hypot(s, par(p, "b")); };
    f.closed_form_dg = [](const Params& p, double s) { return par(p, "a") * s / std::hypot(s, par(p, "b")); };
    f.reference_F = [](const Params& p, double x) {
      const double A = par(p, "a") * par(p, "b");
      return 0.5 * log((x - A) * (x + A));
    };
    f.default_params = {{"a", 1.0}, {"b", 1.0}};
    out.push_back(f);
  }
  {
    CaseFixture f;
    f.label = "1.4.3";
    f.param_names = {"alpha", "beta", "gamma"};
    f.clauses = {
        clause("alpha < 0", [](const Params& p) { return par(p, "alpha") < 0.0; }),
        clause("beta != 0", [](const Params& p) { return par(p, "beta") != 0.0; }),
        clause("gamma > 0", [](const Params& p) { return par(p, "gamma") > 0.0; }),
        clause("alpha < beta", [](const Params& p) { return par(p, "alpha") < par(p, "beta"); }),
        clause("beta < gamma", [](const Params& p) { return par(p, "beta") < par(p, "gamma"); }),
        clause("alpha + beta + gamma = 0",
               [](const Params& p) { return near_eq(par(p, "alpha") + par(p, "beta") + par(p, "gamma"), 0.0); })};
    f.problem_shape = shape(3, 0.0);
    f.roots = [](const Params& p) { return RootPattern{{par(p, "alpha"), par(p, "beta"), par(p, "gamma")}, {}}; };
    f.range = range_of(get("gamma"), constant(INFINITY));
    f.reference_F = [](const Params& p, double x) {
      const double a = par(p, "alpha"), b = par(p, "beta"), c = par(p, "gamma");
      return three_log_form(a * a * (c - b), -b * b * (c - a), c * c * (b - a), a, b, c, x, false);
    };
    f.default_params = {{"alpha", -2.0}, {"beta", 0.5}, {"gamma", 1.5}};
    out.push_back(f);
  }
  {
    // Roots alpha (double) and -2 alpha. The two cases differ in which one bounds g.
    const auto F44 = [](const Params& p, double x) {
      const double a = par(p, "alpha");
      return 5.0 / 9.0 * log(x - a) + 4.0 / 9.0 * log(x + 2.0 * a) - a / 3.0 / (x - a);
    };
    CaseFixture f;
    f.label = "1.4.4";
    f.param_names = {"alpha"};
    f.clauses = {clause("alpha < 0", [](const Params& p) { return par(p, "alpha") < 0.0; })};
    f.problem_shape = shape(3, 0.0);
    f.roots = [](const Params& p) {
      const double a = par(p, "alpha");
      return RootPattern{{a, a, -2.0 * a}, {}};
    };
    f.range = range_of([](const Params& p) { return -2.0 * par(p, "alpha"); }, constant(INFINITY));
    f.reference_F = F44;
    f.default_params = {{"alpha", -1.0}};
    out.push_back(f);

    f.label = "1.4.5";
    f.clauses = {clause("alpha > 0", [](const Params& p) { return par(p, "alpha") > 0.0; })};
    f.range = range_of(get("alpha"), constant(INFINITY));
    f.default_params = {{"alpha", 1.0}};
    out.push_back(f);
  }
  {
    CaseFixture f;
    f.label = "1.4.6";
    f.param_names = {"alpha", "beta", "gamma"};
    f.clauses = {clause("alpha > 0", [](const Params& p) { return par(p, "alpha") > 0.0; }),
                 clause("gamma > 0", [](const Params& p) { return par(p, "gamma") > 0.0; }),
                 clause("alpha + 2 beta = 0",
                        [](const Params& p) { return near_eq(par(p, "alpha") + 2.0 * par(p, "beta"), 0.0); })};
    f.problem_shape = shape(3, 0.0);
    f.roots = [](const Params& p) {
      return RootPattern{{par(p, "alpha")}, {QuadFactor{par(p, "beta"), par(p, "gamma"), 1}}};
    };
    f.range = range_of(get("alpha"), constant(INFINITY));
    f.reference_F = [](const Params& p, double x) {
      const double a = par(p, "alpha"), b = par(p, "beta"), c = par(p, "gamma");
      const double lhs = a * a * log(x - a) + (b * b + c * c - 2.0 * a * b) / 2.0 * log(sq(x - b) + c * c) +
                         (b * b * b + b * c * c - a * b * b + a * c * c) / c * std::atan((x - b) / c);
      return lhs / (sq(a - b) + c * c);
    };
    f.default_params = {{"alpha", 1.0}, {"beta", -0.5}, {"gamma", 1.0}};
    out.push_back(f);
  }

  // n = 3, R = 12. Displayed polynomial x^4 - x^3 - lambda x - mu = -H.
  {
    CaseFixture f;
    f.label = "1.5.1";
    f.param_names = {"a"};
    f.clauses = {a_pos};
    f.problem_shape = shape(3, 12.0);
    f.roots = [](const Params&) { return RootPattern{{0.0, 0.0, 0.0, 1.0}, {}}; };
    f.display_sign = -1.0;
    f.range = range_of(constant(0.0), constant(1.0));
    f.closed_form_g = fs_g;
    f.closed_form_dg = fs_dg;
    f.reference_F = fs_F;
    f.default_params = {{"a", 1.0}};
    out.push_back(f);
  }
  {
    CaseFixture f;
    f.label = "1.5.2";
    f.param_names = {"alpha", "beta", "gamma"};
    f.clauses = {
        clause("alpha < 0", [](const Params& p) { return par(p, "alpha") < 0.0; }),
        clause("0 < beta", [](const Params& p) { return par(p, "beta") > 0.0; }),
        clause("beta < gamma", [](const Params& p) { return par(p, "beta") < par(p, "gamma"); }),
        clause("alpha + beta + gamma = 1",
               [](const Params& p) { return near_eq(par(p, "alpha") + par(p, "beta") + par(p, "gamma"), 1.0); }),
        clause("alpha beta + beta gamma + gamma alpha = 0", [](const Params& p) {
          const double a = par(p, "alpha"), b = par(p, "beta"), c = par(p, "gamma");
          return near_eq(a * b + b * c + c * a, 0.0, std::abs(a * b) + std::abs(b * c) + std::abs(c * a));
        })};
    f.problem_shape = shape(3, 12.0);
    f.roots = [](const Params& p) {
      return RootPattern{{par(p, "alpha"), 0.0, par(p, "beta"), par(p, "gamma")}, {}};
    };
    f.display_sign = -1.0;
    f.range = range_of(get("beta"), get("gamma"));
    f.reference_F = [](const Params& p, double x) {
      const double a = par(p, "alpha"), b = par(p, "beta"), c = par(p, "gamma");
      return three_log_form(-a * (c - b), b * (c - a), -c * (b - a), a, b, c, x, true);
    };
    f.default_params = {{"alpha", (1.0 - std::sqrt(5.0)) / 4.0}, {"beta", 0.5}, {"gamma", (1.0 + std::sqrt(5.0)) / 4.0}};
    f.printed_defaults = true;
    out.push_back(f);
  }
  {
    CaseFixture f;
    f.label = "1.5.3";
    f.param_names = {"alpha", "beta", "gamma", "delta"};
    f.clauses = {
        clause("alpha < beta", [](const Params& p) { return par(p, "alpha") < par(p, "beta"); }),
        clause("beta < gamma", [](const Params& p) { return par(p, "beta") < par(p, "gamma"); }),
        clause("gamma < delta", [](const Params& p) { return par(p, "gamma") < par(p, "delta"); }),
        clause("alpha + beta + gamma + delta = 1",
               [](const Params& p) {
                 return near_eq(par(p, "alpha") + par(p, "beta") + par(p, "gamma") + par(p, "delta"), 1.0);
               }),
        clause("alpha beta + alpha gamma + alpha delta + beta gamma + beta delta + gamma delta = 0",
               [](const Params& p) {
                 const double a = par(p, "alpha"), b = par(p, "beta"), c = par(p, "gamma"), d = par(p, "delta");
                 const double scale = std::abs(a) + std::abs(b) + std::abs(c) + std::abs(d);
                 return near_eq(a * b + a * c + a * d + b * c + b * d + c * d, 0.0, scale * scale);
               }),
        clause("gamma > 0", [](const Params& p) { return par(p, "gamma") > 0.0; }),
        clause("alpha beta delta != 0",
               [](const Params& p) { return par(p, "alpha") * par(p, "beta") * par(p, "delta") != 0.0; })};
    f.problem_shape = shape(3, 12.0);
    f.roots = [](const Params& p) {
      return RootPattern{{par(p, "alpha"), par(p, "beta"), par(p, "gamma"), par(p, "delta")}, {}};
    };
    f.display_sign = -1.0;
    f.range = range_of(get("gamma"), get("delta"));
    f.reference_F = [](const Params& p, double x) {
      const double a = par(p, "alpha"), b = par(p, "beta"), c = par(p, "gamma"), d = par(p, "delta");
      return a * a / ((b - a) * (c - a) * (d - a)) * log(x - a) - b * b / ((b - a) * (c - b) * (d - b)) * log(x - b) +
             c * c / ((c - a) * (c - b) * (d - c)) * log(x - c) - d * d / ((d - a) * (d - b) * (d - c)) * log(d - x);
    };
    f.default_params = {{"alpha", (1.0 - std::sqrt(21.0)) / 8.0},
                        {"beta", 0.25},
                        {"gamma", 0.5},
                        {"delta", (1.0 + std::sqrt(21.0)) / 8.0}};
    f.printed_defaults = true;
    out.push_back(f);
  }
  {
    // Double root alpha, simple roots beta < gamma. The quadratic constraint
    // is enforced as an equation in both cases.
    const auto F54 = [](const Params& p, double x) {
      const double a = par(p, "alpha"), b = par(p, "beta"), c = par(p, "gamma");
      return -c * c / ((c - b) * sq(c - a)) * log(c - x) + b * b / ((c - b) * sq(b - a)) * log(x - b) -
             (2.0 * a * b * c - a * a * (b + c)) / (sq(c - a) * sq(b - a)) * log(x - a) +
             a * a / ((c - a) * (b - a)) / (x - a);
    };
    const auto sum = clause("2 alpha + beta + gamma = 1", [](const Params& p) {
      return near_eq(2.0 * par(p, "alpha") + par(p, "beta") + par(p, "gamma"), 1.0);
    });
    const auto quad = clause("alpha^2 + 2 alpha beta + 2 alpha gamma + beta gamma = 0", [](const Params& p) {
      const double a = par(p, "alpha"), b = par(p, "beta"), c = par(p, "gamma");
      const double scale = sq(std::abs(a) + std::abs(b) + std::abs(c));
      return near_eq(a * a + 2.0 * a * b + 2.0 * a * c + b * c, 0.0, scale);
    });
    CaseFixture f;
    f.label = "1.5.4";
    f.param_names = {"alpha", "beta", "gamma"};
    f.clauses = {sum, quad, clause("alpha < 0", [](const Params& p) { return par(p, "alpha") < 0.0; }),
                 clause("0 < beta", [](const Params& p) { return par(p, "beta") > 0.0; }),
                 clause("beta < gamma", [](const Params& p) { return par(p, "beta") < par(p, "gamma"); })};
    f.problem_shape = shape(3, 12.0);
    f.roots = [](const Params& p) {
      const double a = par(p, "alpha");
      return RootPattern{{a, a, par(p, "beta"), par(p, "gamma")}, {}};
    };
    f.display_sign = -1.0;
    f.range = range_of(get("beta"), get("gamma"));
    f.reference_F = F54;
    f.default_params = {{"alpha", -1.0 / 6.0}, {"beta", 0.5}, {"gamma", 5.0 / 6.0}};
    f.printed_defaults = true;
    out.push_back(f);

    f.label = "1.5.5";
    f.clauses = {sum, quad, clause("beta < 0", [](const Params& p) { return par(p, "beta") < 0.0; }),
                 clause("0 < alpha", [](const Params& p) { return par(p, "alpha") > 0.0; }),
                 clause("alpha < gamma", [](const Params& p) { return par(p, "alpha") < par(p, "gamma"); })};
    f.range = range_of(get("alpha"), get("gamma"));
    f.default_params = {{"alpha", 0.25}, {"beta", (1.0 - std::sqrt(6.0)) / 4.0}, {"gamma", (1.0 + std::sqrt(6.0)) / 4.0}};
    out.push_back(f);
  }
  {
    CaseFixture f;
    f.label = "1.5.6";
    f.param_names = {"alpha1", "alpha2", "beta", "gamma"};
    f.clauses = {
        clause("0 < alpha1", [](const Params& p) { return par(p, "alpha1") > 0.0; }),
        clause("alpha1 < alpha2", [](const Params& p) { return par(p, "alpha1") < par(p, "alpha2"); }),
        clause("gamma > 0", [](const Params& p) { return par(p, "gamma") > 0.0; }),
        clause("alpha1 + alpha2 + 2 beta = 1",
               [](const Params& p) { return near_eq(par(p, "alpha1") + par(p, "alpha2") + 2.0 * par(p, "beta"), 1.0); }),
        clause("alpha1 alpha2 + 2 beta (alpha1 + alpha2) + beta^2 + gamma^2 = 0", [](const Params& p) {
          const double a1 = par(p, "alpha1"), a2 = par(p, "alpha2"), b = par(p, "beta"), c = par(p, "gamma");
          const double scale = sq(std::abs(a1) + std::abs(a2) + std::abs(b) + std::abs(c));
          return near_eq(a1 * a2 + 2.0 * b * (a1 + a2) + b * b + c * c, 0.0, scale);
        })};
    f.problem_shape = shape(3, 12.0);
    f.roots = [](const Params& p) {
      return RootPattern{{par(p, "alpha1"), par(p, "alpha2")}, {QuadFactor{par(p, "beta"), par(p, "gamma"), 1}}};
    };
    f.display_sign = -1.0;
    f.range = range_of(get("alpha1"), get("alpha2"));
    f.reference_F = [](const Params& p, double x) {
      const double a1 = par(p, "alpha1"), a2 = par(p, "alpha2"), b = par(p, "beta"), c = par(p, "gamma");
      const double Q = log(sq(x - b) + c * c);
      const double T = std::atan((x - b) / c);
      const double first = (a1 * a1 * log(x - a1) + (b * b + c * c - 2.0 * a1 * b) / 2.0 * Q +
                            ((a1 + b) * (b * b + c * c) - 2.0 * a1 * b * b) / c * T) /
                           (sq(a1 - b) + c * c);
      const double second = (a2 * a2 * log(a2 - x) + (b * b + c * c - 2.0 * a2 * b) / 2.0 * Q +
                             ((a2 + b) * (b * b + c * c) - 2.0 * a2 * b * b) / c * T) /
                            (sq(a2 - b) + c * c);
      return (first - second) / (a2 - a1);
    };
    // Vieta-derived data: the printed list for this case breaks the linear constraint.
    f.default_params = {{"alpha1", 0.5}, {"alpha2", 1.5}, {"beta", -0.5}, {"gamma", 1.0}};
    out.push_back(f);
  }

  // Unit ball, n = 2, R = -6. Displayed polynomial x^3 + x^2 + lambda x + mu = H.
  {
    CaseFixture f;
    f.label = "1.7.1";
    f.ball = true;
    f.problem_shape = shape(2, -6.0);
    f.roots = [](const Params&) { return RootPattern{{-1.0, 0.0, 0.0}, {}}; };
    f.range = range_of(constant(0.0), constant(INFINITY));
    f.closed_form_g = [](const Params&, double s) { return s / (1.0 - s); };
    f.closed_form_dg = [](const Params&, double s) { return 1.0 / sq(1.0 - s); };
    out.push_back(f);
  }
  {
    CaseFixture f;
    f.label = "1.7.2";
    f.ball = true;
    f.param_names = {"k"};
    f.clauses = {clause("k > 1", [](const Params& p) { return par(p, "k") > 1.0; })};
    f.problem_shape = shape(2, -6.0);
    f.roots = [](const Params& p) {
      const double k = par(p, "k");
      return RootPattern{{-0.5 * (k + 1.0), 0.0, 0.5 * (k - 1.0)}, {}};
    };
    f.range = range_of([](const Params& p) { return 0.5 * (par(p, "k") - 1.0); }, constant(INFINITY));
    f.closed_form_g = [](const Params& p, double s) {
      const double k = par(p, "k");
      return -0.5 * (k + 1.0) + k / (1.0 - std::pow(s, k));
    };
    f.closed_form_dg = [](const Params& p, double s) {
      const double k = par(p, "k");
      return k * k * std::pow(s, k - 1.0) / sq(1.0 - std::pow(s, k));
    };
    f.default_params = {{"k", 2.0}};
    out.push_back(f);
  }
  {
    CaseFixture f;
    f.label = "1.7.3";
    f.ball = true;
    f.param_names = {"alpha", "beta", "gamma"};
    f.clauses = {
        clause("alpha + beta + gamma = -1",
               [](const Params& p) { return near_eq(par(p, "alpha") + par(p, "beta") + par(p, "gamma"), -1.0); }),
        clause("alpha < beta", [](const Params& p) { return par(p, "alpha") < par(p, "beta"); }),
        clause("beta < gamma", [](const Params& p) { return par(p, "beta") < par(p, "gamma"); }),
        clause("gamma > 0", [](const Params& p) { return par(p, "gamma") > 0.0; })};
    f.problem_shape = shape(2, -6.0);
    f.roots = [](const Params& p) { return RootPattern{{par(p, "alpha"), par(p, "beta"), par(p, "gamma")}, {}}; };
    f.range = range_of(get("gamma"), constant(INFINITY));
    f.reference_F = [](const Params& p, double x) {
      const double a = par(p, "alpha"), b = par(p, "beta"), c = par(p, "gamma");
      return three_log_form(a * (c - b), -b * (c - a), c * (b - a), a, b, c, x, false);
    };
    f.default_params = {{"alpha", -2.0}, {"beta", -0.5}, {"gamma", 1.5}};
    out.push_back(f);
  }
  {
    const auto F74 = [](const Params& p, double x) {
      const double a = par(p, "alpha"), b = par(p, "beta");
      return (-a * log(x - b) + a * log(x - a) - b * (b - a) / (x - b)) / sq(b - a);
    };
    const auto sum = clause("alpha + 2 beta = -1",
                            [](const Params& p) { return near_eq(par(p, "alpha") + 2.0 * par(p, "beta"), -1.0); });
    CaseFixture f;
    f.label = "1.7.4";
    f.ball = true;
    f.param_names = {"alpha", "beta"};
    f.clauses = {clause("alpha < 0", [](const Params& p) { return par(p, "alpha") < 0.0; }),
                 clause("beta > 0", [](const Params& p) { return par(p, "beta") > 0.0; }), sum};
    f.problem_shape = shape(2, -6.0);
    f.roots = [](const Params& p) { return RootPattern{{par(p, "alpha"), par(p, "beta"), par(p, "beta")}, {}}; };
    f.range = range_of(get("beta"), constant(INFINITY));
    f.reference_F = F74;
    f.default_params = {{"alpha", -2.0}, {"beta", 0.5}};
    out.push_back(f);

    f.label = "1.7.5";
    f.clauses = {clause("alpha > 0", [](const Params& p) { return par(p, "alpha") > 0.0; }),
                 clause("beta < 0", [](const Params& p) { return par(p, "beta") < 0.0; }), sum};
    f.range = range_of(get("alpha"), constant(INFINITY));
    f.default_params = {{"alpha", 1.0}, {"beta", -1.0}};
    out.push_back(f);
  }
  {
    CaseFixture f;
    f.label = "1.7.6";
    f.ball = true;
    f.param_names = {"alpha", "beta", "gamma"};
    f.clauses = {clause("alpha > 0", [](const Params& p) { return par(p, "alpha") > 0.0; }),
                 clause("gamma > 0", [](const Params& p) { return par(p, "gamma") > 0.0; }),
                 clause("alpha + 2 beta = -1",
                        [](const Params& p) { return near_eq(par(p, "alpha") + 2.0 * par(p, "beta"), -1.0); })};
    f.problem_shape = shape(2, -6.0);
    f.roots = [](const Params& p) {
      return RootPattern{{par(p, "alpha")}, {QuadFactor{par(p, "beta"), par(p, "gamma"), 1}}};
    };
    f.range = range_of(get("alpha"), constant(INFINITY));
    // As printed. Its derivative is 1/H rather than x/H, so cross_check reports a mismatch.
    f.reference_F = [](const Params& p, double x) {
      const double a = par(p, "alpha"), b = par(p, "beta"), c = par(p, "gamma");
      const double lhs = log(x - a) - 0.5 * log(sq(x - b) + c * c) - (a - b) / c * std::atan((x - b) / c);
      return lhs / (sq(a - b) + c * c);
    };
    f.default_params = {{"alpha", 1.0}, {"beta", -1.0}, {"gamma", 1.0}};
    out.push_back(f);
  }
  return out;
}

}  // namespace detail

inline const std::vector<CaseFixture>& fixtures() {
  static const std::vector<CaseFixture> registry = detail::build_registry();
  return registry;
}

inline const CaseFixture& fixture(std::string_view label) {
  for (const auto& f : fixtures())
    if (f.label == label) return f;
  throw Error(ErrorCode::UnknownCase, "no case labelled " + std::string(label));
}

/// Clauses of the case's constraint list that the parameters violate.
inline std::vector<std::string> violated_clauses(const CaseFixture& f, const Params& params) {
  std::vector<std::string> bad;
  for (const auto& c : f.clauses)
    if (!c.holds(params)) bad.push_back(c.text);
  return bad;
}

/// (lambda, mu) read off the case's displayed polynomial built from its roots.
inline std::pair<double, double> lambda_mu_from_params(const CaseFixture& f, const Params& params) {
  const Poly P = detail::displayed_poly(f.roots(params));
  return {f.display_sign * P.coeff(1), f.display_sign * P.coeff(0)};
}

inline Instance instantiate(std::string_view label, const Params& params) {
  const CaseFixture& f = fixture(label);
  for (const auto& name : f.param_names)
    if (name != "n" && !params.contains(name)) throw Error(ErrorCode::InvalidArgument, "missing parameter " + name);
  const auto bad = violated_clauses(f, params);
  if (!bad.empty()) {
    std::string msg = "case " + f.label + " violates:";
    for (const auto& b : bad) msg += " [" + b + "]";
    throw Error(ErrorCode::ConstraintViolation, msg);
  }
  Instance inst;
  inst.fixture = &f;
  inst.params = params;
  inst.problem = f.problem_shape(params);
  std::tie(inst.problem.lambda, inst.problem.mu) = lambda_mu_from_params(f, params);
  std::tie(inst.A, inst.B) = f.range(params);
  return inst;
}

inline Instance instantiate(std::string_view label) { return instantiate(label, fixture(label).default_params); }

enum class CurvatureSign { Negative, Zero, Positive };

inline std::vector<std::string> enumerate_smooth_cases() { return {"1.1.1", "1.1.2", "1.1.3"}; }

/// Case labels of the classification for (n, sign of R). Negative curvature
/// in dimension 2 lists the unit-ball cases; in dimension 3 nothing exists.
inline std::vector<std::string> enumerate_cases(int n, CurvatureSign sign) {
  auto prefixed = [](const char* stem, int count) {
    std::vector<std::string> out;
    for (int i = 1; i <= count; ++i) out.push_back(std::string(stem) + std::to_string(i));
    return out;
  };
  if (n == 2 && sign == CurvatureSign::Zero) return prefixed("1.2.", 4);
  if (n == 2 && sign == CurvatureSign::Positive) return prefixed("1.3.", 4);
  if (n == 2 && sign == CurvatureSign::Negative) return prefixed("1.7.", 6);
  if (n == 3 && sign == CurvatureSign::Zero) return prefixed("1.4.", 6);
  if (n == 3 && sign == CurvatureSign::Positive) return prefixed("1.5.", 6);
  if (n == 3 && sign == CurvatureSign::Negative) return {};
  throw Error(ErrorCode::NotClassified, "no case list for n = " + std::to_string(n) + " with this curvature sign");
}

// -----------------------------------------------------------------------------
// Cross-checks.

struct FormulaComparison {
  double scale = 0.0;      // least-squares factor between engine and printed differences
  double deviation = 0.0;  // max |dF_engine - scale dF_printed|
  bool matches = false;
};

inline constexpr double kFormulaTol = 1e-9;

/// Interior points of (A, B): uniform for a finite interval, geometric
/// offsets from A on a ray.
inline std::vector<double> interior_points(double A, double B, int count) {
  std::vector<double> xs;
  for (int i = 0; i < count; ++i) {
    const double t = (i + 0.5) / count;
    xs.push_back(std::isinf(B) ? A + (1.0 + std::abs(A)) * std::exp(-4.0 + 8.0 * t) : A + (B - A) * t);
  }
  return xs;
}

inline FormulaComparison compare_antiderivatives(const std::function<double(double)>& engine,
                                                 const std::function<double(double)>& printed,
                                                 const std::vector<double>& xs) {
  std::vector<double> de;
  std::vector<double> dp;
  for (double x : xs) {
    de.push_back(engine(x) - engine(xs.front()));
    dp.push_back(printed(x) - printed(xs.front()));
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < de.size(); ++i) {
    num += de[i] * dp[i];
    den += dp[i] * dp[i];
  }
  FormulaComparison out;
  out.scale = den > 0.0 ? num / den : 0.0;
  for (std::size_t i = 0; i < de.size(); ++i)
    out.deviation = std::max(out.deviation, std::abs(de[i] - out.scale * dp[i]));
  out.matches = out.scale > 0.0 && out.deviation < kFormulaTol;
  return out;
}

struct CrossCheckReport {
  std::string label;
  RadialProblem problem;
  Branch branch;
  std::string matched_case;
  double range_error = 0.0;  // |A - A_expected| + |B - B_expected| (0 when both infinite)
  std::optional<FormulaComparison> formula;
  std::optional<double> closed_form_residual;  // ode_residual of the closed form
  std::optional<double> closed_form_gap;       // sup |g_engine - g_closed|
  double oracle_gap = 0.0;                     // sup |solve_g - shoot_ode|
  std::optional<double> domain_end;
  VerifyReport verify;
};

namespace detail {

template <class Fn>
auto staged(const char* stage, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.code(), std::string("[") + stage + "] " + e.message(), e.value());
  }
}

inline const Branch& find_branch(const std::vector<Branch>& branches, double A, double B) {
  for (const auto& b : branches) {
    const bool right = std::isinf(B) ? b.right_infinite() : std::abs(b.B - B) <= 1e-8 * (1.0 + std::abs(B));
    if (std::abs(b.A - A) <= 1e-8 * (1.0 + std::abs(A)) && right) return b;
  }
  throw Error(ErrorCode::NotClassified, "no admissible branch with the stated range");
}

}  // namespace detail

/// The gauge fixed by the case: the closed form's value at s = 1 when there
/// is one, s_hi = 1 for ball cases, otherwise c = 0.
inline RadialSolution fixture_solution(const Instance& inst, const OdeData& ode, const Branch& branch,
                                       const AntiderivativeF& F) {
  const CaseFixture& f = *inst.fixture;
  if (f.ball) return ball_normalize(ode, branch, F);
  if (f.closed_form_g) return gauge_from_anchor(ode, branch, F, 1.0, (*f.closed_form_g)(inst.params, 1.0));
  return gauge_from_constant(ode, branch, F, 0.0);
}

inline CrossCheckReport cross_check(std::string_view label, const Params& params, int n_samples = 200) {
  const Instance inst = detail::staged("instantiate", [&] { return instantiate(label, params); });
  const CaseFixture& f = *inst.fixture;
  CrossCheckReport rep;
  rep.label = f.label;
  rep.problem = inst.problem;

  const OdeData ode = build_ode(inst.problem);
  const CaseReport cls = detail::staged("classify", [&] { return classify(inst.problem, f.ball); });
  rep.branch = detail::staged("classify", [&] { return detail::find_branch(cls.branches, inst.A, inst.B); });
  rep.matched_case = match_case(ode, rep.branch);
  rep.range_error = std::abs(rep.branch.A - inst.A) + (std::isinf(inst.B) ? 0.0 : std::abs(rep.branch.B - inst.B));

  const AntiderivativeF F = detail::staged("partial_fractions", [&] { return partial_fractions(ode, rep.branch); });
  if (f.reference_F) {
    const auto xs = interior_points(rep.branch.A, rep.branch.B, 50);
    rep.formula = compare_antiderivatives([&](double x) { return eval_F(F, x); },
                                          [&](double x) { return (*f.reference_F)(inst.params, x); }, xs);
  }

  const RadialSolution sol = detail::staged("gauge", [&] { return fixture_solution(inst, ode, rep.branch, F); });
  rep.verify = detail::staged("verify", [&] { return verify_solution(sol, n_samples); });

  std::vector<double> ss;
  for (const auto& m : rep.verify.samples)
    if (!near_endpoint(sol, m.s)) ss.push_back(m.s);
  if (!ss.empty()) {
    const double s0 = ss[ss.size() / 2];
    const ShootResult shot = detail::staged("shoot", [&] { return shoot_ode(ode, s0, sol.g(s0), ss); });
    rep.domain_end = shot.domain_end;
    if (shot.samples.size() != ss.size()) rep.oracle_gap = INFINITY;
    for (const auto& [s, g] : shot.samples) rep.oracle_gap = std::max(rep.oracle_gap, std::abs(sol.g(s) - g));
  }

  if (f.closed_form_g) {
    std::vector<OdeSample> smp;
    double gap = 0.0;
    for (double s : ss) {
      const double g = (*f.closed_form_g)(inst.params, s);
      smp.push_back({s, g, (*f.closed_form_dg)(inst.params, s)});
      gap = std::max(gap, std::abs(sol.g(s) - g));
    }
    rep.closed_form_residual = detail::staged("closed_form", [&] { return ode_residual(smp, ode); });
    rep.closed_form_gap = gap;
  }
  return rep;
}

inline CrossCheckReport cross_check(std::string_view label) {
  return cross_check(label, fixture(label).default_params);
}

}  // namespace csck
