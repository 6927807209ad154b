#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "csck/poly.hpp"
#include "csck/reduction.hpp"

namespace csck {

enum class BranchKind { FullRay, FiniteExtension, SmoothOrigin };

constexpr std::string_view to_string(BranchKind k) noexcept {
  switch (k) {
    case BranchKind::FullRay: return "FullRay";
    case BranchKind::FiniteExtension: return "FiniteExtension";
    case BranchKind::SmoothOrigin: return "SmoothOrigin";
  }
  return "Unknown";
}

/// An interval (A, B) of values of g. B may be +infinity.
struct Branch {
  double A = 0.0;
  double B = std::numeric_limits<double>::infinity();
  bool diverges_left = false;
  bool diverges_right = false;
  BranchKind kind = BranchKind::FullRay;
  int mult_left = 0;   // multiplicity of A as a root of H
  int mult_right = 0;  // 0 when B is infinite

  bool right_infinite() const { return std::isinf(B); }
};

enum class Verdict { SmoothFamily, SingularFamilies, FiniteExtensionOnly, Nonexistent };

constexpr std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::SmoothFamily: return "SmoothFamily";
    case Verdict::SingularFamilies: return "SingularFamilies";
    case Verdict::FiniteExtensionOnly: return "FiniteExtensionOnly";
    case Verdict::Nonexistent: return "Nonexistent";
  }
  return "Unknown";
}

struct CaseReport {
  RadialProblem problem;
  Verdict verdict = Verdict::Nonexistent;
  std::vector<Branch> branches;
  std::vector<std::string> labels;  // one per branch
  std::optional<std::string> matched_case;
  std::vector<std::string> diagnostics;
};

/// Roots closer to zero than this are taken to be exactly zero.
inline constexpr double kZeroRootTol = 1e-12;

inline bool lambda_mu_vanish(const RadialProblem& p) { return p.lambda == 0.0 && p.mu == 0.0; }

namespace detail {

inline std::vector<RealRoot> nonnegative_roots(const RootProfile& prof) {
  std::vector<RealRoot> out;
  for (auto r : prof.real_roots) {
    if (std::abs(r.value) <= kZeroRootTol) r.value = 0.0;
    if (r.value >= 0.0) out.push_back(r);
  }
  return out;
}

inline bool left_diverges(double a, int mult, int k) { return a > 0.0 ? mult >= 1 : mult >= k + 1; }

}  // namespace detail

/// Candidate intervals of g on which x^k / H integrates to a monotone F.
/// Branches whose F stays bounded at an end (finite maximal s-interval) are
/// dropped unless `include_finite_extension` is set.
inline std::vector<Branch> admissible_branches(const OdeData& ode, bool include_finite_extension = false) {
  std::vector<Branch> out;
  if (ode.H.is_zero()) throw Error(ErrorCode::ZeroPoly, "H is the zero polynomial");
  const RootProfile prof = real_root_profile(ode.H);
  const auto roots = detail::nonnegative_roots(prof);
  const bool ray_diverges = ode.H.degree() <= ode.k + 1;

  auto push = [&](Branch b) {
    const bool smooth = b.A == 0.0 && lambda_mu_vanish(ode.problem);
    if (b.diverges_left && b.diverges_right) {
      b.kind = smooth ? BranchKind::SmoothOrigin : BranchKind::FullRay;
    } else {
      b.kind = BranchKind::FiniteExtension;
      if (!include_finite_extension) return;
    }
    out.push_back(b);
  };

  for (std::size_t i = 0; i + 1 < roots.size(); ++i) {
    const double a = roots[i].value;
    const double b = roots[i + 1].value;
    if (!(ode.H(0.5 * (a + b)) > 0.0)) continue;
    Branch br;
    br.A = a;
    br.B = b;
    br.mult_left = roots[i].multiplicity;
    br.mult_right = roots[i + 1].multiplicity;
    br.diverges_left = detail::left_diverges(a, br.mult_left, ode.k);
    br.diverges_right = true;  // b > a >= 0 is a root of H
    push(br);
  }
  if (!roots.empty() && ode.H.leading() > 0.0) {
    Branch br;
    br.A = roots.back().value;
    br.mult_left = roots.back().multiplicity;
    br.diverges_left = detail::left_diverges(br.A, br.mult_left, ode.k);
    br.diverges_right = ray_diverges;
    push(br);
  }
  return out;
}

inline bool smooth_origin_test(const Branch& branch, const OdeData& ode) {
  return branch.A == 0.0 && lambda_mu_vanish(ode.problem);
}

/// The Lelong number of the potential at the origin: u ~ A log s.
inline double lelong_number(const Branch& branch) { return branch.A; }

// ---------------------------------------------------------------------------
// Case labels.

enum class CurvatureClass { Zero, Positive, Negative, Other };

inline CurvatureClass curvature_class(int n, double R) {
  const double norm = n * (n + 1.0);
  if (R == 0.0) return CurvatureClass::Zero;
  if (std::abs(R - norm) <= 1e-12 * norm) return CurvatureClass::Positive;
  if (std::abs(R + norm) <= 1e-12 * norm) return CurvatureClass::Negative;
  return CurvatureClass::Other;
}

/// Root pattern of H that identifies a case: multiplicities of the real roots
/// in increasing order, number of complex pairs, and which roots bound g.
struct CaseSignature {
  const char* label;
  int n;
  CurvatureClass curvature;
  bool finite_extension;  // ball cases live on finite s-intervals
  bool mu_zero;
  std::vector<int> mults;
  int quads;
  int a_index;
  int b_index;  // -1: B = +infinity
};

inline const std::vector<CaseSignature>& case_signatures() {
  using C = CurvatureClass;
  static const std::vector<CaseSignature> table{
      {"1.2.2", 2, C::Zero, false, true, {1, 1}, 0, 1, -1},
      {"1.2.3", 2, C::Zero, false, false, {1, 1}, 0, 1, -1},
      {"1.2.4", 2, C::Zero, false, false, {2}, 0, 0, -1},
      {"1.3.2", 2, C::Positive, false, true, {1, 1, 1}, 0, 1, 2},
      {"1.3.3", 2, C::Positive, false, false, {1, 1, 1}, 0, 1, 2},
      {"1.3.4", 2, C::Positive, false, false, {2, 1}, 0, 0, 1},
      {"1.4.2", 3, C::Zero, false, true, {1, 1, 1}, 0, 2, -1},
      {"1.4.3", 3, C::Zero, false, false, {1, 1, 1}, 0, 2, -1},
      {"1.4.4", 3, C::Zero, false, false, {2, 1}, 0, 1, -1},
      {"1.4.5", 3, C::Zero, false, false, {1, 2}, 0, 1, -1},
      {"1.4.6", 3, C::Zero, false, false, {1}, 1, 0, -1},
      {"1.5.2", 3, C::Positive, false, true, {1, 1, 1, 1}, 0, 2, 3},
      {"1.5.3", 3, C::Positive, false, false, {1, 1, 1, 1}, 0, 2, 3},
      {"1.5.4", 3, C::Positive, false, false, {2, 1, 1}, 0, 1, 2},
      {"1.5.5", 3, C::Positive, false, false, {1, 2, 1}, 0, 1, 2},
      {"1.5.6", 3, C::Positive, false, false, {1, 1}, 1, 0, 1},
      {"1.7.1", 2, C::Negative, true, true, {1, 2}, 0, 1, -1},
      {"1.7.2", 2, C::Negative, true, true, {1, 1, 1}, 0, 2, -1},
      {"1.7.3", 2, C::Negative, true, false, {1, 1, 1}, 0, 2, -1},
      {"1.7.4", 2, C::Negative, true, false, {1, 2}, 0, 1, -1},
      {"1.7.5", 2, C::Negative, true, false, {2, 1}, 0, 1, -1},
      {"1.7.6", 2, C::Negative, true, false, {1}, 1, 0, -1},
  };
  return table;
}

inline constexpr std::string_view kUnclassified = "unclassified";

/// Case label of a branch, or "unclassified".
inline std::string match_case(const OdeData& ode, const Branch& branch) {
  const auto& p = ode.problem;
  const CurvatureClass cls = curvature_class(p.n, p.R);
  if (branch.kind == BranchKind::SmoothOrigin) {
    if (cls == CurvatureClass::Zero) return p.n == 2 ? "1.2.1" : p.n == 3 ? "1.4.1" : "1.1.1";
    if (cls == CurvatureClass::Positive) return p.n == 2 ? "1.3.1" : p.n == 3 ? "1.5.1" : "1.1.2";
    return std::string(kUnclassified);
  }
  const RootProfile prof = real_root_profile(ode.H);
  std::vector<int> mults;
  int a_index = -1;
  int b_index = -1;
  for (const auto& r : prof.real_roots) {
    const double v = std::abs(r.value) <= kZeroRootTol ? 0.0 : r.value;
    if (v == branch.A) a_index = static_cast<int>(mults.size());
    if (!branch.right_infinite() && v == branch.B) b_index = static_cast<int>(mults.size());
    mults.push_back(r.multiplicity);
  }
  const bool mu_zero = std::abs(p.mu) <= 1e-12 * (1.0 + std::abs(p.lambda));
  const bool fe = branch.kind == BranchKind::FiniteExtension;
  for (const auto& sig : case_signatures()) {
    if (sig.n != p.n || sig.curvature != cls || sig.finite_extension != fe || sig.mu_zero != mu_zero) continue;
    if (sig.mults != mults || sig.quads != static_cast<int>(prof.quad_factors.size())) continue;
    if (sig.a_index != a_index || sig.b_index != b_index) continue;
    if (sig.label == std::string_view("1.7.1") && p.lambda != 0.0) continue;
    return sig.label;
  }
  return std::string(kUnclassified);
}

inline CaseReport classify(const RadialProblem& problem, bool allow_finite_extension = false) {
  CaseReport report;
  report.problem = problem;
  const OdeData ode = build_ode(problem);
  report.branches = admissible_branches(ode, allow_finite_extension);

  bool smooth = false;
  bool ray = false;
  bool finite = false;
  for (const auto& b : report.branches) {
    smooth |= b.kind == BranchKind::SmoothOrigin;
    ray |= b.kind == BranchKind::FullRay;
    finite |= b.kind == BranchKind::FiniteExtension;
    report.labels.push_back(match_case(ode, b));
  }
  if (smooth) report.verdict = Verdict::SmoothFamily;
  else if (ray) report.verdict = Verdict::SingularFamilies;
  else if (finite) report.verdict = Verdict::FiniteExtensionOnly;
  else report.verdict = Verdict::Nonexistent;

  if (!report.labels.empty()) report.matched_case = report.labels.front();
  if (problem.n >= 4 && report.verdict != Verdict::SmoothFamily)
    report.diagnostics.push_back("no case list for n >= 4; branches are reported unclassified");
  if (report.branches.empty()) report.diagnostics.push_back("no admissible branch");
  return report;
}

}  // namespace csck
