// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "csck/csck.hpp"

using namespace csck;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("failed: ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

RadialSolution solution_for(const RadialProblem& p, bool fe, int branch = 0) {
  const OdeData ode = build_ode(p);
  const Branch b = classify(p, fe).branches.at(static_cast<std::size_t>(branch));
  return gauge_from_constant(ode, b, partial_fractions(ode, b), 0.0);
}

struct FixtureRun {
  Instance inst;
  OdeData ode;
  Branch branch;
  AntiderivativeF F;
};

FixtureRun fixture_run(const CaseFixture& f) {
  const Instance inst = instantiate(f.label);
  const OdeData ode = build_ode(inst.problem);
  const Branch b = detail::find_branch(classify(inst.problem, f.ball).branches, inst.A, inst.B);
  return {inst, ode, b, partial_fractions(ode, b)};
}

// ---------------------------------------------------------------------------

Outcome smooth_family() {
  Outcome out;
  const auto t0 = Clock::now();
  double worst_pos = 0.0;
  double worst_zero = 0.0;
  for (int n : {2, 3, 4}) {
    const double norm = n * (n + 1.0);
    // g = s / (s + a) with a = 1, i.e. g(1) = 1/2.
    const RadialProblem p{n, norm, 0.0, 0.0};
    const OdeData ode = build_ode(p);
    const Branch b = classify(p).branches.at(0);
    const RadialSolution sol = gauge_from_anchor(ode, b, partial_fractions(ode, b), 1.0, 0.5);
    const VerifyReport v = verify_solution(sol, 200, SampleRange{1e-2, 1e2});
    worst_pos = std::max(worst_pos, v.max_R_residual);
    out.require(v.used == 200, "n=" + std::to_string(n) + " used all samples");

    const VerifyReport z = verify_solution(solution_for({n, 0.0, 0.0, 0.0}, false), 200, SampleRange{1e-2, 1e2});
    worst_zero = std::max(worst_zero, z.max_R_residual);
  }
  const double t_smooth = seconds_since(t0);
  out.require(worst_pos < 1e-6, "R = n(n+1) residual < 1e-6");
  out.require(worst_zero < 1e-10, "R = 0 residual < 1e-10");
  out.require(t_smooth < 5.0, "smooth runtime < 5 s");

  const auto t1 = Clock::now();
  int not_nonexistent = 0;
  for (int n : {2, 3}) {
    const double R = -n * (n + 1.0);
    for (int i = 0; i <= 100; ++i)
      for (int j = 0; j <= 100; ++j) {
        const RadialProblem p{n, R, -10.0 + 0.2 * i, -10.0 + 0.2 * j};
        if (classify(p).verdict != Verdict::Nonexistent) ++not_nonexistent;
      }
  }
  const double t_grid = seconds_since(t1);
  out.require(not_nonexistent == 0, "negative-curvature grid all Nonexistent");
  out.require(t_grid < 60.0, "grid runtime < 60 s");
  out.note(fmt("max |R-n(n+1)| %.1e", worst_pos) + fmt(", max |R| (flat) %.1e", worst_zero) +
           fmt(", %.2f s", t_smooth) + ", grid 2x101x101 " + std::to_string(not_nonexistent) +
           " non-Nonexistent" + fmt(", %.2f s", t_grid));
  return out;
}

Outcome formula_equivalence() {
  Outcome out;
  const auto t0 = Clock::now();
  int checked = 0;
  double worst = 0.0;
  for (const auto& f : fixtures()) {
    const std::string& l = f.label;
    if (!(l.starts_with("1.2.") || l.starts_with("1.3.") || l.starts_with("1.4.") || l.starts_with("1.5."))) continue;
    ++checked;
    if (!f.reference_F) {
      out.require(false, l + " has a reference formula");
      continue;
    }
    const FixtureRun r = fixture_run(f);
    const auto pts = interior_points(r.branch.A, r.branch.B, 50);
    const FormulaComparison cmp = compare_antiderivatives(
        [&](double x) { return eval_F(r.F, x); }, [&](double x) { return (*f.reference_F)(r.inst.params, x); }, pts);
    worst = std::max(worst, cmp.deviation);
    out.require(cmp.matches && cmp.scale > 0.0, l + fmt(" deviation %.1e", cmp.deviation));
  }
  const double t = seconds_since(t0);
  out.require(checked == 20, "20 cases");
  out.require(t < 10.0, "runtime < 10 s");
  out.note(std::to_string(checked) + " cases" + fmt(", max deviation %.1e", worst) + fmt(", %.2f s", t));
  return out;
}

Outcome oracle_agreement() {
  Outcome out;
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (const auto& f : fixtures()) {
    const CrossCheckReport rep = cross_check(f.label);
    worst = std::max(worst, rep.oracle_gap);
    out.require(rep.oracle_gap < 1e-6, f.label + fmt(" gap %.1e", rep.oracle_gap));
  }
  const double t = seconds_since(t0);
  out.require(t < 30.0, "runtime < 30 s");
  out.note(std::to_string(fixtures().size()) + " fixtures" + fmt(", max sup-norm gap %.1e", worst) +
           fmt(", %.2f s", t));
  return out;
}

// The profile handed over is g alone; g' and g'' come from finite differences.
Outcome round_trip_constants() {
  Outcome out;
  double worst = 0.0;
  for (const auto& f : fixtures()) {
    const FixtureRun r = fixture_run(f);
    const RadialSolution sol = fixture_solution(r.inst, r.ode, r.branch, r.F);
    const RadialProfile prof{[&](double s) { return sol.g(s); }, {}, {}};
    // Ball windows sit between the slow approach to A at small s and the pole at s = 1.
    const auto window = f.ball ? log_spaced(0.3, 0.6, 8) : log_spaced(0.5, 2.0, 8);
    try {
      const ConstantsFit fit = recover_constants(prof, r.inst.problem.n, r.inst.problem.R, window);
      const double err = std::max(std::abs(fit.lambda - r.inst.problem.lambda), std::abs(fit.mu - r.inst.problem.mu));
      worst = std::max(worst, std::max(err, fit.spread));
      out.require(err < 1e-7, f.label + fmt(" error %.1e", err));
    } catch (const Error& e) {
      out.require(false, f.label + " " + e.what());
    }
  }
  out.note(std::to_string(fixtures().size()) + " fixtures from g alone" + fmt(", max error or spread %.1e", worst));
  return out;
}

Outcome ball_mode() {
  Outcome out;
  const FixtureRun r1 = fixture_run(fixture("1.7.1"));
  const RadialSolution sol = fixture_solution(r1.inst, r1.ode, r1.branch, r1.F);
  double gap = 0.0;
  for (double s : log_spaced(0.01, 0.99, 400)) gap = std::max(gap, std::abs(sol.g(s) - s / (1.0 - s)));
  const VerifyReport v1 = verify_solution(sol, 200, SampleRange{0.01, 0.99});
  out.require(gap < 1e-10, fmt("1.7.1 |g - s/(1-s)| = %.1e", gap));
  out.require(std::abs(v1.R_mean + 6.0) < 1e-5 && v1.max_R_residual < 1e-5, "1.7.1 R = -6");
  double worst_end = 0.0;
  double worst_R = v1.max_R_residual;
  for (const char* label : {"1.7.2", "1.7.3", "1.7.4", "1.7.5", "1.7.6"}) {
    const FixtureRun r = fixture_run(fixture(label));
    const RadialSolution b = ball_normalize(r.ode, r.branch, r.F);
    worst_end = std::max(worst_end, std::abs(b.s_hi() - 1.0));
    const VerifyReport v = verify_solution(b, 200);
    worst_R = std::max(worst_R, v.max_R_residual);
    out.require(std::abs(b.s_hi() - 1.0) <= 4 * std::numeric_limits<double>::epsilon(), std::string(label) + " s_hi = 1");
    out.require(v.max_R_residual < 1e-5 && v.used > 0, std::string(label) + " R = -6");
  }
  out.note(fmt("case 1 gap %.1e", gap) + fmt(", max |s_hi - 1| %.1e", worst_end) + fmt(", max |R + 6| %.1e", worst_R));
  return out;
}

Outcome finite_extension() {
  Outcome out;
  const OdeData ode = build_ode({2, -6.0, 0.0, 0.0});
  int stopped = 0;
  int tried = 0;
  double latest = 0.0;
  for (double s0 : {0.1, 1.0, 10.0})
    for (double g0 : {0.01, 0.5, 3.0, 100.0}) {
      ++tried;
      const ShootResult r = shoot_ode(ode, s0, g0, {s0 * 1e6});
      if (r.domain_end && std::isfinite(*r.domain_end) && *r.domain_end < s0 * 1e6) {
        ++stopped;
        latest = std::max(latest, *r.domain_end);
        // With g = s/(s0' - s) the end is where g0 (s0' - s0) = s0.
        const double expected = s0 * (1.0 + g0) / g0;
        out.require(std::abs(*r.domain_end - expected) < 1e-6 * expected,
                    fmt("domain end %.6g", *r.domain_end) + fmt(" vs %.6g", expected));
      }
    }
  out.require(stopped == tried, "every anchor stops at finite s");
  out.note(std::to_string(stopped) + "/" + std::to_string(tried) + " anchors end in DomainEnd");
  return out;
}

Outcome lemma_certification() {
  Outcome out;
  const auto t0 = Clock::now();
  const Certificate J = certify_negative(Inequality::J, 100000, 42);
  const Certificate I = certify_negative(Inequality::I, 100000, 42);
  const double t = seconds_since(t0);
  out.require(J.max_found < 0.0, "J max < 0");
  out.require(I.max_found < 0.0, "I max < 0");
  out.require(t < 10.0, "runtime < 10 s");

  const Params p3 = fixture("1.5.3").default_params;
  const double j0 = J_value(p3.at("alpha"), p3.at("beta"), p3.at("gamma"), p3.at("delta"));
  const Params p4 = fixture("1.5.4").default_params;
  const double i0 = I_value(p4.at("alpha"), p4.at("beta"), p4.at("gamma"));
  out.require(std::abs(j0) < 1e-12, fmt("J at printed data %.1e", j0));
  out.require(std::abs(i0) < 1e-12, fmt("I at printed data %.1e", i0));
  out.note(fmt("max J %.6g", J.max_found) + fmt(", max I %.6g", I.max_found) + fmt(", %.3f s", t) +
           fmt(", zero-locus |J| %.1e", std::abs(j0)) + fmt(" |I| %.1e", std::abs(i0)));
  return out;
}

// Compact reruns of the property suites.
Outcome properties() {
  Outcome out;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-3.0, 3.0);

  // Planted roots.
  int planted_ok = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> roots;
    const int m = 1 + trial % 4;
    for (int i = 0; i < m; ++i) roots.push_back(std::round(U(rng) * 100.0) / 100.0 + 0.013 * i);
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(), [](double a, double b) { return std::abs(a - b) < 0.05; }),
                roots.end());
    const Poly p = expand_roots(roots) * Poly({1.0, 0.0, 1.0});
    const RootProfile prof = real_root_profile(p);
    bool ok = prof.real_roots.size() == roots.size();
    for (std::size_t i = 0; ok && i < roots.size(); ++i)
      ok = std::abs(prof.real_roots[i].value - roots[i]) < 1e-8 && prof.real_roots[i].multiplicity == 1;
    planted_ok += ok;
  }
  out.require(planted_ok == 200, "planted roots " + std::to_string(planted_ok) + "/200");

  // Partial fractions: F' = x^k / H across fixtures.
  double pf = 0.0;
  for (const auto& f : fixtures()) {
    const FixtureRun r = fixture_run(f);
    for (double x : interior_points(r.branch.A, r.branch.B, 20)) {
      const double exact = std::pow(x, r.ode.k) / r.ode.H(x);
      pf = std::max(pf, std::abs(eval_dF(r.F, x) - exact) / (1.0 + std::abs(exact)));
    }
  }
  out.require(pf < 1e-9, fmt("partial fractions %.1e", pf));

  // Monotone inversion, and the gauge shift g_{c+d}(s) = g_c(e^d s).
  const RadialProblem p{3, 0.0, -3.0, -2.0};
  const OdeData ode = build_ode(p);
  const Branch b = classify(p).branches.at(0);
  const AntiderivativeF F = partial_fractions(ode, b);
  const RadialSolution s0 = gauge_from_constant(ode, b, F, 0.3);
  const RadialSolution s1 = gauge_from_constant(ode, b, F, 0.3 + 0.7);
  double inv = 0.0;
  double gauge = 0.0;
  double prev = -INFINITY;
  bool monotone = true;
  for (double s : log_spaced(1e-3, 1e3, 300)) {
    const double g = s0.g(s);
    monotone = monotone && g > prev;
    prev = g;
    // Residual over the conditioning bound 1e-10 (1 + |c|) + 4 eps g F'(g).
    const double bound = 1e-10 * 1.3 + 4.0 * std::numeric_limits<double>::epsilon() * g * eval_dF(F, g);
    inv = std::max(inv, std::abs(eval_F(F, g) - std::log(s) - 0.3) / bound);
    gauge = std::max(gauge, std::abs(s1.g(s) - s0.g(std::exp(0.7) * s)) / (1.0 + g));
  }
  out.require(monotone, "g strictly increasing");
  out.require(inv <= 1.0, fmt("inversion residual / bound %.2f", inv));
  out.require(gauge < 1e-10, fmt("gauge shift %.1e", gauge));

  // Unitary invariance and the determinant identity.
  const RadialSolution fs = solution_for({3, 12.0, 0.0, 0.0}, false);
  double unit = 0.0;
  double det = 0.0;
  std::normal_distribution<double> N(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXcd z(3);
    for (int i = 0; i < 3; ++i) z[i] = {N(rng), N(rng)};
    Eigen::MatrixXcd A(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) A(i, j) = {N(rng), N(rng)};
    const Eigen::MatrixXcd Q = Eigen::HouseholderQR<Eigen::MatrixXcd>(A).householderQ();
    const Eigen::VectorXd e1 = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(metric_tensor(fs, z)).eigenvalues();
    const Eigen::VectorXd e2 =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(metric_tensor(fs, Q * z)).eigenvalues();
    unit = std::max(unit, (e1 - e2).cwiseAbs().maxCoeff() / (1.0 + e1.cwiseAbs().maxCoeff()));
    const double s = z.squaredNorm();
    const double up = fs.g(s) / s;
    const double upp = (s * fs.dg(s) - fs.g(s)) / (s * s);
    const double expect = std::pow(up, 2) * (up + s * upp);
    const double got = metric_tensor(fs, z).determinant().real();
    det = std::max(det, std::abs(got - expect) / std::abs(expect));
  }
  out.require(unit < 1e-10, fmt("unitary invariance %.1e", unit));
  out.require(det < 1e-10, fmt("determinant identity %.1e", det));
  out.note(fmt("planted %.0f/200", planted_ok) + fmt(", pf %.1e", pf) + fmt(", inversion/bound %.2f", inv) +
           fmt(", gauge %.1e", gauge) + fmt(", unitary %.1e", unit) + fmt(", det %.1e", det));
  return out;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"smooth family and negative-curvature nonexistence", smooth_family},
      {"case-formula equivalence", formula_equivalence},
      {"oracle agreement", oracle_agreement},
      {"round-trip constants", round_trip_constants},
      {"ball mode", ball_mode},
      {"finite-extension detection", finite_extension},
      {"lemma certification", lemma_certification},
      {"property suites", properties},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += !o.pass;
    std::printf("[%s] %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
