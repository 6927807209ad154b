// Walk through the library: classify, solve, check the metric, cross-check a case.

#include <cstdio>

#include "csck/csck.hpp"

using namespace csck;

static void show_case(const RadialProblem& p) {
  const CaseReport r = classify(p, true);
  std::printf("n=%d R=%g lambda=%g mu=%g -> %s\n", p.n, p.R, p.lambda, p.mu, std::string(to_string(r.verdict)).c_str());
  for (std::size_t i = 0; i < r.branches.size(); ++i) {
    const Branch& b = r.branches[i];
    std::printf("  branch %zu: g in (%g, %g) %s, case %s\n", i, b.A, b.B, std::string(to_string(b.kind)).c_str(),
                r.labels[i].c_str());
  }
}

int main() {
  std::printf("-- classification\n");
  show_case({2, 6.0, 0.0, 0.0});
  show_case({2, -6.0, 0.0, 0.0});
  show_case({3, 0.0, -3.0, -2.0});

  std::printf("\n-- Fubini-Study on C^2, gauged so g(1) = 1/2\n");
  const RadialProblem fs{2, 6.0, 0.0, 0.0};
  const OdeData ode = build_ode(fs);
  const Branch b = classify(fs).branches.front();
  const RadialSolution sol = gauge_from_anchor(ode, b, partial_fractions(ode, b), 1.0, 0.5);
  std::printf("%10s %12s %12s %12s\n", "s", "g", "s/(1+s)", "R");
  for (double s : log_spaced(0.01, 100.0, 5)) {
    const MetricSample m = metric_sample(sol, s);
    std::printf("%10.4g %12.9f %12.9f %12.9f\n", s, m.g, s / (1.0 + s), m.R_num);
  }
  const VerifyReport v = verify_solution(sol, 200);
  std::printf("max |R - 6| over %d samples: %.2e\n", v.used, v.max_R_residual);

  std::printf("\n-- ball metric with R = -6, normalized to the unit ball\n");
  const RadialProblem hyp{2, -6.0, 0.0, 0.0};
  const OdeData hode = build_ode(hyp);
  const Branch hb = classify(hyp, true).branches.front();
  const RadialSolution ball = ball_normalize(hode, hb, partial_fractions(hode, hb));
  std::printf("domain end s = %.12f, g(1/2) = %.12f\n", ball.s_hi(), ball.g(0.5));

  std::printf("\n-- catalog cross-check\n");
  for (const char* label : {"1.2.4", "1.4.3", "1.5.2", "1.7.1"}) {
    const CrossCheckReport rep = cross_check(label);
    std::printf("%s: oracle gap %.1e, R residual %.1e", label, rep.oracle_gap, rep.verify.max_R_residual);
    if (rep.formula) std::printf(", formula %s", rep.formula->matches ? "matches" : "differs");
    std::printf("\n");
  }

  std::printf("\n-- sampled maxima of the two quadratic forms\n");
  for (auto w : {Inequality::J, Inequality::I}) {
    const Certificate c = certify_negative(w, 100000, 42);
    std::printf("%s: max %.6g after %d samples\n", std::string(to_string(w)).c_str(), c.max_found, c.samples);
  }
}
