#include <gtest/gtest.h>

#include <cmath>

#include "csck/reduction.hpp"

namespace csck {
namespace {

TEST(BuildOde, FlatCase) {
  const OdeData ode = build_ode({2, 0.0, 1.0, 2.0});
  EXPECT_EQ(ode.H, (Poly{2, 1, 1}));
  EXPECT_EQ(ode.k, 1);
}

TEST(BuildOde, PositiveCurvature) {
  EXPECT_EQ(build_ode({2, 6.0, 0.0, 0.0}).H, (Poly{0, 0, 1, -1}));
  const OdeData ode = build_ode({3, 12.0, 0.3, -0.7});
  EXPECT_EQ(ode.H, (Poly{-0.7, 0.3, 0, 1, -1}));
  EXPECT_EQ(ode.k, 2);
}

TEST(BuildOde, RejectsSmallDimension) {
  EXPECT_THROW((void)build_ode({1, 0.0, 0.0, 0.0}), Error);
}

TEST(FOf, Examples) {
  const auto f_flat = f_of({[](double s) { return s; }, [](double) { return 1.0; }, {}}, 2);
  EXPECT_NEAR(f_flat(0.3), 0.0, 1e-15);
  EXPECT_NEAR(f_flat(7.0), 0.0, 1e-15);

  const auto f_fs = f_of({[](double s) { return s / (s + 1.0); }, {}, {}}, 2);
  EXPECT_NEAR(f_fs(1.0), std::log(1.0 / 8.0), 1e-10);

  for (int n : {2, 3, 5}) {
    const auto f = f_of({[](double s) { return 2.5 * s; }, [](double) { return 2.5; }, {}}, n);
    EXPECT_NEAR(f(0.7), n * std::log(2.5), 1e-13);
  }
}

TEST(FOf, NonKahlerInput) {
  const auto f = f_of({[](double s) { return -s; }, [](double) { return -1.0; }, {}}, 2);
  try {
    (void)f(1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotKahler);
  }
}

TEST(FOf, DeterminantIdentity) {
  // s^{n-1} e^f = g^{n-1} g' at every sample.
  auto g = [](double s) { return 1.5 + s * s / (1.0 + s); };
  auto dg = [](double s) { return (s * s + 2.0 * s) / ((1.0 + s) * (1.0 + s)); };
  for (int n : {2, 3, 4}) {
    const auto f = f_of({g, dg, {}}, n);
    for (double s : log_spaced(0.01, 100.0, 40)) {
      const double lhs = std::pow(s, n - 1) * std::exp(f(s));
      const double rhs = std::pow(g(s), n - 1) * dg(s);
      EXPECT_NEAR(lhs / rhs, 1.0, 1e-12);
    }
  }
}

RadialProfile fubini_study(double a) {
  return {[a](double s) { return s / (s + a); }, [a](double s) { return a / ((s + a) * (s + a)); },
          [a](double s) { return -2.0 * a / ((s + a) * (s + a) * (s + a)); }};
}

TEST(RecoverConstants, FubiniStudy) {
  const auto fit = recover_constants(fubini_study(1.0), 2, 6.0);
  EXPECT_NEAR(fit.lambda, 0.0, 1e-12);
  EXPECT_NEAR(fit.mu, 0.0, 1e-12);
}

TEST(RecoverConstants, Euclidean) {
  const RadialProfile p{[](double s) { return 3.0 * s; }, [](double) { return 3.0; }, [](double) { return 0.0; }};
  const auto fit = recover_constants(p, 2, 0.0);
  EXPECT_NEAR(fit.lambda, 0.0, 1e-12);
  EXPECT_NEAR(fit.mu, 0.0, 1e-12);
}

TEST(RecoverConstants, LogPoleFamily) {
  // g = a s + b: H = x^2 - b x, whose root b is the left limit of g.
  const double a = 2.0;
  const double b = 3.0;
  const RadialProfile p{[=](double s) { return a * s + b; }, {}, {}};
  const auto fit = recover_constants(p, 2, 0.0);
  EXPECT_NEAR(fit.lambda, -b, 1e-8);
  EXPECT_NEAR(fit.mu, 0.0, 1e-8);
  EXPECT_NEAR(build_ode({2, 0.0, fit.lambda, fit.mu}).H(b), 0.0, 1e-7);
}

TEST(RecoverConstants, FiniteDifferenceRouteMatches) {
  const auto exact = fubini_study(0.7);
  const auto from_g = recover_constants({exact.g, {}, {}}, 2, 6.0);
  const auto from_dg = recover_constants({exact.g, exact.dg, {}}, 2, 6.0);
  EXPECT_NEAR(from_g.lambda, 0.0, 1e-8);
  EXPECT_NEAR(from_g.mu, 0.0, 1e-8);
  EXPECT_NEAR(from_dg.lambda, 0.0, 1e-8);
  EXPECT_NEAR(from_dg.mu, 0.0, 1e-8);
}

TEST(RecoverConstants, DetectsNonSolution) {
  const RadialProfile p{[](double s) { return s / (s + 1.0) + 0.01; }, {}, {}};
  try {
    (void)recover_constants(p, 2, 6.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotCsck);
    ASSERT_TRUE(e.value().has_value());
    EXPECT_GT(*e.value(), 1e-7);
  }
}

std::vector<OdeSample> fs_samples(double shift) {
  std::vector<OdeSample> out;
  for (double s : log_spaced(0.01, 100.0, 50))
    out.push_back({s, s / (s + 1.0) + shift, 1.0 / ((s + 1.0) * (s + 1.0))});
  return out;
}

TEST(OdeResidual, Examples) {
  const OdeData fs = build_ode({2, 6.0, 0.0, 0.0});
  EXPECT_LT(ode_residual(fs_samples(0.0), fs), 1e-12);
  EXPECT_GT(ode_residual(fs_samples(0.01), fs), 1e-3);

  const OdeData flat = build_ode({2, 0.0, 0.0, 0.0});
  std::vector<OdeSample> lin;
  for (double s : {0.1, 1.0, 10.0}) lin.push_back({s, 2.0 * s, 2.0});
  EXPECT_EQ(ode_residual(lin, flat), 0.0);
}

TEST(OdeResidual, EndpointSample) {
  const OdeData fs = build_ode({2, 6.0, 0.0, 0.0});
  const std::vector<OdeSample> bad{{1.0, 1.0, 0.5}};
  try {
    (void)ode_residual(bad, fs);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EndpointSample);
  }
}

}  // namespace
}  // namespace csck
