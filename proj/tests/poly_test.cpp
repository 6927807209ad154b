#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "csck/poly.hpp"

namespace csck {
namespace {

TEST(PolyTest, DegreeOfExamples) {
  EXPECT_EQ(degree(Poly{2, 1, 1}), 2);
  EXPECT_EQ(degree(Poly{5}), 0);
  EXPECT_EQ(degree(Poly{0, 0, 0, 1, -1}), 4);
}

TEST(PolyTest, DegreeOfZeroPolyThrows) {
  try {
    (void)degree(Poly{});
    FAIL() << "expected ZeroPoly";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroPoly);
  }
  EXPECT_TRUE(Poly({0.0, 0.0}).is_zero());
}

TEST(PolyTest, HornerEvaluation) {
  EXPECT_DOUBLE_EQ(eval(Poly{6, -7, 0, 1}, 2.0), 0.0);
  EXPECT_DOUBLE_EQ(eval(Poly{0, 0, 1}, 3.0), 9.0);
  EXPECT_DOUBLE_EQ(eval(Poly{0, 0, 1, -1}, 0.5), 0.125);
}

TEST(PolyTest, Derivative) {
  EXPECT_EQ(derivative(Poly{0, 0, 0, 1}), (Poly{0, 0, 3}));
  EXPECT_EQ(derivative(Poly{2, 1, 1}), (Poly{1, 2}));
  EXPECT_TRUE(derivative(Poly{7}).is_zero());
}

TEST(PolyTest, DivisionAndShift) {
  const Poly p{6, -7, 0, 1};
  const auto [q, r] = divide(p, Poly{-1, 1});
  EXPECT_EQ(q, (Poly{-6, 1, 1}));
  EXPECT_TRUE(r.is_zero());
  // p(x + 1) = x^3 + 3x^2 - 4x
  const Poly shifted = taylor_shift(p, 1.0);
  EXPECT_NEAR(shifted.coeff(0), 0.0, 1e-14);
  EXPECT_NEAR(shifted.coeff(1), -4.0, 1e-14);
  EXPECT_NEAR(shifted.coeff(2), 3.0, 1e-14);
  EXPECT_NEAR(shifted.coeff(3), 1.0, 1e-14);
}

TEST(PolyTest, SturmCountsDistinctRoots) {
  const SturmChain chain(Poly{2, -3, 0, 1}, kRootTol);  // (x-1)^2 (x+2)
  EXPECT_EQ(chain.count(-10.0, 10.0), 2);
  EXPECT_EQ(chain.gcd().degree(), 1);
}

void expect_roots(const RootProfile& prof, std::vector<RealRoot> expected) {
  ASSERT_EQ(prof.real_roots.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    EXPECT_NEAR(prof.real_roots[i].value, expected[i].value, 1e-12);
    EXPECT_EQ(prof.real_roots[i].multiplicity, expected[i].multiplicity);
  }
}

TEST(PolyTest, ProfileOfSimpleFactorizations) {
  expect_roots(real_root_profile(Poly{2, -3, 1}), {{1, 1}, {2, 1}});
  expect_roots(real_root_profile(Poly{6, -7, 0, 1}), {{-3, 1}, {1, 1}, {2, 1}});
  expect_roots(real_root_profile(Poly{2, -3, 0, 1}), {{-2, 1}, {1, 2}});
}

TEST(PolyTest, ProfileOfIrreducibleQuadratic) {
  const auto prof = real_root_profile(Poly{1, 1, 1});
  EXPECT_TRUE(prof.real_roots.empty());
  ASSERT_EQ(prof.quad_factors.size(), 1u);
  EXPECT_NEAR(prof.quad_factors[0].beta, -0.5, 1e-14);
  EXPECT_NEAR(prof.quad_factors[0].gamma, std::sqrt(3.0) / 2.0, 1e-14);
}

TEST(PolyTest, ProfileKeepsExactZeroRoots) {
  // -x^3 + x^2 = -x^2 (x - 1)
  const auto prof = real_root_profile(Poly{0, 0, 1, -1});
  expect_roots(prof, {{0, 2}, {1, 1}});
  EXPECT_DOUBLE_EQ(prof.leading, -1.0);
}

TEST(PolyTest, ProfileOfFloatDoubleRoot) {
  // (x + 1/6)^2 (x - 1/2)(x - 5/6) with coefficients rounded to double.
  const std::vector<double> roots{-1.0 / 6.0, -1.0 / 6.0, 0.5, 5.0 / 6.0};
  const auto prof = real_root_profile(expand_roots(roots));
  ASSERT_EQ(prof.real_roots.size(), 3u);
  EXPECT_NEAR(prof.real_roots[0].value, -1.0 / 6.0, 1e-10);
  EXPECT_EQ(prof.real_roots[0].multiplicity, 2);
}

TEST(PolyTest, ProfileOfMonomial) {
  const auto prof = real_root_profile(Poly{0, 0, 3});
  expect_roots(prof, {{0, 2}});
  EXPECT_DOUBLE_EQ(prof.leading, 3.0);
}

TEST(PolyTest, ProfileOfTripleRoot) {
  const std::vector<double> roots{0.3, 0.3, 0.3, -1.7};
  const auto prof = real_root_profile(expand_roots(roots));
  ASSERT_EQ(prof.real_roots.size(), 2u);
  EXPECT_NEAR(prof.real_roots[1].value, 0.3, 1e-10);
  EXPECT_EQ(prof.real_roots[1].multiplicity, 3);
}

TEST(PolyTest, CloseDistinctRootsStaySeparate) {
  expect_roots(real_root_profile(expand_roots(std::vector<double>{1.0, 1.001})), {{1.0, 1}, {1.001, 1}});
}

TEST(PolyTest, NarrowComplexPairIsNotARealRoot) {
  // (x - 1)^2 + 1e-6
  const auto prof = real_root_profile(Poly{1.0 + 1e-6, -2.0, 1.0});
  EXPECT_TRUE(prof.real_roots.empty());
  ASSERT_EQ(prof.quad_factors.size(), 1u);
  EXPECT_NEAR(prof.quad_factors[0].gamma, 1e-3, 1e-9);
}

TEST(PolyTest, ProfileRejectsConstant) {
  EXPECT_THROW((void)real_root_profile(Poly{3}), Error);
}

// Planted-root property: random products of linear and quadratic factors.
struct Planted {
  Poly poly;
  std::vector<RealRoot> roots;
  std::vector<QuadFactor> quads;
};

Planted plant(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> pos(-3.0, 3.0);
  std::uniform_int_distribution<int> mult(1, 3);
  std::uniform_int_distribution<int> nroots(1, 4);
  std::bernoulli_distribution want_quad(0.35);
  Planted out;
  int deg = 0;
  const int target = nroots(rng);
  int guard = 0;
  while (static_cast<int>(out.roots.size()) < target && guard++ < 100) {
    const double r = std::round(pos(rng) * 1e6) / 1e6;
    bool clash = false;
    for (const auto& o : out.roots) clash |= std::abs(o.value - r) < 0.2;
    if (clash) continue;
    const int m = std::min(mult(rng), 6 - deg);
    if (m <= 0) break;
    out.roots.push_back({r, m});
    deg += m;
  }
  if (deg <= 4 && want_quad(rng)) {
    std::uniform_real_distribution<double> b(-2.0, 2.0);
    std::uniform_real_distribution<double> g(0.2, 2.0);
    out.quads.push_back({b(rng), g(rng), 1});
  }
  std::sort(out.roots.begin(), out.roots.end(), [](auto x, auto y) { return x.value < y.value; });
  std::uniform_real_distribution<double> lead(0.5, 3.0);
  RootProfile prof{out.roots, out.quads, std::bernoulli_distribution(0.5)(rng) ? lead(rng) : -lead(rng)};
  out.poly = prof.reconstruct();
  return out;
}

TEST(PolyProperty, PlantedRootsRecovered) {
  std::mt19937_64 rng(20240611);
  for (int trial = 0; trial < 1000; ++trial) {
    const Planted pl = plant(rng);
    SCOPED_TRACE(::testing::Message() << "trial " << trial);
    const RootProfile prof = real_root_profile(pl.poly);
    ASSERT_EQ(prof.real_roots.size(), pl.roots.size());
    for (std::size_t i = 0; i < pl.roots.size(); ++i) {
      EXPECT_NEAR(prof.real_roots[i].value, pl.roots[i].value, 1e-8);
      EXPECT_EQ(prof.real_roots[i].multiplicity, pl.roots[i].multiplicity);
      if (i > 0) EXPECT_LT(prof.real_roots[i - 1].value, prof.real_roots[i].value);
    }
    ASSERT_EQ(prof.quad_factors.size(), pl.quads.size());
    for (const auto& q : prof.quad_factors) EXPECT_GT(q.gamma, 0.0);
    EXPECT_EQ(prof.degree(), pl.poly.degree());

    const Poly rec = prof.reconstruct();
    for (int k = 0; k < 100; ++k) {
      const double x = -4.0 + 8.0 * k / 99.0;
      EXPECT_LT(std::abs(rec(x) - pl.poly(x)) / (1.0 + std::abs(pl.poly(x))), 1e-9);
    }
  }
}

}  // namespace
}  // namespace csck
