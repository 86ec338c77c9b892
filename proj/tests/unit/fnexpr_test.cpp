#include <gtest/gtest.h>

#include <cmath>

#include "feq/error.hpp"
#include "feq/fnexpr.hpp"
#include "oracles.hpp"

using namespace feq;

namespace {

const GroupSpec kZ = GroupSpec::integers();

Element z(std::int64_t k) { return make_element(kZ, {k}); }

}  // namespace

TEST(FnExpr, LeavesMatchClosedForms) {
  const Complex r(0.5, 1.5);
  const auto m = FnExpr::multiplicative({r});
  const auto a = FnExpr::additive({Complex(2.0, -1.0)});
  const auto c = FnExpr::constant(Complex(0.0, 3.0));
  for (std::int64_t x = -10; x <= 10; ++x) {
    EXPECT_NEAR(std::abs(eval(m, kZ, z(x)) - oracle::ipow(r, x)), 0.0, 1e-12 * std::abs(oracle::ipow(r, x)));
    EXPECT_EQ(eval(a, kZ, z(x)), Complex(2.0 * x, -1.0 * x));
    EXPECT_EQ(eval(c, kZ, z(x)), Complex(0.0, 3.0));
  }
}

TEST(FnExpr, TorsionRootsEnterMultiplicatively) {
  const GroupSpec spec{1, {4}};
  const Complex i(0.0, 1.0);
  const auto m = FnExpr::multiplicative({2.0}, {i});
  for (std::int64_t x = -3; x <= 3; ++x) {
    for (std::int64_t t = 0; t < 4; ++t) {
      const Complex want = oracle::ipow(2.0, x) * oracle::ipow(i, t);
      EXPECT_LT(std::abs(eval(m, spec, make_element(spec, {x, t})) - want), 1e-12 * std::abs(want));
    }
  }
}

TEST(FnExpr, TablesUseDefaultOffSupport) {
  const auto t = FnExpr::table({{z(1), 0.5}, {z(-2), Complex(0, -1)}}, 0.25, 1.0);
  EXPECT_EQ(eval(t, kZ, z(1)), Complex(0.5));
  EXPECT_EQ(eval(t, kZ, z(-2)), Complex(0, -1));
  EXPECT_EQ(eval(t, kZ, z(7)), Complex(0.25));
}

TEST(FnExpr, CompositesMatchPointwiseOracle) {
  const auto m = FnExpr::multiplicative({Complex(-0.5)});
  const auto a = FnExpr::additive({Complex(1.0, 1.0)});
  const auto t = FnExpr::table({{z(0), 2.0}, {z(3), -1.0}}, 0.0, 2.0);
  const auto e = FnExpr::translate(z(2), m * a) + 3.0 * FnExpr::reflect(t) - FnExpr::constant(1.0);
  oracle::Fn mo = [](std::int64_t x) { return oracle::ipow(-0.5, x); };
  oracle::Fn ao = [](std::int64_t x) { return oracle::C(x, x); };
  oracle::Fn to = [](std::int64_t x) { return x == 0 ? 2.0 : (x == 3 ? -1.0 : 0.0); };
  for (std::int64_t x = -8; x <= 8; ++x) {
    const oracle::C want = mo(x + 2) * ao(x + 2) + 3.0 * to(-x) - 1.0;
    EXPECT_LT(std::abs(eval(e, kZ, z(x)) - want), 1e-12 * (1 + std::abs(want))) << x;
  }
}

TEST(FnExpr, EvenOddPartsSplitTheFunction) {
  const auto f = FnExpr::multiplicative({3.0}) + FnExpr::additive({2.0}) +
                 FnExpr::table({{z(1), 1.0}}, 0.0, 1.0);
  const auto [e, o] = parity_parts(f);
  const auto ew = FnExpr::even_part(f);
  const auto ow = FnExpr::odd_part(f);
  for (std::int64_t x = -6; x <= 6; ++x) {
    const Complex fx = eval(f, kZ, z(x));
    const Complex fmx = eval(f, kZ, z(-x));
    EXPECT_LT(std::abs(eval(e, kZ, z(x)) - 0.5 * (fx + fmx)), 1e-9 * (1 + std::abs(fx)));
    EXPECT_LT(std::abs(eval(o, kZ, z(x)) - 0.5 * (fx - fmx)), 1e-9 * (1 + std::abs(fx)));
    EXPECT_LT(std::abs(eval(ew, kZ, z(x)) + eval(ow, kZ, z(x)) - fx), 1e-9 * (1 + std::abs(fx)));
  }
}

TEST(FnExpr, ParityShortCircuits) {
  const auto a = FnExpr::additive({1.0});
  const auto [ae, ao] = parity_parts(a);
  EXPECT_TRUE(ae.is_zero_constant());
  EXPECT_EQ(ao.kind(), FnExpr::Kind::kAdditive);
  const auto [ce, co] = parity_parts(FnExpr::constant(2.0));
  EXPECT_EQ(ce.kind(), FnExpr::Kind::kConst);
  EXPECT_TRUE(co.is_zero_constant());
}

TEST(FnExpr, ConstructionRejectsBadInput) {
  EXPECT_THROW(FnExpr::multiplicative({0.0}), InvalidExpression);
  EXPECT_THROW(FnExpr::additive({1.0}, {1.0}), InvalidExpression);
  EXPECT_THROW(FnExpr::multiplicative({1.0}, {Complex(0.5, 0.0)}), InvalidExpression);
  EXPECT_THROW(FnExpr::table({{z(0), 3.0}}, 0.0, 1.0), InvalidExpression);
  const GroupSpec z2{1, {3}};
  // A cube root of unity on Z_3 is fine; a fourth root is not.
  EXPECT_NO_THROW(check_conforms(FnExpr::multiplicative({1.0}, {std::polar(1.0, 2 * M_PI / 3)}), z2));
  EXPECT_THROW(check_conforms(FnExpr::multiplicative({1.0}, {Complex(0, 1)}), z2), InvalidExpression);
  EXPECT_THROW(check_conforms(FnExpr::additive({1.0, 2.0}), kZ), DimensionError);
}

TEST(FnExpr, OverflowIsReportedNotSilent) {
  const auto m = FnExpr::multiplicative({1e10});
  EXPECT_THROW(eval(m, kZ, z(40)), RangeError);
}

TEST(FnExpr, SupNormFindsFirstMaximum) {
  const auto a = FnExpr::additive({1.0});
  const SupNorm s = sup_norm(a, kZ, 5);
  EXPECT_DOUBLE_EQ(s.value, 5.0);
  EXPECT_EQ(s.argmax, z(-5));
}

TEST(Verdict, LinearGrowthIsUnbounded) {
  const auto ev = boundedness_verdict(FnExpr::additive({1.0}), kZ);
  EXPECT_EQ(ev.verdict, Verdict::kUnbounded);
  ASSERT_EQ(ev.ratios.size(), 3u);
  for (double r : ev.ratios) EXPECT_NEAR(r, 2.0, 1e-6);
}

TEST(Verdict, UnimodularAndTablesAreBounded) {
  EXPECT_EQ(boundedness_verdict(FnExpr::multiplicative({std::polar(1.0, 0.7)}), kZ).verdict, Verdict::kBounded);
  EXPECT_EQ(boundedness_verdict(FnExpr::table({{z(3), 1.0}}, 0.0, 1.0), kZ).verdict, Verdict::kBounded);
  EXPECT_EQ(boundedness_verdict(FnExpr(), kZ).verdict, Verdict::kBounded);
}

TEST(Verdict, ExponentialIsUnbounded) {
  EXPECT_EQ(boundedness_verdict(FnExpr::multiplicative({1.1}), kZ).verdict, Verdict::kUnbounded);
}

TEST(Verdict, SlowGrowthIsInconclusive) {
  // sqrt-like growth: ratios about 1.41 but only 2.8x over the schedule.
  const auto ev = classify_growth({8, 16, 32, 64}, {std::sqrt(8.0), 4.0, std::sqrt(32.0), 8.0}, {0, 0, 0, 0}, 1.2);
  EXPECT_EQ(ev.verdict, Verdict::kInconclusive);
  // A plateau after growth is bounded.
  EXPECT_EQ(classify_growth({8, 16, 32}, {1.0, 5.0, 5.0}, {0, 0, 0}, 1.2).verdict, Verdict::kBounded);
}

TEST(Verdict, NoiseFloorAbsorbsRounding) {
  const auto ev = classify_growth({8, 16, 32, 64}, {1e-12, 2e-12, 4e-12, 8e-12}, {1e-9, 1e-9, 1e-9, 1e-9}, 1.2);
  EXPECT_EQ(ev.verdict, Verdict::kBounded);
  EXPECT_EQ(ev.effective.back(), 0.0);
}

TEST(Verdict, ScheduleValidated) {
  EXPECT_THROW(check_schedule({8, 16}), std::invalid_argument);
  EXPECT_THROW(check_schedule({8, 8, 16}), std::invalid_argument);
  EXPECT_THROW(check_schedule({-1, 8, 16}), std::invalid_argument);
  EXPECT_NO_THROW(check_schedule({1, 2, 3}));
}

TEST(FnExpr, BoundEstimateIsStructural) {
  EXPECT_EQ(bound_estimate(FnExpr::table({{z(0), 0.5}}, 0.0, 0.5)), 0.5);
  EXPECT_TRUE(std::isinf(bound_estimate(FnExpr::additive({1.0}))));
  EXPECT_DOUBLE_EQ(bound_estimate(FnExpr::multiplicative({-1.0})), 1.0);
  EXPECT_TRUE(std::isinf(bound_estimate(FnExpr::multiplicative({2.0}))));
}

TEST(FnExpr, EvenMultiplicativeDetection) {
  EXPECT_TRUE(is_even_multiplicative(FnExpr::multiplicative({-1.0})));
  EXPECT_FALSE(is_even_multiplicative(FnExpr::multiplicative({Complex(0, 1)})));
  const auto inv = reciprocal_multiplicative(FnExpr::multiplicative({4.0}));
  EXPECT_NEAR(std::abs(eval(inv, kZ, z(2)) - 1.0 / 16.0), 0.0, 1e-15);
}

TEST(FnExpr, MagnitudeTracksCancellation) {
  const auto m = FnExpr::multiplicative({2.0});
  const auto e = m - m;
  const Evaluated v = eval_detail(e, kZ, z(20));
  EXPECT_EQ(v.value, Complex(0.0));
  EXPECT_GE(v.magnitude, std::pow(2.0, 20));
}
