#include <gtest/gtest.h>

#include "feq/defect.hpp"
#include "feq/error.hpp"
#include "oracles.hpp"

using namespace feq;

namespace {

const GroupSpec kZ = GroupSpec::integers();
Element z(std::int64_t k) { return make_element(kZ, {k}); }

// Sine-type solution with chi ratio 2, lambda = 1, b = 0, written out by hand:
// f = (2^x + 2^-x)/2, g = f/2, h = (2^x - 2^-x)/(2i).
Triple t6_exact() {
  const auto chi = FnExpr::multiplicative({2.0});
  const auto chv = FnExpr::multiplicative({0.5});
  const FnExpr f0 = 0.5 * (chi + chv);
  return {kZ, f0, 0.5 * f0, Complex(0.0, -0.5) * (chi - chv)};
}

}  // namespace

TEST(Defect, PsiMatchesOracleAtEveryPair) {
  const auto f = FnExpr::multiplicative({Complex(0.8, 0.3)}) + FnExpr::additive({1.0});
  const auto g = FnExpr::table({{z(1), 0.5}, {z(-2), Complex(0, 1)}}, 0.1, 1.0);
  const auto h = FnExpr::additive({Complex(0.0, 2.0)});
  const Triple t{kZ, f, g, h};
  oracle::Fn fo = [](std::int64_t x) { return oracle::ipow({0.8, 0.3}, x) + double(x); };
  oracle::Fn go = [](std::int64_t x) { return x == 1 ? 0.5 : (x == -2 ? oracle::C(0, 1) : 0.1); };
  oracle::Fn ho = [](std::int64_t x) { return oracle::C(0.0, 2.0 * x); };
  for (std::int64_t x = -4; x <= 4; ++x) {
    for (std::int64_t y = -4; y <= 4; ++y) {
      const oracle::C want = fo(x - y) - fo(x) * go(y) - go(x) * fo(y) - ho(x) * ho(y);
      EXPECT_LT(std::abs(psi(t, z(x), z(y)) - want), 1e-10 * (1 + std::abs(want)));
      const oracle::C plus = fo(x + y) - fo(x) * go(y) - go(x) * fo(y) - ho(x) * ho(y);
      EXPECT_LT(std::abs(plus_defect(t, z(x), z(y)) - plus), 1e-10 * (1 + std::abs(plus)));
    }
  }
  const DefectReport r = defect_report(t, {2, 4, 8});
  EXPECT_NEAR(r.per_radius[1].sup, oracle::psi_sup(fo, go, ho, 4), 1e-9 * r.scale);
  EXPECT_NEAR(r.per_radius[2].sup, oracle::psi_sup(fo, go, ho, 8), 1e-9 * r.scale);
}

TEST(Defect, ZeroTripleIsBounded) {
  const Triple t{kZ, FnExpr(), FnExpr(), FnExpr()};
  const DefectReport r = defect_report(t);
  EXPECT_EQ(r.verdict(), Verdict::kBounded);
  for (const auto& rec : r.per_radius) EXPECT_EQ(rec.sup, 0.0);
}

TEST(Defect, ExactSolutionCancels) {
  const DefectReport r = defect_report(t6_exact(), {8, 16, 32});
  EXPECT_EQ(r.verdict(), Verdict::kBounded);
  for (const auto& rec : r.per_radius) EXPECT_LE(rec.sup, 1e-9 * r.scale);
}

TEST(Defect, AdditivePerturbationIsUnbounded) {
  Triple t = t6_exact();
  t.f = t.f + 0.01 * FnExpr::additive({1.0});
  const DefectReport r = defect_report(t);
  EXPECT_EQ(r.verdict(), Verdict::kUnbounded);
  for (double ratio : r.growth.ratios) EXPECT_GT(ratio, 1.2);
}

TEST(Defect, SupsAreMonotoneAndArgmaxReproduces) {
  const Triple t{kZ, FnExpr::additive({1.0}), FnExpr::table({{z(0), 1.0}}, 0.0, 1.0),
                 FnExpr::multiplicative({-1.0})};
  const DefectReport r = defect_report(t, {2, 4, 8, 16});
  for (std::size_t i = 1; i < r.per_radius.size(); ++i) {
    EXPECT_GE(r.per_radius[i].sup, r.per_radius[i - 1].sup);
  }
  for (const auto& rec : r.per_radius) {
    EXPECT_DOUBLE_EQ(std::abs(psi(t, rec.argmax_x, rec.argmax_y)), rec.sup);
    EXPECT_LE(rec.argmax_x.free_norm(), rec.radius);
  }
}

TEST(Defect, SymmetricWhenFIsEven) {
  const Triple t{kZ, FnExpr::multiplicative({-1.0}) + FnExpr::constant(2.0),
                 FnExpr::additive({1.0}), FnExpr::table({{z(2), 1.0}}, 0.0, 1.0)};
  for (std::int64_t x = -5; x <= 5; ++x) {
    for (std::int64_t y = -5; y <= 5; ++y) {
      EXPECT_LT(std::abs(psi(t, z(x), z(y)) - psi(t, z(y), z(x))), 1e-12);
    }
  }
}

TEST(Defect, DimensionMismatchRejected) {
  const Triple t{kZ, FnExpr::additive({1.0, 1.0}), FnExpr(), FnExpr()};
  EXPECT_THROW(defect_report(t), DimensionError);
}

TEST(Defect, RejectsBadSchedule) {
  EXPECT_THROW(defect_report(t6_exact(), {8, 4, 16}), std::invalid_argument);
}

TEST(Defect, OverflowSurfacesAsRangeError) {
  const Triple t{kZ, FnExpr::multiplicative({1e6}), FnExpr(), FnExpr()};
  EXPECT_THROW(defect_report(t, {8, 16, 32}), RangeError);
}

TEST(Defect, WorksOnTorsionGroups) {
  const GroupSpec spec{1, {2}};
  const auto chi = FnExpr::multiplicative({2.0}, {-1.0});
  const auto chv = FnExpr::multiplicative({0.5}, {-1.0});
  const FnExpr f0 = 0.5 * (chi + chv);
  const Triple t{spec, f0, 0.5 * f0, Complex(0.0, -0.5) * (chi - chv)};
  const DefectReport r = defect_report(t, {4, 8, 16});
  EXPECT_EQ(r.verdict(), Verdict::kBounded);
  EXPECT_LE(r.max_sup(), 1e-9 * r.scale);
}

TEST(Defect, QuadraticSolutionAndOddTablePerturbation) {
  const auto a = FnExpr::additive({1.0});
  const FnExpr f = 0.5 * (a * a);
  const FnExpr h = Complex(0.0, -1.0) * a;
  const Triple exact{kZ, f, FnExpr::constant(1.0), h};
  for (std::int64_t x = -6; x <= 6; ++x) {
    for (std::int64_t y = -6; y <= 6; ++y) EXPECT_EQ(psi(exact, z(x), z(y)), Complex(0.0));
  }
  const FnExpr b = FnExpr::table({{z(1), 1.0}, {z(-1), -1.0}}, 0.0, 1.0);
  const Triple perturbed{kZ, f + b, FnExpr::constant(1.0), h};
  oracle::Fn bo = [](std::int64_t x) { return oracle::C(x == 1 ? 1.0 : (x == -1 ? -1.0 : 0.0)); };
  double want = 0.0;
  for (std::int64_t x = -8; x <= 8; ++x) {
    for (std::int64_t y = -8; y <= 8; ++y) {
      const oracle::C v = bo(x - y) - bo(x) - bo(y);
      want = std::max(want, std::abs(v));
      EXPECT_LT(std::abs(psi(perturbed, z(x), z(y)) - v), 1e-12);
    }
  }
  EXPECT_LE(want, 3.0);
  EXPECT_DOUBLE_EQ(defect_report(perturbed, {2, 4, 8}).max_sup(), want);
}

TEST(Defect, AntisymmetricDefect) {
  const Triple lin{kZ, FnExpr::additive({1.0}), FnExpr(), FnExpr()};
  const auto a = FnExpr::additive({1.0});
  const Triple even{kZ, 0.5 * (a * a) + FnExpr::multiplicative({-1.0}), FnExpr(), FnExpr()};
  for (std::int64_t x = -5; x <= 5; ++x) {
    for (std::int64_t y = -5; y <= 5; ++y) {
      EXPECT_EQ(antisym_defect(lin, z(x), z(y)), Complex(2.0 * (x - y)));
      EXPECT_EQ(antisym_defect(even, z(x), z(y)), Complex(0.0));
    }
  }
}
