#include <gtest/gtest.h>

#include "feq/error.hpp"
#include "feq/fitting.hpp"
#include "feq/random.hpp"
#include "oracles.hpp"

using namespace feq;

namespace {

const GroupSpec kZ = GroupSpec::integers();
Element z(std::int64_t k) { return make_element(kZ, {k}); }

SampleMap sample(const FnExpr& e, const GroupSpec& spec, std::int64_t r) {
  SampleMap m;
  for (const Element& x : window(spec, r)) m[x] = eval(e, spec, x);
  return m;
}

}  // namespace

TEST(ScalarDependence, ExactMultipleIsDependent) {
  const auto v = FnExpr::multiplicative({1.5}) + FnExpr::additive({1.0});
  const Complex lambda(0.3, -2.0);
  const ScalarDependence d = fit_scalar_dependence(lambda * v, v, kZ, 16);
  EXPECT_LT(std::abs(d.lambda - lambda), 1e-10);
  EXPECT_TRUE(d.dependent);
  EXPECT_FALSE(d.degenerate);
}

TEST(ScalarDependence, BoundedOffsetStillDependent) {
  const auto v = FnExpr::multiplicative({2.0});
  const auto u = 3.0 * v + FnExpr::table({{z(0), 1.0}}, 0.0, 1.0);
  const ScalarDependence d = fit_scalar_dependence(u, v, kZ, 16);
  EXPECT_TRUE(d.dependent);
  EXPECT_NEAR(d.lambda.real(), 3.0, 1e-6);
}

TEST(ScalarDependence, IndependentFunctions) {
  const auto u = FnExpr::additive({1.0});
  const auto v = FnExpr::multiplicative({1.3});
  const ScalarDependence d = fit_scalar_dependence(u, v, kZ, 16);
  EXPECT_FALSE(d.dependent);
}

TEST(ScalarDependence, NullDenominatorDegenerate) {
  const ScalarDependence d = fit_scalar_dependence(FnExpr::additive({1.0}), FnExpr(), kZ, 8);
  EXPECT_TRUE(d.degenerate);
  EXPECT_EQ(d.lambda, Complex(0.0));
}

TEST(MultiplicativeFit, RecoversRandomCharacters) {
  Rng rng(77);
  const GroupSpec spec{2, {4}};
  for (int k = 0; k < 10; ++k) {
    const FnExpr m = random_character(spec, rng, {2.0, -0.5, std::polar(1.0, 0.9)});
    const MultiplicativeFit fit = fit_multiplicative(sample(m, spec, 4), spec);
    for (std::size_t i = 0; i < 2; ++i) {
      EXPECT_LT(std::abs(fit.m.coefficients()[i] - m.coefficients()[i]), 1e-10);
    }
    EXPECT_LT(std::abs(fit.m.torsion_roots()[0] - m.torsion_roots()[0]), 1e-12);
    EXPECT_LT(fit.sup_residual, 1e-9 * 300);
  }
}

TEST(MultiplicativeFit, ZeroOnPathIsDegenerate) {
  SampleMap m = sample(FnExpr::multiplicative({2.0}), kZ, 3);
  m[z(2)] = 0.0;
  EXPECT_THROW(fit_multiplicative(m, kZ), DegenerateError);
}

TEST(AdditiveFit, RecoversCoefficients) {
  const GroupSpec spec{2, {}};
  const auto a = FnExpr::additive({Complex(1.0, 2.0), Complex(-0.5, 0.0)});
  const AdditiveFit fit = fit_additive(sample(a, spec, 3), spec);
  EXPECT_LT(std::abs(fit.a.coefficients()[0] - Complex(1.0, 2.0)), 1e-12);
  EXPECT_LT(std::abs(fit.a.coefficients()[1] - Complex(-0.5, 0.0)), 1e-12);
  EXPECT_LT(fit.sup_residual, 1e-12);
}

TEST(Lm, SolvesComplexQuadratic) {
  // z^2 = 3 + 4i has roots +-(2 + i).
  const ComplexResidualFn res = [](const std::vector<Complex>& p) {
    return std::vector<Complex>{p[0] * p[0] - Complex(3.0, 4.0)};
  };
  const LmResult r = minimize_lm(res, {Complex(1.0, 1.0)});
  EXPECT_LT(std::abs(r.params[0] - Complex(2.0, 1.0)), 1e-8);
  EXPECT_LT(r.cost, 1e-16);
}

TEST(Lm, FitsExponentialParameters) {
  const Complex a(1.5, -0.5);
  const Complex r0(0.9, 0.2);
  const ComplexResidualFn res = [&](const std::vector<Complex>& p) {
    std::vector<Complex> out;
    for (int x = -5; x <= 5; ++x) out.push_back(p[0] * oracle::ipow(p[1], x) - a * oracle::ipow(r0, x));
    return out;
  };
  const LmResult r = minimize_lm(res, {Complex(1.0), Complex(1.0)});
  EXPECT_LT(std::abs(r.params[0] - a), 1e-8);
  EXPECT_LT(std::abs(r.params[1] - r0), 1e-8);
}

TEST(ScalarDependence, ScalesWithU) {
  const auto u = FnExpr::multiplicative({1.7}) + FnExpr::additive({0.3});
  const auto v = FnExpr::multiplicative({1.7});
  const Complex c = std::polar(1.0, 0.4);
  const ScalarDependence d1 = fit_scalar_dependence(u, v, kZ, 16);
  const ScalarDependence d2 = fit_scalar_dependence(c * u, v, kZ, 16);
  EXPECT_LT(std::abs(d2.lambda - c * d1.lambda), 1e-12 * std::abs(d1.lambda));
}

TEST(ScalarDependence, IndependentCharacters) {
  const ScalarDependence d =
      fit_scalar_dependence(FnExpr::multiplicative({2.0}), FnExpr::multiplicative({3.0}), kZ, 16);
  EXPECT_FALSE(d.dependent);
  EXPECT_EQ(d.residual_growth.verdict, Verdict::kUnbounded);
}

TEST(MultiplicativeFit, ToleratesSmallNoise) {
  Rng rng(12);
  SampleMap m;
  for (std::int64_t x = -8; x <= 8; ++x) {
    m[z(x)] = std::pow(2.0, static_cast<double>(x)) * (1.0 + 1e-6 * (2.0 * rng.uniform() - 1.0));
  }
  const MultiplicativeFit fit = fit_multiplicative(m, kZ);
  EXPECT_LT(std::abs(fit.m.coefficients()[0] - 2.0), 1e-5);
  const MultiplicativeFit alt = fit_multiplicative(sample(FnExpr::multiplicative({-1.0}), kZ, 8), kZ);
  EXPECT_LT(std::abs(alt.m.coefficients()[0] + 1.0), 1e-12);
}

TEST(AdditiveFit, BoundedNoiseShiftsCoefficientSlightly) {
  // Least squares on [-8, 8]: the coefficient error is sum(x e(x)) / sum(x^2) <= 0.1 * sum|x| / sum x^2.
  Rng rng(4);
  SampleMap m;
  double gain_num = 0.0;
  double gain_den = 0.0;
  for (std::int64_t x = -8; x <= 8; ++x) {
    m[z(x)] = static_cast<double>(x) + 0.1 * (2.0 * rng.uniform() - 1.0);
    gain_num += std::abs(static_cast<double>(x));
    gain_den += static_cast<double>(x * x);
  }
  const AdditiveFit fit = fit_additive(m, kZ);
  EXPECT_LE(std::abs(fit.a.coefficients()[0] - 1.0), 0.1 * gain_num / gain_den);
  const GroupSpec z2{2, {}};
  const AdditiveFit xy = fit_additive(sample(FnExpr::additive({1.0, Complex(0, 1)}), z2, 3), z2);
  EXPECT_LT(std::abs(xy.a.coefficients()[1] - Complex(0, 1)), 1e-12);
}
