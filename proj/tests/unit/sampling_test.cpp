#include <gtest/gtest.h>

#include "feq/error.hpp"
#include "feq/sampling.hpp"
#include "oracles.hpp"

using namespace feq;

namespace {

const GroupSpec kZ = GroupSpec::integers();
Element z(std::int64_t k) { return make_element(kZ, {k}); }

}  // namespace

TEST(Samples, OfMatchesEval) {
  const auto e = FnExpr::multiplicative({Complex(0.0, 1.5)}) + FnExpr::additive({1.0});
  const Samples s = Samples::of(e, kZ, 6);
  ASSERT_EQ(s.size(), 13u);
  for (std::int64_t x = -6; x <= 6; ++x) EXPECT_EQ(s.at(z(x)), eval(e, kZ, z(x)));
}

TEST(Samples, ParityAndNegIndex) {
  oracle::Fn f = [](std::int64_t x) { return oracle::C(x * x * x + 2.0, x); };
  SampleMap m;
  for (std::int64_t x = -5; x <= 5; ++x) m[z(x)] = f(x);
  const Samples s = Samples::from_map(m, kZ, 5);
  const Samples e = s.even();
  const Samples o = s.odd();
  for (std::int64_t x = -5; x <= 5; ++x) {
    EXPECT_NEAR(std::abs(e.at(z(x)) - 0.5 * (f(x) + f(-x))), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(o.at(z(x)) - 0.5 * (f(x) - f(-x))), 0.0, 1e-12);
    const std::size_t i = s.index().index_of(z(x));
    EXPECT_EQ(s.index().element_at(s.neg_index(i)), z(-x));
  }
}

TEST(Samples, FromMapNeedsEveryPoint) {
  SampleMap m{{z(0), 1.0}};
  EXPECT_THROW(Samples::from_map(m, kZ, 1), DegenerateError);
}

TEST(Samples, ArithmeticAndReductions) {
  const Samples a = Samples::of(FnExpr::additive({1.0}), kZ, 3);
  const Samples b = Samples::of(FnExpr::constant(Complex(0, 1)), kZ, 3);
  const Samples c = a + Complex(2.0) * b;
  EXPECT_EQ(c.at(z(-3)), Complex(-3.0, 2.0));
  EXPECT_DOUBLE_EQ(a.norm2(), 2.0 * (1 + 4 + 9));
  EXPECT_DOUBLE_EQ(a.sup(), 3.0);
  EXPECT_EQ(b.dot(b), Complex(7.0));
  EXPECT_EQ(pointwise(a, a).at(z(2)), Complex(4.0));
  EXPECT_DOUBLE_EQ((a - a).sup(), 0.0);
}

TEST(Samples, RestrictAndTable) {
  const auto e = FnExpr::additive({2.0});
  const Samples s = Samples::of(e, kZ, 8);
  const Samples r = s.restrict_to(3);
  EXPECT_EQ(r.size(), 7u);
  EXPECT_EQ(r.at(z(-3)), Complex(-6.0));
  const FnExpr t = r.to_table();
  EXPECT_EQ(eval(t, kZ, z(2)), Complex(4.0));
  EXPECT_EQ(eval(t, kZ, z(9)), Complex(0.0));
  EXPECT_DOUBLE_EQ(t.table_data().declared_bound, 6.0);
}

TEST(Samples, NestedVerdict) {
  const Samples lin = Samples::of(FnExpr::additive({1.0}), kZ, 32);
  EXPECT_EQ(lin.verdict(nested_schedule(32)).verdict, Verdict::kUnbounded);
  const Samples bounded = Samples::of(FnExpr::multiplicative({-1.0}), kZ, 32);
  EXPECT_EQ(bounded.verdict(nested_schedule(32)).verdict, Verdict::kBounded);
  EXPECT_EQ(nested_schedule(32), (std::vector<std::int64_t>{4, 8, 16, 32}));
  EXPECT_THROW(nested_schedule(4), std::invalid_argument);
}
