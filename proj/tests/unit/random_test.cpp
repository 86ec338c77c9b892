#include <gtest/gtest.h>

#include <set>

#include "feq/random.hpp"

using namespace feq;

TEST(Rng, SplitMixReferenceValues) {
  // First two outputs of the reference SplitMix64 stream seeded with 0.
  EXPECT_EQ(splitmix64(0), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(splitmix64(0x9e3779b97f4a7c15ULL), 0x6e789e6aa1b965f4ULL);
}

TEST(Rng, DeterministicAndSplittable) {
  Rng a(123);
  Rng b(123);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.bits(), b.bits());
  const Rng root(9);
  Rng s0 = root.split(0);
  Rng s0b = root.split(0);
  Rng s1 = root.split(1);
  EXPECT_EQ(s0.bits(), s0b.bits());
  EXPECT_NE(root.split(0).bits(), s1.bits());
}

TEST(Rng, RangesRespected) {
  Rng rng(5);
  std::set<std::int64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const double u = rng.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    const std::int64_t k = rng.integer(-2, 2);
    EXPECT_GE(k, -2);
    EXPECT_LE(k, 2);
    seen.insert(k);
    const double m = std::abs(rng.scalar());
    EXPECT_GE(m, 0.5 - 1e-12);
    EXPECT_LE(m, 2.0 + 1e-12);
  }
  EXPECT_EQ(seen.size(), 5u);
}

TEST(RandomObjects, TablesHonourParityAndBound) {
  Rng rng(8);
  const GroupSpec spec = GroupSpec::integers();
  for (int i = 0; i < 20; ++i) {
    const FnExpr odd = random_table(spec, rng, 4, 1.0, Parity::kOdd);
    const FnExpr even = random_table(spec, rng, 4, 1.0, Parity::kEven);
    double mx = 0.0;
    for (std::int64_t x = -6; x <= 6; ++x) {
      const Element e = make_element(spec, {x});
      const Element n = make_element(spec, {-x});
      EXPECT_LT(std::abs(eval(odd, spec, e) + eval(odd, spec, n)), 1e-15);
      EXPECT_LT(std::abs(eval(even, spec, e) - eval(even, spec, n)), 1e-15);
      mx = std::max(mx, std::abs(eval(odd, spec, e)));
      if (std::abs(x) > 4) EXPECT_EQ(eval(odd, spec, e), Complex(0.0));
    }
    EXPECT_DOUBLE_EQ(odd.table_data().declared_bound, mx);
  }
}

TEST(RandomObjects, TriplesConformToTheirGroup) {
  const Rng root(1);
  const GroupSpec spec{1, {2}};
  for (std::uint64_t k = 0; k < 20; ++k) {
    Rng rng = root.split(k);
    EXPECT_NO_THROW(check_conforms(random_triple(spec, rng)));
  }
}

TEST(RandomObjects, FamilyParamsAreReproducible) {
  for (FamilyTag tag : all_family_tags()) {
    Rng a(31);
    Rng b(31);
    const FamilyInstance x = assemble_family(tag, random_family_params(tag, GroupSpec::integers(), a),
                                             GroupSpec::integers());
    const FamilyInstance y = assemble_family(tag, random_family_params(tag, GroupSpec::integers(), b),
                                             GroupSpec::integers());
    for (std::int64_t k = -3; k <= 3; ++k) {
      const Element e = make_element(GroupSpec::integers(), {k});
      EXPECT_EQ(eval(x.triple.f, x.triple.spec, e), eval(y.triple.f, y.triple.spec, e)) << to_string(tag);
    }
  }
}
