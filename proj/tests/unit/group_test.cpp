#include <gtest/gtest.h>

#include <set>

#include "feq/error.hpp"
#include "feq/group.hpp"

using namespace feq;

namespace {

GroupSpec z_times_z3() { return GroupSpec{1, {3}}; }

}  // namespace

TEST(Group, ValidateRejectsSmallTorsion) {
  EXPECT_THROW((GroupSpec{1, {1}}).validate(), DimensionError);
  EXPECT_THROW((GroupSpec{1, {0}}).validate(), DimensionError);
  EXPECT_NO_THROW((GroupSpec{2, {2, 5}}).validate());
}

TEST(Group, MakeElementReducesTorsion) {
  const auto spec = z_times_z3();
  const Element x = make_element(spec, {4, -1});
  EXPECT_EQ(x.free, std::vector<std::int64_t>{4});
  EXPECT_EQ(x.torsion, std::vector<std::int64_t>{2});
  EXPECT_THROW(make_element(spec, {1}), DimensionError);
}

TEST(Group, ArithmeticMatchesComponentwiseOracle) {
  const auto spec = z_times_z3();
  for (std::int64_t a = -3; a <= 3; ++a) {
    for (std::int64_t s = 0; s < 3; ++s) {
      for (std::int64_t b = -3; b <= 3; ++b) {
        for (std::int64_t t = 0; t < 3; ++t) {
          const Element x = make_element(spec, {a, s});
          const Element y = make_element(spec, {b, t});
          const Element sum = add(spec, x, y);
          EXPECT_EQ(sum.free[0], a + b);
          EXPECT_EQ(sum.torsion[0], (s + t) % 3);
          const Element diff = sub(spec, x, y);
          EXPECT_EQ(diff.free[0], a - b);
          EXPECT_EQ(diff.torsion[0], ((s - t) % 3 + 3) % 3);
          EXPECT_EQ(add(spec, diff, y), x);
        }
      }
    }
  }
}

TEST(Group, NegIsInverse) {
  const GroupSpec spec{2, {4}};
  const Element x = make_element(spec, {3, -7, 1});
  EXPECT_EQ(add(spec, x, neg(spec, x)), identity(spec));
  EXPECT_EQ(neg(spec, x).torsion[0], 3);
}

TEST(Group, ScaleIsRepeatedAddition) {
  const auto spec = z_times_z3();
  const Element x = make_element(spec, {2, 1});
  Element acc = identity(spec);
  for (int k = 0; k < 5; ++k) acc = add(spec, acc, x);
  EXPECT_EQ(scale(spec, 5, x), acc);
  EXPECT_EQ(scale(spec, -1, x), neg(spec, x));
  EXPECT_EQ(scale(spec, 0, x), identity(spec));
}

TEST(Group, GeneratorsAreUnitVectors) {
  const GroupSpec spec{2, {5}};
  EXPECT_EQ(coordinates(generator(spec, 0)), (std::vector<std::int64_t>{1, 0, 0}));
  EXPECT_EQ(coordinates(generator(spec, 2)), (std::vector<std::int64_t>{0, 0, 1}));
  EXPECT_THROW(generator(spec, 3), DimensionError);
}

TEST(Group, WindowSizeAndOrder) {
  const auto spec = z_times_z3();
  const auto w = window(spec, 2);
  EXPECT_EQ(w.size(), 15u);
  EXPECT_EQ(window_size(spec, 2), 15u);
  EXPECT_TRUE(std::is_sorted(w.begin(), w.end()));
  std::set<Element> distinct(w.begin(), w.end());
  EXPECT_EQ(distinct.size(), w.size());
  EXPECT_EQ(window(GroupSpec{2, {}}, 3).size(), 49u);
  EXPECT_EQ(window(GroupSpec::integers(), 0).size(), 1u);
}

TEST(Group, WindowIndexRoundTrips) {
  const GroupSpec spec{2, {2}};
  const WindowIndex idx(spec, 3);
  const auto w = window(spec, 3);
  ASSERT_EQ(idx.size(), w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    EXPECT_EQ(idx.index_of(w[i]), i);
    EXPECT_EQ(idx.element_at(i), w[i]);
  }
  EXPECT_FALSE(idx.contains(make_element(spec, {4, 0, 0})));
  EXPECT_TRUE(idx.contains(make_element(spec, {-3, 3, 1})));
}

TEST(Group, NegativeRadiusRejected) {
  EXPECT_THROW(window(GroupSpec::integers(), -1), RangeError);
}

TEST(Group, ConformanceChecked) {
  const auto spec = z_times_z3();
  Element bad;
  bad.free = {1, 2};
  bad.torsion = {0};
  EXPECT_THROW(check_conforms(spec, bad), DimensionError);
}

TEST(Group, ToStringShowsCoordinates) {
  EXPECT_EQ(to_string(make_element(z_times_z3(), {-2, 1})), "(-2,1)");
}

TEST(Group, SmallWorkedCases) {
  const GroupSpec zz6{1, {6}};
  EXPECT_EQ(add(zz6, make_element(zz6, {2, 4}), make_element(zz6, {-3, 5})), make_element(zz6, {-1, 3}));
  const GroupSpec z6{0, {6}};
  EXPECT_EQ(neg(z6, make_element(z6, {2})), make_element(z6, {4}));
  EXPECT_EQ(neg(z6, identity(z6)), identity(z6));
  EXPECT_EQ(window(GroupSpec{0, {3}}, 5).size(), 3u);
  EXPECT_EQ(window(GroupSpec::integers(), 2).front(), make_element(GroupSpec::integers(), {-2}));
}

TEST(Group, LawsOnSampledTriples) {
  const GroupSpec spec{2, {2, 3}};
  const auto w = window(spec, 1);
  for (std::size_t i = 0; i < w.size(); i += 5) {
    for (std::size_t j = 0; j < w.size(); j += 7) {
      EXPECT_EQ(add(spec, w[i], w[j]), add(spec, w[j], w[i]));
      for (std::size_t k = 0; k < w.size(); k += 11) {
        EXPECT_EQ(add(spec, add(spec, w[i], w[j]), w[k]), add(spec, w[i], add(spec, w[j], w[k])));
      }
    }
  }
}

TEST(Group, WindowsNestAndAreNegClosed) {
  const GroupSpec spec{1, {4}};
  const auto small = window(spec, 2);
  const auto big = window(spec, 3);
  const std::set<Element> big_set(big.begin(), big.end());
  const std::set<Element> small_set(small.begin(), small.end());
  for (const Element& x : small) EXPECT_TRUE(big_set.count(x));
  for (const Element& x : small) EXPECT_TRUE(small_set.count(neg(spec, x)));
}
