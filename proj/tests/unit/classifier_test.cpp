#include <gtest/gtest.h>

#include "feq/classifier.hpp"
#include "feq/error.hpp"
#include "feq/random.hpp"
#include "param_match.hpp"

using namespace feq;

namespace {

const GroupSpec kZ = GroupSpec::integers();

FamilyInstance seeded(FamilyTag tag, std::uint64_t seed) {
  Rng rng(seed);
  return make_family(tag, random_family_params(tag, kZ, rng), kZ);
}

void expect_recovered(FamilyTag tag, std::uint64_t seed) {
  const FamilyInstance inst = seeded(tag, seed);
  const ClassificationResult r = classify(inst.triple);
  ASSERT_TRUE(r.found()) << to_string(tag) << " seed " << seed;
  std::string why;
  EXPECT_TRUE(param_match::matches(inst, r.ranked.front(), 1e-4, &why))
      << to_string(tag) << " seed " << seed << " ranked first " << to_string(r.ranked.front().tag) << ": " << why;
  for (const RankedFit& f : r.ranked) EXPECT_LE(f.sup_residual, r.tolerance);
}

}  // namespace

TEST(Classifier, RecoversT1) {
  for (std::uint64_t s = 1; s <= 3; ++s) expect_recovered(FamilyTag::T1, s);
}

TEST(Classifier, RecoversT2) {
  for (std::uint64_t s = 1; s <= 3; ++s) expect_recovered(FamilyTag::T2, s);
}

TEST(Classifier, RecoversT3) {
  for (std::uint64_t s = 1; s <= 3; ++s) expect_recovered(FamilyTag::T3, s);
}

TEST(Classifier, RecoversT6) {
  for (std::uint64_t s = 1; s <= 3; ++s) expect_recovered(FamilyTag::T6, s);
}

TEST(Classifier, RecoversT7) {
  for (std::uint64_t s = 1; s <= 3; ++s) expect_recovered(FamilyTag::T7, s);
}

TEST(Classifier, T9IsAmongTheMatches) {
  for (std::uint64_t s = 1; s <= 3; ++s) {
    const FamilyInstance inst = seeded(FamilyTag::T9, s);
    const ClassificationResult r = classify(inst.triple);
    ASSERT_TRUE(r.found());
    const bool has_t9 = std::any_of(r.ranked.begin(), r.ranked.end(),
                                    [](const RankedFit& f) { return f.tag == FamilyTag::T9; });
    EXPECT_TRUE(has_t9) << "seed " << s;
  }
}

TEST(Classifier, RankedFitsRevalidate) {
  const FamilyInstance inst = seeded(FamilyTag::T7, 9);
  const ClassificationResult r = classify(inst.triple);
  for (const RankedFit& f : r.ranked) {
    const FamilyInstance again = assemble_family(f.tag, f.fitted, kZ);
    EXPECT_TRUE(validate_instance(again, 16).ok()) << to_string(f.tag);
  }
}

TEST(Classifier, RefusesUnboundedDefect) {
  FamilyInstance inst = seeded(FamilyTag::T6, 4);
  inst.triple.f = inst.triple.f + 0.01 * FnExpr::additive({1.0});
  EXPECT_THROW(classify(inst.triple), RefusedError);
}

TEST(Classifier, ZeroTripleFallsInCatchAll) {
  const ClassificationResult r = classify(Triple{kZ, FnExpr(), FnExpr(), FnExpr()});
  EXPECT_TRUE(r.found());
}

TEST(Classifier, DiagnosticsReportCase) {
  const ClassificationResult r = classify(seeded(FamilyTag::T6, 2).triple);
  EXPECT_EQ(r.diagnostics.f_verdict, Verdict::kUnbounded);
  EXPECT_FALSE(r.diagnostics.case_label.empty());
  EXPECT_EQ(r.diagnostics.defect.verdict(), Verdict::kBounded);
}

TEST(Classifier, RejectsBadOptions) {
  ClassifyOptions o;
  o.radius = 4;
  EXPECT_THROW(classify(seeded(FamilyTag::T2, 1).triple, o), std::invalid_argument);
}

TEST(Classifier, WorkedExamples) {
  FamilyParams p7;
  p7.functions["a"] = FnExpr::additive({1.0});
  p7.functions["m"] = FnExpr::multiplicative({1.0});
  const ClassificationResult r7 = classify(make_family(FamilyTag::T7, p7, kZ).triple);
  ASSERT_TRUE(r7.found());
  EXPECT_EQ(r7.ranked.front().tag, FamilyTag::T7);
  EXPECT_LT(std::abs(r7.ranked.front().fitted.functions.at("a").coefficients()[0] - 1.0), 1e-6);

  FamilyParams p6;
  p6.scalars["lambda"] = 1.0;
  p6.cosine_pair = CosinePair{CosineKind::kCharacterPair, FnExpr::multiplicative({2.0}),
                              FnExpr::multiplicative({0.5}), FnExpr()};
  const ClassificationResult r6 = classify(make_family(FamilyTag::T6, p6, kZ).triple);
  ASSERT_TRUE(r6.found());
  EXPECT_EQ(r6.ranked.front().tag, FamilyTag::T6);
  EXPECT_LT(std::abs(r6.ranked.front().fitted.cosine_pair->chi1.coefficients()[0] - 2.0), 1e-6);

  Rng rng(3);
  const Triple t1{kZ, FnExpr(), random_table(kZ, rng), random_table(kZ, rng)};
  const ClassificationResult r1 = classify(t1);
  ASSERT_TRUE(r1.found());
  EXPECT_EQ(r1.ranked.front().tag, FamilyTag::T1);
}
