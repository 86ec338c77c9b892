#include <gtest/gtest.h>

#include <filesystem>

#include "feq/error.hpp"
#include "feq/json_io.hpp"
#include "feq/random.hpp"

using namespace feq;

namespace {

const GroupSpec kZ = GroupSpec::integers();

void expect_same_function(const FnExpr& a, const FnExpr& b, const GroupSpec& spec) {
  for (const Element& x : window(spec, 6)) {
    EXPECT_EQ(eval(a, spec, x), eval(b, spec, x)) << to_string(x);
  }
}

}  // namespace

TEST(Json, ComplexForms) {
  EXPECT_EQ(complex_from_json(Json::parse("[1.5, -2]")), Complex(1.5, -2.0));
  EXPECT_EQ(complex_from_json(Json::parse("3")), Complex(3.0, 0.0));
  EXPECT_THROW(complex_from_json(Json::parse("[1]")), ParseError);
  EXPECT_THROW(complex_from_json(Json::parse("\"x\"")), ParseError);
  EXPECT_EQ(complex_to_json(Complex(1, 2)).dump(), "[1.0,2.0]");
}

TEST(Json, GroupAndElement) {
  const GroupSpec spec = group_from_json(Json::parse(R"({"free_rank":2,"torsion":[3]})"));
  EXPECT_EQ(spec, (GroupSpec{2, {3}}));
  EXPECT_EQ(element_from_json(Json::parse("[1,-2,4]"), spec), make_element(spec, {1, -2, 1}));
  EXPECT_THROW(element_from_json(Json::parse("[1]"), spec), ParseError);
  EXPECT_THROW(group_from_json(Json::parse(R"({"free_rank":1,"torsion":[1]})")), ParseError);
  EXPECT_THROW(group_from_json(Json::parse(R"({"torsion":[]})")), ParseError);
}

TEST(Json, ExpressionRoundTripEveryKind) {
  const GroupSpec spec{1, {2}};
  const Element e1 = make_element(spec, {1, 1});
  const FnExpr t = FnExpr::table({{e1, Complex(0.5, 0.5)}}, 0.1, 1.0);
  const FnExpr expr = FnExpr::sum({
      FnExpr::constant(Complex(1, -1)),
      FnExpr::additive({2.0}),
      FnExpr::multiplicative({0.5}, {-1.0}),
      FnExpr::prod({t, FnExpr::additive({1.0})}),
      FnExpr::scale(3.0, FnExpr::reflect(t)),
      FnExpr::translate(e1, FnExpr::even_part(FnExpr::multiplicative({2.0}, {1.0}))),
      FnExpr::odd_part(t),
  });
  const Json j = fnexpr_to_json(expr);
  const FnExpr back = fnexpr_from_json(j, spec);
  expect_same_function(expr, back, spec);
  EXPECT_EQ(fnexpr_to_json(back), j);
}

TEST(Json, ExpressionErrors) {
  EXPECT_THROW(fnexpr_from_json(Json::parse(R"({"kind":"bogus"})"), kZ), ParseError);
  EXPECT_THROW(fnexpr_from_json(Json::parse(R"({"kind":"multiplicative","ratios":[0]})"), kZ), ParseError);
  EXPECT_THROW(fnexpr_from_json(Json::parse(R"({"kind":"sum"})"), kZ), ParseError);
  EXPECT_THROW(fnexpr_from_json(Json::parse("[]"), kZ), ParseError);
}

TEST(Json, TripleFileRoundTripWithFamily) {
  Rng rng(3);
  for (FamilyTag tag : all_family_tags()) {
    const FamilyInstance inst = make_family(tag, random_family_params(tag, kZ, rng), kZ);
    const Json j = triple_file_to_json(triple_file_from_instance(inst));
    EXPECT_EQ(j.at("schema"), "feq/1");
    const TripleFile back = triple_file_from_json(j);
    ASSERT_TRUE(back.family.has_value());
    EXPECT_EQ(back.family->tag, tag);
    EXPECT_EQ(back.equation, inst.equation);
    expect_same_function(back.triple.f, inst.triple.f, kZ);
    expect_same_function(back.triple.h, inst.triple.h, kZ);
    EXPECT_EQ(triple_file_to_json(back), j) << to_string(tag);
  }
}

TEST(Json, SchemaRequired) {
  Json j = triple_file_to_json(TripleFile{Triple{kZ, FnExpr(), FnExpr(), FnExpr()}, EquationKind::kMinus, {}});
  EXPECT_NO_THROW(triple_file_from_json(j));
  j["schema"] = "feq/0";
  EXPECT_THROW(triple_file_from_json(j), ParseError);
  j.erase("schema");
  EXPECT_THROW(triple_file_from_json(j), ParseError);
}

TEST(Json, ParamsRejectUnknownKeys) {
  EXPECT_THROW(params_from_json(Json::parse(R"({"gamma":[1,0]})"), kZ), ParseError);
  EXPECT_THROW(params_from_json(Json::parse(R"({"form":"circle"})"), kZ), ParseError);
  const FamilyParams p = params_from_json(
      Json::parse(R"({"lambda":2,"cosine_pair":{"kind":"character_pair",
                     "chi1":{"kind":"multiplicative","ratios":[2]},
                     "chi2":{"kind":"multiplicative","ratios":[0.5]}}})"),
      kZ);
  EXPECT_EQ(p.scalars.at("lambda"), Complex(2.0));
  ASSERT_TRUE(p.cosine_pair.has_value());
}

TEST(Json, ReportsSerialise) {
  const Triple t{kZ, FnExpr::additive({1.0}), FnExpr(), FnExpr()};
  const Json d = defect_report_to_json(defect_report(t));
  EXPECT_EQ(d.at("verdict"), "unbounded");
  EXPECT_EQ(d.at("per_radius").size(), 4u);
  const Json i = identity_report_to_json(identity_report(t, 4));
  EXPECT_EQ(i.at("checks").size(), 3u);
  EXPECT_TRUE(i.at("pass").get<bool>());
}

TEST(Json, FilesRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "feq_json_io_test.json";
  const Json j{{"schema", "feq/1"}, {"x", 1}};
  write_json_file(path, j);
  EXPECT_EQ(read_json_file(path), j);
  std::filesystem::remove(path);
  EXPECT_THROW(read_json_file(path), ParseError);
}
