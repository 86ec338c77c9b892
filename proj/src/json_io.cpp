#include "feq/json_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "feq/error.hpp"

namespace feq {

namespace {

const std::set<std::string> kScalarNames{"alpha", "beta", "delta", "lambda", "rho"};
const std::set<std::string> kFunctionNames{"m", "M", "a", "a1", "b", "phi", "f0", "g0", "f", "g", "h"};

[[noreturn]] void fail(const std::string& what) { throw ParseError(what); }

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) fail(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(where + ": missing field '" + key + "'");
  return *it;
}

double number(const Json& j, const std::string& where) {
  if (j.is_null()) return std::numeric_limits<double>::infinity();
  if (!j.is_number()) fail(where + ": expected a number");
  return j.get<double>();
}

Json real_to_json(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

std::int64_t integer(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where + ": expected an integer");
  return j.get<std::int64_t>();
}

std::vector<Complex> complex_list(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where + ": expected an array");
  std::vector<Complex> out;
  for (const Json& v : j) out.push_back(complex_from_json(v));
  return out;
}

Json complex_list_to_json(const std::vector<Complex>& v) {
  Json out = Json::array();
  for (const Complex& c : v) out.push_back(complex_to_json(c));
  return out;
}

void check_schema(const Json& j) {
  if (!j.is_object()) fail("top level: expected an object");
  auto it = j.find("schema");
  if (it == j.end()) fail("missing field 'schema'");
  if (!it->is_string() || it->get<std::string>() != kSchemaVersion) {
    fail(std::string("unsupported schema; expected \"") + kSchemaVersion + "\"");
  }
}

std::string verdict_name(Verdict v) { return std::string(to_string(v)); }

Json growth_to_json(const GrowthEvidence& g) {
  Json j;
  j["radii"] = g.radii;
  Json sups = Json::array();
  for (double s : g.sups) sups.push_back(real_to_json(s));
  j["sups"] = sups;
  Json floors = Json::array();
  for (double s : g.noise_floors) floors.push_back(real_to_json(s));
  j["noise_floors"] = floors;
  Json eff = Json::array();
  for (double s : g.effective) eff.push_back(real_to_json(s));
  j["effective"] = eff;
  Json ratios = Json::array();
  for (double r : g.ratios) ratios.push_back(real_to_json(r));
  j["ratios"] = ratios;
  j["verdict"] = verdict_name(g.verdict);
  return j;
}

}  // namespace

Json complex_to_json(Complex c) { return Json::array({c.real(), c.imag()}); }

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  fail("complex number must be [re, im] or a real number");
}

Json group_to_json(const GroupSpec& spec) {
  return Json{{"free_rank", spec.free_rank}, {"torsion", spec.torsion_orders}};
}

GroupSpec group_from_json(const Json& j) {
  GroupSpec spec;
  const std::int64_t d = integer(field(j, "free_rank", "group"), "group.free_rank");
  if (d < 0) fail("group.free_rank must be non-negative");
  spec.free_rank = static_cast<std::size_t>(d);
  if (j.contains("torsion")) {
    const Json& t = j.at("torsion");
    if (!t.is_array()) fail("group.torsion: expected an array");
    for (const Json& n : t) spec.torsion_orders.push_back(integer(n, "group.torsion"));
  }
  try {
    spec.validate();
  } catch (const Error& e) {
    fail(std::string("group: ") + e.what());
  }
  return spec;
}

Json element_to_json(const Element& x) { return Json(coordinates(x)); }

Element element_from_json(const Json& j, const GroupSpec& spec) {
  if (!j.is_array()) fail("element: expected an integer array");
  std::vector<std::int64_t> coords;
  for (const Json& c : j) coords.push_back(integer(c, "element"));
  try {
    return make_element(spec, coords);
  } catch (const Error& e) {
    fail(std::string("element: ") + e.what());
  }
}

Json fnexpr_to_json(const FnExpr& e) {
  using Kind = FnExpr::Kind;
  Json j;
  j["kind"] = std::string(e.kind_name());
  switch (e.kind()) {
    case Kind::kConst:
      j["value"] = complex_to_json(e.constant_value());
      break;
    case Kind::kAdditive:
      j["coeffs"] = complex_list_to_json(e.coefficients());
      break;
    case Kind::kMultiplicative:
      j["ratios"] = complex_list_to_json(e.coefficients());
      j["roots"] = complex_list_to_json(e.torsion_roots());
      break;
    case Kind::kTable: {
      const auto& t = e.table_data();
      Json entries = Json::array();
      for (const auto& [x, v] : t.entries) {
        entries.push_back(Json{{"at", element_to_json(x)}, {"value", complex_to_json(v)}});
      }
      j["entries"] = entries;
      j["default"] = complex_to_json(t.default_value);
      j["bound"] = t.declared_bound;
      break;
    }
    case Kind::kSum:
    case Kind::kProd: {
      Json list = Json::array();
      for (const FnExpr& c : e.children()) list.push_back(fnexpr_to_json(c));
      j[e.kind() == Kind::kSum ? "terms" : "factors"] = list;
      break;
    }
    case Kind::kScale:
      j["factor"] = complex_to_json(e.factor());
      j["expr"] = fnexpr_to_json(e.children().front());
      break;
    case Kind::kTranslate:
      j["shift"] = element_to_json(e.shift());
      j["expr"] = fnexpr_to_json(e.children().front());
      break;
    case Kind::kReflect:
    case Kind::kEven:
    case Kind::kOdd:
      j["expr"] = fnexpr_to_json(e.children().front());
      break;
  }
  return j;
}

FnExpr fnexpr_from_json(const Json& j, const GroupSpec& spec) {
  const Json& kind_j = field(j, "kind", "expression");
  if (!kind_j.is_string()) fail("expression.kind: expected a string");
  const std::string kind = kind_j.get<std::string>();
  try {
    if (kind == "const") return FnExpr::constant(complex_from_json(field(j, "value", "const")));
    if (kind == "additive") {
      return FnExpr::additive(complex_list(field(j, "coeffs", "additive"), "additive.coeffs"));
    }
    if (kind == "multiplicative") {
      std::vector<Complex> roots;
      if (j.contains("roots")) roots = complex_list(j.at("roots"), "multiplicative.roots");
      return FnExpr::multiplicative(complex_list(field(j, "ratios", "multiplicative"),
                                                 "multiplicative.ratios"),
                                    std::move(roots));
    }
    if (kind == "table") {
      std::map<Element, Complex> entries;
      const Json& list = field(j, "entries", "table");
      if (!list.is_array()) fail("table.entries: expected an array");
      for (const Json& entry : list) {
        entries[element_from_json(field(entry, "at", "table entry"), spec)] =
            complex_from_json(field(entry, "value", "table entry"));
      }
      const Complex def = j.contains("default") ? complex_from_json(j.at("default")) : Complex(0.0, 0.0);
      double bound = 0.0;
      if (j.contains("bound")) {
        bound = number(j.at("bound"), "table.bound");
      } else {
        bound = std::abs(def);
        for (const auto& [x, v] : entries) bound = std::max(bound, std::abs(v));
      }
      return FnExpr::table(std::move(entries), def, bound);
    }
    if (kind == "sum" || kind == "prod") {
      const Json& list = field(j, kind == "sum" ? "terms" : "factors", kind);
      if (!list.is_array()) fail(kind + ": expected an array of expressions");
      std::vector<FnExpr> items;
      for (const Json& item : list) items.push_back(fnexpr_from_json(item, spec));
      return kind == "sum" ? FnExpr::sum(std::move(items)) : FnExpr::prod(std::move(items));
    }
    if (kind == "scale") {
      return FnExpr::scale(complex_from_json(field(j, "factor", "scale")),
                           fnexpr_from_json(field(j, "expr", "scale"), spec));
    }
    if (kind == "translate") {
      return FnExpr::translate(element_from_json(field(j, "shift", "translate"), spec),
                               fnexpr_from_json(field(j, "expr", "translate"), spec));
    }
    if (kind == "reflect") return FnExpr::reflect(fnexpr_from_json(field(j, "expr", kind), spec));
    if (kind == "even") return FnExpr::even_part(fnexpr_from_json(field(j, "expr", kind), spec));
    if (kind == "odd") return FnExpr::odd_part(fnexpr_from_json(field(j, "expr", kind), spec));
  } catch (const InvalidExpression& e) {
    fail(kind + ": " + e.what());
  }
  fail("unknown expression kind '" + kind + "'");
}

Json params_to_json(const FamilyParams& p) {
  Json j = Json::object();
  for (const auto& [name, v] : p.scalars) j[name] = complex_to_json(v);
  for (const auto& [name, f] : p.functions) j[name] = fnexpr_to_json(f);
  if (p.cosine_pair) {
    const CosinePair& c = *p.cosine_pair;
    if (c.kind == CosineKind::kCharacterPair) {
      j["cosine_pair"] = Json{{"kind", "character_pair"},
                              {"chi1", fnexpr_to_json(c.chi1)},
                              {"chi2", fnexpr_to_json(c.chi2)}};
    } else {
      j["cosine_pair"] = Json{{"kind", "additive_degenerate"},
                              {"chi", fnexpr_to_json(c.chi1)},
                              {"a", fnexpr_to_json(c.a)}};
    }
  }
  if (p.form == T9Form::kCosine) j["form"] = "cosine";
  if (p.form == T9Form::kQuadratic) j["form"] = "quadratic";
  return j;
}

FamilyParams params_from_json(const Json& j, const GroupSpec& spec) {
  if (!j.is_object()) fail("params: expected an object");
  FamilyParams p;
  for (const auto& [key, value] : j.items()) {
    if (key == "schema") continue;
    if (kScalarNames.count(key)) {
      p.scalars[key] = complex_from_json(value);
    } else if (kFunctionNames.count(key)) {
      p.functions[key] = fnexpr_from_json(value, spec);
    } else if (key == "cosine_pair") {
      const Json& kind = field(value, "kind", "cosine_pair");
      CosinePair c;
      if (kind == "character_pair") {
        c.kind = CosineKind::kCharacterPair;
        c.chi1 = fnexpr_from_json(field(value, "chi1", "cosine_pair"), spec);
        c.chi2 = fnexpr_from_json(field(value, "chi2", "cosine_pair"), spec);
      } else if (kind == "additive_degenerate") {
        c.kind = CosineKind::kAdditiveDegenerate;
        c.chi1 = fnexpr_from_json(field(value, "chi", "cosine_pair"), spec);
        c.a = fnexpr_from_json(field(value, "a", "cosine_pair"), spec);
      } else {
        fail("cosine_pair.kind must be character_pair or additive_degenerate");
      }
      p.cosine_pair = c;
    } else if (key == "form") {
      if (value == "cosine") {
        p.form = T9Form::kCosine;
      } else if (value == "quadratic") {
        p.form = T9Form::kQuadratic;
      } else {
        fail("params.form must be cosine or quadratic");
      }
    } else {
      fail("params: unknown field '" + key + "'");
    }
  }
  return p;
}

Json triple_file_to_json(const TripleFile& file) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["group"] = group_to_json(file.triple.spec);
  j["equation"] = std::string(to_string(file.equation));
  j["f"] = fnexpr_to_json(file.triple.f);
  j["g"] = fnexpr_to_json(file.triple.g);
  j["h"] = fnexpr_to_json(file.triple.h);
  if (file.family) {
    j["family"] = Json{{"tag", std::string(to_string(file.family->tag))},
                       {"params", params_to_json(file.family->params)},
                       {"defect_bound", real_to_json(file.family->defect_bound)}};
  }
  return j;
}

TripleFile triple_file_from_json(const Json& j) {
  check_schema(j);
  TripleFile file;
  file.triple.spec = group_from_json(field(j, "group", "triple"));
  const GroupSpec& spec = file.triple.spec;
  file.triple.f = fnexpr_from_json(field(j, "f", "triple"), spec);
  file.triple.g = fnexpr_from_json(field(j, "g", "triple"), spec);
  file.triple.h = fnexpr_from_json(field(j, "h", "triple"), spec);
  if (j.contains("equation")) {
    const Json& eq = j.at("equation");
    if (eq == "minus") {
      file.equation = EquationKind::kMinus;
    } else if (eq == "plus") {
      file.equation = EquationKind::kPlus;
    } else {
      fail("triple.equation must be minus or plus");
    }
  }
  try {
    check_conforms(file.triple);
  } catch (const Error& e) {
    fail(std::string("triple: ") + e.what());
  }
  if (j.contains("family")) {
    const Json& fam = j.at("family");
    const Json& tag_j = field(fam, "tag", "family");
    if (!tag_j.is_string()) fail("family.tag: expected a string");
    FamilyInstance inst;
    inst.tag = parse_family_tag(tag_j.get<std::string>());
    inst.params = params_from_json(field(fam, "params", "family"), spec);
    inst.triple = file.triple;
    inst.equation = file.equation;
    inst.defect_bound = fam.contains("defect_bound") ? number(fam.at("defect_bound"), "family.defect_bound")
                                                     : std::numeric_limits<double>::infinity();
    file.family = std::move(inst);
  }
  return file;
}

TripleFile triple_file_from_instance(const FamilyInstance& inst) {
  return {inst.triple, inst.equation, inst};
}

Json defect_report_to_json(const DefectReport& r) {
  Json j;
  j["equation"] = std::string(to_string(r.equation));
  Json rows = Json::array();
  for (const RadiusRecord& rec : r.per_radius) {
    rows.push_back(Json{{"radius", rec.radius},
                        {"sup", real_to_json(rec.sup)},
                        {"argmax", Json::array({element_to_json(rec.argmax_x), element_to_json(rec.argmax_y)})},
                        {"noise_floor", real_to_json(rec.noise_floor)}});
  }
  j["per_radius"] = rows;
  j["growth_ratios"] = growth_to_json(r.growth)["ratios"];
  j["effective_sups"] = growth_to_json(r.growth)["effective"];
  j["scale"] = real_to_json(r.scale);
  j["verdict"] = verdict_name(r.verdict());
  return j;
}

Json identity_report_to_json(const IdentityReport& r) {
  Json j;
  j["radius"] = r.radius;
  Json checks = Json::array();
  for (const IdentityCheck& c : r.checks) {
    checks.push_back(Json{{"name", c.name},
                          {"max_residual", real_to_json(c.max_residual)},
                          {"worst_pair", Json::array({element_to_json(c.worst_x), element_to_json(c.worst_y)})},
                          {"tolerance", real_to_json(c.tolerance)},
                          {"pass", c.pass}});
  }
  j["checks"] = checks;
  j["pass"] = r.pass();
  return j;
}

Json gamma_eta_to_json(const GammaEtaFit& fit) {
  return Json{{"gamma", complex_to_json(fit.gamma)},
              {"eta", complex_to_json(fit.eta)},
              {"residual_sup_eq17", real_to_json(fit.residual_sup_eq17)},
              {"residual_sup_eq18", real_to_json(fit.residual_sup_eq18)},
              {"underdetermined", fit.underdetermined},
              {"eta_unconstrained", fit.eta_unconstrained}};
}

Json validation_report_to_json(const ValidationReport& r) {
  Json j;
  j["radius"] = r.radius;
  Json checks = Json::array();
  for (const ValidationCheck& c : r.constraints) {
    Json row{{"name", c.name}, {"passed", c.passed}, {"value", real_to_json(c.value)}};
    if (!c.detail.empty()) row["detail"] = c.detail;
    checks.push_back(row);
  }
  j["constraints"] = checks;
  j["defect"] = defect_report_to_json(r.defect);
  j["defect_bounded"] = r.defect_bounded;
  j["defect_within_bound"] = r.defect_within_bound;
  j["failures"] = r.failures();
  j["ok"] = r.ok();
  return j;
}

Json classification_to_json(const ClassificationResult& r) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["radius"] = r.radius;
  j["scale"] = real_to_json(r.scale);
  j["tolerance"] = real_to_json(r.tolerance);
  j["found"] = r.found();
  Json ranked = Json::array();
  for (const RankedFit& f : r.ranked) {
    ranked.push_back(Json{{"tag", std::string(to_string(f.tag))},
                          {"params", params_to_json(f.fitted)},
                          {"l2_residual", real_to_json(f.l2_residual)},
                          {"sup_residual", real_to_json(f.sup_residual)}});
  }
  j["ranked"] = ranked;
  Json rejected = Json::array();
  for (const RejectedFit& f : r.rejected) {
    rejected.push_back(Json{{"tag", std::string(to_string(f.tag))},
                            {"reason", f.reason},
                            {"sup_residual", real_to_json(f.sup_residual)}});
  }
  j["rejected"] = rejected;
  const ClassifierDiagnostics& d = r.diagnostics;
  Json diag;
  diag["case"] = d.case_label;
  diag["f_verdict"] = verdict_name(d.f_verdict);
  diag["h_verdict"] = verdict_name(d.h_verdict);
  diag["lambda"] = complex_to_json(d.lambda);
  diag["h_minus_lambda_f_verdict"] = verdict_name(d.h_minus_lambda_f_verdict);
  diag["parity_sups"] = Json{{"f_even", d.f_even_sup}, {"f_odd", d.f_odd_sup},
                             {"g_even", d.g_even_sup}, {"g_odd", d.g_odd_sup},
                             {"h_even", d.h_even_sup}, {"h_odd", d.h_odd_sup}};
  if (d.gamma_eta) {
    diag["gamma_eta"] = gamma_eta_to_json(*d.gamma_eta);
  } else {
    diag["gamma_eta_error"] = d.gamma_eta_error;
  }
  diag["defect"] = defect_report_to_json(d.defect);
  j["diagnostics"] = diag;
  return j;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot read " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    fail(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace feq
