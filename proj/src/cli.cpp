#include "feq/cli.hpp"

#include <algorithm>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "feq/classifier.hpp"
#include "feq/error.hpp"
#include "feq/identities.hpp"
#include "feq/json_io.hpp"
#include "feq/random.hpp"

namespace feq {

namespace {

constexpr const char* kSchemaHelp = R"(File formats (every file carries "schema": "feq/1"):
  complex      [re, im] or a bare real number
  group        {"free_rank": d, "torsion": [n1, ...]}
  element      integer array: d free coordinates then one residue per torsion factor
  expression   {"kind": K, ...} with K one of
                 const          {"value": c}
                 additive       {"coeffs": [c, ...]}           one per free generator
                 multiplicative {"ratios": [c, ...], "roots": [c, ...]}
                 table          {"entries": [{"at": element, "value": c}], "default": c, "bound": r}
                 sum            {"terms": [expr, ...]}
                 prod           {"factors": [expr, ...]}
                 scale          {"factor": c, "expr": expr}
                 translate      {"shift": element, "expr": expr}
                 reflect | even | odd   {"expr": expr}
  triple       {"schema", "group", "equation": "minus"|"plus", "f", "g", "h",
                "family": {"tag", "params", "defect_bound"}}   family is optional
  params       {"schema", scalar names (alpha beta delta lambda rho) -> complex,
                function names (m M a a1 b phi f0 g0 f g h) -> expression,
                "cosine_pair": {"kind": "character_pair", "chi1", "chi2"}
                             | {"kind": "additive_degenerate", "chi", "a"},
                "form": "cosine"|"quadratic"}   form and cosine_pair are for T9

Exit status: 0 all checks pass / verdict bounded, 1 verification failure,
unbounded or inconclusive verdict, 2 parse or validation error.)";

std::string registry_help() {
  std::ostringstream os;
  os << "Families and their params:\n";
  for (const FamilyInfo& info : family_registry()) {
    os << "  " << to_string(info.tag) << "  (" << to_string(info.equation) << ")  required:";
    for (const auto& s : info.required_scalars) os << ' ' << s;
    for (const auto& s : info.required_functions) os << ' ' << s;
    if (info.uses_cosine_pair) os << " cosine_pair";
    if (!info.optional_scalars.empty() || !info.optional_functions.empty()) {
      os << "  optional:";
      for (const auto& s : info.optional_scalars) os << ' ' << s;
      for (const auto& s : info.optional_functions) os << ' ' << s;
    }
    os << '\n';
  }
  return os.str();
}

void emit(const RunConfig& config, const Json& report, std::ostream& out) {
  if (config.output.empty()) {
    out << report.dump(2) << '\n';
  } else {
    write_json_file(config.output, report);
  }
}

Json with_schema(Json j) {
  j["schema"] = kSchemaVersion;
  return j;
}

int run_generate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const FamilyTag tag = parse_family_tag(config.family);
  FamilyParams params;
  if (!config.params.empty()) {
    const Json j = read_json_file(config.params);
    if (!j.is_object() || j.value("schema", std::string()) != kSchemaVersion) {
      throw ParseError(config.params + ": missing or unsupported schema");
    }
    params = params_from_json(j, config.group);
  } else {
    Rng rng(config.seed);
    params = random_family_params(tag, config.group, rng);
  }
  const FamilyInstance inst = make_family(tag, params, config.group);
  emit(config, triple_file_to_json(triple_file_from_instance(inst)), out);
  if (!config.output.empty()) err << "generated " << to_string(tag) << " -> " << config.output << '\n';
  return kExitOk;
}

int run_verify(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const TripleFile file = triple_file_from_json(read_json_file(config.input));
  const DefectReport report = defect_report(file.triple, config.schedule, config.ratio_tol, file.equation);
  Json j = with_schema(defect_report_to_json(report));
  bool ok = report.verdict() == Verdict::kBounded;
  if (file.family) {
    double slack = 0.0;
    for (const RadiusRecord& r : report.per_radius) slack = std::max(slack, r.noise_floor);
    const bool within = report.max_sup() <= file.family->defect_bound + slack;
    j["family"] = Json{{"tag", std::string(to_string(file.family->tag))},
                       {"defect_bound", std::isfinite(file.family->defect_bound)
                                            ? Json(file.family->defect_bound)
                                            : Json(nullptr)},
                       {"within_bound", within}};
    ok = ok && within;
  }
  j["pass"] = ok;
  emit(config, j, out);
  err << "verdict " << to_string(report.verdict()) << ", sup " << report.max_sup() << '\n';
  return ok ? kExitOk : kExitFailure;
}

int run_identities(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const std::int64_t radius = config.radius > 0 ? config.radius : 16;
  Json j;
  j["schema"] = kSchemaVersion;
  j["radius"] = radius;
  bool ok = true;
  if (config.random_count > 0) {
    const Rng root(config.seed);
    j["seed"] = config.seed;
    j["group"] = group_to_json(config.group);
    Json rows = Json::array();
    double worst = 0.0;
    int failures = 0;
    for (int i = 0; i < config.random_count; ++i) {
      Rng rng = root.split(static_cast<std::uint64_t>(i));
      const Triple t = random_triple(config.group, rng);
      const IdentityReport rep = identity_report(t, radius);
      for (const IdentityCheck& c : rep.checks) worst = std::max(worst, c.max_residual / c.tolerance * 1e-9);
      if (!rep.pass()) ++failures;
      Json row = identity_report_to_json(rep);
      row["index"] = i;
      rows.push_back(row);
    }
    j["triples"] = rows;
    j["count"] = config.random_count;
    j["failures"] = failures;
    j["worst_relative_residual"] = worst;
    ok = failures == 0;
    err << config.random_count << " random triples, " << failures << " failing\n";
  } else {
    const TripleFile file = triple_file_from_json(read_json_file(config.input));
    const IdentityReport rep = identity_report(file.triple, radius);
    j["identities"] = identity_report_to_json(rep);
    try {
      j["gamma_eta"] = gamma_eta_to_json(fit_gamma_eta(file.triple, radius));
    } catch (const DegenerateError& e) {
      j["gamma_eta_error"] = e.what();
    }
    ok = rep.pass();
    err << "identities " << (ok ? "pass" : "FAIL") << '\n';
  }
  j["pass"] = ok;
  emit(config, j, out);
  return ok ? kExitOk : kExitFailure;
}

int run_classify(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const TripleFile file = triple_file_from_json(read_json_file(config.input));
  ClassifyOptions options;
  options.radius = config.radius > 0 ? config.radius : 32;
  options.epsilon = config.epsilon;
  options.defect_schedule = config.schedule;
  options.ratio_tol = config.ratio_tol;
  try {
    const ClassificationResult result = classify(file.triple, options);
    emit(config, classification_to_json(result), out);
    if (result.found()) {
      err << "best match " << to_string(result.ranked.front().tag) << '\n';
      return kExitOk;
    }
    err << "no family matched\n";
    return kExitFailure;
  } catch (const RefusedError& e) {
    emit(config, Json{{"schema", kSchemaVersion}, {"refused", true}, {"reason", e.what()}}, out);
    err << "refused: " << e.what() << '\n';
    return kExitFailure;
  }
}

std::vector<std::int64_t> parse_schedule(const std::string& text) {
  std::vector<std::int64_t> radii;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      radii.push_back(std::stoll(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ParseError("bad schedule entry '" + item + "'");
    }
  }
  return radii;
}

}  // namespace

void validate_config(const RunConfig& config) {
  try {
    check_schedule(config.schedule);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("schedule: ") + e.what());
  }
  if (!(config.epsilon > 0.0)) throw ParseError("epsilon must be positive");
  if (!(config.ratio_tol > 1.0)) throw ParseError("ratio tolerance must exceed 1");
  if (config.radius < 0) throw ParseError("radius must be non-negative");
  if (config.command == Command::kClassify && config.radius != 0 && config.radius < 8) {
    throw ParseError("classify needs radius >= 8");
  }
  if (config.random_count < 0) throw ParseError("--random must be non-negative");
  const bool needs_input = config.command == Command::kVerify || config.command == Command::kClassify ||
                           (config.command == Command::kIdentities && config.random_count == 0);
  if (needs_input && config.input.empty()) throw ParseError("an input triple file is required");
  if (config.command == Command::kGenerate && config.family.empty()) throw ParseError("--family is required");
  config.group.validate();
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate_config(config);
    switch (config.command) {
      case Command::kGenerate:
        return run_generate(config, out, err);
      case Command::kVerify:
        return run_verify(config, out, err);
      case Command::kIdentities:
        return run_identities(config, out, err);
      case Command::kClassify:
        return run_classify(config, out, err);
    }
  } catch (const RangeError& e) {
    err << "overflow during scan: " << e.what() << '\n';
    return kExitFailure;
  } catch (const ConstraintViolation& e) {
    err << "validation error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bounded-defect explorer for the sine-type functional equation f(x-y) = f(x)g(y) + g(x)f(y) + h(x)h(y)."};
  app.footer(std::string(kSchemaHelp) + "\n\n" + registry_help());
  app.require_subcommand(1);

  RunConfig config;
  std::string group_text = R"({"free_rank":1,"torsion":[]})";
  std::string schedule_text = "8,16,32,64";

  auto add_group = [&](CLI::App* sub) {
    sub->add_option("--group", group_text, "group as JSON, e.g. '{\"free_rank\":1,\"torsion\":[]}'");
  };

  CLI::App* gen = app.add_subcommand("generate", "build a family instance and write its triple file");
  gen->add_option("--family", config.family, "family tag (T1..T9, P34-1..P34-4, P33)")->required();
  add_group(gen);
  gen->add_option("--params", config.params, "params JSON file; random in-range params when omitted");
  gen->add_option("--seed", config.seed, "seed for random params");
  gen->add_option("--out", config.output, "output triple file");

  CLI::App* ver = app.add_subcommand("verify", "scan the defect and report its growth verdict");
  ver->add_option("triple", config.input, "triple file")->required();
  ver->add_option("--schedule", schedule_text, "comma-separated increasing radii");
  ver->add_option("--ratio-tol", config.ratio_tol, "growth ratio threshold");
  ver->add_option("--out", config.output, "output report file");

  CLI::App* ids = app.add_subcommand("identities", "check the unconditional identities on a triple or a random suite");
  ids->add_option("triple", config.input, "triple file");
  ids->add_option("--random", config.random_count, "number of seeded random triples");
  ids->add_option("--seed", config.seed, "suite seed");
  ids->add_option("--radius", config.radius, "window radius (default 16)");
  add_group(ids);
  ids->add_option("--out", config.output, "output report file");

  CLI::App* cls = app.add_subcommand("classify", "match a triple against the family list");
  cls->add_option("triple", config.input, "triple file")->required();
  cls->add_option("--radius", config.radius, "sampling radius (default 32)");
  cls->add_option("--epsilon", config.epsilon, "relative residual tolerance");
  cls->add_option("--schedule", schedule_text, "defect schedule for the pre-check");
  cls->add_option("--ratio-tol", config.ratio_tol, "growth ratio threshold");
  cls->add_option("--out", config.output, "output result file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << "run with --help for usage\n";
    return kExitInvalid;
  }

  if (gen->parsed()) config.command = Command::kGenerate;
  if (ver->parsed()) config.command = Command::kVerify;
  if (ids->parsed()) config.command = Command::kIdentities;
  if (cls->parsed()) config.command = Command::kClassify;

  try {
    config.group = group_from_json(Json::parse(group_text));
    config.schedule = parse_schedule(schedule_text);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const nlohmann::json::exception& e) {
    err << "error: --group: " << e.what() << '\n';
    return kExitInvalid;
  }
  return run(config, out, err);
}

}  // namespace feq
