#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "feq/classifier.hpp"
#include "feq/defect.hpp"
#include "feq/families.hpp"
#include "feq/identities.hpp"

namespace feq {

using Json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "feq/1";

/// Parsed triple file: a triple, the law it is tested against, and the
/// family record when the file came from the generator.
struct TripleFile {
  Triple triple;
  EquationKind equation = EquationKind::kMinus;
  std::optional<FamilyInstance> family;
};

// Every from_json_* function throws ParseError with the offending path.

Json complex_to_json(Complex c);
Complex complex_from_json(const Json& j);

Json group_to_json(const GroupSpec& spec);
GroupSpec group_from_json(const Json& j);

Json element_to_json(const Element& x);
Element element_from_json(const Json& j, const GroupSpec& spec);

Json fnexpr_to_json(const FnExpr& e);
FnExpr fnexpr_from_json(const Json& j, const GroupSpec& spec);

Json params_to_json(const FamilyParams& p);
FamilyParams params_from_json(const Json& j, const GroupSpec& spec);

Json triple_file_to_json(const TripleFile& file);
TripleFile triple_file_from_json(const Json& j);
TripleFile triple_file_from_instance(const FamilyInstance& inst);

Json defect_report_to_json(const DefectReport& r);
Json identity_report_to_json(const IdentityReport& r);
Json gamma_eta_to_json(const GammaEtaFit& fit);
Json validation_report_to_json(const ValidationReport& r);
Json classification_to_json(const ClassificationResult& r);

/// Reads and parses a JSON file; unreadable or malformed input throws ParseError.
Json read_json_file(const std::filesystem::path& path);
/// Writes with two-space indentation and a trailing newline.
void write_json_file(const std::filesystem::path& path, const Json& j);

}  // namespace feq
