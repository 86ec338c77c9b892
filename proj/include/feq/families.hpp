#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "feq/defect.hpp"
#include "feq/fnexpr.hpp"

namespace feq {

enum class FamilyTag { T1, T2, T3, T4, T5, T6, T7, T8, T9, P34_1, P34_2, P34_3, P34_4, P33 };

std::string_view to_string(FamilyTag tag) noexcept;
/// Accepts "T7", "P34-1" and "P34_1" spellings. Throws ParseError.
FamilyTag parse_family_tag(std::string_view name);
const std::vector<FamilyTag>& all_family_tags();

enum class CosineKind { kCharacterPair, kAdditiveDegenerate };

/// Recipe for a solution (f0, g0) of f0(x+y) = f0(x)f0(y) - g0(x)g0(y).
struct CosinePair {
  CosineKind kind = CosineKind::kCharacterPair;
  /// character_pair: chi1, chi2. additive_degenerate: chi1 is chi, a is the additive map.
  FnExpr chi1;
  FnExpr chi2;
  FnExpr a;
};

/// character_pair: f0 = (chi1+chi2)/2, g0 = (chi1-chi2)/(2i);
/// additive_degenerate: f0 = chi(1+a), g0 = chi a.
/// The result is checked against the cosine equation on the radius-16 window;
/// a residual above tolerance throws ConstraintViolation.
std::pair<FnExpr, FnExpr> make_cosine_pair(const CosinePair& pair, const GroupSpec& spec);

enum class T9Form { kNone, kCosine, kQuadratic };

/// Tag-specific parameter record. Scalars: alpha, beta, delta, lambda, rho.
/// Functions: m, M, a, a1, b, phi, f0, g0 (and f, g, h where the family
/// takes them verbatim). T9 form kCosine builds (F0, G0, H0) from the T6
/// shape and kQuadratic from the T7 shape.
struct FamilyParams {
  std::map<std::string, Complex> scalars;
  std::map<std::string, FnExpr> functions;
  std::optional<CosinePair> cosine_pair;
  T9Form form = T9Form::kNone;

  bool has_scalar(const std::string& name) const { return scalars.count(name) > 0; }
  bool has_function(const std::string& name) const { return functions.count(name) > 0; }
  Complex scalar_or(const std::string& name, Complex fallback) const;
  FnExpr function_or_zero(const std::string& name) const;
};

struct FamilyInfo {
  FamilyTag tag;
  EquationKind equation;
  std::vector<std::string> required_scalars;
  std::vector<std::string> optional_scalars;
  std::vector<std::string> required_functions;
  std::vector<std::string> optional_functions;
  bool uses_cosine_pair = false;
  std::string formulas;
  std::vector<std::string> constraints;
  std::vector<std::string> containments;
};

const std::vector<FamilyInfo>& family_registry();
const FamilyInfo& family_info(FamilyTag tag);

struct FamilyInstance {
  FamilyTag tag = FamilyTag::T8;
  FamilyParams params;
  Triple triple;
  EquationKind equation = EquationKind::kMinus;
  /// Triangle-inequality bound on sup |defect| (0 for exact families,
  /// +inf when the parameters do not certify one).
  double defect_bound = 0.0;
};

/// Builds the triple from the displayed formulas without checking constraints.
/// Missing required parameters still throw ConstraintViolation.
FamilyInstance assemble_family(FamilyTag tag, const FamilyParams& params, const GroupSpec& spec);

/// assemble_family followed by the constraint checks of validate_instance on
/// the radius-16 window; any failed constraint throws ConstraintViolation.
FamilyInstance make_family(FamilyTag tag, const FamilyParams& params, const GroupSpec& spec);

struct ValidationCheck {
  std::string name;
  bool passed = true;
  double value = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::int64_t radius = 0;
  std::vector<ValidationCheck> constraints;
  DefectReport defect;
  bool defect_bounded = false;
  bool defect_within_bound = false;

  bool constraints_ok() const noexcept;
  bool ok() const noexcept;
  std::vector<std::string> failures() const;
};

/// Re-checks the tag's constraints (parities, homomorphism and boundedness,
/// defining-equation residuals) on window(radius) and scans the defect on the
/// schedule {r/8, r/4, r/2, r}. radius >= 8.
ValidationReport validate_instance(const FamilyInstance& inst, std::int64_t radius);

/// Constraint checks only.
std::vector<ValidationCheck> check_constraints(const FamilyInstance& inst, std::int64_t radius);

/// rho required by T9: (1 + lambda^2 delta^2) / (2 lambda^2) for the cosine
/// form, delta^2 / 2 for the quadratic form.
Complex t9_required_rho(T9Form form, Complex lambda, Complex delta);

}  // namespace feq
