#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <string_view>
#include <utility>
#include <vector>

#include "feq/group.hpp"

namespace feq {

using Complex = std::complex<double>;

inline constexpr double kIdentityRelTol = 1e-9;
inline constexpr double kDefaultRatioTol = 1.2;
inline const std::vector<std::int64_t> kDefaultSchedule{8, 16, 32, 64};
/// Evaluation guard on multiplicative partial products.
inline constexpr double kRangeGuard = 1e150;

/// Value together with an upper bound on the magnitudes of the terms that were
/// combined to produce it. The magnitude sets the rounding-noise floor.
struct Evaluated {
  Complex value;
  double magnitude = 0.0;
};

/// Rounding allowance for a value assembled from terms of the given magnitude.
inline double noise_floor(double magnitude) noexcept { return kIdentityRelTol * (1.0 + magnitude); }

/// Closed, immutable expression tree for a complex-valued function on a group.
class FnExpr {
 public:
  enum class Kind {
    kConst,
    kAdditive,
    kMultiplicative,
    kTable,
    kSum,
    kProd,
    kScale,
    kReflect,
    kTranslate,
    kEven,
    kOdd,
  };

  struct TableData {
    std::map<Element, Complex> entries;
    Complex default_value;
    double declared_bound = 0.0;
  };

  /// The zero constant.
  FnExpr();

  static FnExpr constant(Complex c);
  /// Homomorphism into (C,+). Torsion coefficients, when given, must be zero.
  static FnExpr additive(std::vector<Complex> free_coeffs,
                         std::vector<Complex> torsion_coeffs = {});
  /// Homomorphism into (C\{0},*): r_i per free generator, a root of unity per
  /// torsion generator.
  static FnExpr multiplicative(std::vector<Complex> free_ratios,
                               std::vector<Complex> torsion_roots = {});
  static FnExpr table(std::map<Element, Complex> entries, Complex default_value,
                      double declared_bound);
  static FnExpr sum(std::vector<FnExpr> terms);
  static FnExpr prod(std::vector<FnExpr> factors);
  static FnExpr scale(Complex c, FnExpr inner);
  static FnExpr reflect(FnExpr inner);
  static FnExpr translate(Element shift, FnExpr inner);
  static FnExpr even_part(FnExpr inner);
  static FnExpr odd_part(FnExpr inner);

  Kind kind() const noexcept;
  std::string_view kind_name() const noexcept;

  Complex constant_value() const;
  /// Additive coefficients or multiplicative free ratios.
  const std::vector<Complex>& coefficients() const;
  const std::vector<Complex>& torsion_roots() const;
  const TableData& table_data() const;
  /// Sum terms, product factors, or the single wrapped expression.
  const std::vector<FnExpr>& children() const;
  Complex factor() const;
  const Element& shift() const;

  bool is_zero_constant() const noexcept;

 private:
  struct Node;
  explicit FnExpr(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

FnExpr operator+(const FnExpr& a, const FnExpr& b);
FnExpr operator-(const FnExpr& a, const FnExpr& b);
FnExpr operator-(const FnExpr& a);
FnExpr operator*(const FnExpr& a, const FnExpr& b);
FnExpr operator*(Complex c, const FnExpr& a);
FnExpr operator*(double c, const FnExpr& a);

/// Throws DimensionError / InvalidExpression if the expression does not fit
/// the group (coefficient counts, roots of unity, table keys, shifts).
void check_conforms(const FnExpr& expr, const GroupSpec& spec);

Complex eval(const FnExpr& expr, const GroupSpec& spec, const Element& x);
Evaluated eval_detail(const FnExpr& expr, const GroupSpec& spec, const Element& x);

/// Even and odd parts. Nodes of known parity short-circuit (additive maps
/// are odd, constants even); everything else is wrapped in EvenPart/OddPart.
std::pair<FnExpr, FnExpr> parity_parts(const FnExpr& expr);

struct SupNorm {
  double value = 0.0;
  Element argmax;
};

SupNorm sup_norm(const FnExpr& expr, const GroupSpec& spec, std::int64_t radius);

enum class Verdict { kBounded, kUnbounded, kInconclusive };

std::string_view to_string(Verdict v) noexcept;

/// Per-radius growth record behind a bounded/unbounded/inconclusive call.
/// `sups` are raw maxima and `noise_floors` the floor of the largest term
/// magnitude seen; `effective` is the largest excess of a value over its own
/// noise floor. Ratios and the verdict use the effective values.
struct GrowthEvidence {
  std::vector<std::int64_t> radii;
  std::vector<double> sups;
  std::vector<double> noise_floors;
  std::vector<double> effective;
  std::vector<double> ratios;
  Verdict verdict = Verdict::kInconclusive;
};

/// Applies the growth rule: bounded when the last step grows by less than
/// ratio_tol; unbounded when every step grows by more than ratio_tol and the
/// final value is at least min(10, last radius / first radius) times the
/// first; inconclusive otherwise.
GrowthEvidence classify_growth(std::vector<std::int64_t> radii, std::vector<double> sups,
                               std::vector<double> noise_floors, double ratio_tol);
/// Same rule on effective sups computed by the caller, typically point by
/// point as max(|value| - noise_floor(magnitude)) so that large terms far away
/// do not mask a signal where the terms are small.
GrowthEvidence classify_growth(std::vector<std::int64_t> radii, std::vector<double> sups,
                               std::vector<double> noise_floors, std::vector<double> effective,
                               double ratio_tol);

/// Throws std::invalid_argument unless the schedule is strictly increasing,
/// non-negative and has at least three radii.
void check_schedule(const std::vector<std::int64_t>& schedule);

GrowthEvidence boundedness_verdict(const FnExpr& expr, const GroupSpec& spec,
                                   const std::vector<std::int64_t>& schedule = kDefaultSchedule,
                                   double ratio_tol = kDefaultRatioTol);

/// Structural upper bound on sup |expr| over the whole group; +inf when the
/// structure does not certify boundedness (additive terms, |ratio| != 1).
double bound_estimate(const FnExpr& expr);

/// True when the node is multiplicative and every ratio/root squares to 1,
/// i.e. m(-x) = m(x).
bool is_even_multiplicative(const FnExpr& expr, double tol = 1e-12);

/// 1/m for a multiplicative node.
FnExpr reciprocal_multiplicative(const FnExpr& m);

}  // namespace feq
