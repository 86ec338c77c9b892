#pragma once

#include <cstdint>
#include <vector>

#include "feq/fnexpr.hpp"
#include "feq/group.hpp"

namespace feq {

struct Triple {
  GroupSpec spec;
  FnExpr f;
  FnExpr g;
  FnExpr h;
};

/// Which addition law the triple is tested against:
/// minus: f(x-y) = f(x)g(y) + g(x)f(y) + h(x)h(y);
/// plus:  f(x+y) = f(x)g(y) + g(x)f(y) + h(x)h(y).
enum class EquationKind { kMinus, kPlus };

std::string_view to_string(EquationKind k) noexcept;

void check_conforms(const Triple& t);

Complex psi(const Triple& t, const Element& x, const Element& y);
/// psi for the plus law: f(x+y) - f(x)g(y) - g(x)f(y) - h(x)h(y).
Complex plus_defect(const Triple& t, const Element& x, const Element& y);
Complex defect(const Triple& t, EquationKind kind, const Element& x, const Element& y);
/// f(x-y) - f(y-x).
Complex antisym_defect(const Triple& t, const Element& x, const Element& y);

/// f, g, h evaluated once on window(radius) for repeated pair scans.
class TripleCache {
 public:
  TripleCache(const Triple& t, std::int64_t radius);

  const WindowIndex& index() const noexcept { return index_; }
  const GroupSpec& spec() const noexcept { return index_.spec(); }

  const Evaluated& f(const Element& x) const { return f_[index_.index_of(x)]; }
  const Evaluated& g(const Element& x) const { return g_[index_.index_of(x)]; }
  const Evaluated& h(const Element& x) const { return h_[index_.index_of(x)]; }
  const Evaluated& f_at(std::size_t i) const { return f_[i]; }
  const Evaluated& g_at(std::size_t i) const { return g_[i]; }
  const Evaluated& h_at(std::size_t i) const { return h_[i]; }

  /// Defect value together with the sum of its four term magnitudes.
  Evaluated defect(EquationKind kind, const Element& x, const Element& y) const;

 private:
  WindowIndex index_;
  std::vector<Evaluated> f_;
  std::vector<Evaluated> g_;
  std::vector<Evaluated> h_;
};

struct RadiusRecord {
  std::int64_t radius = 0;
  double sup = 0.0;
  Element argmax_x;
  Element argmax_y;
  double noise_floor = 0.0;
};

struct DefectReport {
  EquationKind equation = EquationKind::kMinus;
  std::vector<RadiusRecord> per_radius;
  GrowthEvidence growth;
  /// 1 + the largest term magnitude |f(x-y)| + |f(x)g(y)| + ... over the
  /// largest scanned window; the last noise floor is 1e-9 times this.
  double scale = 1.0;

  Verdict verdict() const noexcept { return growth.verdict; }
  double max_sup() const noexcept { return per_radius.empty() ? 0.0 : per_radius.back().sup; }
};

/// Scans window x window at every scheduled radius. Sups are cumulative, so
/// they are nondecreasing; the argmax is the first maximal pair in scan order.
DefectReport defect_report(const Triple& t, const std::vector<std::int64_t>& schedule = kDefaultSchedule,
                           double ratio_tol = kDefaultRatioTol,
                           EquationKind kind = EquationKind::kMinus);

}  // namespace feq
