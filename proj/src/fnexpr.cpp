#include "feq/fnexpr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "feq/error.hpp"

namespace feq {

struct FnExpr::Node {
  Kind kind = Kind::kConst;
  Complex c{0.0, 0.0};
  std::vector<Complex> coeffs;
  std::vector<Complex> roots;
  TableData table;
  std::vector<FnExpr> children;
  Element shift;
};

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void guard(double magnitude) {
  if (!(magnitude <= kRangeGuard)) {
    throw RangeError("multiplicative partial exceeds magnitude 1e150");
  }
}

/// r^k by repeated squaring with the range guard on every partial.
Complex guarded_pow(Complex r, std::int64_t k) {
  if (k < 0) {
    r = Complex(1.0, 0.0) / r;
    k = -k;
  }
  Complex result(1.0, 0.0);
  Complex base = r;
  while (k > 0) {
    if (k & 1) {
      result *= base;
      guard(std::abs(result));
    }
    k >>= 1;
    if (k > 0) {
      base *= base;
      guard(std::abs(base));
    }
  }
  return result;
}

}  // namespace

FnExpr::FnExpr() : node_(std::make_shared<const Node>()) {}

FnExpr::FnExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

FnExpr FnExpr::constant(Complex c) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kConst;
  n->c = c;
  return FnExpr(std::move(n));
}

FnExpr FnExpr::additive(std::vector<Complex> free_coeffs, std::vector<Complex> torsion_coeffs) {
  for (const Complex& t : torsion_coeffs) {
    if (t != Complex(0.0, 0.0)) {
      throw InvalidExpression("additive maps vanish on torsion; nonzero torsion coefficient");
    }
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::kAdditive;
  n->coeffs = std::move(free_coeffs);
  return FnExpr(std::move(n));
}

FnExpr FnExpr::multiplicative(std::vector<Complex> free_ratios, std::vector<Complex> torsion_roots) {
  for (const Complex& r : free_ratios) {
    if (r == Complex(0.0, 0.0)) {
      throw InvalidExpression("multiplicative ratio must be nonzero");
    }
  }
  for (const Complex& r : torsion_roots) {
    if (std::abs(std::abs(r) - 1.0) > 1e-9) {
      throw InvalidExpression("torsion root must be unimodular");
    }
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::kMultiplicative;
  n->coeffs = std::move(free_ratios);
  n->roots = std::move(torsion_roots);
  return FnExpr(std::move(n));
}

FnExpr FnExpr::table(std::map<Element, Complex> entries, Complex default_value,
                     double declared_bound) {
  if (!(declared_bound >= 0.0)) {
    throw InvalidExpression("table bound must be non-negative");
  }
  const double slack = declared_bound * 1e-12;
  if (std::abs(default_value) > declared_bound + slack) {
    throw InvalidExpression("table default exceeds declared bound");
  }
  for (const auto& [x, v] : entries) {
    if (std::abs(v) > declared_bound + slack) {
      throw InvalidExpression("table entry at " + to_string(x) + " exceeds declared bound");
    }
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::kTable;
  n->table = TableData{std::move(entries), default_value, declared_bound};
  return FnExpr(std::move(n));
}

FnExpr FnExpr::sum(std::vector<FnExpr> terms) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kSum;
  n->children = std::move(terms);
  return FnExpr(std::move(n));
}

FnExpr FnExpr::prod(std::vector<FnExpr> factors) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kProd;
  n->children = std::move(factors);
  return FnExpr(std::move(n));
}

FnExpr FnExpr::scale(Complex c, FnExpr inner) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kScale;
  n->c = c;
  n->children.push_back(std::move(inner));
  return FnExpr(std::move(n));
}

namespace {

template <typename Node, typename Kind>
std::shared_ptr<Node> wrap(Kind kind, FnExpr inner) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->children.push_back(std::move(inner));
  return n;
}

}  // namespace

FnExpr FnExpr::reflect(FnExpr inner) { return FnExpr(wrap<Node>(Kind::kReflect, std::move(inner))); }

FnExpr FnExpr::translate(Element shift, FnExpr inner) {
  auto n = wrap<Node>(Kind::kTranslate, std::move(inner));
  n->shift = std::move(shift);
  return FnExpr(std::move(n));
}

FnExpr FnExpr::even_part(FnExpr inner) { return FnExpr(wrap<Node>(Kind::kEven, std::move(inner))); }

FnExpr FnExpr::odd_part(FnExpr inner) { return FnExpr(wrap<Node>(Kind::kOdd, std::move(inner))); }

FnExpr::Kind FnExpr::kind() const noexcept { return node_->kind; }

std::string_view FnExpr::kind_name() const noexcept {
  switch (node_->kind) {
    case Kind::kConst: return "const";
    case Kind::kAdditive: return "additive";
    case Kind::kMultiplicative: return "multiplicative";
    case Kind::kTable: return "table";
    case Kind::kSum: return "sum";
    case Kind::kProd: return "prod";
    case Kind::kScale: return "scale";
    case Kind::kReflect: return "reflect";
    case Kind::kTranslate: return "translate";
    case Kind::kEven: return "even";
    case Kind::kOdd: return "odd";
  }
  return "?";
}

Complex FnExpr::constant_value() const {
  if (node_->kind != Kind::kConst) throw std::logic_error("not a constant node");
  return node_->c;
}

const std::vector<Complex>& FnExpr::coefficients() const {
  if (node_->kind != Kind::kAdditive && node_->kind != Kind::kMultiplicative) {
    throw std::logic_error("not an additive or multiplicative node");
  }
  return node_->coeffs;
}

const std::vector<Complex>& FnExpr::torsion_roots() const {
  if (node_->kind != Kind::kMultiplicative) throw std::logic_error("not a multiplicative node");
  return node_->roots;
}

const FnExpr::TableData& FnExpr::table_data() const {
  if (node_->kind != Kind::kTable) throw std::logic_error("not a table node");
  return node_->table;
}

const std::vector<FnExpr>& FnExpr::children() const { return node_->children; }

Complex FnExpr::factor() const {
  if (node_->kind != Kind::kScale) throw std::logic_error("not a scale node");
  return node_->c;
}

const Element& FnExpr::shift() const {
  if (node_->kind != Kind::kTranslate) throw std::logic_error("not a translate node");
  return node_->shift;
}

bool FnExpr::is_zero_constant() const noexcept {
  return node_->kind == Kind::kConst && node_->c == Complex(0.0, 0.0);
}

FnExpr operator+(const FnExpr& a, const FnExpr& b) {
  if (a.is_zero_constant()) return b;
  if (b.is_zero_constant()) return a;
  std::vector<FnExpr> terms;
  for (const FnExpr* e : {&a, &b}) {
    if (e->kind() == FnExpr::Kind::kSum) {
      terms.insert(terms.end(), e->children().begin(), e->children().end());
    } else {
      terms.push_back(*e);
    }
  }
  return FnExpr::sum(std::move(terms));
}

FnExpr operator-(const FnExpr& a) { return FnExpr::scale(Complex(-1.0, 0.0), a); }

FnExpr operator-(const FnExpr& a, const FnExpr& b) {
  if (b.is_zero_constant()) return a;
  return a + (-b);
}

FnExpr operator*(const FnExpr& a, const FnExpr& b) {
  std::vector<FnExpr> factors;
  for (const FnExpr* e : {&a, &b}) {
    if (e->kind() == FnExpr::Kind::kProd) {
      factors.insert(factors.end(), e->children().begin(), e->children().end());
    } else {
      factors.push_back(*e);
    }
  }
  return FnExpr::prod(std::move(factors));
}

FnExpr operator*(Complex c, const FnExpr& a) {
  if (c == Complex(1.0, 0.0)) return a;
  return FnExpr::scale(c, a);
}

FnExpr operator*(double c, const FnExpr& a) { return Complex(c, 0.0) * a; }

void check_conforms(const FnExpr& expr, const GroupSpec& spec) {
  using Kind = FnExpr::Kind;
  switch (expr.kind()) {
    case Kind::kConst:
      return;
    case Kind::kAdditive:
      if (expr.coefficients().size() != spec.free_rank) {
        throw DimensionError("additive node has " + std::to_string(expr.coefficients().size()) +
                             " coefficients, group free rank is " + std::to_string(spec.free_rank));
      }
      return;
    case Kind::kMultiplicative: {
      if (expr.coefficients().size() != spec.free_rank ||
          expr.torsion_roots().size() != spec.torsion_orders.size()) {
        throw DimensionError("multiplicative node does not match the group rank");
      }
      for (std::size_t i = 0; i < spec.torsion_orders.size(); ++i) {
        const Complex p = std::pow(expr.torsion_roots()[i], static_cast<int>(spec.torsion_orders[i]));
        if (std::abs(p - Complex(1.0, 0.0)) > 1e-9) {
          throw InvalidExpression("torsion root is not an n-th root of unity");
        }
      }
      return;
    }
    case Kind::kTable:
      for (const auto& [x, v] : expr.table_data().entries) check_conforms(spec, x);
      return;
    case Kind::kTranslate:
      check_conforms(spec, expr.shift());
      [[fallthrough]];
    default:
      for (const FnExpr& child : expr.children()) check_conforms(child, spec);
  }
}

Evaluated eval_detail(const FnExpr& expr, const GroupSpec& spec, const Element& x) {
  using Kind = FnExpr::Kind;
  switch (expr.kind()) {
    case Kind::kConst: {
      const Complex c = expr.constant_value();
      return {c, std::abs(c)};
    }
    case Kind::kAdditive: {
      const auto& coeffs = expr.coefficients();
      if (coeffs.size() != x.free.size()) throw DimensionError("additive node rank mismatch");
      Complex v(0.0, 0.0);
      double mag = 0.0;
      for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const auto xi = static_cast<double>(x.free[i]);
        v += coeffs[i] * xi;
        mag += std::abs(coeffs[i]) * std::abs(xi);
      }
      return {v, mag};
    }
    case Kind::kMultiplicative: {
      const auto& ratios = expr.coefficients();
      const auto& roots = expr.torsion_roots();
      if (ratios.size() != x.free.size() || roots.size() != x.torsion.size()) {
        throw DimensionError("multiplicative node rank mismatch");
      }
      Complex v(1.0, 0.0);
      for (std::size_t i = 0; i < ratios.size(); ++i) {
        v *= guarded_pow(ratios[i], x.free[i]);
        guard(std::abs(v));
      }
      for (std::size_t i = 0; i < roots.size(); ++i) {
        v *= guarded_pow(roots[i], x.torsion[i]);
      }
      return {v, std::abs(v)};
    }
    case Kind::kTable: {
      const auto& t = expr.table_data();
      auto it = t.entries.find(x);
      const Complex v = it == t.entries.end() ? t.default_value : it->second;
      return {v, std::abs(v)};
    }
    case Kind::kSum: {
      Evaluated out{Complex(0.0, 0.0), 0.0};
      for (const FnExpr& term : expr.children()) {
        const Evaluated e = eval_detail(term, spec, x);
        out.value += e.value;
        out.magnitude += e.magnitude;
      }
      return out;
    }
    case Kind::kProd: {
      Evaluated out{Complex(1.0, 0.0), 1.0};
      for (const FnExpr& factor : expr.children()) {
        const Evaluated e = eval_detail(factor, spec, x);
        out.value *= e.value;
        out.magnitude *= e.magnitude;
        guard(out.magnitude);
      }
      return out;
    }
    case Kind::kScale: {
      const Evaluated e = eval_detail(expr.children().front(), spec, x);
      return {expr.factor() * e.value, std::abs(expr.factor()) * e.magnitude};
    }
    case Kind::kReflect:
      return eval_detail(expr.children().front(), spec, neg(spec, x));
    case Kind::kTranslate:
      return eval_detail(expr.children().front(), spec, add(spec, x, expr.shift()));
    case Kind::kEven:
    case Kind::kOdd: {
      const FnExpr& inner = expr.children().front();
      const Evaluated a = eval_detail(inner, spec, x);
      const Evaluated b = eval_detail(inner, spec, neg(spec, x));
      const Complex v = expr.kind() == Kind::kEven ? (a.value + b.value) * 0.5
                                                   : (a.value - b.value) * 0.5;
      return {v, 0.5 * (a.magnitude + b.magnitude)};
    }
  }
  throw std::logic_error("unknown expression kind");
}

Complex eval(const FnExpr& expr, const GroupSpec& spec, const Element& x) {
  return eval_detail(expr, spec, x).value;
}

std::pair<FnExpr, FnExpr> parity_parts(const FnExpr& expr) {
  using Kind = FnExpr::Kind;
  switch (expr.kind()) {
    case Kind::kConst:
      return {expr, FnExpr()};
    case Kind::kAdditive:
      return {FnExpr(), expr};
    case Kind::kMultiplicative:
      if (is_even_multiplicative(expr)) return {expr, FnExpr()};
      break;
    case Kind::kScale: {
      auto [e, o] = parity_parts(expr.children().front());
      const Complex c = expr.factor();
      return {e.is_zero_constant() ? e : c * e, o.is_zero_constant() ? o : c * o};
    }
    case Kind::kSum: {
      FnExpr even;
      FnExpr odd;
      for (const FnExpr& term : expr.children()) {
        auto [e, o] = parity_parts(term);
        even = even + e;
        odd = odd + o;
      }
      return {even, odd};
    }
    default:
      break;
  }
  return {FnExpr::even_part(expr), FnExpr::odd_part(expr)};
}

SupNorm sup_norm(const FnExpr& expr, const GroupSpec& spec, std::int64_t radius) {
  WindowIndex index(spec, radius);
  SupNorm out{0.0, identity(spec)};
  bool first = true;
  for (std::size_t i = 0; i < index.size(); ++i) {
    Element x = index.element_at(i);
    const double v = std::abs(eval(expr, spec, x));
    if (first || v > out.value) {
      out.value = v;
      out.argmax = std::move(x);
      first = false;
    }
  }
  return out;
}

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::kBounded: return "bounded";
    case Verdict::kUnbounded: return "unbounded";
    case Verdict::kInconclusive: return "inconclusive";
  }
  return "?";
}

void check_schedule(const std::vector<std::int64_t>& schedule) {
  if (schedule.size() < 3) throw std::invalid_argument("schedule needs at least three radii");
  if (schedule.front() < 0) throw std::invalid_argument("schedule radii must be non-negative");
  for (std::size_t i = 1; i < schedule.size(); ++i) {
    if (schedule[i] <= schedule[i - 1]) {
      throw std::invalid_argument("schedule must be strictly increasing");
    }
  }
}

namespace {

// Total growth demanded across the schedule: 10x, relaxed to the radius span
// for short schedules so that linear growth still counts.
double growth_factor(const std::vector<std::int64_t>& radii) {
  const double first = static_cast<double>(std::max<std::int64_t>(radii.front(), 1));
  const double span = static_cast<double>(radii.back()) / first;
  return std::min(10.0, span) * (1.0 - 1e-6);
}

}  // namespace

GrowthEvidence classify_growth(std::vector<std::int64_t> radii, std::vector<double> sups,
                               std::vector<double> noise_floors, double ratio_tol) {
  std::vector<double> effective(sups.size());
  for (std::size_t i = 0; i < sups.size(); ++i) effective[i] = std::max(0.0, sups[i] - noise_floors[i]);
  return classify_growth(std::move(radii), std::move(sups), std::move(noise_floors), std::move(effective),
                         ratio_tol);
}

GrowthEvidence classify_growth(std::vector<std::int64_t> radii, std::vector<double> sups,
                               std::vector<double> noise_floors, std::vector<double> effective,
                               double ratio_tol) {
  GrowthEvidence ev;
  ev.radii = std::move(radii);
  ev.sups = std::move(sups);
  ev.noise_floors = std::move(noise_floors);
  ev.effective = std::move(effective);
  for (std::size_t i = 1; i < ev.effective.size(); ++i) {
    const double prev = ev.effective[i - 1];
    const double cur = ev.effective[i];
    double ratio = 1.0;
    if (prev > 0.0) {
      ratio = cur / prev;
    } else if (cur > 0.0) {
      ratio = kInf;
    }
    ev.ratios.push_back(ratio);
  }
  if (ev.ratios.empty()) {
    ev.verdict = Verdict::kInconclusive;
    return ev;
  }
  const bool all_grow = std::all_of(ev.ratios.begin(), ev.ratios.end(),
                                    [&](double r) { return r > ratio_tol; });
  if (ev.ratios.back() < ratio_tol) {
    ev.verdict = Verdict::kBounded;
  } else if (all_grow && ev.effective.back() >= growth_factor(ev.radii) * ev.effective.front()) {
    ev.verdict = Verdict::kUnbounded;
  } else {
    ev.verdict = Verdict::kInconclusive;
  }
  return ev;
}

GrowthEvidence boundedness_verdict(const FnExpr& expr, const GroupSpec& spec,
                                   const std::vector<std::int64_t>& schedule, double ratio_tol) {
  check_schedule(schedule);
  WindowIndex index(spec, schedule.back());
  // Windows are nested, so a single pass records each point at its level.
  std::vector<double> level_sup(static_cast<std::size_t>(schedule.back()) + 1, 0.0);
  std::vector<double> level_mag(level_sup.size(), 0.0);
  std::vector<double> level_eff(level_sup.size(), 0.0);
  for (std::size_t i = 0; i < index.size(); ++i) {
    const Element x = index.element_at(i);
    const Evaluated e = eval_detail(expr, spec, x);
    const auto level = static_cast<std::size_t>(x.free_norm());
    level_sup[level] = std::max(level_sup[level], std::abs(e.value));
    level_mag[level] = std::max(level_mag[level], e.magnitude);
    level_eff[level] = std::max(level_eff[level], std::abs(e.value) - noise_floor(e.magnitude));
  }
  std::vector<double> sups;
  std::vector<double> floors;
  std::vector<double> effective;
  double run_sup = 0.0;
  double run_mag = 0.0;
  double run_eff = 0.0;
  std::size_t next = 0;
  for (std::size_t level = 0; level < level_sup.size() && next < schedule.size(); ++level) {
    run_sup = std::max(run_sup, level_sup[level]);
    run_mag = std::max(run_mag, level_mag[level]);
    run_eff = std::max(run_eff, level_eff[level]);
    while (next < schedule.size() && static_cast<std::size_t>(schedule[next]) == level) {
      sups.push_back(run_sup);
      floors.push_back(noise_floor(run_mag));
      effective.push_back(run_eff);
      ++next;
    }
  }
  return classify_growth(schedule, std::move(sups), std::move(floors), std::move(effective), ratio_tol);
}

double bound_estimate(const FnExpr& expr) {
  using Kind = FnExpr::Kind;
  switch (expr.kind()) {
    case Kind::kConst:
      return std::abs(expr.constant_value());
    case Kind::kAdditive:
      for (const Complex& c : expr.coefficients()) {
        if (c != Complex(0.0, 0.0)) return kInf;
      }
      return 0.0;
    case Kind::kMultiplicative:
      for (const Complex& r : expr.coefficients()) {
        if (std::abs(std::abs(r) - 1.0) > 1e-12) return kInf;
      }
      return 1.0;
    case Kind::kTable:
      return expr.table_data().declared_bound;
    case Kind::kSum: {
      double total = 0.0;
      for (const FnExpr& t : expr.children()) total += bound_estimate(t);
      return total;
    }
    case Kind::kProd: {
      double total = 1.0;
      bool unbounded = false;
      for (const FnExpr& f : expr.children()) {
        const double b = bound_estimate(f);
        if (b == 0.0) return 0.0;
        if (std::isinf(b)) {
          unbounded = true;
        } else {
          total *= b;
        }
      }
      return unbounded ? kInf : total;
    }
    case Kind::kScale: {
      const double c = std::abs(expr.factor());
      if (c == 0.0) return 0.0;
      return c * bound_estimate(expr.children().front());
    }
    case Kind::kReflect:
    case Kind::kTranslate:
    case Kind::kEven:
    case Kind::kOdd:
      return bound_estimate(expr.children().front());
  }
  return kInf;
}

bool is_even_multiplicative(const FnExpr& expr, double tol) {
  if (expr.kind() != FnExpr::Kind::kMultiplicative) return false;
  auto squares_to_one = [tol](const Complex& r) {
    return std::abs(r * r - Complex(1.0, 0.0)) <= tol;
  };
  return std::all_of(expr.coefficients().begin(), expr.coefficients().end(), squares_to_one) &&
         std::all_of(expr.torsion_roots().begin(), expr.torsion_roots().end(), squares_to_one);
}

FnExpr reciprocal_multiplicative(const FnExpr& m) {
  if (m.kind() != FnExpr::Kind::kMultiplicative) {
    throw InvalidExpression("reciprocal requires a multiplicative node");
  }
  std::vector<Complex> ratios;
  std::vector<Complex> roots;
  for (const Complex& r : m.coefficients()) ratios.push_back(Complex(1.0, 0.0) / r);
  for (const Complex& r : m.torsion_roots()) roots.push_back(std::conj(r));
  return FnExpr::multiplicative(std::move(ratios), std::move(roots));
}

}  // namespace feq
