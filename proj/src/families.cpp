#include "feq/families.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "feq/error.hpp"
#include "feq/sampling.hpp"

namespace feq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const Complex kI(0.0, 1.0);

struct TagName {
  FamilyTag tag;
  std::string_view name;
};

constexpr TagName kTagNames[] = {
    {FamilyTag::T1, "T1"},       {FamilyTag::T2, "T2"},       {FamilyTag::T3, "T3"},
    {FamilyTag::T4, "T4"},       {FamilyTag::T5, "T5"},       {FamilyTag::T6, "T6"},
    {FamilyTag::T7, "T7"},       {FamilyTag::T8, "T8"},       {FamilyTag::T9, "T9"},
    {FamilyTag::P34_1, "P34-1"}, {FamilyTag::P34_2, "P34-2"}, {FamilyTag::P34_3, "P34-3"},
    {FamilyTag::P34_4, "P34-4"}, {FamilyTag::P33, "P33"},
};

}  // namespace

std::string_view to_string(FamilyTag tag) noexcept {
  for (const TagName& t : kTagNames) {
    if (t.tag == tag) return t.name;
  }
  return "?";
}

FamilyTag parse_family_tag(std::string_view name) {
  std::string norm(name);
  std::replace(norm.begin(), norm.end(), '_', '-');
  for (const TagName& t : kTagNames) {
    if (t.name == norm) return t.tag;
  }
  throw ParseError("unknown family tag '" + std::string(name) + "'");
}

const std::vector<FamilyTag>& all_family_tags() {
  static const std::vector<FamilyTag> tags = [] {
    std::vector<FamilyTag> out;
    for (const TagName& t : kTagNames) out.push_back(t.tag);
    return out;
  }();
  return tags;
}

Complex FamilyParams::scalar_or(const std::string& name, Complex fallback) const {
  auto it = scalars.find(name);
  return it == scalars.end() ? fallback : it->second;
}

FnExpr FamilyParams::function_or_zero(const std::string& name) const {
  auto it = functions.find(name);
  return it == functions.end() ? FnExpr() : it->second;
}

const std::vector<FamilyInfo>& family_registry() {
  static const std::vector<FamilyInfo> registry = {
      {FamilyTag::T1, EquationKind::kMinus, {}, {}, {"h"}, {"g"}, false,
       "f = 0, g arbitrary, h bounded",
       {"h bounded"},
       {"contained in T2 whenever g is bounded"}},
      {FamilyTag::T2, EquationKind::kMinus, {}, {}, {"f", "g", "h"}, {}, false,
       "f, g, h all bounded",
       {"f bounded", "g bounded", "h bounded"},
       {"contains every bounded instance of T3, T5 and P34 shapes"}},
      {FamilyTag::T3, EquationKind::kMinus, {"alpha"}, {"lambda"}, {"m"}, {"b", "phi"}, false,
       "f = alpha m - alpha b; g = (1 - alpha lambda^2)/2 m + (1 + alpha lambda^2)/2 b - lambda phi; "
       "h = alpha lambda m - alpha lambda b + phi",
       {"alpha nonzero", "m multiplicative", "m even or bounded", "b bounded", "phi bounded"},
       {"an even multiplicative m satisfies m^2 = 1, so every T3 instance is bounded and lies in T2"}},
      {FamilyTag::T4, EquationKind::kMinus, {}, {"lambda"}, {}, {"f0", "g0", "b"}, false,
       "f = f0; g = -lambda^2/2 f0 + g0 - lambda b; h = lambda f0 + b; "
       "f0(x-y) = f0(x)g0(y) + g0(x)f0(y)",
       {"b bounded", "f0, g0 satisfy f0(x-y) = f0(x)g0(y) + g0(x)f0(y)"},
       {"pairs are accepted by window residual; built-in pairs f0 = c, g0 = 1/2 and f0 = 0"}},
      {FamilyTag::T5, EquationKind::kMinus, {"lambda"}, {"rho"}, {}, {"f0", "g0", "b"}, true,
       "f = -lambda^2 f0 + lambda^2 b; g = (1 + rho^2)/2 f0 + rho g0 + (1 - rho^2)/2 b; "
       "h = lambda rho f0 + lambda g0 - lambda rho b",
       {"lambda nonzero", "f0 even", "g0 even", "cosine equation", "b bounded"},
       {"even cosine pairs built from characters are bounded, so T5 instances lie in T2"}},
      {FamilyTag::T6, EquationKind::kMinus, {"lambda"}, {}, {}, {"f0", "g0", "b"}, true,
       "f = lambda^2 f0 - lambda^2 b; g = 1/2 f0 + 1/2 b; h = lambda g0",
       {"lambda nonzero", "f0 even", "g0 odd", "cosine equation", "b bounded"},
       {"b = 0 gives an exact solution, also T8"}},
      {FamilyTag::T7, EquationKind::kMinus, {}, {}, {"m", "a"}, {"b"}, false,
       "f = 1/2 a^2 m + b; g = m; h = -i a m",
       {"m multiplicative", "m bounded", "m even", "a additive", "a nonzero", "b odd", "b bounded"},
       {"b = 0 gives an exact solution, also T8"}},
      {FamilyTag::T8, EquationKind::kMinus, {}, {}, {"f", "g", "h"}, {}, false,
       "f(x-y) = f(x)g(y) + g(x)f(y) + h(x)h(y) exactly",
       {"exact equation"},
       {"contains every exact instance of the other families"}},
      {FamilyTag::T9, EquationKind::kMinus, {"delta"}, {"rho", "lambda"}, {}, {"phi", "b", "m", "a", "f0", "g0"},
       true,
       "f = F0 + phi; g = -delta^2/2 F0 + G0 + delta H0 - rho phi; h = -delta F0 + H0 - delta phi; "
       "(F0, G0, H0) of the T6 shape (form cosine) or the T7 shape (form quadratic)",
       {"delta nonzero", "phi odd", "phi bounded",
        "form cosine: b even and rho = (1 + lambda^2 delta^2)/(2 lambda^2)",
        "form quadratic: b = 0 and rho = delta^2/2"},
       {"phi = 0 gives an exact solution, also T8"}},
      {FamilyTag::P34_1, EquationKind::kPlus, {"lambda"}, {"rho"}, {}, {"f0", "g0", "b"}, true,
       "plus law; f = -lambda^2 f0 + lambda^2 b; g = (1 + rho^2)/2 f0 + rho g0 + (1 - rho^2)/2 b; "
       "h = lambda rho f0 + lambda g0 - lambda rho b",
       {"lambda nonzero", "cosine equation", "b bounded"},
       {}},
      {FamilyTag::P34_2, EquationKind::kPlus, {"lambda"}, {"beta"}, {"m", "M", "a"}, {"b"}, false,
       "plus law; f = lambda^2 M + a m + b; "
       "g = beta lambda (1 - beta lambda/2) M + (1 - beta lambda) m - beta^2/2 a m - beta^2/2 b; "
       "h = lambda (1 - beta lambda) M - lambda m - beta a m - beta b",
       {"lambda nonzero", "m multiplicative", "m bounded", "M multiplicative", "M unbounded",
        "a additive", "a nonzero", "b bounded"},
       {"exact only for b = -lambda^2 m; b = 0 leaves the defect -lambda^2 m(x)m(y)"}},
      {FamilyTag::P34_3, EquationKind::kPlus, {}, {"beta"}, {"m", "a"}, {"a1", "b"}, false,
       "plus law; f = 1/2 a^2 m + 1/2 a1 m + b; "
       "g = -beta^2/4 a^2 m + beta a m - beta^2/4 a1 m + m - beta^2/2 b; "
       "h = -beta/2 a^2 m + a m - beta/2 a1 m - beta b",
       {"m multiplicative", "m bounded", "a additive", "a nonzero", "a1 additive", "b bounded"},
       {}},
      {FamilyTag::P34_4, EquationKind::kPlus, {}, {"beta"}, {"m", "a"}, {"f", "a1", "b"}, false,
       "plus law; f(x+y) = f(x)m(y) + m(x)f(y) + (a m + b)(x)(a m + b)(y); "
       "g = -beta^2/2 f + (1 + beta a) m + beta b; h = -beta f + a m + b; "
       "default f = 1/2 a^2 m + a1 m when b = 0",
       {"m multiplicative", "m bounded", "a additive", "a nonzero", "b bounded", "f equation"},
       {}},
      {FamilyTag::P33, EquationKind::kPlus, {}, {}, {"m", "a"}, {}, false,
       "plus law with g = m; f = 1/2 a^2 m; h = a m",
       {"m multiplicative", "m even", "a additive", "a nonzero"},
       {}},
  };
  return registry;
}

const FamilyInfo& family_info(FamilyTag tag) {
  for (const FamilyInfo& info : family_registry()) {
    if (info.tag == tag) return info;
  }
  throw std::logic_error("unregistered family tag");
}

namespace {

constexpr std::int64_t kConstructionRadius = 16;

/// Pair scan over window(radius/2) with function samples on window(radius).
struct PairResult {
  double max_abs = 0.0;
  /// Largest |value| / (1 + magnitude).
  double worst_ratio = 0.0;
};

using PairFn = std::function<Evaluated(std::size_t ix, std::size_t iy, std::size_t isum,
                                       std::size_t idiff)>;

PairResult scan_pairs(const GroupSpec& spec, std::int64_t radius, const PairFn& fn) {
  const WindowIndex outer(spec, radius);
  const std::vector<Element> pts = window(spec, radius / 2);
  std::vector<std::size_t> idx(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) idx[i] = outer.index_of(pts[i]);
  PairResult out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = 0; j < pts.size(); ++j) {
      const std::size_t is = outer.index_of(add(spec, pts[i], pts[j]));
      const std::size_t id = outer.index_of(sub(spec, pts[i], pts[j]));
      const Evaluated e = fn(idx[i], idx[j], is, id);
      const double a = std::abs(e.value);
      out.max_abs = std::max(out.max_abs, a);
      out.worst_ratio = std::max(out.worst_ratio, a / (1.0 + e.magnitude));
    }
  }
  return out;
}

std::string format_value(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

class Checker {
 public:
  Checker(const FamilyInstance& inst, std::int64_t radius)
      : inst_(inst), spec_(inst.triple.spec), radius_(radius) {}

  std::vector<ValidationCheck> take() { return std::move(checks_); }

  void add(const std::string& name, bool passed, double value = 0.0, std::string detail = {}) {
    checks_.push_back({std::string(to_string(inst_.tag)) + " requires " + name, passed, value,
                       std::move(detail)});
  }

  Samples samples(const FnExpr& e) const { return Samples::of(e, spec_, radius_); }

  void scalar_nonzero(const std::string& name) {
    const Complex v = inst_.params.scalar_or(name, 0.0);
    add(name + " nonzero", std::abs(v) > 1e-12, std::abs(v));
  }

  void bounded(const std::string& name, const FnExpr& e) {
    if (std::isfinite(bound_estimate(e))) {
      add(name + " bounded", true, bound_estimate(e), "structural bound");
      return;
    }
    const GrowthEvidence ev = samples(e).verdict(nested_schedule(radius_));
    add(name + " bounded", ev.verdict == Verdict::kBounded, ev.sups.back(),
        std::string("verdict ") + std::string(to_string(ev.verdict)));
  }

  void unbounded(const std::string& name, const FnExpr& e) {
    const GrowthEvidence ev = samples(e).verdict(nested_schedule(radius_));
    add(name + " unbounded", ev.verdict == Verdict::kUnbounded, ev.sups.back(),
        std::string("verdict ") + std::string(to_string(ev.verdict)));
  }

  void parity(const std::string& name, const FnExpr& e, bool even) {
    const Samples s = samples(e);
    const Samples wrong = even ? s.odd() : s.even();
    const double tol = kIdentityRelTol * (1.0 + s.max_magnitude());
    add(name + (even ? " even" : " odd"), wrong.sup() <= tol, wrong.sup());
  }

  void nonzero(const std::string& name, const FnExpr& e) {
    const Samples s = samples(e);
    add(name + " nonzero", s.sup() > kIdentityRelTol, s.sup());
  }

  void zero(const std::string& name, const FnExpr& e) {
    const Samples s = samples(e);
    add(name + " = 0", s.sup() <= kIdentityRelTol * (1.0 + s.max_magnitude()), s.sup());
  }

  void multiplicative(const std::string& name, const FnExpr& m) {
    const Samples s = samples(m);
    const PairResult r = scan_pairs(spec_, radius_, [&](auto ix, auto iy, auto is, auto) {
      return Evaluated{s[is] - s[ix] * s[iy], s.magnitude(is) + s.magnitude(ix) * s.magnitude(iy)};
    });
    const Complex at0 = s.at(identity(spec_));
    const bool ok = r.worst_ratio <= kIdentityRelTol && std::abs(at0 - 1.0) <= kIdentityRelTol;
    add(name + " multiplicative", ok, r.max_abs);
  }

  void additive(const std::string& name, const FnExpr& a) {
    const Samples s = samples(a);
    const PairResult r = scan_pairs(spec_, radius_, [&](auto ix, auto iy, auto is, auto) {
      return Evaluated{s[is] - s[ix] - s[iy], s.magnitude(is) + s.magnitude(ix) + s.magnitude(iy)};
    });
    add(name + " additive", r.worst_ratio <= kIdentityRelTol, r.max_abs);
  }

  /// f0(x+y) = f0(x)f0(y) - g0(x)g0(y).
  void cosine(const FnExpr& f0, const FnExpr& g0) {
    const Samples f = samples(f0);
    const Samples g = samples(g0);
    const PairResult r = scan_pairs(spec_, radius_, [&](auto ix, auto iy, auto is, auto) {
      return Evaluated{f[is] - f[ix] * f[iy] + g[ix] * g[iy],
                       f.magnitude(is) + f.magnitude(ix) * f.magnitude(iy) +
                           g.magnitude(ix) * g.magnitude(iy)};
    });
    add("f0, g0 to satisfy the cosine equation", r.worst_ratio <= kIdentityRelTol, r.max_abs);
  }

  /// f0(x-y) = f0(x)g0(y) + g0(x)f0(y).
  void sine_type(const FnExpr& f0, const FnExpr& g0) {
    const Samples f = samples(f0);
    const Samples g = samples(g0);
    const PairResult r = scan_pairs(spec_, radius_, [&](auto ix, auto iy, auto, auto id) {
      return Evaluated{f[id] - f[ix] * g[iy] - g[ix] * f[iy],
                       f.magnitude(id) + f.magnitude(ix) * g.magnitude(iy) +
                           g.magnitude(ix) * f.magnitude(iy)};
    });
    add("f0(x-y) = f0(x)g0(y) + g0(x)f0(y)", r.worst_ratio <= kIdentityRelTol, r.max_abs);
  }

  /// f(x+y) = f(x)m(y) + m(x)f(y) + k(x)k(y) with k = a m + b.
  void p34_4_equation(const FnExpr& f, const FnExpr& m, const FnExpr& k) {
    const Samples sf = samples(f);
    const Samples sm = samples(m);
    const Samples sk = samples(k);
    const PairResult r = scan_pairs(spec_, radius_, [&](auto ix, auto iy, auto is, auto) {
      return Evaluated{sf[is] - sf[ix] * sm[iy] - sm[ix] * sf[iy] - sk[ix] * sk[iy],
                       sf.magnitude(is) + sf.magnitude(ix) * sm.magnitude(iy) +
                           sm.magnitude(ix) * sf.magnitude(iy) + sk.magnitude(ix) * sk.magnitude(iy)};
    });
    add("f to satisfy f(x+y) = f(x)m(y) + m(x)f(y) + (am+b)(x)(am+b)(y)",
        r.worst_ratio <= kIdentityRelTol, r.max_abs);
  }

  void exact(const Triple& t, EquationKind kind) {
    const Samples f = samples(t.f);
    const Samples g = samples(t.g);
    const Samples h = samples(t.h);
    const PairResult r = scan_pairs(spec_, radius_, [&](auto ix, auto iy, auto is, auto id) {
      const std::size_t iz = kind == EquationKind::kMinus ? id : is;
      return Evaluated{f[iz] - f[ix] * g[iy] - g[ix] * f[iy] - h[ix] * h[iy],
                       f.magnitude(iz) + f.magnitude(ix) * g.magnitude(iy) +
                           g.magnitude(ix) * f.magnitude(iy) + h.magnitude(ix) * h.magnitude(iy)};
    });
    add("the exact equation", r.worst_ratio <= kIdentityRelTol, r.max_abs);
  }

 private:
  const FamilyInstance& inst_;
  const GroupSpec& spec_;
  std::int64_t radius_;
  std::vector<ValidationCheck> checks_;
};

void require(const FamilyInfo& info, const FamilyParams& p) {
  std::vector<std::string> missing;
  const std::string tag(to_string(info.tag));
  for (const std::string& s : info.required_scalars) {
    if (!p.has_scalar(s)) missing.push_back(tag + " requires scalar " + s);
  }
  for (const std::string& f : info.required_functions) {
    if (!p.has_function(f)) missing.push_back(tag + " requires function " + f);
  }
  if (!missing.empty()) throw ConstraintViolation(std::move(missing));
}

/// f0, g0 from the cosine-pair recipe when given, else from the functions.
std::pair<FnExpr, FnExpr> cosine_functions(const FamilyParams& p, const GroupSpec& spec) {
  if (p.cosine_pair) return make_cosine_pair(*p.cosine_pair, spec);
  return {p.function_or_zero("f0"), p.function_or_zero("g0")};
}

FnExpr half_a2_m(const FnExpr& a, const FnExpr& m) { return 0.5 * (a * a * m); }

struct Shape6 {
  FnExpr F0, G0, H0;
};

Shape6 t6_shape(Complex lambda, const FnExpr& f0, const FnExpr& g0, const FnExpr& b) {
  const Complex l2 = lambda * lambda;
  return {l2 * f0 - l2 * b, 0.5 * f0 + 0.5 * b, lambda * g0};
}

Shape6 t7_shape(const FnExpr& a, const FnExpr& m, const FnExpr& b) {
  return {half_a2_m(a, m) + b, m, (-kI) * (a * m)};
}

double bnd(const FnExpr& e) { return bound_estimate(e); }

}  // namespace

Complex t9_required_rho(T9Form form, Complex lambda, Complex delta) {
  if (form == T9Form::kQuadratic) return 0.5 * delta * delta;
  const Complex l2 = lambda * lambda;
  return (1.0 + l2 * delta * delta) / (2.0 * l2);
}

std::pair<FnExpr, FnExpr> make_cosine_pair(const CosinePair& pair, const GroupSpec& spec) {
  FnExpr f0;
  FnExpr g0;
  if (pair.kind == CosineKind::kCharacterPair) {
    f0 = 0.5 * (pair.chi1 + pair.chi2);
    g0 = Complex(0.0, -0.5) * (pair.chi1 - pair.chi2);
  } else {
    f0 = pair.chi1 + pair.chi1 * pair.a;
    g0 = pair.chi1 * pair.a;
  }
  check_conforms(f0, spec);
  check_conforms(g0, spec);
  FamilyInstance probe;
  probe.tag = FamilyTag::T6;
  probe.triple.spec = spec;
  Checker c(probe, kConstructionRadius);
  c.cosine(f0, g0);
  auto checks = c.take();
  if (!checks.front().passed) {
    throw ConstraintViolation({"cosine pair residual " + format_value(checks.front().value) +
                               " exceeds tolerance"});
  }
  return {f0, g0};
}

FamilyInstance assemble_family(FamilyTag tag, const FamilyParams& p, const GroupSpec& spec) {
  spec.validate();
  const FamilyInfo& info = family_info(tag);
  require(info, p);
  FamilyInstance inst;
  inst.tag = tag;
  inst.params = p;
  inst.equation = info.equation;
  inst.triple.spec = spec;
  Triple& t = inst.triple;
  const FnExpr b = p.function_or_zero("b");
  const FnExpr phi = p.function_or_zero("phi");
  const double B = bnd(b);
  const double Phi = bnd(phi);

  switch (tag) {
    case FamilyTag::T1: {
      t.f = FnExpr();
      t.g = p.function_or_zero("g");
      t.h = p.functions.at("h");
      inst.defect_bound = bnd(t.h) * bnd(t.h);
      break;
    }
    case FamilyTag::T2:
    case FamilyTag::T8: {
      t.f = p.functions.at("f");
      t.g = p.functions.at("g");
      t.h = p.functions.at("h");
      inst.defect_bound =
          tag == FamilyTag::T8 ? 0.0 : bnd(t.f) + 2.0 * bnd(t.f) * bnd(t.g) + bnd(t.h) * bnd(t.h);
      break;
    }
    case FamilyTag::T3: {
      const Complex alpha = p.scalars.at("alpha");
      const Complex lambda = p.scalar_or("lambda", 0.0);
      const FnExpr& m = p.functions.at("m");
      const Complex al2 = alpha * lambda * lambda;
      t.f = alpha * m - alpha * b;
      t.g = (0.5 * (1.0 - al2)) * m + (0.5 * (1.0 + al2)) * b - lambda * phi;
      t.h = (alpha * lambda) * m - (alpha * lambda) * b + phi;
      const double a = std::abs(alpha);
      inst.defect_bound = a * (B + B * B) + Phi * Phi + (is_even_multiplicative(m) ? 0.0 : 2.0 * a);
      if (!std::isfinite(bnd(m))) inst.defect_bound = is_even_multiplicative(m) ? inst.defect_bound : kInf;
      break;
    }
    case FamilyTag::T4: {
      const Complex lambda = p.scalar_or("lambda", 0.0);
      const FnExpr f0 = p.function_or_zero("f0");
      const FnExpr g0 = p.function_or_zero("g0");
      t.f = f0;
      t.g = (-0.5 * lambda * lambda) * f0 + g0 - lambda * b;
      t.h = lambda * f0 + b;
      inst.defect_bound = B * B;
      break;
    }
    case FamilyTag::T5:
    case FamilyTag::P34_1: {
      const Complex lambda = p.scalars.at("lambda");
      const Complex rho = p.scalar_or("rho", 0.0);
      const auto [f0, g0] = cosine_functions(p, spec);
      const Complex l2 = lambda * lambda;
      t.f = (-l2) * f0 + l2 * b;
      t.g = (0.5 * (1.0 + rho * rho)) * f0 + rho * g0 + (0.5 * (1.0 - rho * rho)) * b;
      t.h = (lambda * rho) * f0 + lambda * g0 - (lambda * rho) * b;
      inst.defect_bound = std::norm(lambda) * (B + B * B);
      break;
    }
    case FamilyTag::T6: {
      const Complex lambda = p.scalars.at("lambda");
      const auto [f0, g0] = cosine_functions(p, spec);
      const Shape6 s = t6_shape(lambda, f0, g0, b);
      t.f = s.F0;
      t.g = s.G0;
      t.h = s.H0;
      inst.defect_bound = std::norm(lambda) * (B + B * B);
      break;
    }
    case FamilyTag::T7: {
      const Shape6 s = t7_shape(p.functions.at("a"), p.functions.at("m"), b);
      t.f = s.F0;
      t.g = s.G0;
      t.h = s.H0;
      inst.defect_bound = 3.0 * B;
      break;
    }
    case FamilyTag::T9: {
      const Complex delta = p.scalars.at("delta");
      Shape6 s;
      Complex required = 0.0;
      if (p.form == T9Form::kCosine) {
        if (!p.has_scalar("lambda")) throw ConstraintViolation({"T9 form cosine requires scalar lambda"});
        const Complex lambda = p.scalars.at("lambda");
        const auto [f0, g0] = cosine_functions(p, spec);
        s = t6_shape(lambda, f0, g0, b);
        required = t9_required_rho(p.form, lambda, delta);
        inst.defect_bound = std::norm(lambda) * (B + B * B) + Phi + 2.0 * B * Phi +
                            Phi * Phi / std::norm(lambda);
      } else if (p.form == T9Form::kQuadratic) {
        if (!p.has_function("a") || !p.has_function("m")) {
          throw ConstraintViolation({"T9 form quadratic requires functions a and m"});
        }
        s = t7_shape(p.functions.at("a"), p.functions.at("m"), FnExpr());
        required = t9_required_rho(p.form, 0.0, delta);
        inst.defect_bound = 3.0 * Phi;
      } else {
        throw ConstraintViolation({"T9 requires form cosine or quadratic"});
      }
      const Complex rho = p.scalar_or("rho", required);
      inst.params.scalars["rho"] = rho;
      t.f = s.F0 + phi;
      t.g = (-0.5 * delta * delta) * s.F0 + s.G0 + delta * s.H0 - rho * phi;
      t.h = (-delta) * s.F0 + s.H0 - delta * phi;
      if (std::abs(rho - required) > kIdentityRelTol * (1.0 + std::abs(required)) && Phi > 0.0) {
        inst.defect_bound = kInf;
      }
      break;
    }
    case FamilyTag::P33: {
      const FnExpr& a = p.functions.at("a");
      const FnExpr& m = p.functions.at("m");
      t.f = half_a2_m(a, m);
      t.g = m;
      t.h = a * m;
      inst.defect_bound = 0.0;
      break;
    }
    case FamilyTag::P34_2: {
      const Complex lambda = p.scalars.at("lambda");
      const Complex beta = p.scalar_or("beta", 0.0);
      const FnExpr& m = p.functions.at("m");
      const FnExpr& M = p.functions.at("M");
      const FnExpr am = p.functions.at("a") * m;
      const Complex bl = beta * lambda;
      t.f = (lambda * lambda) * M + am + b;
      t.g = (bl * (1.0 - 0.5 * bl)) * M + (1.0 - bl) * m - (0.5 * beta * beta) * am -
            (0.5 * beta * beta) * b;
      t.h = (lambda * (1.0 - bl)) * M - lambda * m - beta * am - beta * b;
      inst.defect_bound = 3.0 * B + std::norm(lambda);
      break;
    }
    case FamilyTag::P34_3: {
      const Complex beta = p.scalar_or("beta", 0.0);
      const FnExpr& a = p.functions.at("a");
      const FnExpr& m = p.functions.at("m");
      const FnExpr a1m = p.function_or_zero("a1") * m;
      const FnExpr a2m = a * a * m;
      const Complex b2 = beta * beta;
      t.f = 0.5 * a2m + 0.5 * a1m + b;
      t.g = (-0.25 * b2) * a2m + beta * (a * m) - (0.25 * b2) * a1m + m - (0.5 * b2) * b;
      t.h = (-0.5 * beta) * a2m + a * m - (0.5 * beta) * a1m - beta * b;
      inst.defect_bound = 3.0 * B;
      break;
    }
    case FamilyTag::P34_4: {
      const Complex beta = p.scalar_or("beta", 0.0);
      const FnExpr& a = p.functions.at("a");
      const FnExpr& m = p.functions.at("m");
      FnExpr f;
      if (p.has_function("f")) {
        f = p.functions.at("f");
      } else if (b.is_zero_constant()) {
        f = half_a2_m(a, m) + p.function_or_zero("a1") * m;
      } else {
        throw ConstraintViolation({"P34-4 requires an explicit f when b is nonzero"});
      }
      inst.params.functions["f"] = f;
      t.f = f;
      t.g = (-0.5 * beta * beta) * f + m + beta * (a * m) + beta * b;
      t.h = (-beta) * f + a * m + b;
      inst.defect_bound = 0.0;
      break;
    }
  }
  check_conforms(t);
  return inst;
}

std::vector<ValidationCheck> check_constraints(const FamilyInstance& inst, std::int64_t radius) {
  Checker c(inst, radius);
  const FamilyParams& p = inst.params;
  const FnExpr b = p.function_or_zero("b");
  const FnExpr phi = p.function_or_zero("phi");
  auto fn = [&](const std::string& name) { return p.function_or_zero(name); };

  switch (inst.tag) {
    case FamilyTag::T1:
      c.bounded("h", inst.triple.h);
      break;
    case FamilyTag::T2:
      c.bounded("f", inst.triple.f);
      c.bounded("g", inst.triple.g);
      c.bounded("h", inst.triple.h);
      break;
    case FamilyTag::T3: {
      c.scalar_nonzero("alpha");
      c.multiplicative("m", fn("m"));
      const Samples m = c.samples(fn("m"));
      const bool even = m.odd().sup() <= kIdentityRelTol * (1.0 + m.max_magnitude());
      const GrowthEvidence ev = m.verdict(nested_schedule(radius));
      c.add("m even or bounded", even || ev.verdict == Verdict::kBounded, m.sup());
      c.bounded("b", b);
      c.bounded("phi", phi);
      break;
    }
    case FamilyTag::T4:
      c.bounded("b", b);
      c.sine_type(fn("f0"), fn("g0"));
      break;
    case FamilyTag::T5:
    case FamilyTag::T6:
    case FamilyTag::P34_1: {
      c.scalar_nonzero("lambda");
      const auto [f0, g0] = cosine_functions(p, inst.triple.spec);
      if (inst.tag != FamilyTag::P34_1) {
        c.parity("f0", f0, true);
        c.parity("g0", g0, inst.tag == FamilyTag::T5);
      }
      c.cosine(f0, g0);
      c.bounded("b", b);
      break;
    }
    case FamilyTag::T7:
      c.multiplicative("m", fn("m"));
      c.bounded("m", fn("m"));
      c.parity("m", fn("m"), true);
      c.additive("a", fn("a"));
      c.nonzero("a", fn("a"));
      c.parity("b", b, false);
      c.bounded("b", b);
      break;
    case FamilyTag::T8:
      c.exact(inst.triple, EquationKind::kMinus);
      break;
    case FamilyTag::T9: {
      c.scalar_nonzero("delta");
      c.parity("phi", phi, false);
      c.bounded("phi", phi);
      const Complex delta = p.scalar_or("delta", 0.0);
      const Complex rho = p.scalar_or("rho", 0.0);
      Complex required = 0.0;
      if (p.form == T9Form::kCosine) {
        c.scalar_nonzero("lambda");
        const auto [f0, g0] = cosine_functions(p, inst.triple.spec);
        c.parity("f0", f0, true);
        c.parity("g0", g0, false);
        c.cosine(f0, g0);
        c.parity("b", b, true);
        c.bounded("b", b);
        required = t9_required_rho(p.form, p.scalar_or("lambda", 0.0), delta);
        c.add("rho = (1 + lambda^2 delta^2)/(2 lambda^2)",
              std::abs(rho - required) <= kIdentityRelTol * (1.0 + std::abs(required)),
              std::abs(rho - required));
      } else {
        c.multiplicative("m", fn("m"));
        c.bounded("m", fn("m"));
        c.parity("m", fn("m"), true);
        c.additive("a", fn("a"));
        c.nonzero("a", fn("a"));
        c.zero("b", b);
        required = t9_required_rho(p.form, 0.0, delta);
        c.add("rho = delta^2/2",
              std::abs(rho - required) <= kIdentityRelTol * (1.0 + std::abs(required)),
              std::abs(rho - required));
      }
      break;
    }
    case FamilyTag::P33:
      c.multiplicative("m", fn("m"));
      c.parity("m", fn("m"), true);
      c.additive("a", fn("a"));
      c.nonzero("a", fn("a"));
      break;
    case FamilyTag::P34_2:
      c.scalar_nonzero("lambda");
      c.multiplicative("m", fn("m"));
      c.bounded("m", fn("m"));
      c.multiplicative("M", fn("M"));
      c.unbounded("M", fn("M"));
      c.additive("a", fn("a"));
      c.nonzero("a", fn("a"));
      c.bounded("b", b);
      break;
    case FamilyTag::P34_3:
      c.multiplicative("m", fn("m"));
      c.bounded("m", fn("m"));
      c.additive("a", fn("a"));
      c.nonzero("a", fn("a"));
      c.additive("a1", fn("a1"));
      c.bounded("b", b);
      break;
    case FamilyTag::P34_4:
      c.multiplicative("m", fn("m"));
      c.bounded("m", fn("m"));
      c.additive("a", fn("a"));
      c.nonzero("a", fn("a"));
      c.bounded("b", b);
      c.p34_4_equation(inst.triple.f, fn("m"), fn("a") * fn("m") + b);
      break;
  }
  return c.take();
}

FamilyInstance make_family(FamilyTag tag, const FamilyParams& params, const GroupSpec& spec) {
  FamilyInstance inst = assemble_family(tag, params, spec);
  std::vector<std::string> failures;
  for (const ValidationCheck& c : check_constraints(inst, kConstructionRadius)) {
    if (!c.passed) failures.push_back(c.name);
  }
  if (!failures.empty()) throw ConstraintViolation(std::move(failures));
  return inst;
}

bool ValidationReport::constraints_ok() const noexcept {
  return std::all_of(constraints.begin(), constraints.end(),
                     [](const ValidationCheck& c) { return c.passed; });
}

bool ValidationReport::ok() const noexcept {
  return constraints_ok() && defect_bounded && defect_within_bound;
}

std::vector<std::string> ValidationReport::failures() const {
  std::vector<std::string> out;
  for (const ValidationCheck& c : constraints) {
    if (!c.passed) out.push_back(c.name);
  }
  if (!defect_bounded) out.push_back("defect verdict is not bounded");
  if (!defect_within_bound) out.push_back("defect exceeds the recorded bound");
  return out;
}

ValidationReport validate_instance(const FamilyInstance& inst, std::int64_t radius) {
  ValidationReport report;
  report.radius = radius;
  report.constraints = check_constraints(inst, radius);
  report.defect = defect_report(inst.triple, nested_schedule(radius), kDefaultRatioTol, inst.equation);
  report.defect_bounded = report.defect.verdict() == Verdict::kBounded;
  const double slack = report.defect.per_radius.back().noise_floor;
  report.defect_within_bound = report.defect.max_sup() <= inst.defect_bound + slack;
  return report;
}

}  // namespace feq
