#include "feq/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "feq/error.hpp"
#include "feq/fitting.hpp"
#include "feq/sampling.hpp"

namespace feq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const Complex kI(0.0, 1.0);

/// A candidate family that does not apply to the data.
class Rejected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Context {
  GroupSpec spec;
  std::int64_t radius;
  double epsilon;
  Samples f;
  Samples g;
  Samples h;
  double scale;
  double tol;
  std::vector<std::int64_t> schedule;
  // Pair grid over window(radius/2): positions inside window(radius).
  std::vector<std::size_t> inner;
  std::vector<std::size_t> sum_index;
  std::vector<std::size_t> diff_index;
  std::size_t origin;

  Context(const Triple& t, std::int64_t r, double eps)
      : spec(t.spec),
        radius(r),
        epsilon(eps),
        f(Samples::of(t.f, t.spec, r)),
        g(Samples::of(t.g, t.spec, r)),
        h(Samples::of(t.h, t.spec, r)),
        scale(1.0 + std::max({f.sup(), g.sup(), h.sup()})),
        tol(eps * scale),
        schedule(nested_schedule(r)) {
    const WindowIndex& idx = f.index();
    const std::vector<Element> pts = window(spec, r / 2);
    for (const Element& x : pts) inner.push_back(idx.index_of(x));
    for (const Element& x : pts) {
      for (const Element& y : pts) {
        sum_index.push_back(idx.index_of(add(spec, x, y)));
        diff_index.push_back(idx.index_of(sub(spec, x, y)));
      }
    }
    origin = idx.index_of(identity(spec));
  }

  Samples zeros() const { return Samples(spec, radius); }

  bool bounded(const Samples& s) const { return s.verdict(schedule).verdict == Verdict::kBounded; }

  void require_bounded(const Samples& s, const std::string& name) const {
    const GrowthEvidence ev = s.verdict(schedule);
    if (ev.verdict != Verdict::kBounded) {
      throw Rejected(name + " is not bounded (verdict " + std::string(to_string(ev.verdict)) + ")");
    }
  }

  /// Calls fn(ix, iy, isum, idiff) for every pair of the inner grid.
  template <typename Fn>
  void for_pairs(Fn&& fn) const {
    const std::size_t n = inner.size();
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        fn(inner[a], inner[b], sum_index[a * n + b], diff_index[a * n + b]);
      }
    }
  }
};

struct Fit {
  FamilyParams params;
  double sup = 0.0;
  double l2 = 0.0;
};

/// sup |input - reconstruction| over window(radius).
Fit reconstruction_fit(const Context& c, FamilyTag tag, const FamilyParams& params) {
  const FamilyInstance inst = assemble_family(tag, params, c.spec);
  const Samples rf = Samples::of(inst.triple.f, c.spec, c.radius);
  const Samples rg = Samples::of(inst.triple.g, c.spec, c.radius);
  const Samples rh = Samples::of(inst.triple.h, c.spec, c.radius);
  Fit fit{inst.params, 0.0, 0.0};
  double l2 = 0.0;
  for (std::size_t i = 0; i < c.f.size(); ++i) {
    const double df = std::abs(c.f[i] - rf[i]);
    const double dg = std::abs(c.g[i] - rg[i]);
    const double dh = std::abs(c.h[i] - rh[i]);
    fit.sup = std::max({fit.sup, df, dg, dh});
    l2 += df * df + dg * dg + dh * dh;
  }
  fit.l2 = std::sqrt(l2);
  return fit;
}

struct PairStats {
  double sup = 0.0;
  double l2 = 0.0;
};

/// Relative pair residual of a defining equation, expressed in units of the scale.
template <typename Fn>
PairStats pair_residual(const Context& c, Fn&& residual) {
  PairStats out;
  double l2 = 0.0;
  c.for_pairs([&](std::size_t ix, std::size_t iy, std::size_t is, std::size_t id) {
    const Evaluated e = residual(ix, iy, is, id);
    const double rel = std::abs(e.value) / (1.0 + e.magnitude);
    out.sup = std::max(out.sup, rel);
    l2 += rel * rel;
  });
  out.sup *= c.scale;
  out.l2 = std::sqrt(l2) * c.scale;
  return out;
}

Complex at_origin(const Context& c, const Samples& s) { return s[c.origin]; }

// ---------------------------------------------------------------- T1, T2, T8

Fit fit_t1(const Context& c) {
  c.require_bounded(c.h, "h");
  FamilyParams p;
  p.functions["g"] = c.g.to_table();
  p.functions["h"] = c.h.to_table();
  Fit fit = reconstruction_fit(c, FamilyTag::T1, p);
  return fit;
}

Fit fit_t2(const Context& c) {
  c.require_bounded(c.f, "f");
  c.require_bounded(c.g, "g");
  c.require_bounded(c.h, "h");
  FamilyParams p;
  p.functions["f"] = c.f.to_table();
  p.functions["g"] = c.g.to_table();
  p.functions["h"] = c.h.to_table();
  return reconstruction_fit(c, FamilyTag::T2, p);
}

Fit fit_t8(const Context& c) {
  const PairStats r = pair_residual(c, [&](auto ix, auto iy, auto, auto id) {
    return Evaluated{c.f[id] - c.f[ix] * c.g[iy] - c.g[ix] * c.f[iy] - c.h[ix] * c.h[iy],
                     c.f.magnitude(id) + c.f.magnitude(ix) * c.g.magnitude(iy) +
                         c.g.magnitude(ix) * c.f.magnitude(iy) + c.h.magnitude(ix) * c.h.magnitude(iy)};
  });
  FamilyParams p;
  p.functions["f"] = c.f.to_table();
  p.functions["g"] = c.g.to_table();
  p.functions["h"] = c.h.to_table();
  return {p, r.sup, r.l2};
}

// ---------------------------------------------------------------- T3

std::vector<Complex> quadratic_roots(Complex a, Complex b, Complex c0) {
  const double size = std::abs(a) + std::abs(b) + std::abs(c0);
  if (size == 0.0) return {};
  if (std::abs(a) <= 1e-12 * size) {
    if (std::abs(b) <= 1e-12 * size) return {};
    return {-c0 / b};
  }
  const Complex disc = std::sqrt(b * b - 4.0 * a * c0);
  // Numerically stable pair.
  const Complex q = -0.5 * (b + (std::real(std::conj(b) * disc) >= 0.0 ? disc : -disc));
  std::vector<Complex> roots;
  if (q != Complex(0.0, 0.0)) {
    roots.push_back(q / a);
    roots.push_back(c0 / q);
  } else {
    roots.push_back(0.0);
  }
  return roots;
}

Fit fit_t3(const Context& c, Complex lambda_ls) {
  const Complex f0 = at_origin(c, c.f);
  if (c.f.negligible_at(c.origin)) throw Rejected("f(0) vanishes");
  const Complex g0 = at_origin(c, c.g);
  const Complex h0 = at_origin(c, c.h);
  // p(lambda) = g + lambda h + c(lambda) f with p(0) = 1, written as A + lambda B.
  const Samples A = c.g + ((1.0 - g0) / f0) * c.f;
  const Samples B = c.h - (h0 / f0) * c.f;

  auto p_of = [&](Complex lambda) { return A + lambda * B; };
  auto mult_residual = [&](Complex lambda) {
    const Samples p = p_of(lambda);
    return pair_residual(c, [&](auto ix, auto iy, auto is, auto) {
      return Evaluated{p[is] - p[ix] * p[iy], p.magnitude(is) + p.magnitude(ix) * p.magnitude(iy)};
    });
  };

  std::vector<Complex> candidates{lambda_ls};
  if (c.spec.rank() > 0) {
    const WindowIndex& idx = c.f.index();
    const Element e = generator(c.spec, 0);
    const std::size_t ie = idx.index_of(e);
    const std::size_t ine = idx.index_of(neg(c.spec, e));
    // p(e)p(-e) = 1
    for (Complex r : quadratic_roots(B[ie] * B[ine], A[ie] * B[ine] + B[ie] * A[ine],
                                     A[ie] * A[ine] - 1.0)) {
      candidates.push_back(r);
    }
    // p(2e) = p(e)^2
    const Element e2 = scale(c.spec, 2, e);
    if (idx.contains(e2)) {
      const std::size_t i2 = idx.index_of(e2);
      for (Complex r : quadratic_roots(-B[ie] * B[ie], B[i2] - 2.0 * A[ie] * B[ie],
                                       A[i2] - A[ie] * A[ie])) {
        candidates.push_back(r);
      }
    }
  }
  Complex lambda = lambda_ls;
  double best = kInf;
  for (Complex cand : candidates) {
    const double r = mult_residual(cand).sup;
    if (r < best) {
      best = r;
      lambda = cand;
    }
  }
  // Refine on every pair.
  const Samples p_start = p_of(lambda);
  std::vector<double> weights;
  c.for_pairs([&](auto ix, auto iy, auto is, auto) {
    weights.push_back(1.0 / (1.0 + p_start.magnitude(is) + p_start.magnitude(ix) * p_start.magnitude(iy)));
  });
  const LmResult lm = minimize_lm(
      [&](const std::vector<Complex>& x) {
        const Samples p = p_of(x[0]);
        std::vector<Complex> r;
        r.reserve(weights.size());
        std::size_t k = 0;
        c.for_pairs([&](auto ix, auto iy, auto is, auto) {
          r.push_back(weights[k++] * (p[is] - p[ix] * p[iy]));
        });
        return r;
      },
      {lambda});
  if (mult_residual(lm.params[0]).sup <= best) lambda = lm.params[0];

  const Complex cc = (1.0 - g0 - lambda * h0) / f0;
  const Complex denom = 2.0 * cc + lambda * lambda;
  if (std::abs(denom) <= 1e-12) throw Rejected("alpha is undefined (2c + lambda^2 = 0)");
  const Complex alpha = 1.0 / denom;
  const MultiplicativeFit m = fit_multiplicative(p_of(lambda).to_map(), c.spec);
  const Samples m_s = Samples::of(m.m, c.spec, c.radius);
  Samples b = m_s - (1.0 / alpha) * c.f;
  Samples phi = c.h - lambda * c.f;
  c.require_bounded(b, "b");
  c.require_bounded(phi, "phi");

  FamilyParams p;
  p.scalars["alpha"] = alpha;
  p.scalars["lambda"] = lambda;
  p.functions["m"] = m.m;
  p.functions["b"] = b.to_table();
  p.functions["phi"] = phi.to_table();
  return reconstruction_fit(c, FamilyTag::T3, p);
}

// ---------------------------------------------------------------- T4

Fit fit_t4(const Context& c, Complex lambda_ls) {
  auto g0_of = [&](Complex lambda) { return c.g + lambda * c.h - (0.5 * lambda * lambda) * c.f; };
  auto eq = [&](const Samples& g0) {
    return pair_residual(c, [&](auto ix, auto iy, auto, auto id) {
      return Evaluated{c.f[id] - c.f[ix] * g0[iy] - g0[ix] * c.f[iy],
                       c.f.magnitude(id) + c.f.magnitude(ix) * g0.magnitude(iy) +
                           g0.magnitude(ix) * c.f.magnitude(iy)};
    });
  };
  Complex lambda = lambda_ls;
  const double start = eq(g0_of(lambda)).sup;
  const Samples g_start = g0_of(lambda);
  std::vector<double> weights;
  c.for_pairs([&](auto ix, auto iy, auto, auto id) {
    weights.push_back(1.0 / (1.0 + c.f.magnitude(id) + c.f.magnitude(ix) * g_start.magnitude(iy) +
                             g_start.magnitude(ix) * c.f.magnitude(iy)));
  });
  const LmResult lm = minimize_lm(
      [&](const std::vector<Complex>& x) {
        const Samples g0 = g0_of(x[0]);
        std::vector<Complex> r;
        std::size_t k = 0;
        c.for_pairs([&](auto ix, auto iy, auto, auto id) {
          r.push_back(weights[k++] * (c.f[id] - c.f[ix] * g0[iy] - g0[ix] * c.f[iy]));
        });
        return r;
      },
      {lambda});
  if (eq(g0_of(lm.params[0])).sup < start) lambda = lm.params[0];

  const Samples b = c.h - lambda * c.f;
  c.require_bounded(b, "b");
  const Samples g0 = g0_of(lambda);
  const PairStats r = eq(g0);
  FamilyParams p;
  p.scalars["lambda"] = lambda;
  p.functions["f0"] = c.f.to_table();
  p.functions["g0"] = g0.to_table();
  p.functions["b"] = b.to_table();
  const Fit recon = reconstruction_fit(c, FamilyTag::T4, p);
  return {recon.params, std::max(r.sup, recon.sup), std::hypot(r.l2, recon.l2)};
}

// ---------------------------------------------------------------- cosine pairs

struct CosineFit {
  CosinePair pair;
  Samples f0;
  Samples g0;
};

bool character_ok(const Context& c, const MultiplicativeFit& fit, const Samples& data) {
  return fit.sup_residual <= c.epsilon * (1.0 + data.sup());
}

// Largest sub-window on which every sample stands well clear of its rounding
// noise. Characters built as f0 +- i g0 cancel badly on one side of the origin.
Samples reliable_part(const Samples& s) {
  std::int64_t r = s.radius();
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (std::abs(s[i]) < 1e-4 * (1.0 + s.magnitude(i))) {
      r = std::min(r, s.index().element_at(i).free_norm() - 1);
    }
  }
  if (r < 1) throw Rejected("character samples are dominated by cancellation");
  return s.restrict_to(r);
}

MultiplicativeFit fit_character(const Context& c, const Samples& s, const char* what) {
  const Samples part = reliable_part(s);
  MultiplicativeFit fit = fit_multiplicative(part.to_map(), c.spec);
  if (!character_ok(c, fit, part)) throw Rejected(std::string(what) + " does not fit");
  return fit;
}

/// Recovers a cosine pair from samples of (f0, g0): characters chi1 = f0 + i g0
/// and chi2 = f0 - i g0, or the additive-degenerate form chi = f0 - g0, a = g0/chi.
CosineFit fit_cosine_pair(const Context& c, const Samples& f0, const Samples& g0) {
  const Samples s1 = f0 + kI * g0;
  const Samples s2 = f0 - kI * g0;
  std::string failure;
  CosinePair pair;
  bool have = false;
  try {
    const MultiplicativeFit c1 = fit_character(c, s1, "character pair");
    const MultiplicativeFit c2 = fit_character(c, s2, "character pair");
    pair = {CosineKind::kCharacterPair, c1.m, c2.m, FnExpr()};
    have = true;
  } catch (const Rejected& e) {
    failure = e.what();
  } catch (const Error& e) {
    failure = e.what();
  }
  if (!have) {
    try {
      const MultiplicativeFit chi = fit_character(c, f0 - g0, "additive-degenerate character");
      Samples a_s = c.zeros();
      const Samples chi_hat = Samples::of(chi.m, c.spec, c.radius);
      for (std::size_t i = 0; i < a_s.size(); ++i) a_s.set(i, g0[i] / chi_hat[i], 0.0);
      const AdditiveFit a = fit_additive(a_s.to_map(), c.spec);
      pair = {CosineKind::kAdditiveDegenerate, chi.m, FnExpr(), a.a};
    } catch (const Error& e) {
      throw Rejected("no cosine pair fits: " + failure + "; " + e.what());
    } catch (const Rejected& e) {
      throw Rejected("no cosine pair fits: " + failure + "; " + e.what());
    }
  }
  const auto [f0_hat, g0_hat] = make_cosine_pair(pair, c.spec);
  return {pair, Samples::of(f0_hat, c.spec, c.radius), Samples::of(g0_hat, c.spec, c.radius)};
}

struct T6Core {
  Complex lambda;
  CosinePair pair;
  Samples b;
};

/// F = lambda^2 f0 - lambda^2 b, G = (f0 + b)/2, H = lambda g0.
T6Core fit_t6_core(const Context& c, const Samples& F, const Samples& G, const Samples& H) {
  Complex s;
  const Complex F0 = at_origin(c, F);
  if (!F.negligible_at(c.origin)) {
    s = (1.0 - at_origin(c, G)) / F0;
  } else {
    const Samples Fo = F.odd();
    if (Fo.negligible()) throw Rejected("lambda is not identifiable");
    s = -Fo.dot(G.odd()) / Fo.norm2();
  }
  if (std::abs(s) <= 1e-14) throw Rejected("lambda is infinite");
  Complex lambda = std::sqrt(1.0 / (2.0 * s));
  const Samples f0 = G + s * F;
  const Samples g0 = (1.0 / lambda) * H;
  CosineFit cf = fit_cosine_pair(c, f0, g0);
  if (cf.pair.kind == CosineKind::kCharacterPair && c.spec.free_rank > 0 &&
      std::abs(cf.pair.chi1.coefficients()[0]) < 1.0) {
    std::swap(cf.pair.chi1, cf.pair.chi2);
    lambda = -lambda;
    cf.g0 *= -1.0;
  }
  Samples b = cf.f0 - (1.0 / (lambda * lambda)) * F;
  return {lambda, cf.pair, std::move(b)};
}

Fit fit_t6(const Context& c) {
  const T6Core core = fit_t6_core(c, c.f, c.g, c.h);
  c.require_bounded(core.b, "b");
  FamilyParams p;
  p.scalars["lambda"] = core.lambda;
  p.cosine_pair = core.pair;
  p.functions["b"] = core.b.to_table();
  return reconstruction_fit(c, FamilyTag::T6, p);
}

// ---------------------------------------------------------------- T5

Fit fit_t5(const Context& c) {
  // u = 1/lambda, v = rho/lambda:
  // f0 = g - v h - (u^2+v^2)/2 f, g0 = u (h + v f), b = g - v h - (v^2-u^2)/2 f.
  auto f0_of = [&](Complex u, Complex v) { return c.g - v * c.h - (0.5 * (u * u + v * v)) * c.f; };
  auto g0_of = [&](Complex u, Complex v) { return u * (c.h + v * c.f); };
  const Samples fo = c.f.odd();
  Complex v0 = 0.0;
  if (!fo.negligible()) v0 = -fo.dot(c.h.odd()) / fo.norm2();
  const Complex fz = at_origin(c, c.f);
  Complex u0 = 1.0;
  if (!c.f.negligible_at(c.origin)) {
    u0 = std::sqrt(2.0 * (at_origin(c, c.g) - v0 * at_origin(c, c.h) - 1.0) / fz - v0 * v0);
    if (std::abs(u0) < 1e-6) u0 = 1.0;
  }
  auto residuals = [&](const std::vector<Complex>& x) {
    const Samples f0 = f0_of(x[0], x[1]);
    const Samples g0 = g0_of(x[0], x[1]);
    std::vector<Complex> r;
    c.for_pairs([&](auto ix, auto iy, auto is, auto) {
      const double w = 1.0 + f0.magnitude(is) + f0.magnitude(ix) * f0.magnitude(iy) +
                       g0.magnitude(ix) * g0.magnitude(iy);
      r.push_back((f0[is] - f0[ix] * f0[iy] + g0[ix] * g0[iy]) / w);
    });
    for (std::size_t i = 0; i < f0.size(); ++i) {
      const std::size_t j = f0.neg_index(i);
      r.push_back((f0[i] - f0[j]) / (1.0 + f0.magnitude(i)));
      r.push_back((g0[i] - g0[j]) / (1.0 + g0.magnitude(i)));
    }
    r.push_back(f0[c.origin] - 1.0);
    return r;
  };
  const LmResult lm = minimize_lm(residuals, {u0, v0});
  const Complex u = lm.params[0];
  const Complex v = lm.params[1];
  if (std::abs(u) <= 1e-12) throw Rejected("lambda is infinite");
  const CosineFit cf = fit_cosine_pair(c, f0_of(u, v), g0_of(u, v));
  const Samples b = c.g - v * c.h - (0.5 * (v * v - u * u)) * c.f;
  c.require_bounded(b, "b");
  FamilyParams p;
  p.scalars["lambda"] = 1.0 / u;
  p.scalars["rho"] = v / u;
  p.cosine_pair = cf.pair;
  p.functions["b"] = b.to_table();
  return reconstruction_fit(c, FamilyTag::T5, p);
}

// ---------------------------------------------------------------- T7

struct T7Core {
  FnExpr m;
  FnExpr a;
  Samples b;
};

/// F = a^2 m / 2 + b, G = m, H = -i a m.
T7Core fit_t7_core(const Context& c, const Samples& F, const Samples& G, const Samples& H) {
  const MultiplicativeFit m = fit_multiplicative(G.to_map(), c.spec);
  const Samples m_s = Samples::of(m.m, c.spec, c.radius);
  Samples k = c.zeros();
  for (std::size_t i = 0; i < k.size(); ++i) k.set(i, kI * H[i] / m_s[i], 0.0);
  const AdditiveFit a = fit_additive(k.to_map(), c.spec);
  const Samples a_s = Samples::of(a.a, c.spec, c.radius);
  Samples b = F - 0.5 * pointwise(pointwise(a_s, a_s), m_s);
  return {m.m, a.a, b.odd()};
}

Fit fit_t7(const Context& c) {
  const T7Core core = fit_t7_core(c, c.f, c.g, c.h);
  c.require_bounded(core.b, "b");
  FamilyParams p;
  p.functions["m"] = core.m;
  p.functions["a"] = core.a;
  p.functions["b"] = core.b.to_table();
  return reconstruction_fit(c, FamilyTag::T7, p);
}

// ---------------------------------------------------------------- T9

Fit fit_t9(const Context& c) {
  const GammaEtaFit ge = fit_gamma_eta(c.f, c.g, c.h);
  if (ge.underdetermined) throw Rejected("gamma is underdetermined");
  const Complex delta = -ge.gamma;
  if (std::abs(delta) <= 1e-9) throw Rejected("delta vanishes");
  const Samples phi = c.f.odd();
  c.require_bounded(phi, "phi");
  const Samples F0 = c.f.even();
  const Samples H0 = c.h.odd() + delta * phi;
  const Samples G0 = c.g.even() + (0.5 * delta * delta) * F0;

  std::optional<Fit> best;
  std::string reasons;
  auto consider = [&](const FamilyParams& p) {
    Fit fit = reconstruction_fit(c, FamilyTag::T9, p);
    if (!best || fit.sup < best->sup) best = std::move(fit);
  };
  try {
    const T6Core core = fit_t6_core(c, F0, G0, H0);
    const Samples b = core.b.even();
    c.require_bounded(b, "b");
    FamilyParams p;
    p.form = T9Form::kCosine;
    p.scalars["delta"] = delta;
    p.scalars["lambda"] = core.lambda;
    p.scalars["rho"] = t9_required_rho(T9Form::kCosine, core.lambda, delta);
    p.cosine_pair = core.pair;
    p.functions["b"] = b.to_table();
    p.functions["phi"] = phi.to_table();
    consider(p);
  } catch (const std::exception& e) {
    reasons += std::string("cosine form: ") + e.what() + "; ";
  }
  try {
    const T7Core core = fit_t7_core(c, F0, G0, H0);
    FamilyParams p;
    p.form = T9Form::kQuadratic;
    p.scalars["delta"] = delta;
    p.scalars["rho"] = t9_required_rho(T9Form::kQuadratic, 0.0, delta);
    p.functions["m"] = core.m;
    p.functions["a"] = core.a;
    p.functions["phi"] = phi.to_table();
    consider(p);
  } catch (const std::exception& e) {
    reasons += std::string("quadratic form: ") + e.what();
  }
  if (!best) throw Rejected(reasons);
  return *best;
}

bool is_catch_all(FamilyTag tag) { return tag == FamilyTag::T2 || tag == FamilyTag::T8; }

}  // namespace

ClassificationResult classify(const Triple& t, const ClassifyOptions& options) {
  check_conforms(t);
  if (!(options.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (options.radius < 8) throw std::invalid_argument("radius must be at least 8");

  ClassificationResult result;
  result.radius = options.radius;
  ClassifierDiagnostics& diag = result.diagnostics;
  diag.defect = defect_report(t, options.defect_schedule, options.ratio_tol);
  if (diag.defect.verdict() == Verdict::kUnbounded) {
    throw RefusedError("defect is unbounded; classification refused");
  }

  const Context c(t, options.radius, options.epsilon);
  result.scale = c.scale;
  result.tolerance = c.tol;

  diag.f_verdict = c.f.verdict(c.schedule).verdict;
  diag.h_verdict = c.h.verdict(c.schedule).verdict;
  const ScalarDependence dep = fit_scalar_dependence(c.h, c.f);
  diag.lambda = dep.lambda;
  diag.h_minus_lambda_f_verdict = dep.residual_growth.verdict;
  diag.f_even_sup = c.f.even().sup();
  diag.f_odd_sup = c.f.odd().sup();
  diag.g_even_sup = c.g.even().sup();
  diag.g_odd_sup = c.g.odd().sup();
  diag.h_even_sup = c.h.even().sup();
  diag.h_odd_sup = c.h.odd().sup();
  try {
    diag.gamma_eta = fit_gamma_eta(c.f, c.g, c.h);
  } catch (const Error& e) {
    diag.gamma_eta_error = e.what();
  }

  std::vector<FamilyTag> tags;
  switch (dep.residual_growth.verdict) {
    case Verdict::kBounded:
      diag.case_label = "A";
      tags = {FamilyTag::T1, FamilyTag::T2, FamilyTag::T3, FamilyTag::T4, FamilyTag::T8};
      break;
    case Verdict::kUnbounded:
      diag.case_label = "B";
      tags = {FamilyTag::T5, FamilyTag::T6, FamilyTag::T7, FamilyTag::T8, FamilyTag::T9};
      break;
    case Verdict::kInconclusive:
      diag.case_label = "inconclusive";
      tags = {FamilyTag::T1, FamilyTag::T2, FamilyTag::T3, FamilyTag::T4, FamilyTag::T5,
              FamilyTag::T6, FamilyTag::T7, FamilyTag::T8, FamilyTag::T9};
      break;
  }

  const std::int64_t validation_radius = options.radius / 2 >= 8 ? options.radius / 2 : 8;
  for (FamilyTag tag : tags) {
    Fit fit;
    try {
      switch (tag) {
        case FamilyTag::T1: fit = fit_t1(c); break;
        case FamilyTag::T2: fit = fit_t2(c); break;
        case FamilyTag::T3: fit = fit_t3(c, dep.lambda); break;
        case FamilyTag::T4: fit = fit_t4(c, dep.lambda); break;
        case FamilyTag::T5: fit = fit_t5(c); break;
        case FamilyTag::T6: fit = fit_t6(c); break;
        case FamilyTag::T7: fit = fit_t7(c); break;
        case FamilyTag::T8: fit = fit_t8(c); break;
        case FamilyTag::T9: fit = fit_t9(c); break;
        default: continue;
      }
    } catch (const std::exception& e) {
      result.rejected.push_back({tag, e.what(), kInf});
      continue;
    }
    if (!(fit.sup <= c.tol)) {
      result.rejected.push_back({tag, "residual above tolerance", fit.sup});
      continue;
    }
    try {
      const FamilyInstance inst = assemble_family(tag, fit.params, t.spec);
      const ValidationReport report = validate_instance(inst, validation_radius);
      if (!report.ok()) {
        std::string why = "re-validation failed:";
        for (const std::string& f : report.failures()) why += " " + f + ";";
        result.rejected.push_back({tag, why, fit.sup});
        continue;
      }
    } catch (const std::exception& e) {
      result.rejected.push_back({tag, std::string("re-validation failed: ") + e.what(), fit.sup});
      continue;
    }
    result.ranked.push_back({tag, std::move(fit.params), fit.l2, fit.sup});
  }
  std::stable_sort(result.ranked.begin(), result.ranked.end(),
                   [](const RankedFit& a, const RankedFit& b) {
                     if (is_catch_all(a.tag) != is_catch_all(b.tag)) return !is_catch_all(a.tag);
                     return static_cast<int>(a.tag) < static_cast<int>(b.tag);
                   });
  return result;
}

}  // namespace feq
