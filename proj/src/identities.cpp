#include "feq/identities.hpp"

#include <algorithm>
#include <cmath>

#include "feq/error.hpp"
#include "feq/sampling.hpp"

namespace feq {

namespace {

struct Parts {
  Complex fe, fo, ge, go, he, ho;
  double mf, mg, mh;
};

Parts parts(const Triple& t, const Element& x) {
  const Element nx = neg(t.spec, x);
  const Evaluated f1 = eval_detail(t.f, t.spec, x);
  const Evaluated f2 = eval_detail(t.f, t.spec, nx);
  const Evaluated g1 = eval_detail(t.g, t.spec, x);
  const Evaluated g2 = eval_detail(t.g, t.spec, nx);
  const Evaluated h1 = eval_detail(t.h, t.spec, x);
  const Evaluated h2 = eval_detail(t.h, t.spec, nx);
  return {0.5 * (f1.value + f2.value), 0.5 * (f1.value - f2.value),
          0.5 * (g1.value + g2.value), 0.5 * (g1.value - g2.value),
          0.5 * (h1.value + h2.value), 0.5 * (h1.value - h2.value),
          std::max(f1.magnitude, f2.magnitude), std::max(g1.magnitude, g2.magnitude),
          std::max(h1.magnitude, h2.magnitude)};
}

Complex f_odd(const Triple& t, const Element& x) {
  return 0.5 * (eval(t.f, t.spec, x) - eval(t.f, t.spec, neg(t.spec, x)));
}

}  // namespace

Complex phi1(const Triple& t, const Element& x, const Element& y) {
  const Element nx = neg(t.spec, x);
  const Element ny = neg(t.spec, y);
  return 0.25 * (psi(t, nx, ny) - psi(t, x, y) + psi(t, x, ny) - psi(t, nx, y) +
                 2.0 * f_odd(t, sub(t.spec, x, y)) - 2.0 * f_odd(t, add(t.spec, x, y)));
}

Complex phi2(const Triple& t, const Element& x, const Element& y) {
  const Element ny = neg(t.spec, y);
  const Complex ge_y = 0.5 * (eval(t.g, t.spec, y) + eval(t.g, t.spec, ny));
  return phi1(t, y, x) - f_odd(t, x) * ge_y;
}

Complex phi3(const Triple& t, const Element& x, const Element& y) {
  return -2.0 * phi1(t, x, y) + psi(t, x, neg(t.spec, y)) - psi(t, x, y);
}

Complex phi1_expansion(const Triple& t, const Element& x, const Element& y) {
  const Parts px = parts(t, x);
  const Parts py = parts(t, y);
  return px.fe * py.go + px.ge * py.fo + px.he * py.ho;
}

Complex phi2_expansion(const Triple& t, const Element& x, const Element& y) {
  const Parts px = parts(t, x);
  const Parts py = parts(t, y);
  return px.go * py.fe + px.ho * py.he;
}

Complex phi3_expansion(const Triple& t, const Element& x, const Element& y) {
  const Parts px = parts(t, x);
  const Parts py = parts(t, y);
  return eval(t.f, t.spec, add(t.spec, x, y)) - eval(t.f, t.spec, sub(t.spec, x, y)) +
         2.0 * px.fo * py.go + 2.0 * px.go * py.fo + 2.0 * px.ho * py.ho;
}

bool IdentityReport::pass() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.pass; });
}

IdentityReport identity_report(const Triple& t, std::int64_t radius) {
  if (radius < 0) throw std::invalid_argument("radius must be non-negative");
  const GroupSpec& spec = t.spec;
  TripleCache cache(t, 2 * radius);
  const std::vector<Element> pts = window(spec, radius);

  auto val = [&](const Evaluated& e) { return e.value; };
  auto fo = [&](const Element& z) {
    return 0.5 * (val(cache.f(z)) - val(cache.f(neg(spec, z))));
  };

  std::vector<IdentityCheck> checks(3);
  checks[0].name = "phi1";
  checks[1].name = "phi2";
  checks[2].name = "phi3";
  double max_mag = 0.0;

  // Parity parts on window(radius).
  std::vector<Parts> pp;
  pp.reserve(pts.size());
  for (const Element& x : pts) {
    const Element nx = neg(spec, x);
    const Evaluated& f1 = cache.f(x);
    const Evaluated& f2 = cache.f(nx);
    const Evaluated& g1 = cache.g(x);
    const Evaluated& g2 = cache.g(nx);
    const Evaluated& h1 = cache.h(x);
    const Evaluated& h2 = cache.h(nx);
    pp.push_back({0.5 * (f1.value + f2.value), 0.5 * (f1.value - f2.value),
                  0.5 * (g1.value + g2.value), 0.5 * (g1.value - g2.value),
                  0.5 * (h1.value + h2.value), 0.5 * (h1.value - h2.value),
                  std::max(f1.magnitude, f2.magnitude), std::max(g1.magnitude, g2.magnitude),
                  std::max(h1.magnitude, h2.magnitude)});
  }

  auto psi_c = [&](const Element& a, const Element& b) {
    return cache.defect(EquationKind::kMinus, a, b);
  };
  auto phi1_c = [&](const Element& a, const Element& b, double& mag) {
    const Element na = neg(spec, a);
    const Element nb = neg(spec, b);
    const Evaluated p1 = psi_c(na, nb);
    const Evaluated p2 = psi_c(a, b);
    const Evaluated p3 = psi_c(a, nb);
    const Evaluated p4 = psi_c(na, b);
    const Element d = sub(spec, a, b);
    const Element s = add(spec, a, b);
    mag = std::max({mag, p1.magnitude, p2.magnitude, p3.magnitude, p4.magnitude,
                    cache.f(d).magnitude, cache.f(s).magnitude});
    return 0.25 * (p1.value - p2.value + p3.value - p4.value + 2.0 * fo(d) - 2.0 * fo(s));
  };

  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = 0; j < pts.size(); ++j) {
      const Element& x = pts[i];
      const Element& y = pts[j];
      const Parts& px = pp[i];
      const Parts& py = pp[j];
      double mag = std::max({px.mf * py.mg, px.mg * py.mf, px.mh * py.mh});

      const Complex p1xy = phi1_c(x, y, mag);
      const Complex p1yx = phi1_c(y, x, mag);
      const Complex e1 = px.fe * py.go + px.ge * py.fo + px.he * py.ho;
      const Complex p2 = p1yx - px.fo * py.ge;
      const Complex e2 = px.go * py.fe + px.ho * py.he;
      const Evaluated q1 = psi_c(x, neg(spec, y));
      const Evaluated q2 = psi_c(x, y);
      mag = std::max({mag, q1.magnitude, q2.magnitude});
      const Complex p3 = -2.0 * p1xy + q1.value - q2.value;
      const Complex e3 = val(cache.f(add(spec, x, y))) - val(cache.f(sub(spec, x, y))) +
                         2.0 * px.fo * py.go + 2.0 * px.go * py.fo + 2.0 * px.ho * py.ho;
      max_mag = std::max(max_mag, mag);

      const Complex diffs[3] = {e1 - p1xy, e2 - p2, e3 - p3};
      for (int k = 0; k < 3; ++k) {
        const double r = std::abs(diffs[k]);
        if (r > checks[k].max_residual || (i == 0 && j == 0)) {
          checks[k].max_residual = r;
          checks[k].worst_x = x;
          checks[k].worst_y = y;
        }
      }
    }
  }
  IdentityReport report;
  report.radius = radius;
  for (IdentityCheck& c : checks) {
    c.tolerance = kIdentityRelTol * (1.0 + max_mag);
    c.pass = c.max_residual <= c.tolerance;
  }
  report.checks = std::move(checks);
  return report;
}

GammaEtaFit fit_gamma_eta(const Triple& t, std::int64_t radius) {
  return fit_gamma_eta(Samples::of(t.f, t.spec, radius), Samples::of(t.g, t.spec, radius),
                       Samples::of(t.h, t.spec, radius));
}

GammaEtaFit fit_gamma_eta(const Samples& f, const Samples& g, const Samples& h) {
  const Samples fe = f.even();
  const Samples fo = f.odd();
  const Samples he = h.even();
  const Samples ho = h.odd();
  const Samples go = g.odd();
  const double scale = 1.0 + std::max({f.sup(), g.sup(), h.sup()});
  const double null_tol = kIdentityRelTol * scale;

  GammaEtaFit fit;
  const bool fe_null = fe.sup() <= null_tol;
  if (fe_null) {
    if (he.sup() > null_tol) {
      throw DegenerateError("f^e vanishes on the window while h^e does not; gamma is undefined");
    }
    fit.underdetermined = true;
    fit.gamma = 0.0;
  } else {
    fit.gamma = fe.dot(he) / fe.norm2();
  }
  const Samples target = go + fit.gamma * ho;
  if (fo.sup() <= null_tol) {
    fit.eta_unconstrained = true;
    fit.eta = 0.0;
  } else {
    fit.eta = -fo.dot(target) / fo.norm2();
  }
  fit.residual_sup_eq17 = (he - fit.gamma * fe).sup();
  fit.residual_sup_eq18 = (target + fit.eta * fo).sup();
  return fit;
}

QuadraticCheck check_quadratic(const FnExpr& F, const GroupSpec& spec, std::int64_t radius) {
  const Samples s = Samples::of(F, spec, 2 * radius);
  const std::vector<Element> pts = window(spec, radius);
  const WindowIndex& idx = s.index();
  QuadraticCheck out;
  out.scale = 1.0 + s.sup();
  for (const Element& x : pts) {
    const Complex fx = s[idx.index_of(x)];
    for (const Element& y : pts) {
      const Complex r = s[idx.index_of(add(spec, x, y))] + s[idx.index_of(sub(spec, x, y))] -
                        2.0 * fx - 2.0 * s[idx.index_of(y)];
      out.residual_sup = std::max(out.residual_sup, std::abs(r));
    }
  }
  return out;
}

}  // namespace feq
