#pragma once

#include <cstdint>
#include <string>

#include "feq/defect.hpp"
#include "feq/fnexpr.hpp"
#include "feq/sampling.hpp"

namespace feq {

/// 1/4 [psi(-x,-y) - psi(x,y) + psi(x,-y) - psi(-x,y) + 2 f^o(x-y) - 2 f^o(x+y)].
Complex phi1(const Triple& t, const Element& x, const Element& y);
/// phi1(y, x) - f^o(x) g^e(y).
Complex phi2(const Triple& t, const Element& x, const Element& y);
/// -2 phi1(x, y) + psi(x, -y) - psi(x, y).
Complex phi3(const Triple& t, const Element& x, const Element& y);

/// f^e(x)g^o(y) + g^e(x)f^o(y) + h^e(x)h^o(y); equals phi1 for every triple.
Complex phi1_expansion(const Triple& t, const Element& x, const Element& y);
/// g^o(x)f^e(y) + h^o(x)h^e(y); equals phi2.
Complex phi2_expansion(const Triple& t, const Element& x, const Element& y);
/// f(x+y) - f(x-y) + 2f^o(x)g^o(y) + 2g^o(x)f^o(y) + 2h^o(x)h^o(y); equals phi3.
Complex phi3_expansion(const Triple& t, const Element& x, const Element& y);

struct IdentityCheck {
  std::string name;
  /// Largest |expansion - phi| over the window pairs.
  double max_residual = 0.0;
  Element worst_x;
  Element worst_y;
  /// Tolerance applied: kIdentityRelTol * (1 + largest term magnitude).
  double tolerance = 0.0;
  bool pass = true;
};

struct IdentityReport {
  std::int64_t radius = 0;
  std::vector<IdentityCheck> checks;
  bool pass() const noexcept;
};

/// Compares the three phi formulas with their expansions at every pair of
/// window(radius).
IdentityReport identity_report(const Triple& t, std::int64_t radius);

struct GammaEtaFit {
  Complex gamma;
  Complex eta;
  /// sup |h^e - gamma f^e| over the fitting window.
  double residual_sup_eq17 = 0.0;
  /// sup |g^o + gamma h^o + eta f^o| over the fitting window.
  double residual_sup_eq18 = 0.0;
  /// gamma could not be determined: f^e and h^e both vanish on the window.
  bool underdetermined = false;
  /// f^o vanishes on the window, so eta is reported as 0.
  bool eta_unconstrained = false;
};

/// Least-squares gamma with h^e ~ gamma f^e, then eta with
/// g^o + gamma h^o ~ -eta f^o. Throws DegenerateError when f^e is numerically
/// null while h^e is not.
GammaEtaFit fit_gamma_eta(const Triple& t, std::int64_t radius);
/// Same fit on samples taken over a common window.
GammaEtaFit fit_gamma_eta(const Samples& f, const Samples& g, const Samples& h);

struct QuadraticCheck {
  double residual_sup = 0.0;
  /// 1 + largest |F| on window(2 * radius).
  double scale = 1.0;
};

/// sup over window pairs of |F(x+y) + F(x-y) - 2F(x) - 2F(y)|.
QuadraticCheck check_quadratic(const FnExpr& F, const GroupSpec& spec, std::int64_t radius);

}  // namespace feq
