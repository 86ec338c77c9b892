#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "feq/fnexpr.hpp"
#include "feq/sampling.hpp"

namespace feq {

struct ScalarDependence {
  Complex lambda;
  double sup_residual = 0.0;
  double l2_residual = 0.0;
  /// v was numerically null; lambda is reported as 0.
  bool degenerate = false;
  /// Growth evidence of u - lambda v on nested sub-windows.
  GrowthEvidence residual_growth;
  /// u - lambda v received the verdict "bounded".
  bool dependent = false;
};

/// lambda minimising the l2 norm of u - lambda v over window(radius); radius >= 8.
ScalarDependence fit_scalar_dependence(const FnExpr& u, const FnExpr& v, const GroupSpec& spec,
                                       std::int64_t radius);
ScalarDependence fit_scalar_dependence(const Samples& u, const Samples& v);

struct MultiplicativeFit {
  FnExpr m;
  double sup_residual = 0.0;
};

/// Recovers a character from samples covering every free generator axis through
/// the origin and every torsion generator. Per free axis the ratio starts at the
/// median of successive quotients and is refined by regressing log-magnitude and
/// unwrapped phase on the axis coordinate. Throws DegenerateError naming the
/// first zero sample on a path.
MultiplicativeFit fit_multiplicative(const SampleMap& samples, const GroupSpec& spec);

struct AdditiveFit {
  FnExpr a;
  double sup_residual = 0.0;
};

/// Least-squares regression of the values on the free coordinates (no intercept).
AdditiveFit fit_additive(const SampleMap& samples, const GroupSpec& spec);

struct LmResult {
  std::vector<Complex> params;
  /// Sum of squared residual moduli at the returned parameters.
  double cost = 0.0;
  int iterations = 0;
};

using ComplexResidualFn = std::function<std::vector<Complex>(const std::vector<Complex>&)>;

/// Levenberg-Marquardt over complex parameters (split into real and imaginary
/// parts) with a finite-difference Jacobian.
LmResult minimize_lm(const ComplexResidualFn& residuals, std::vector<Complex> initial,
                     int max_iterations = 100);

}  // namespace feq
