#include "feq/fitting.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "feq/error.hpp"

namespace feq {

ScalarDependence fit_scalar_dependence(const Samples& u, const Samples& v) {
  ScalarDependence out;
  const double null_tol = kIdentityRelTol * (1.0 + std::max(u.sup(), v.sup()));
  if (v.sup() <= null_tol) {
    out.degenerate = true;
    out.lambda = 0.0;
  } else {
    out.lambda = v.dot(u) / v.norm2();
  }
  const Samples r = u - out.lambda * v;
  out.sup_residual = r.sup();
  out.l2_residual = std::sqrt(r.norm2());
  out.residual_growth = r.verdict(nested_schedule(u.radius()));
  out.dependent = out.residual_growth.verdict == Verdict::kBounded;
  return out;
}

ScalarDependence fit_scalar_dependence(const FnExpr& u, const FnExpr& v, const GroupSpec& spec,
                                       std::int64_t radius) {
  return fit_scalar_dependence(Samples::of(u, spec, radius), Samples::of(v, spec, radius));
}

namespace {

double wrap_angle(double a) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  a = std::fmod(a + std::numbers::pi, kTwoPi);
  if (a < 0) a += kTwoPi;
  return a - std::numbers::pi;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/// Sample angle minimising the summed circular distance to all others.
double circular_median(const std::vector<double>& angles) {
  double best = angles.front();
  double best_cost = std::numeric_limits<double>::infinity();
  for (double c : angles) {
    double cost = 0.0;
    for (double a : angles) cost += std::abs(wrap_angle(a - c));
    if (cost < best_cost) {
      best_cost = cost;
      best = c;
    }
  }
  return best;
}

/// Least-squares slope of ys against xs, with intercept.
double slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

Complex fit_axis_ratio(const SampleMap& samples, const GroupSpec& spec, std::size_t axis) {
  const Element e = generator(spec, axis);
  // Contiguous path through the origin along the axis.
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  while (samples.count(scale(spec, hi + 1, e))) ++hi;
  while (samples.count(scale(spec, lo - 1, e))) --lo;
  if (!samples.count(identity(spec))) throw DegenerateError("no sample at the identity");
  if (hi - lo < 1) {
    throw DegenerateError("samples do not cover generator axis " + std::to_string(axis));
  }
  std::vector<Complex> path;
  for (std::int64_t k = lo; k <= hi; ++k) {
    const Element x = scale(spec, k, e);
    const Complex v = samples.at(x);
    if (v == Complex(0.0, 0.0)) {
      throw DegenerateError("zero sample on generator path at " + to_string(x));
    }
    path.push_back(v);
  }
  std::vector<double> logs;
  std::vector<double> phases;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const Complex q = path[k + 1] / path[k];
    logs.push_back(std::log(std::abs(q)));
    phases.push_back(std::arg(q));
  }
  const double theta = circular_median(phases);
  // Refinement: regress log|s| and the unwrapped phase on the coordinate.
  std::vector<double> ks;
  std::vector<double> log_mag;
  std::vector<double> phase;
  double cumulative = std::arg(path.front());
  for (std::size_t k = 0; k < path.size(); ++k) {
    if (k > 0) cumulative += theta + wrap_angle(phases[k - 1] - theta);
    ks.push_back(static_cast<double>(lo + static_cast<std::int64_t>(k)));
    log_mag.push_back(std::log(std::abs(path[k])));
    phase.push_back(cumulative);
  }
  const double log_slope = path.size() > 2 ? slope(ks, log_mag) : median(logs);
  const double phase_slope = path.size() > 2 ? slope(ks, phase) : theta;
  return std::polar(std::exp(log_slope), phase_slope);
}

}  // namespace

MultiplicativeFit fit_multiplicative(const SampleMap& samples, const GroupSpec& spec) {
  spec.validate();
  std::vector<Complex> ratios;
  for (std::size_t i = 0; i < spec.free_rank; ++i) ratios.push_back(fit_axis_ratio(samples, spec, i));
  std::vector<Complex> roots;
  const auto origin = samples.find(identity(spec));
  if (origin == samples.end()) throw DegenerateError("no sample at the identity");
  if (origin->second == Complex(0.0, 0.0)) {
    throw DegenerateError("zero sample on generator path at " + to_string(origin->first));
  }
  for (std::size_t j = 0; j < spec.torsion_orders.size(); ++j) {
    const Element t = generator(spec, spec.free_rank + j);
    auto it = samples.find(t);
    if (it == samples.end()) throw DegenerateError("no sample at torsion generator " + to_string(t));
    const Complex q = it->second / origin->second;
    const double n = static_cast<double>(spec.torsion_orders[j]);
    const double k = std::round(std::arg(q) * n / (2.0 * std::numbers::pi));
    roots.push_back(std::polar(1.0, 2.0 * std::numbers::pi * k / n));
  }
  MultiplicativeFit out{FnExpr::multiplicative(std::move(ratios), std::move(roots)), 0.0};
  for (const auto& [x, v] : samples) {
    try {
      out.sup_residual = std::max(out.sup_residual, std::abs(v - eval(out.m, spec, x)));
    } catch (const RangeError&) {
      out.sup_residual = std::numeric_limits<double>::infinity();
    }
  }
  return out;
}

AdditiveFit fit_additive(const SampleMap& samples, const GroupSpec& spec) {
  spec.validate();
  const auto d = static_cast<Eigen::Index>(spec.free_rank);
  Eigen::MatrixXd ata = Eigen::MatrixXd::Zero(d, d);
  Eigen::VectorXcd atb = Eigen::VectorXcd::Zero(d);
  for (const auto& [x, v] : samples) {
    check_conforms(spec, x);
    for (Eigen::Index i = 0; i < d; ++i) {
      const auto xi = static_cast<double>(x.free[static_cast<std::size_t>(i)]);
      atb(i) += xi * v;
      for (Eigen::Index j = 0; j < d; ++j) {
        ata(i, j) += xi * static_cast<double>(x.free[static_cast<std::size_t>(j)]);
      }
    }
  }
  std::vector<Complex> coeffs(spec.free_rank, Complex(0.0, 0.0));
  if (d > 0) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(ata);
    if (!lu.isInvertible()) throw DegenerateError("samples do not span the free coordinates");
    const Eigen::VectorXd re = lu.solve(atb.real());
    const Eigen::VectorXd im = lu.solve(atb.imag());
    for (Eigen::Index i = 0; i < d; ++i) coeffs[static_cast<std::size_t>(i)] = Complex(re(i), im(i));
  }
  AdditiveFit out{FnExpr::additive(std::move(coeffs)), 0.0};
  for (const auto& [x, v] : samples) {
    out.sup_residual = std::max(out.sup_residual, std::abs(v - eval(out.a, spec, x)));
  }
  return out;
}

namespace {

Eigen::VectorXd to_real(const std::vector<Complex>& r) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(2 * r.size()));
  for (std::size_t i = 0; i < r.size(); ++i) {
    out(static_cast<Eigen::Index>(2 * i)) = r[i].real();
    out(static_cast<Eigen::Index>(2 * i + 1)) = r[i].imag();
  }
  return out;
}

std::vector<Complex> to_complex(const Eigen::VectorXd& p) {
  std::vector<Complex> out(static_cast<std::size_t>(p.size() / 2));
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = Complex(p(static_cast<Eigen::Index>(2 * i)), p(static_cast<Eigen::Index>(2 * i + 1)));
  }
  return out;
}

double safe_cost(const Eigen::VectorXd& r) {
  const double c = r.squaredNorm();
  return std::isfinite(c) ? c : std::numeric_limits<double>::infinity();
}

}  // namespace

LmResult minimize_lm(const ComplexResidualFn& residuals, std::vector<Complex> initial,
                     int max_iterations) {
  auto eval_r = [&](const Eigen::VectorXd& p) -> Eigen::VectorXd {
    try {
      return to_real(residuals(to_complex(p)));
    } catch (const RangeError&) {
      return Eigen::VectorXd();
    }
  };
  Eigen::VectorXd p = to_real(initial);
  Eigen::VectorXd r = eval_r(p);
  LmResult out;
  if (r.size() == 0) {
    out.params = std::move(initial);
    out.cost = std::numeric_limits<double>::infinity();
    return out;
  }
  double cost = safe_cost(r);
  double damping = 1e-3;
  const Eigen::Index n = p.size();
  int it = 0;
  for (; it < max_iterations && cost > 0.0; ++it) {
    Eigen::MatrixXd jac(r.size(), n);
    bool ok = true;
    for (Eigen::Index k = 0; k < n && ok; ++k) {
      const double step = 1e-7 * std::max(1.0, std::abs(p(k)));
      Eigen::VectorXd hi = p;
      Eigen::VectorXd lo = p;
      hi(k) += step;
      lo(k) -= step;
      const Eigen::VectorXd rh = eval_r(hi);
      const Eigen::VectorXd rl = eval_r(lo);
      if (rh.size() != r.size() || rl.size() != r.size()) {
        ok = false;
        break;
      }
      jac.col(k) = (rh - rl) / (2.0 * step);
    }
    if (!ok) break;
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd grad = jac.transpose() * r;
    bool improved = false;
    for (int tries = 0; tries < 30; ++tries) {
      Eigen::MatrixXd a = jtj;
      for (Eigen::Index k = 0; k < n; ++k) a(k, k) += damping * std::max(jtj(k, k), 1e-12);
      const Eigen::VectorXd delta = a.ldlt().solve(-grad);
      const Eigen::VectorXd candidate = p + delta;
      const Eigen::VectorXd rc = eval_r(candidate);
      const double c = rc.size() == r.size() ? safe_cost(rc) : std::numeric_limits<double>::infinity();
      if (c < cost) {
        const bool tiny = delta.norm() <= 1e-15 * (1.0 + p.norm());
        p = candidate;
        r = rc;
        const double old = cost;
        cost = c;
        damping = std::max(damping * 0.3, 1e-12);
        improved = true;
        if (tiny || old - c <= 1e-30 * old) it = max_iterations;
        break;
      }
      damping *= 10.0;
    }
    if (!improved) break;
  }
  out.params = to_complex(p);
  out.cost = cost;
  out.iterations = it;
  return out;
}

}  // namespace feq
