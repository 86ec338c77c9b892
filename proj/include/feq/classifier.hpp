#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "feq/defect.hpp"
#include "feq/families.hpp"
#include "feq/identities.hpp"

namespace feq {

struct ClassifyOptions {
  std::int64_t radius = 32;
  double epsilon = 1e-6;
  /// Schedule of the defect pre-check.
  std::vector<std::int64_t> defect_schedule = kDefaultSchedule;
  double ratio_tol = kDefaultRatioTol;
};

struct RankedFit {
  FamilyTag tag = FamilyTag::T8;
  FamilyParams fitted;
  double l2_residual = 0.0;
  double sup_residual = 0.0;
};

struct RejectedFit {
  FamilyTag tag = FamilyTag::T8;
  std::string reason;
  /// Residual when a fit was produced, otherwise +inf.
  double sup_residual = 0.0;
};

struct ClassifierDiagnostics {
  /// "A" (h dependent on f modulo bounded), "B" (independent) or "inconclusive".
  std::string case_label;
  Verdict f_verdict = Verdict::kInconclusive;
  Verdict h_verdict = Verdict::kInconclusive;
  Complex lambda;
  Verdict h_minus_lambda_f_verdict = Verdict::kInconclusive;
  double f_even_sup = 0.0;
  double f_odd_sup = 0.0;
  double g_even_sup = 0.0;
  double g_odd_sup = 0.0;
  double h_even_sup = 0.0;
  double h_odd_sup = 0.0;
  std::optional<GammaEtaFit> gamma_eta;
  std::string gamma_eta_error;
  DefectReport defect;
};

struct ClassificationResult {
  std::int64_t radius = 0;
  /// 1 + max |f|, |g|, |h| on window(radius).
  double scale = 1.0;
  /// epsilon * scale.
  double tolerance = 0.0;
  /// Fits with sup residual within tolerance that re-validate; best first.
  std::vector<RankedFit> ranked;
  std::vector<RejectedFit> rejected;
  ClassifierDiagnostics diagnostics;

  bool found() const noexcept { return !ranked.empty(); }
};

/// Identifies the families compatible with a triple and recovers their
/// parameters from samples on window(radius). Throws RefusedError when the
/// defect verdict is unbounded. Residuals of reconstructions are sups of
/// |input - reconstruction|; residuals of defining equations are reported as
/// the worst relative pair error times the scale, so both compare against
/// epsilon * scale. Fits within tolerance are ordered by family tag, with the
/// catch-all families T2 and T8 placed after any other match.
ClassificationResult classify(const Triple& t, const ClassifyOptions& options = {});

}  // namespace feq
