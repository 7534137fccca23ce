#pragma once

#include <span>
#include <vector>

namespace nomoforge {

/// Two-sided 95% normal quantile used for every Wald upper bound.
inline constexpr double kWaldZ95 = 1.959964;

struct SlopeFit {
  double intercept = 0.0;
  double slope = 0.0;
  double slope_se = 0.0;
  bool converged = true;
  bool degenerate = false;  // zero predictor variance
};

/// Weighted univariate logistic regression y ~ 1 + x fitted by Newton-Raphson
/// (IRLS). `weights` are frequency weights; empty means all ones.
SlopeFit fit_logistic(std::span<const double> x, std::span<const double> y,
                      std::span<const double> weights = {});

/// Univariate ordinary least squares y ~ 1 + x with the classical slope
/// standard error sqrt(RSS / (n - 2) / Sxx).
SlopeFit fit_ols(std::span<const double> x, std::span<const double> y);

/// True when a single cut point on x separates the classes (complete or
/// quasi-complete separation), including the single-class case.
bool is_separated(std::span<const double> x, std::span<const double> y);

/// Logistic fit with the Haldane-Anscombe correction applied under
/// separation: 0.5 pseudo-count added to every (distinct x, class) cell. For a
/// binary predictor this is the classic +0.5 on each cell of the 2x2 table.
struct CorrectedLogisticFit {
  SlopeFit fit;
  bool corrected = false;
};
CorrectedLogisticFit fit_logistic_corrected(std::span<const double> x, std::span<const double> y);

}  // namespace nomoforge
