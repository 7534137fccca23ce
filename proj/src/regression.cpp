#include "nomoforge/regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace nomoforge {

SlopeFit fit_logistic(std::span<const double> x, std::span<const double> y, std::span<const double> weights) {
  const std::size_t n = x.size();
  auto w = [&](std::size_t i) { return weights.empty() ? 1.0 : weights[i]; };

  SlopeFit fit;
  double sw = 0.0, swx = 0.0, swxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sw += w(i);
    swx += w(i) * x[i];
    swxx += w(i) * x[i] * x[i];
  }
  if (sw <= 0.0 || swxx * sw - swx * swx <= 1e-12 * std::max(1.0, swxx * sw)) {
    fit.degenerate = true;
    return fit;
  }

  // Start from the intercept-only solution.
  double sy = 0.0;
  for (std::size_t i = 0; i < n; ++i) sy += w(i) * y[i];
  const double p0 = std::clamp(sy / sw, 1e-6, 1.0 - 1e-6);
  double b0 = std::log(p0 / (1.0 - p0));
  double b1 = 0.0;

  double i00 = 0.0, i01 = 0.0, i11 = 0.0;
  fit.converged = false;
  for (int iter = 0; iter < 100; ++iter) {
    double g0 = 0.0, g1 = 0.0;
    i00 = i01 = i11 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double eta = b0 + b1 * x[i];
      const double p = 1.0 / (1.0 + std::exp(-eta));
      const double v = p * (1.0 - p);
      g0 += w(i) * (y[i] - p);
      g1 += w(i) * (y[i] - p) * x[i];
      i00 += w(i) * v;
      i01 += w(i) * v * x[i];
      i11 += w(i) * v * x[i] * x[i];
    }
    const double det = i00 * i11 - i01 * i01;
    if (!(det > 0.0)) break;
    const double d0 = (i11 * g0 - i01 * g1) / det;
    const double d1 = (i00 * g1 - i01 * g0) / det;
    b0 += d0;
    b1 += d1;
    if (std::fabs(d0) < 1e-12 * (1.0 + std::fabs(b0)) && std::fabs(d1) < 1e-12 * (1.0 + std::fabs(b1))) {
      fit.converged = true;
      break;
    }
  }

  // Information at the final estimate.
  i00 = i01 = i11 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double p = 1.0 / (1.0 + std::exp(-(b0 + b1 * x[i])));
    const double v = p * (1.0 - p);
    i00 += w(i) * v;
    i01 += w(i) * v * x[i];
    i11 += w(i) * v * x[i] * x[i];
  }
  const double det = i00 * i11 - i01 * i01;
  fit.intercept = b0;
  fit.slope = b1;
  fit.slope_se = det > 0.0 ? std::sqrt(i00 / det) : std::numeric_limits<double>::infinity();
  return fit;
}

SlopeFit fit_ols(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  SlopeFit fit;
  if (n == 0) {
    fit.degenerate = true;
    return fit;
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0.0) {
    fit.degenerate = true;
    fit.intercept = my;
    return fit;
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (n > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - fit.intercept - fit.slope * x[i];
      rss += r * r;
    }
    fit.slope_se = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
  }
  return fit;
}

bool is_separated(std::span<const double> x, std::span<const double> y) {
  const double inf = std::numeric_limits<double>::infinity();
  double min1 = inf, max1 = -inf, min0 = inf, max0 = -inf;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (y[i] > 0.5) {
      min1 = std::min(min1, x[i]);
      max1 = std::max(max1, x[i]);
    } else {
      min0 = std::min(min0, x[i]);
      max0 = std::max(max0, x[i]);
    }
  }
  if (min1 == inf || min0 == inf) return true;
  return max0 <= min1 || max1 <= min0;
}

CorrectedLogisticFit fit_logistic_corrected(std::span<const double> x, std::span<const double> y) {
  // Aggregate into (distinct x, class) cells; identical likelihood, fewer terms.
  std::map<double, std::pair<double, double>> cells;  // x -> (count y=0, count y=1)
  for (std::size_t i = 0; i < x.size(); ++i) {
    auto& c = cells[x[i]];
    (y[i] > 0.5 ? c.second : c.first) += 1.0;
  }
  CorrectedLogisticFit out;
  out.corrected = is_separated(x, y);
  std::vector<double> cx, cy, cw;
  for (const auto& [value, counts] : cells) {
    const double pad = out.corrected ? 0.5 : 0.0;
    if (counts.first + pad > 0.0) {
      cx.push_back(value);
      cy.push_back(0.0);
      cw.push_back(counts.first + pad);
    }
    if (counts.second + pad > 0.0) {
      cx.push_back(value);
      cy.push_back(1.0);
      cw.push_back(counts.second + pad);
    }
  }
  out.fit = fit_logistic(cx, cy, cw);
  return out;
}

}  // namespace nomoforge
