#include <algorithm>
#include <cmath>
#include <limits>

#include "srtlab/criteria.hpp"
#include "srtlab/errors.hpp"
#include "srtlab/stats.hpp"

namespace srtlab {

LinearFit ols(std::span<const double> x, std::span<const double> y) {
  LinearFit fit;
  const std::size_t n = std::min(x.size(), y.size());
  fit.points = n;
  if (n < 2) return fit;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) return fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : sxy * sxy / (sxx * syy);
  return fit;
}

std::string_view to_string(Trend t) {
  switch (t) {
    case Trend::vanishing: return "vanishing";
    case Trend::bounded: return "bounded";
    case Trend::growing: return "growing";
    case Trend::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

void trend_statistics(const CriterionGrid& grid, std::vector<LinearFit>& fits, std::vector<double>& halving) {
  fits.clear();
  halving.clear();
  for (const auto& row : grid.Q) {
    std::vector<double> lx, lq;
    for (std::size_t j = 0; j < row.size() && j < grid.x.size(); ++j) {
      if (!(row[j] > 0.0) || !(grid.x[j] > 1.0)) continue;
      lx.push_back(std::log(std::log(grid.x[j])));
      lq.push_back(std::log(row[j]));
    }
    fits.push_back(ols(lx, lq));
  }
  for (std::size_t i = 0; i + 1 < grid.Q.size(); ++i) {
    const double a = grid.Q[i].empty() ? 0.0 : grid.Q[i].back();
    const double b = grid.Q[i + 1].empty() ? 0.0 : grid.Q[i + 1].back();
    if (a > 0.0)
      halving.push_back(b / a);
    else
      halving.push_back(b > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  }
}

Trend classify_trend(const CriterionGrid& grid) {
  if (grid.x.size() < 3) throw ConfigError("classify_trend needs at least 3 x points");
  bool all_zero = true;
  for (const auto& row : grid.Q)
    for (double v : row)
      if (v != 0.0) all_zero = false;
  if (all_zero) return Trend::vanishing;

  std::vector<LinearFit> fits;
  std::vector<double> halving;
  trend_statistics(grid, fits, halving);
  using Th = TrendThresholds;

  if (fits.size() == 1) {
    const LinearFit& f = fits[0];
    if (f.slope < -Th::slope && f.r_squared > Th::r_squared) return Trend::vanishing;
    if (f.slope > Th::slope && f.r_squared > Th::r_squared) return Trend::growing;
    if (std::fabs(f.slope) <= Th::slope) return Trend::bounded;
    return Trend::inconclusive;
  }
  const LinearFit& weakest =
      *std::min_element(fits.begin(), fits.end(), [](const LinearFit& a, const LinearFit& b) { return a.slope < b.slope; });
  if (weakest.slope > Th::slope && weakest.r_squared > Th::r_squared) return Trend::growing;
  if (!halving.empty() && std::all_of(halving.begin(), halving.end(), [](double r) { return r <= Th::halving; }))
    return Trend::vanishing;
  if (std::all_of(fits.begin(), fits.end(), [](const LinearFit& f) { return std::fabs(f.slope) <= Th::slope; }))
    return Trend::bounded;
  return Trend::inconclusive;
}

void annotate_trend(CriterionGrid& grid) {
  trend_statistics(grid, grid.fits, grid.halving_rates);
  grid.trend = classify_trend(grid);
}

LinearFit eta_exponent(const CriterionGrid& grid) {
  std::vector<double> le, lq;
  for (std::size_t i = 0; i < grid.eta.size() && i < grid.Q.size(); ++i) {
    if (grid.Q[i].empty() || !(grid.Q[i].back() > 0.0)) continue;
    le.push_back(std::log(grid.eta[i]));
    lq.push_back(std::log(grid.Q[i].back()));
  }
  return ols(le, lq);
}

}  // namespace srtlab
