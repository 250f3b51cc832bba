#include "apec/fit.hpp"

#include <algorithm>
#include <cmath>

#include "apec/error.hpp"

namespace apec {

LineFit least_squares(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw Error(ErrorCode::invalid_input, "least_squares: need at least two paired samples");
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  LineFit fit;
  if (sxx == 0.0) {
    fit.degenerate = true;
    fit.intercept = my;
    return fit;
  }
  const auto [ymin, ymax] = std::minmax_element(ys.begin(), ys.end());
  if (*ymin == *ymax) syy = sxy = 0.0;  // rounding in the mean must not tilt flat data
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (syy == 0.0) {
    // Perfectly flat data: the line explains everything there is to explain.
    fit.degenerate = true;
    fit.r_squared = 1.0;
  } else {
    fit.r_squared = std::min(1.0, (sxy * sxy) / (sxx * syy));
  }
  return fit;
}

std::vector<double> geometric_grid(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi >= lo) || count < 1 || !std::isfinite(hi)) {
    throw Error(ErrorCode::invalid_input, "geometric_grid: need 0 < lo <= hi and count >= 1");
  }
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  if (count == 1) {
    out.push_back(lo);
    return out;
  }
  const double llo = std::log(lo);
  const double step = (std::log(hi) - llo) / (count - 1);
  for (int i = 0; i < count; ++i) out.push_back(std::exp(llo + step * i));
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<double> geometric_grid_per_decade(double lo, double hi, int per_decade) {
  if (per_decade < 1) throw Error(ErrorCode::invalid_input, "geometric_grid: per_decade must be >= 1");
  const double decades = std::log10(hi / lo);
  const int count = static_cast<int>(std::lround(decades * per_decade)) + 1;
  return geometric_grid(lo, hi, std::max(count, 2));
}

}  // namespace apec
