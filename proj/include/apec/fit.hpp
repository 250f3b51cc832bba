#pragma once

#include <span>
#include <vector>

namespace apec {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  bool degenerate = false;  // zero variance in x or y
};

// Ordinary least squares y = slope * x + intercept.
LineFit least_squares(std::span<const double> xs, std::span<const double> ys);

// `count` values from `lo` to `hi` (inclusive), equally spaced in log scale.
std::vector<double> geometric_grid(double lo, double hi, int count);

// Geometric grid with a fixed number of points per decade, endpoints included.
std::vector<double> geometric_grid_per_decade(double lo, double hi, int per_decade);

}  // namespace apec
