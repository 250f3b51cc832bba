#pragma once

#include <span>
#include <vector>

#include "apec/delone_set.hpp"

namespace apec {

// Point-matching tolerance for metric feasibility and patch comparison.
inline constexpr double kPatchTolerance = 0x1p-30;
// The hull metric is capped at 1/sqrt(2).
inline constexpr double kDistanceCap = 0.70710678118654752440;

double min_gap(const DeloneSet& s);

// Half the largest gap, counting the stretches between the data window edges
// and the outermost points.
double covering_radius(const DeloneSet& s);

struct Patch {
  double rho = 0.0;
  std::vector<double> offsets;  // points of (s - g) inside the open ball B(0, rho), sorted
};

struct PatchCount {
  Patch patch;
  std::size_t count = 0;
};

/// Distinct rho-patches around the points with |g| <= radius - rho, in order of
/// first appearance, with multiplicities.
std::vector<PatchCount> patch_census(const DeloneSet& s, double rho);

/// 48 geometric values from 2^-12 up to 1/sqrt(2), ascending.
std::vector<double> default_metric_grid();

/// Whether some |g| < eps gives (a - a_center - g) ∩ B(0, 1/eps) = (b - b_center) ∩ B(0, 1/eps).
///
/// Points within kPatchTolerance of the sphere are ignored. When b has a point
/// in the ball the shift must carry some a-point onto the b-point nearest the
/// centre, so only those candidate shifts are compared; otherwise the shifts
/// that leave the ball empty of a-points are searched directly.
bool locally_matches(std::span<const double> a, double a_center, std::span<const double> b, double b_center,
                     double eps);

/// Grid-resolved hull metric: the smallest grid value at which the sets match
/// locally, capped at 1/sqrt(2). An upper bound with a one-step error bar.
/// Throws Error(insufficient_data) if either radius is below 1/min(grid) + max(grid).
double delone_distance(const DeloneSet& a, const DeloneSet& b, std::span<const double> eps_grid);
double delone_distance(const DeloneSet& a, const DeloneSet& b);

/// s - g, trimmed to the shrunken data window [-(radius - |g|), radius - |g|].
DeloneSet shifted(const DeloneSet& s, double g);

}  // namespace apec
