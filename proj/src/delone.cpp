#include "apec/delone.hpp"

#include <algorithm>
#include <cmath>

#include "apec/error.hpp"
#include "apec/fit.hpp"

namespace apec {

namespace {

void require_two_points(const DeloneSet& s, const char* who) {
  if (s.size() < 2) throw Error(ErrorCode::undefined_quantity, std::string(who) + ": need at least two points");
}

bool same_patch(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > kPatchTolerance) return false;
  }
  return true;
}

// Points of `pts` with pts - center in (lo, hi), as offsets from center.
std::vector<double> window_offsets(std::span<const double> pts, double center, double lo, double hi) {
  auto first = std::upper_bound(pts.begin(), pts.end(), center + lo);
  auto last = std::lower_bound(first, pts.end(), center + hi);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(last - first));
  for (auto it = first; it != last; ++it) out.push_back(*it - center);
  return out;
}

// Every core point (|x| < core) of either list has a partner within tolerance in the other.
bool lists_agree(const std::vector<double>& a, double a_offset, const std::vector<double>& b, double core) {
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (i < a.size() && j < b.size() && std::abs((a[i] - a_offset) - b[j]) <= kPatchTolerance) {
      ++i;
      ++j;
    } else if (j == b.size() || (i < a.size() && a[i] - a_offset < b[j])) {
      if (std::abs(a[i] - a_offset) < core) return false;
      ++i;
    } else {
      if (std::abs(b[j]) < core) return false;
      ++j;
    }
  }
  return true;
}

}  // namespace

double min_gap(const DeloneSet& s) {
  require_two_points(s, "min_gap");
  auto p = s.points();
  double best = p[1] - p[0];
  for (std::size_t i = 2; i < p.size(); ++i) best = std::min(best, p[i] - p[i - 1]);
  return best;
}

double covering_radius(const DeloneSet& s) {
  require_two_points(s, "covering_radius");
  auto p = s.points();
  double widest = std::max(p.front() + s.radius(), s.radius() - p.back());
  for (std::size_t i = 1; i < p.size(); ++i) widest = std::max(widest, p[i] - p[i - 1]);
  return widest / 2.0;
}

std::vector<PatchCount> patch_census(const DeloneSet& s, double rho) {
  if (!(rho > 0.0)) throw Error(ErrorCode::invalid_input, "patch_census: rho must be > 0");
  if (rho >= s.radius() / 2.0) throw Error(ErrorCode::insufficient_data, "patch_census: rho must be below radius / 2");
  std::vector<PatchCount> census;
  auto pts = s.points();
  for (double g : pts) {
    if (std::abs(g) > s.radius() - rho) continue;
    std::vector<double> offsets = window_offsets(pts, g, -rho, rho);
    auto hit = std::find_if(census.begin(), census.end(),
                            [&](const PatchCount& pc) { return same_patch(pc.patch.offsets, offsets); });
    if (hit != census.end()) {
      ++hit->count;
    } else {
      census.push_back({{rho, std::move(offsets)}, 1});
    }
  }
  return census;
}

std::vector<double> default_metric_grid() { return geometric_grid(0x1p-12, kDistanceCap, 48); }

bool locally_matches(std::span<const double> a, double a_center, std::span<const double> b, double b_center,
                     double eps) {
  const double radius = 1.0 / eps;
  const double core = radius - kPatchTolerance;
  const double reach = radius + 2.0 * kPatchTolerance;

  const std::vector<double> b_local = window_offsets(b, b_center, -reach, reach);
  // Anchor: the b-point nearest the centre, if it lies in the core of the ball.
  const double* anchor = nullptr;
  for (const double& x : b_local) {
    if (std::abs(x) < core && (anchor == nullptr || std::abs(x) < std::abs(*anchor))) anchor = &x;
  }

  const std::vector<double> a_local = window_offsets(a, a_center, -reach - eps, reach + eps);
  if (anchor != nullptr) {
    for (double xa : a_local) {
      const double g = xa - *anchor;
      if (std::abs(g) >= eps) continue;
      if (lists_agree(a_local, g, b_local, core)) return true;
    }
    return false;
  }

  // b is empty near the centre: need a shift that leaves the core free of a-points.
  std::vector<std::pair<double, double>> blocked;
  for (double xa : a_local) {
    const double lo = std::max(xa - core, -eps);
    const double hi = std::min(xa + core, eps);
    if (lo < hi) blocked.emplace_back(lo, hi);
  }
  std::sort(blocked.begin(), blocked.end());
  double covered_to = -eps;
  for (const auto& [lo, hi] : blocked) {
    if (lo > covered_to) return true;  // open gap in (-eps, eps)
    covered_to = std::max(covered_to, hi);
  }
  return covered_to < eps;
}

double delone_distance(const DeloneSet& a, const DeloneSet& b, std::span<const double> eps_grid) {
  if (eps_grid.empty()) throw Error(ErrorCode::invalid_input, "delone_distance: empty grid");
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    if (!(eps_grid[i] > 0.0) || eps_grid[i] > kDistanceCap * (1.0 + 1e-12) || (i > 0 && !(eps_grid[i] > eps_grid[i - 1]))) {
      throw Error(ErrorCode::invalid_input, "delone_distance: grid must ascend within (0, 1/sqrt(2)]");
    }
  }
  const double needed = 1.0 / eps_grid.front() + eps_grid.back();
  if (a.radius() < needed || b.radius() < needed) {
    throw Error(ErrorCode::insufficient_data, "delone_distance: data radius below 1/min(grid) + max(grid)");
  }
  // Feasibility is monotone in eps: a shift that works at eps works at every larger eps.
  std::size_t lo = 0, hi = eps_grid.size();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (locally_matches(a.points(), 0.0, b.points(), 0.0, eps_grid[mid])) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  if (lo == eps_grid.size()) return kDistanceCap;
  return std::min(eps_grid[lo], kDistanceCap);
}

double delone_distance(const DeloneSet& a, const DeloneSet& b) {
  const std::vector<double> grid = default_metric_grid();
  return delone_distance(a, b, grid);
}

DeloneSet shifted(const DeloneSet& s, double g) {
  const double radius = s.radius() - std::abs(g);
  if (!(radius > 0.0)) throw Error(ErrorCode::insufficient_data, "shifted: shift exceeds the data radius");
  std::vector<double> pts;
  pts.reserve(s.size());
  for (double p : s.points()) {
    const double q = p - g;
    if (std::abs(q) <= radius && (pts.empty() || q > pts.back())) pts.push_back(q);
  }
  return DeloneSet(std::move(pts), radius);
}

}  // namespace apec
