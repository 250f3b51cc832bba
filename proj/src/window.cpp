#include "apec/window.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "apec/error.hpp"
#include "apec/fit.hpp"

namespace apec {

namespace {

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw Error(ErrorCode::invalid_input, std::string(what) + ": non-finite value");
}

// Middle-segment Cantor construction, keeping the gaps of each step.
struct CantorLevels {
  std::vector<Interval> leaves;
  std::vector<std::vector<Interval>> gaps;  // gaps[s-1]: gaps created at step s, left to right
};

CantorLevels build_cantor(double gamma, int depth) {
  CantorLevels out;
  out.leaves = {{0.0, 1.0}};
  for (int step = 1; step <= depth; ++step) {
    std::vector<Interval> next;
    std::vector<Interval> gaps;
    next.reserve(out.leaves.size() * 2);
    gaps.reserve(out.leaves.size());
    for (const Interval& iv : out.leaves) {
      const double piece = iv.length() / gamma;
      const double left_end = iv.lo + piece;
      const double right_start = iv.hi - piece;
      next.push_back({iv.lo, left_end});
      next.push_back({right_start, iv.hi});
      gaps.push_back({left_end, right_start});
    }
    out.leaves = std::move(next);
    out.gaps.push_back(std::move(gaps));
  }
  return out;
}

// Steps 2, 8, 32, ...: one filled gap each, far apart in scale.
std::vector<int> sparse_steps(int depth) {
  std::vector<int> steps;
  for (int s = 2; s <= depth; s *= 4) steps.push_back(s);
  return steps;
}

}  // namespace

// ---- IntervalUnion -----------------------------------------------------------

double IntervalUnion::lo() const {
  if (parts_.empty()) throw Error(ErrorCode::undefined_quantity, "empty interval union has no lower end");
  return parts_.front().lo;
}

double IntervalUnion::hi() const {
  if (parts_.empty()) throw Error(ErrorCode::undefined_quantity, "empty interval union has no upper end");
  return parts_.back().hi;
}

double IntervalUnion::measure() const {
  double total = 0.0;
  for (const Interval& iv : parts_) total += iv.length();
  return total;
}

bool IntervalUnion::contains(double x) const {
  auto it = std::upper_bound(parts_.begin(), parts_.end(), x + kMergeTolerance,
                             [](double v, const Interval& iv) { return v < iv.lo; });
  if (it == parts_.begin()) return false;
  --it;
  return x <= it->hi + kMergeTolerance;
}

bool IntervalUnion::contains_interior(double x) const {
  auto it = std::upper_bound(parts_.begin(), parts_.end(), x,
                             [](double v, const Interval& iv) { return v < iv.lo; });
  if (it == parts_.begin()) return false;
  --it;
  return x - it->lo >= kMergeTolerance && it->hi - x >= kMergeTolerance;
}

bool IntervalUnion::is_proper() const {
  return std::all_of(parts_.begin(), parts_.end(),
                     [](const Interval& iv) { return iv.length() > kMergeTolerance; });
}

IntervalUnion IntervalUnion::translated(double t) const {
  require_finite(t, "translated");
  IntervalUnion out;
  out.parts_.reserve(parts_.size());
  for (const Interval& iv : parts_) out.parts_.push_back({iv.lo + t, iv.hi + t});
  return out;
}

IntervalUnion normalize(std::vector<Interval> raw) {
  for (const Interval& iv : raw) {
    require_finite(iv.lo, "normalize");
    require_finite(iv.hi, "normalize");
    if (iv.lo > iv.hi) throw Error(ErrorCode::invalid_input, "normalize: interval with lo > hi");
  }
  std::sort(raw.begin(), raw.end(), [](const Interval& a, const Interval& b) {
    return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
  });
  IntervalUnion out;
  for (const Interval& iv : raw) {
    if (!out.parts_.empty() && iv.lo - out.parts_.back().hi <= kMergeTolerance) {
      out.parts_.back().hi = std::max(out.parts_.back().hi, iv.hi);
    } else {
      out.parts_.push_back(iv);
    }
  }
  return out;
}

// ---- Set algebra -------------------------------------------------------------

IntervalUnion unite(const IntervalUnion& a, const IntervalUnion& b) {
  std::vector<Interval> raw(a.parts().begin(), a.parts().end());
  raw.insert(raw.end(), b.parts().begin(), b.parts().end());
  return normalize(std::move(raw));
}

IntervalUnion intersect(const IntervalUnion& a, const IntervalUnion& b) {
  std::vector<Interval> raw;
  auto pa = a.parts();
  auto pb = b.parts();
  std::size_t i = 0, j = 0;
  while (i < pa.size() && j < pb.size()) {
    const double lo = std::max(pa[i].lo, pb[j].lo);
    const double hi = std::min(pa[i].hi, pb[j].hi);
    if (hi >= lo) raw.push_back({lo, hi});
    if (pa[i].hi < pb[j].hi) ++i; else ++j;
  }
  return normalize(std::move(raw));
}

IntervalUnion subtract(const IntervalUnion& a, const IntervalUnion& b) {
  // Closure of a \ b; slivers no wider than the tolerance are dropped.
  std::vector<Interval> raw;
  auto pb = b.parts();
  std::size_t j = 0;
  for (const Interval& iv : a.parts()) {
    double cursor = iv.lo;
    while (j < pb.size() && pb[j].hi < iv.lo) ++j;
    std::size_t k = j;
    while (k < pb.size() && pb[k].lo <= iv.hi) {
      if (pb[k].lo - cursor > kMergeTolerance) raw.push_back({cursor, pb[k].lo});
      cursor = std::max(cursor, pb[k].hi);
      ++k;
    }
    if (iv.hi - cursor > kMergeTolerance) raw.push_back({cursor, iv.hi});
  }
  return normalize(std::move(raw));
}

IntervalUnion symmetric_difference(const IntervalUnion& a, const IntervalUnion& b) {
  return unite(subtract(a, b), subtract(b, a));
}

double measure(const IntervalUnion& w) { return w.measure(); }

namespace {

// m(a ∩ (b + shift)) by a two-pointer sweep.
double overlap_measure(std::span<const Interval> pa, std::span<const Interval> pb, double shift) {
  double total = 0.0;
  std::size_t i = 0, j = 0;
  while (i < pa.size() && j < pb.size()) {
    const double blo = pb[j].lo + shift;
    const double bhi = pb[j].hi + shift;
    const double lo = std::max(pa[i].lo, blo);
    const double hi = std::min(pa[i].hi, bhi);
    if (hi > lo) total += hi - lo;
    if (pa[i].hi < bhi) ++i; else ++j;
  }
  return total;
}

}  // namespace

double intersection_measure(const IntervalUnion& a, const IntervalUnion& b) {
  return overlap_measure(a.parts(), b.parts(), 0.0);
}

double symmetric_difference_measure(const IntervalUnion& w, double t) {
  require_finite(t, "symmetric_difference_measure");
  if (t == 0.0 || w.empty()) return 0.0;
  const double m = w.measure();
  const double both = overlap_measure(w.parts(), w.parts(), t);
  return std::max(0.0, 2.0 * (m - both));
}

std::vector<double> boundary_points(const IntervalUnion& w) {
  std::vector<double> out;
  out.reserve(2 * w.size());
  for (const Interval& iv : w.parts()) {
    out.push_back(iv.lo);
    out.push_back(iv.hi);
  }
  return out;
}

double sausage_measure(std::span<const double> points, double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw Error(ErrorCode::invalid_input, "sausage_measure: eps must be > 0");
  if (points.empty()) throw Error(ErrorCode::invalid_input, "sausage_measure: empty point list");
  if (!std::is_sorted(points.begin(), points.end())) {
    throw Error(ErrorCode::invalid_input, "sausage_measure: points must be sorted");
  }
  double total = 0.0;
  double lo = points.front() - eps;
  double hi = points.front() + eps;
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double plo = points[i] - eps;
    if (plo > hi) {
      total += hi - lo;
      lo = plo;
    }
    hi = points[i] + eps;
  }
  return total + (hi - lo);
}

double finest_feature(const IntervalUnion& w) {
  auto parts = w.parts();
  if (parts.empty()) throw Error(ErrorCode::undefined_quantity, "finest_feature: empty window");
  double finest = parts.front().length();
  for (std::size_t i = 0; i < parts.size(); ++i) {
    finest = std::min(finest, parts[i].length());
    if (i > 0) finest = std::min(finest, parts[i].lo - parts[i - 1].hi);
  }
  return finest;
}

// ---- Cantor constructions ----------------------------------------------------------

void CantorSpec::validate() const {
  if (!(gamma > 2.0) || !std::isfinite(gamma)) throw Error(ErrorCode::invalid_input, "cantor: gamma must be > 2");
  if (depth < 0) throw Error(ErrorCode::invalid_input, "cantor: depth must be >= 0");
  if (depth * std::log(gamma) > -std::log(kMergeTolerance)) {
    throw Error(ErrorCode::resolution, "cantor: level intervals would be shorter than the merge tolerance");
  }
}

double CantorSpec::resolution_floor() const {
  return std::pow(gamma, -static_cast<double>(std::max(depth - 2, 0)));
}

std::vector<double> CantorSpec::box_grid() const {
  return geometric_grid_per_decade(resolution_floor(), 1.0 / gamma, 8);
}

IntervalUnion cantor_approximation(const CantorSpec& spec) {
  spec.validate();
  if (spec.gap_rule != GapRule::none) {
    throw Error(ErrorCode::invalid_input, "cantor_approximation: gap rule must be none");
  }
  return normalize(build_cantor(spec.gamma, spec.depth).leaves);
}

IntervalUnion cantor_window(const CantorSpec& spec) {
  spec.validate();
  CantorLevels levels = build_cantor(spec.gamma, spec.depth);
  std::vector<Interval> raw = std::move(levels.leaves);
  switch (spec.gap_rule) {
    case GapRule::none:
      break;
    case GapRule::odd_levels:
      for (int step = 1; step <= spec.depth; step += 2) {
        const auto& g = levels.gaps[static_cast<std::size_t>(step - 1)];
        raw.insert(raw.end(), g.begin(), g.end());
      }
      break;
    case GapRule::sparse_dyadic:
      for (int step : sparse_steps(spec.depth)) raw.push_back(levels.gaps[static_cast<std::size_t>(step - 1)].front());
      break;
  }
  return normalize(std::move(raw));
}

IntervalUnion remark_b_window(double gamma, int depth) {
  if (depth < 1) throw Error(ErrorCode::invalid_input, "remark_b_window: depth must be >= 1");
  return cantor_window({gamma, depth, GapRule::odd_levels});
}

CantorSpec remark_a_cantor(int depth) {
  if (depth < 1) throw Error(ErrorCode::invalid_input, "remark_a_window: depth must be >= 1");
  // Two extra levels keep the Cantor dust well below the finest census scale.
  return {4.0, depth + 2, GapRule::sparse_dyadic};
}

std::vector<FilledGap> remark_a_schedule(int depth) {
  const CantorSpec spec = remark_a_cantor(depth);
  spec.validate();
  const CantorLevels levels = build_cantor(spec.gamma, spec.depth);
  std::vector<FilledGap> out;
  for (int step : sparse_steps(spec.depth)) {
    out.push_back({step, 0, levels.gaps[static_cast<std::size_t>(step - 1)].front()});
  }
  return out;
}

IntervalUnion remark_a_window(int depth) { return cantor_window(remark_a_cantor(depth)); }

std::vector<std::size_t> component_census(const IntervalUnion& w, int depth) {
  std::vector<std::size_t> census(static_cast<std::size_t>(std::max(depth, 0)), 0);
  for (int n = 1; n <= depth; ++n) {
    const double scale = std::ldexp(1.0, -n);
    census[static_cast<std::size_t>(n - 1)] = static_cast<std::size_t>(
        std::count_if(w.parts().begin(), w.parts().end(), [&](const Interval& iv) { return iv.length() >= scale; }));
  }
  return census;
}

std::string to_string(GapRule rule) {
  switch (rule) {
    case GapRule::none: return "none";
    case GapRule::odd_levels: return "odd_levels";
    case GapRule::sparse_dyadic: return "sparse_dyadic";
  }
  return "none";
}

GapRule gap_rule_from_string(const std::string& name) {
  if (name == "none") return GapRule::none;
  if (name == "odd_levels") return GapRule::odd_levels;
  if (name == "sparse_dyadic") return GapRule::sparse_dyadic;
  throw Error(ErrorCode::invalid_input, "unknown gap rule: " + name);
}

// ---- Dimension estimators ----------------------------------------------------

std::size_t separated_count(std::span<const double> points, double eps) {
  if (points.empty()) return 0;
  std::size_t count = 1;
  double last = points.front();
  for (double p : points.subspan(1)) {
    if (p - last >= eps) {
      ++count;
      last = p;
    }
  }
  return count;
}

namespace {

void check_grid(std::span<const double> grid, double min_decades, const char* who) {
  if (grid.size() < 4) throw Error(ErrorCode::invalid_input, std::string(who) + ": need at least 4 grid values");
  for (double e : grid) {
    if (!(e > 0.0) || !std::isfinite(e)) throw Error(ErrorCode::invalid_input, std::string(who) + ": grid values must be > 0");
  }
  const auto [lo, hi] = std::minmax_element(grid.begin(), grid.end());
  if (std::log10(*hi / *lo) < min_decades - 1e-9) {
    throw Error(ErrorCode::invalid_input, std::string(who) + ": grid spans too few decades");
  }
}

std::vector<double> sorted_copy(std::span<const double> points) {
  std::vector<double> v(points.begin(), points.end());
  std::sort(v.begin(), v.end());
  return v;
}

DimensionFit finish_fit(std::vector<std::pair<double, double>> pts, double sign) {
  std::vector<double> xs, ys;
  for (const auto& [x, y] : pts) {
    xs.push_back(x);
    ys.push_back(y);
  }
  DimensionFit fit;
  const LineFit line = least_squares(xs, ys);
  fit.slope = sign * line.slope;
  if (fit.slope == 0.0) fit.slope = 0.0;  // no negative zero in reports
  fit.intercept = line.intercept;
  fit.r_squared = line.r_squared;
  fit.degenerate = line.degenerate;
  fit.points = std::move(pts);
  return fit;
}

}  // namespace

DimensionFit box_dimension_fit(std::span<const double> points, std::span<const double> eps_grid) {
  check_grid(eps_grid, 2.0, "box_dimension_fit");
  if (points.empty()) throw Error(ErrorCode::invalid_input, "box_dimension_fit: empty point list");
  const std::vector<double> pts = sorted_copy(points);
  std::vector<std::pair<double, double>> samples;
  for (double eps : eps_grid) {
    samples.emplace_back(std::log(eps), std::log(static_cast<double>(separated_count(pts, eps))));
  }
  DimensionFit fit = finish_fit(std::move(samples), -1.0);
  if (fit.degenerate) {
    fit.slope = 0.0;
    fit.warnings.push_back("all separated counts equal; slope set to 0");
  }
  return fit;
}

DimensionFit minkowski_exponent_fit(std::span<const double> points, std::span<const double> eps_grid) {
  check_grid(eps_grid, 1.0, "minkowski_exponent_fit");
  const std::vector<double> pts = sorted_copy(points);
  std::vector<std::pair<double, double>> samples;
  for (double eps : eps_grid) samples.emplace_back(std::log(eps), std::log(sausage_measure(pts, eps)));
  return finish_fit(std::move(samples), 1.0);
}

DimensionFit shift_exponent(const IntervalUnion& w, std::span<const double> eps_grid) {
  check_grid(eps_grid, 1.0, "shift_exponent");
  std::vector<std::pair<double, double>> samples;
  std::vector<std::string> warnings;
  for (double eps : eps_grid) {
    const double m = symmetric_difference_measure(w, eps);
    if (m > 0.0) {
      samples.emplace_back(std::log(eps), std::log(m));
    } else {
      warnings.push_back("eps=" + std::to_string(eps) + " gives zero symmetric difference; excluded");
    }
  }
  if (samples.size() < 2) throw Error(ErrorCode::undefined_quantity, "shift_exponent: fewer than two usable grid values");
  DimensionFit fit = finish_fit(std::move(samples), 1.0);
  fit.warnings = std::move(warnings);
  return fit;
}

}  // namespace apec
