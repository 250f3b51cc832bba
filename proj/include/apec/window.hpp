#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace apec {

// Endpoint comparison tolerance for interval algebra.
inline constexpr double kMergeTolerance = 0x1p-40;

/// Closed interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Finite union of closed intervals, kept sorted with gaps wider than kMergeTolerance.
///
/// Windows, their translates and every set derived from them (symmetric
/// differences, intersections) are represented this way. Construction goes
/// through normalize(), so an IntervalUnion always satisfies its invariants.
class IntervalUnion {
 public:
  IntervalUnion() = default;

  std::span<const Interval> parts() const { return parts_; }
  std::size_t size() const { return parts_.size(); }
  bool empty() const { return parts_.empty(); }
  double lo() const;
  double hi() const;

  double measure() const;

  // Closed membership, endpoints widened by kMergeTolerance.
  bool contains(double x) const;
  // Interior membership: excluded when within kMergeTolerance of an endpoint.
  bool contains_interior(double x) const;

  // Every part has length greater than the merge tolerance.
  bool is_proper() const;

  IntervalUnion translated(double t) const;

  friend bool operator==(const IntervalUnion&, const IntervalUnion&) = default;

 private:
  friend IntervalUnion normalize(std::vector<Interval> raw);
  std::vector<Interval> parts_;
};

// Sort and merge; throws Error(invalid_input) on non-finite endpoints or lo > hi.
IntervalUnion normalize(std::vector<Interval> raw);

IntervalUnion unite(const IntervalUnion& a, const IntervalUnion& b);
IntervalUnion intersect(const IntervalUnion& a, const IntervalUnion& b);
IntervalUnion subtract(const IntervalUnion& a, const IntervalUnion& b);
IntervalUnion symmetric_difference(const IntervalUnion& a, const IntervalUnion& b);

double measure(const IntervalUnion& w);
double intersection_measure(const IntervalUnion& a, const IntervalUnion& b);

/// m(W Δ (W + t)), computed from the overlap of W with its translate.
double symmetric_difference_measure(const IntervalUnion& w, double t);

/// Sorted endpoints of all parts.
std::vector<double> boundary_points(const IntervalUnion& w);

/// Lebesgue measure of the closed eps-neighbourhood of a sorted point list.
double sausage_measure(std::span<const double> points, double eps);

/// Smallest feature scale of W: the shortest part or gap.
double finest_feature(const IntervalUnion& w);

// ---- Cantor constructions -------------------------------------------------

enum class GapRule {
  none,           // plain middle-segment Cantor approximation
  odd_levels,     // fill the gaps created at odd subdivision steps
  sparse_dyadic,  // fill one gap at each step of a sparse schedule
};

struct CantorSpec {
  double gamma = 3.0;
  int depth = 0;
  GapRule gap_rule = GapRule::none;

  void validate() const;
  // Smallest eps at which estimators still see the fractal and not the truncation.
  double resolution_floor() const;
  // Default dimension-fit grid: 8 values per decade from the floor up to 1/gamma.
  std::vector<double> box_grid() const;
};

// The 2^depth level-depth intervals of the middle-segment Cantor set C_gamma.
IntervalUnion cantor_approximation(const CantorSpec& spec);

// Cantor approximation plus the gaps selected by spec.gap_rule.
IntervalUnion cantor_window(const CantorSpec& spec);

// Level-depth Cantor intervals together with every gap created at an odd step.
IntervalUnion remark_b_window(double gamma, int depth);

/// A Cantor gap identified by the subdivision step that creates it.
struct FilledGap {
  int step = 0;
  std::size_t index = 0;  // left-to-right among the 2^(step-1) gaps of that step
  Interval gap;
};

// Underlying Cantor data for the sparse-gap window of a given census depth.
CantorSpec remark_a_cantor(int depth);
std::vector<FilledGap> remark_a_schedule(int depth);

/// Window whose boundary is a Cantor approximation but which has fewer than n
/// components of length >= 2^-n for every n <= depth.
IntervalUnion remark_a_window(int depth);

// census[n-1] = number of parts of W with length >= 2^-n, for n = 1..depth.
std::vector<std::size_t> component_census(const IntervalUnion& w, int depth);

std::string to_string(GapRule rule);
GapRule gap_rule_from_string(const std::string& name);

// ---- Dimension estimators --------------------------------------------------

struct DimensionFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  // (log eps, log quantity) for every grid value that entered the fit.
  std::vector<std::pair<double, double>> points;
  bool degenerate = false;
  std::vector<std::string> warnings;
};

/// Size of a maximal eps-separated subset of a sorted point list (greedy sweep).
std::size_t separated_count(std::span<const double> points, double eps);

/// Box dimension: slope of log N_eps against -log eps.
DimensionFit box_dimension_fit(std::span<const double> points, std::span<const double> eps_grid);

/// Slope of log sausage_measure against log eps; 1 minus the Minkowski dimension.
DimensionFit minkowski_exponent_fit(std::span<const double> points, std::span<const double> eps_grid);

/// Slope of log m(W Δ (W + eps)) against log eps.
DimensionFit shift_exponent(const IntervalUnion& w, std::span<const double> eps_grid);

}  // namespace apec
