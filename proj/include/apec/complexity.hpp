#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "apec/cps.hpp"
#include "apec/delone.hpp"
#include "apec/window.hpp"

namespace apec {

// ---- Følner sequences and sampling ----------------------------------------------

enum class FolnerKind {
  symmetric,          // [-T, T]
  one_sided_right,    // [0, T]
  one_sided_left,     // [-T, 0]
  integer_symmetric,  // {-floor(T), ..., floor(T)}, unit spacing
};

std::string to_string(FolnerKind kind);
FolnerKind folner_kind_from_string(const std::string& name);

struct FolnerSpec {
  FolnerKind kind = FolnerKind::symmetric;
  std::vector<double> lengths;  // T_1 < ... < T_N

  void validate() const;
  double extent() const { return lengths.back(); }
};

// T_n = 50 * 2^n for n = 0..6.
FolnerSpec default_folner(FolnerKind kind = FolnerKind::symmetric);

struct OrbitSampler {
  double spacing = 0.1;
  std::uint64_t seed = 0;
  bool jitter = false;  // uniform offset in (-spacing/2, spacing/2) per sample

  void validate() const;
};

/// Sample positions t_k for the largest Følner set and the nested index range of each F_n.
class SampleGrid {
 public:
  SampleGrid(const FolnerSpec& folner, const OrbitSampler& sampler, std::uint64_t stream);

  std::size_t levels() const { return ranges_.size(); }
  // Inclusive index range [lo, hi] of the samples in F_n.
  std::pair<std::int64_t, std::int64_t> level(std::size_t n) const { return ranges_[n]; }
  std::int64_t first() const { return ranges_.back().first; }
  std::int64_t last() const { return ranges_.back().second; }
  std::int64_t count(std::size_t n) const { return ranges_[n].second - ranges_[n].first + 1; }

  double position(std::int64_t k) const;
  double step() const { return step_; }
  double max_jitter() const { return jitter_ ? step_ / 2.0 : 0.0; }
  double length(std::size_t n) const { return lengths_[n]; }
  double level_measure(std::size_t n) const;
  // Index of the first level of the tail used by the lim-sup surrogate.
  std::size_t tail_start() const;

 private:
  FolnerKind kind_;
  std::vector<double> lengths_;
  std::vector<std::pair<std::int64_t, std::int64_t>> ranges_;
  double step_;
  bool jitter_;
  std::uint64_t seed_;
  std::uint64_t stream_;
};

/// Tail maximum over the last ceil(N/2) levels.
double tail_max(std::span<const std::pair<double, double>> per_n);

struct DensityReport {
  std::vector<std::pair<double, double>> per_n;  // (T_n, fraction of samples of F_n in the set)
  double estimate = 0.0;
};

DensityReport asymptotic_density(const std::function<bool(double)>& indicator, const FolnerSpec& folner,
                                 const OrbitSampler& sampler);

// ---- Pair frequencies -------------------------------------------------------------

struct PairFrequency {
  double delta = 0.0;
  double estimate = 0.0;
  std::vector<std::pair<double, double>> per_n;
  std::optional<double> bound;  // analytic bound when both sets share lattice, window and g-shift
  double std_error = 0.0;       // at the level attaining the tail maximum
};

// Data radius needed by frequency estimates at this delta.
double required_radius(const FolnerSpec& folner, const OrbitSampler& sampler, double delta);

/// Separation frequency: tail-max over F_n of the fraction of samples t with
/// d(a - t, b - t) >= delta.
///
/// Only samples within reach of a point of the symmetric difference a Δ b are
/// evaluated; elsewhere the zero shift matches the sets exactly.
PairFrequency delta_frequency(const DeloneSet& a, const DeloneSet& b, double delta, const FolnerSpec& folner,
                              const OrbitSampler& sampler, std::uint64_t stream = 0);

// Analytic frequency bound for two model sets, if their provenance allows one.
std::optional<double> analytic_pair_bound(const DeloneSet& a, const DeloneSet& b, double delta);

// Ascending metric grid used by the Besicovitch average: 24 values from 1/64 to 1/sqrt(2).
std::vector<double> besicovitch_metric_grid();

/// Tail-max over F_n of the average of d(a - t, b - t).
double besicovitch_pseudometric(const DeloneSet& a, const DeloneSet& b, const FolnerSpec& folner,
                                const OrbitSampler& sampler, std::uint64_t stream = 0);

/// Frequency engine over a fixed family of sets at one delta.
///
/// separated(i, j, nu) answers "estimate >= nu" with the same sample grid and
/// predicate as frequency(i, j), stopping as soon as the answer is certain.
/// Proven bounds are cached per ordered pair, so sweeping nu reuses work.
class PairEvaluator {
 public:
  PairEvaluator(std::shared_ptr<const std::vector<DeloneSet>> sets, double delta, FolnerSpec folner,
                OrbitSampler sampler);

  std::size_t size() const { return sets_->size(); }
  double delta() const { return delta_; }

  PairFrequency frequency(std::size_t i, std::size_t j) const;
  bool separated(std::size_t i, std::size_t j, double nu);
  std::optional<double> bound(std::size_t i, std::size_t j) const;

  std::uint64_t samples_evaluated() const { return samples_evaluated_; }

 private:
  struct Known {
    double at_least = 0.0;                                     // estimate >= at_least
    double below = std::numeric_limits<double>::infinity();  // estimate < below
  };

  std::uint64_t stream(std::size_t i, std::size_t j) const { return i * sets_->size() + j; }

  std::shared_ptr<const std::vector<DeloneSet>> sets_;
  double delta_;
  FolnerSpec folner_;
  OrbitSampler sampler_;
  std::unordered_map<std::uint64_t, Known> known_;
  std::uint64_t samples_evaluated_ = 0;
};

// ---- Separated and spanning sets ------------------------------------------------------

enum class FrequencyMode {
  mc,               // Monte-Carlo frequency for every pair
  analytic_screen,  // reject on the analytic bound first, confirm survivors by Monte-Carlo
};

std::string to_string(FrequencyMode mode);
FrequencyMode frequency_mode_from_string(const std::string& name);

struct Rejection {
  std::size_t candidate = 0;
  std::size_t witness = 0;  // kept member with frequency below nu
  bool by_bound = false;    // rejected by the analytic screen
};

struct GreedyResult {
  std::vector<std::size_t> kept;
  std::vector<Rejection> rejected;
};

/// Scan the family in index order, keeping a member iff it is (delta, nu)-separated
/// from every member kept so far. |kept| is a lower bound for the separation number.
GreedyResult greedy_separated(PairEvaluator& evaluator, double nu, FrequencyMode mode = FrequencyMode::mc);

std::vector<std::size_t> greedy_separated(const CutProjectScheme& cps, std::span<const ModelSetParams> family,
                                          double delta, double nu, const FolnerSpec& folner,
                                          const OrbitSampler& sampler, FrequencyMode mode = FrequencyMode::mc);

/// Re-evaluates every rejection from scratch: the kept set is (delta, nu)-spanning
/// for the family iff each rejected member has a witness below nu.
bool verify_spanning(const PairEvaluator& evaluator, const GreedyResult& result, double nu);

struct SpanEstimate {
  std::uint64_t count = 1;
  double eps = 0.0;          // internal cover radius solved from the boundary neighbourhood
  std::uint64_t cover_a = 1;  // N_{delta/2}(A)
  std::uint64_t cover_b = 1;  // N_eps(B)
  Interval a_extent;
  Interval b_extent;
};

/// Spanning-set count N_{delta/2}(A) * N_eps(B) with
/// eps = inf{eta : m(B(boundary W, eta)) >= nu delta / 4}.
SpanEstimate span_estimate(const CutProjectScheme& cps, const IntervalUnion& w, double delta, double nu);

// ---- Amorphic complexity fits ----------------------------------------------------------

struct AcRow {
  double nu = 0.0;
  std::uint64_t sep = 1;
  std::uint64_t span = 1;
  bool span_resolved = true;  // the span eps stays above the window's resolution floor
};

struct ComplexityFit {
  double delta = 0.0;
  std::vector<AcRow> rows;
  double slope_lower = 0.0;  // log sep against -log nu
  double slope_upper = 0.0;  // log span against -log nu, resolved rows only
  double r_squared = 0.0;    // of the upper fit
  // False when fewer than 3 rows are resolved; the upper fit then uses every row
  // and is left out of the run's ac_upper.
  bool upper_resolved = true;
  double r_squared_lower = 0.0;
  std::vector<std::string> warnings;
};

ComplexityFit ac_fit(std::span<const AcRow> rows, double delta = 0.0);

// ---- Pipeline ----------------------------------------------------------------------------

struct FamilySpec {
  std::size_t h_count = 64;
  double h_offset = 0.0;
  double h_range = 1.0;  // h_i = h_offset + i * h_range / h_count
  std::size_t g_count = 1;
  double g_spacing = 0.0;  // g_j = j * g_spacing
};

std::vector<ModelSetParams> make_family(const FamilySpec& spec, const IntervalUnion& window, double radius);

struct AcProblem {
  CutProjectScheme cps = fibonacci_cps();
  IntervalUnion window;
  std::optional<CantorSpec> cantor;  // set for Cantor-type windows; enables the resolution guard
  FamilySpec family;
  std::vector<double> deltas{0.4, 0.3, 0.2, 0.1};
  std::vector<double> nus;
  OrbitSampler sampler;
  FrequencyMode mode = FrequencyMode::mc;
  unsigned threads = 1;
  std::uint64_t resource_cap = kDefaultResourceCap;
};

struct FrequencyRecord {
  std::size_t pair_id = 0;  // pair (0, pair_id) of the family
  PairFrequency frequency;
};

struct AcResult {
  std::vector<ComplexityFit> fits;  // one per delta, in problem order
  std::vector<FrequencyRecord> frequencies;
  double ac_lower = 0.0;
  double ac_upper = 0.0;
  double r_squared = 0.0;  // of the upper fit attaining ac_upper
  bool spanning_verified = true;
  std::uint64_t samples_evaluated = 0;
};

// Geometric nu schedule, 8 points per decade.
std::vector<double> default_nu_schedule(double lo = 1e-3, double hi = 1e-1);

// Probe pairs (0, j) with j = 1, 2, 4, ... below the family size.
std::vector<std::size_t> probe_pairs(std::size_t family_size);

AcResult run_ac(const AcProblem& problem, const FolnerSpec& folner);

struct TheoremBound {
  double boundary_dimension = 0.0;
  double bound = 1.0;  // dim H / (dim H - dim boundary W) with dim H = 1
  DimensionFit fit;
};

TheoremBound theorem_bound(const IntervalUnion& w, const std::optional<CantorSpec>& cantor);

struct FolnerComparison {
  double max_frequency_deviation = 0.0;
  double slope_deviation = 0.0;  // max of the lower and upper slope deviations
  double lower_slope_deviation = 0.0;
  double upper_slope_deviation = 0.0;
  AcResult first;
  AcResult second;
};

FolnerComparison folner_compare(const AcProblem& problem, const FolnerSpec& first, const FolnerSpec& second);

}  // namespace apec
