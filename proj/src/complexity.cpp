#include "apec/complexity.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "apec/error.hpp"
#include "apec/fit.hpp"
#include "apec/rng.hpp"

namespace apec {

namespace {

using IndexRange = std::pair<std::int64_t, std::int64_t>;

// Runs fn(0..count-1) on up to `threads` workers. Results must be written by index;
// the first exception (lowest index) is rethrown.
template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(std::max(1u, threads), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void require_delta(double delta, const char* who) {
  if (!(delta >= 0x1p-12) || !(delta <= kDistanceCap)) {
    throw Error(ErrorCode::invalid_input, std::string(who) + ": delta must lie in [2^-12, 1/sqrt(2)]");
  }
}

// How far from a sample position a difference between the sets can still
// influence the local comparison at scale delta.
double influence_reach(const SampleGrid& grid, double delta) {
  return 1.0 / delta + delta + 4.0 * kPatchTolerance + grid.max_jitter();
}

// Sample index ranges (sorted, disjoint) within reach of a point of a Δ b.
std::vector<IndexRange> candidate_ranges(std::span<const double> a, std::span<const double> b, const SampleGrid& grid,
                                         double reach) {
  const double step = grid.step();
  const double lo = static_cast<double>(grid.first()) * step - reach;
  const double hi = static_cast<double>(grid.last()) * step + reach;
  auto ia = std::lower_bound(a.begin(), a.end(), lo);
  auto ib = std::lower_bound(b.begin(), b.end(), lo);
  const auto ea = std::upper_bound(ia, a.end(), hi);
  const auto eb = std::upper_bound(ib, b.end(), hi);

  std::vector<IndexRange> ranges;
  auto mark = [&](double p) {
    auto k_lo = static_cast<std::int64_t>(std::ceil((p - reach) / step));
    auto k_hi = static_cast<std::int64_t>(std::floor((p + reach) / step));
    k_lo = std::max(k_lo, grid.first());
    k_hi = std::min(k_hi, grid.last());
    if (k_lo > k_hi) return;
    if (!ranges.empty() && k_lo <= ranges.back().second + 1) {
      ranges.back().second = std::max(ranges.back().second, k_hi);
    } else {
      ranges.emplace_back(k_lo, k_hi);
    }
  };
  // Points agreeing within half the patch tolerance count as shared.
  const double same = kPatchTolerance / 2.0;
  while (ia != ea || ib != eb) {
    if (ia != ea && ib != eb && std::abs(*ia - *ib) <= same) {
      ++ia;
      ++ib;
    } else if (ib == eb || (ia != ea && *ia < *ib)) {
      mark(*ia++);
    } else {
      mark(*ib++);
    }
  }
  return ranges;
}

struct PairScan {
  std::span<const double> a;
  std::span<const double> b;
  const SampleGrid& grid;
  double delta;
  std::vector<IndexRange> candidates;
  std::uint64_t evaluated = 0;

  PairScan(std::span<const double> a_, std::span<const double> b_, const SampleGrid& grid_, double delta_)
      : a(a_), b(b_), grid(grid_), delta(delta_), candidates(candidate_ranges(a_, b_, grid_, influence_reach(grid_, delta_))) {}

  bool separated_at(std::int64_t k) {
    ++evaluated;
    const double t = grid.position(k);
    return !locally_matches(a, t, b, t, delta);
  }

  // Calls visit(k) for every candidate index in [lo, hi]; stops early when visit returns true.
  template <class Visit>
  bool for_candidates(std::int64_t lo, std::int64_t hi, Visit&& visit) {
    for (const auto& [c_lo, c_hi] : candidates) {
      if (c_hi < lo) continue;
      if (c_lo > hi) break;
      for (std::int64_t k = std::max(lo, c_lo); k <= std::min(hi, c_hi); ++k) {
        if (visit(k)) return true;
      }
    }
    return false;
  }

  // Indices of all separated samples, ascending.
  std::vector<std::int64_t> all_separated() {
    std::vector<std::int64_t> out;
    for_candidates(grid.first(), grid.last(), [&](std::int64_t k) {
      if (separated_at(k)) out.push_back(k);
      return false;
    });
    return out;
  }

  // Decides estimate >= nu. On true, `proven` is a lower bound for the estimate;
  // on false it is the exact estimate.
  bool decide(double nu, double& proven) {
    std::int64_t e_lo = 1, e_hi = 0;  // evaluated index range, empty to start
    std::int64_t sep = 0;
    double best = 0.0;
    for (std::size_t n = grid.tail_start(); n < grid.levels(); ++n) {
      const auto [l_lo, l_hi] = grid.level(n);
      const auto total = static_cast<double>(grid.count(n));
      auto need = static_cast<std::int64_t>(std::ceil(nu * total));
      while (need > 0 && static_cast<double>(need - 1) / total >= nu) --need;
      while (static_cast<double>(need) / total < nu) ++need;
      if (sep >= need) {
        proven = static_cast<double>(sep) / total;
        return true;
      }
      auto visit = [&](std::int64_t k) {
        if (separated_at(k) && ++sep >= need) return true;
        return false;
      };
      bool hit = false;
      if (e_lo > e_hi) {
        hit = for_candidates(l_lo, l_hi, visit);
      } else {
        hit = for_candidates(l_lo, e_lo - 1, visit) || for_candidates(e_hi + 1, l_hi, visit);
      }
      if (hit) {
        proven = static_cast<double>(sep) / total;
        return true;
      }
      e_lo = l_lo;
      e_hi = l_hi;
      best = std::max(best, static_cast<double>(sep) / total);
    }
    proven = best;
    return false;
  }
};

PairFrequency frequency_from_samples(const SampleGrid& grid, double delta, const std::vector<std::int64_t>& separated) {
  PairFrequency out;
  out.delta = delta;
  for (std::size_t n = 0; n < grid.levels(); ++n) {
    const auto [lo, hi] = grid.level(n);
    const auto count = std::upper_bound(separated.begin(), separated.end(), hi) -
                       std::lower_bound(separated.begin(), separated.end(), lo);
    out.per_n.emplace_back(grid.length(n), static_cast<double>(count) / static_cast<double>(grid.count(n)));
  }
  std::size_t arg = grid.tail_start();
  for (std::size_t n = grid.tail_start(); n < grid.levels(); ++n) {
    if (out.per_n[n].second > out.per_n[arg].second) arg = n;
  }
  out.estimate = out.per_n[arg].second;
  // Separation events decorrelate over a length of order delta.
  const double n_eff = std::max(1.0, grid.level_measure(arg) * delta / 2.0);
  out.std_error = std::sqrt(out.estimate * (1.0 - out.estimate) / n_eff);
  return out;
}

// The sample spacing must resolve the point pattern: at most half its minimal gap.
void require_resolved(const DeloneSet& s, const FolnerSpec& folner, const OrbitSampler& sampler, const char* who) {
  if (folner.kind == FolnerKind::integer_symmetric || s.size() < 2) return;
  if (sampler.spacing > min_gap(s) / 2.0) {
    throw Error(ErrorCode::invalid_input, std::string(who) + ": sampler spacing exceeds half the minimal gap");
  }
}

void require_radius(const DeloneSet& s, double needed, const char* who) {
  if (s.radius() < needed) {
    throw Error(ErrorCode::insufficient_data, std::string(who) + ": data radius below the Folner extent plus the ball radius");
  }
}

bool same_scheme(const ModelSetProvenance& x, const ModelSetProvenance& y) {
  return x.v1_g == y.v1_g && x.v1_h == y.v1_h && x.v2_g == y.v2_g && x.v2_h == y.v2_h;
}

}  // namespace

// ---- Følner sequences ------------------------------------------------------------------

std::string to_string(FolnerKind kind) {
  switch (kind) {
    case FolnerKind::symmetric: return "symmetric";
    case FolnerKind::one_sided_right: return "one_sided_right";
    case FolnerKind::one_sided_left: return "one_sided_left";
    case FolnerKind::integer_symmetric: return "integer_symmetric";
  }
  return "symmetric";
}

FolnerKind folner_kind_from_string(const std::string& name) {
  for (auto k : {FolnerKind::symmetric, FolnerKind::one_sided_right, FolnerKind::one_sided_left,
                 FolnerKind::integer_symmetric}) {
    if (to_string(k) == name) return k;
  }
  throw Error(ErrorCode::config, "unknown Folner kind '" + name + "'");
}

void FolnerSpec::validate() const {
  if (lengths.size() < 3) throw Error(ErrorCode::invalid_input, "folner: need at least 3 lengths");
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    if (!(lengths[i] > 0.0) || !std::isfinite(lengths[i]) || (i > 0 && !(lengths[i] > lengths[i - 1]))) {
      throw Error(ErrorCode::invalid_input, "folner: lengths must be positive and strictly increasing");
    }
  }
  if (kind == FolnerKind::integer_symmetric && lengths.front() < 1.0) {
    throw Error(ErrorCode::invalid_input, "folner: integer lengths must be >= 1");
  }
}

FolnerSpec default_folner(FolnerKind kind) {
  FolnerSpec spec{kind, {}};
  for (int n = 0; n <= 6; ++n) spec.lengths.push_back(50.0 * std::ldexp(1.0, n));
  return spec;
}

void OrbitSampler::validate() const {
  if (!(spacing > 0.0) || !std::isfinite(spacing)) throw Error(ErrorCode::invalid_input, "sampler: spacing must be > 0");
}

SampleGrid::SampleGrid(const FolnerSpec& folner, const OrbitSampler& sampler, std::uint64_t stream)
    : kind_(folner.kind), lengths_(folner.lengths), seed_(sampler.seed), stream_(stream) {
  folner.validate();
  sampler.validate();
  const bool integer = kind_ == FolnerKind::integer_symmetric;
  step_ = integer ? 1.0 : sampler.spacing;
  jitter_ = !integer && sampler.jitter;
  for (double t : lengths_) {
    const auto k = static_cast<std::int64_t>(std::floor(t / step_ + 1e-9));
    switch (kind_) {
      case FolnerKind::one_sided_right: ranges_.emplace_back(0, k); break;
      case FolnerKind::one_sided_left: ranges_.emplace_back(-k, 0); break;
      default: ranges_.emplace_back(-k, k); break;
    }
  }
}

double SampleGrid::position(std::int64_t k) const {
  double t = static_cast<double>(k) * step_;
  if (jitter_) t += (uniform01(seed_, stream_, static_cast<std::uint64_t>(k)) - 0.5) * step_;
  return t;
}

double SampleGrid::level_measure(std::size_t n) const {
  switch (kind_) {
    case FolnerKind::one_sided_right:
    case FolnerKind::one_sided_left: return lengths_[n];
    case FolnerKind::integer_symmetric: return static_cast<double>(count(n));
    default: return 2.0 * lengths_[n];
  }
}

std::size_t SampleGrid::tail_start() const { return levels() / 2; }

double tail_max(std::span<const std::pair<double, double>> per_n) {
  if (per_n.empty()) throw Error(ErrorCode::invalid_input, "tail_max: no levels");
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t n = per_n.size() / 2; n < per_n.size(); ++n) best = std::max(best, per_n[n].second);
  return best;
}

DensityReport asymptotic_density(const std::function<bool(double)>& indicator, const FolnerSpec& folner,
                                 const OrbitSampler& sampler) {
  const SampleGrid grid(folner, sampler, 0);
  std::vector<std::int64_t> hits;
  for (std::int64_t k = grid.first(); k <= grid.last(); ++k) {
    if (indicator(grid.position(k))) hits.push_back(k);
  }
  DensityReport out;
  for (std::size_t n = 0; n < grid.levels(); ++n) {
    const auto [lo, hi] = grid.level(n);
    const auto count = std::upper_bound(hits.begin(), hits.end(), hi) - std::lower_bound(hits.begin(), hits.end(), lo);
    out.per_n.emplace_back(grid.length(n), static_cast<double>(count) / static_cast<double>(grid.count(n)));
  }
  out.estimate = tail_max(out.per_n);
  return out;
}

// ---- Pair frequencies --------------------------------------------------------------------

double required_radius(const FolnerSpec& folner, const OrbitSampler& sampler, double delta) {
  folner.validate();
  sampler.validate();
  const double step = folner.kind == FolnerKind::integer_symmetric ? 1.0 : sampler.spacing;
  return folner.extent() + step + 1.0 / delta + delta + 4.0 * kPatchTolerance;
}

std::optional<double> analytic_pair_bound(const DeloneSet& a, const DeloneSet& b, double delta) {
  if (!a.meta() || !b.meta()) return std::nullopt;
  const auto& x = *a.meta();
  const auto& y = *b.meta();
  if (!same_scheme(x, y) || x.g_shift != y.g_shift || !(x.window == y.window) || x.variant != WindowVariant::closed ||
      y.variant != WindowVariant::closed) {
    return std::nullopt;
  }
  const CutProjectScheme cps({x.v1_g, x.v1_h}, {x.v2_g, x.v2_h});
  return pair_frequency_bound(cps, x.window, delta, x.h_shift, y.h_shift);
}

PairFrequency delta_frequency(const DeloneSet& a, const DeloneSet& b, double delta, const FolnerSpec& folner,
                              const OrbitSampler& sampler, std::uint64_t stream) {
  require_delta(delta, "delta_frequency");
  const double needed = required_radius(folner, sampler, delta);
  require_radius(a, needed, "delta_frequency");
  require_radius(b, needed, "delta_frequency");
  require_resolved(a, folner, sampler, "delta_frequency");
  require_resolved(b, folner, sampler, "delta_frequency");
  const SampleGrid grid(folner, sampler, stream);
  PairScan scan(a.points(), b.points(), grid, delta);
  PairFrequency out = frequency_from_samples(grid, delta, scan.all_separated());
  out.bound = analytic_pair_bound(a, b, delta);
  return out;
}

std::vector<double> besicovitch_metric_grid() { return geometric_grid(1.0 / 64.0, kDistanceCap, 24); }

double besicovitch_pseudometric(const DeloneSet& a, const DeloneSet& b, const FolnerSpec& folner,
                                const OrbitSampler& sampler, std::uint64_t stream) {
  const std::vector<double> eps_grid = besicovitch_metric_grid();
  const double needed = required_radius(folner, sampler, eps_grid.front()) + eps_grid.back();
  require_radius(a, needed, "besicovitch_pseudometric");
  require_radius(b, needed, "besicovitch_pseudometric");
  require_resolved(a, folner, sampler, "besicovitch_pseudometric");
  require_resolved(b, folner, sampler, "besicovitch_pseudometric");
  const SampleGrid grid(folner, sampler, stream);
  // Away from a Δ b the sets agree on the largest ball, so the distance is the grid floor.
  const std::vector<IndexRange> near = candidate_ranges(a.points(), b.points(), grid, influence_reach(grid, eps_grid.front()));

  std::vector<std::pair<std::int64_t, double>> excess;  // (k, distance - floor) where positive
  for (const auto& [lo, hi] : near) {
    for (std::int64_t k = lo; k <= hi; ++k) {
      const double t = grid.position(k);
      std::size_t l = 0, r = eps_grid.size();
      while (l < r) {
        const std::size_t mid = (l + r) / 2;
        if (locally_matches(a.points(), t, b.points(), t, eps_grid[mid])) {
          r = mid;
        } else {
          l = mid + 1;
        }
      }
      const double d = l == eps_grid.size() ? kDistanceCap : eps_grid[l];
      if (d > eps_grid.front()) excess.emplace_back(k, d - eps_grid.front());
    }
  }
  std::vector<std::pair<double, double>> per_n;
  for (std::size_t n = 0; n < grid.levels(); ++n) {
    const auto [lo, hi] = grid.level(n);
    double sum = 0.0;
    for (const auto& [k, e] : excess) {
      if (k >= lo && k <= hi) sum += e;
    }
    per_n.emplace_back(grid.length(n), eps_grid.front() + sum / static_cast<double>(grid.count(n)));
  }
  return tail_max(per_n);
}

PairEvaluator::PairEvaluator(std::shared_ptr<const std::vector<DeloneSet>> sets, double delta, FolnerSpec folner,
                             OrbitSampler sampler)
    : sets_(std::move(sets)), delta_(delta), folner_(std::move(folner)), sampler_(sampler) {
  require_delta(delta_, "PairEvaluator");
  const double needed = required_radius(folner_, sampler_, delta_);
  for (const auto& s : *sets_) {
    require_radius(s, needed, "PairEvaluator");
    require_resolved(s, folner_, sampler_, "PairEvaluator");
  }
}

PairFrequency PairEvaluator::frequency(std::size_t i, std::size_t j) const {
  const SampleGrid grid(folner_, sampler_, stream(i, j));
  PairScan scan((*sets_)[i].points(), (*sets_)[j].points(), grid, delta_);
  PairFrequency out = frequency_from_samples(grid, delta_, scan.all_separated());
  out.bound = bound(i, j);
  return out;
}

bool PairEvaluator::separated(std::size_t i, std::size_t j, double nu) {
  Known& known = known_[stream(i, j)];
  if (nu <= known.at_least) return true;
  if (nu >= known.below) return false;
  const SampleGrid grid(folner_, sampler_, stream(i, j));
  PairScan scan((*sets_)[i].points(), (*sets_)[j].points(), grid, delta_);
  double proven = 0.0;
  const bool sep = scan.decide(nu, proven);
  samples_evaluated_ += scan.evaluated;
  if (sep) {
    known.at_least = std::max(known.at_least, proven);
  } else {
    known.at_least = proven;
    known.below = std::nextafter(proven, std::numeric_limits<double>::infinity());
  }
  return sep;
}

std::optional<double> PairEvaluator::bound(std::size_t i, std::size_t j) const {
  return analytic_pair_bound((*sets_)[i], (*sets_)[j], delta_);
}

// ---- Separated and spanning sets ------------------------------------------------------------

std::string to_string(FrequencyMode mode) { return mode == FrequencyMode::mc ? "mc" : "analytic_screen"; }

FrequencyMode frequency_mode_from_string(const std::string& name) {
  if (name == "mc") return FrequencyMode::mc;
  if (name == "analytic_screen") return FrequencyMode::analytic_screen;
  throw Error(ErrorCode::config, "unknown frequency mode '" + name + "'");
}

GreedyResult greedy_separated(PairEvaluator& evaluator, double nu, FrequencyMode mode) {
  if (!(nu > 0.0) || !(nu <= 1.0)) throw Error(ErrorCode::invalid_input, "greedy_separated: nu must lie in (0, 1]");
  GreedyResult out;
  for (std::size_t c = 0; c < evaluator.size(); ++c) {
    std::optional<Rejection> rejection;
    // Most recently kept members are the nearest in index order; test them first.
    for (auto it = out.kept.rbegin(); it != out.kept.rend() && !rejection; ++it) {
      if (mode == FrequencyMode::analytic_screen) {
        const auto b = evaluator.bound(*it, c);
        if (b && *b < nu) {
          rejection = Rejection{c, *it, true};
          break;
        }
      }
      if (!evaluator.separated(*it, c, nu)) rejection = Rejection{c, *it, false};
    }
    if (rejection) {
      out.rejected.push_back(*rejection);
    } else {
      out.kept.push_back(c);
    }
  }
  return out;
}

std::vector<std::size_t> greedy_separated(const CutProjectScheme& cps, std::span<const ModelSetParams> family,
                                          double delta, double nu, const FolnerSpec& folner,
                                          const OrbitSampler& sampler, FrequencyMode mode) {
  require_delta(delta, "greedy_separated");
  const double needed = required_radius(folner, sampler, delta);
  auto sets = std::make_shared<std::vector<DeloneSet>>();
  for (ModelSetParams p : family) {
    p.radius = std::max(p.radius, needed);
    sets->push_back(model_set(cps, p));
  }
  PairEvaluator evaluator(sets, delta, folner, sampler);
  return greedy_separated(evaluator, nu, mode).kept;
}

bool verify_spanning(const PairEvaluator& evaluator, const GreedyResult& result, double nu) {
  if (result.kept.size() + result.rejected.size() != evaluator.size()) return false;
  for (const Rejection& r : result.rejected) {
    if (!std::binary_search(result.kept.begin(), result.kept.end(), r.witness) || r.witness >= r.candidate) return false;
    if (r.by_bound) {
      const auto b = evaluator.bound(r.witness, r.candidate);
      if (!b || !(*b < nu)) return false;
    } else if (!(evaluator.frequency(r.witness, r.candidate).estimate < nu)) {
      return false;
    }
  }
  return true;
}

SpanEstimate span_estimate(const CutProjectScheme& cps, const IntervalUnion& w, double delta, double nu) {
  require_delta(delta, "span_estimate");
  if (!(nu > 0.0) || !(nu <= 1.0)) throw Error(ErrorCode::invalid_input, "span_estimate: nu must lie in (0, 1]");
  if (!w.is_proper()) throw Error(ErrorCode::invalid_input, "span_estimate: window must be proper");

  // A x B covers a fundamental domain of the lattice, and B covers the window.
  const LatticeVector corners[] = {{0.0, 0.0}, cps.v1(), cps.v2(), {cps.v1().g + cps.v2().g, cps.v1().h + cps.v2().h}};
  SpanEstimate out;
  out.a_extent = {corners[0].g, corners[0].g};
  out.b_extent = {w.lo(), w.hi()};
  for (const auto& c : corners) {
    out.a_extent = {std::min(out.a_extent.lo, c.g), std::max(out.a_extent.hi, c.g)};
    out.b_extent = {std::min(out.b_extent.lo, c.h), std::max(out.b_extent.hi, c.h)};
  }
  const double len_a = out.a_extent.hi - out.a_extent.lo;
  const double len_b = out.b_extent.hi - out.b_extent.lo;

  const std::vector<double> boundary = boundary_points(w);
  const double target = nu * delta / 4.0;
  double lo = 0.0, hi = len_b;
  while (sausage_measure(boundary, hi) < target) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sausage_measure(boundary, mid) >= target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  out.eps = hi;
  out.cover_a = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(len_a / delta - 1e-12)));
  out.cover_b = out.eps >= len_b ? 1 : std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(len_b / (2.0 * out.eps) - 1e-12)));
  out.count = out.cover_a * out.cover_b;
  return out;
}

// ---- Fits ------------------------------------------------------------------------------------------

ComplexityFit ac_fit(std::span<const AcRow> rows, double delta) {
  if (rows.size() < 4) throw Error(ErrorCode::insufficient_data, "ac_fit: need at least 4 rows");
  double lo = rows.front().nu, hi = rows.front().nu;
  for (const AcRow& r : rows) {
    if (!(r.nu > 0.0) || r.sep < 1 || r.span < 1) throw Error(ErrorCode::invalid_input, "ac_fit: counts must be >= 1 and nu > 0");
    lo = std::min(lo, r.nu);
    hi = std::max(hi, r.nu);
  }
  if (std::log10(hi / lo) < 1.5 - 1e-9) throw Error(ErrorCode::insufficient_data, "ac_fit: nu range spans fewer than 1.5 decades");

  ComplexityFit out;
  out.delta = delta;
  out.rows.assign(rows.begin(), rows.end());
  std::vector<double> xs, ys, xr, yr;
  for (const AcRow& r : rows) {
    xs.push_back(-std::log(r.nu));
    ys.push_back(std::log(static_cast<double>(r.sep)));
    if (r.span_resolved) {
      xr.push_back(-std::log(r.nu));
      yr.push_back(std::log(static_cast<double>(r.span)));
    }
  }
  for (std::size_t i = 1; i < rows.size(); ++i) {
    // Separation numbers cannot grow with nu; a violation marks a jump point or sampling noise.
    if (rows[i].nu > rows[i - 1].nu && rows[i].sep > rows[i - 1].sep) {
      out.warnings.push_back("sep increases with nu at nu = " + std::to_string(rows[i].nu));
    }
  }
  const LineFit lower = least_squares(xs, ys);
  out.slope_lower = lower.slope;
  out.r_squared_lower = lower.r_squared;
  if (xr.size() < 3) {
    out.upper_resolved = false;
    xr = xs;
    yr.clear();
    for (const AcRow& r : rows) yr.push_back(std::log(static_cast<double>(r.span)));
  }
  const LineFit upper = least_squares(xr, yr);
  out.slope_upper = upper.slope;
  out.r_squared = upper.r_squared;
  return out;
}

// ---- Pipeline ----------------------------------------------------------------------------------------

std::vector<ModelSetParams> make_family(const FamilySpec& spec, const IntervalUnion& window, double radius) {
  if (spec.h_count < 1 || spec.g_count < 1) throw Error(ErrorCode::invalid_input, "family: counts must be >= 1");
  if (!std::isfinite(spec.h_range) || !std::isfinite(spec.h_offset) || !std::isfinite(spec.g_spacing)) {
    throw Error(ErrorCode::invalid_input, "family: non-finite parameter");
  }
  std::vector<ModelSetParams> out;
  out.reserve(spec.h_count * spec.g_count);
  for (std::size_t j = 0; j < spec.g_count; ++j) {
    for (std::size_t i = 0; i < spec.h_count; ++i) {
      const double h = spec.h_offset + static_cast<double>(i) * spec.h_range / static_cast<double>(spec.h_count);
      out.push_back({static_cast<double>(j) * spec.g_spacing, h, window, radius});
    }
  }
  return out;
}

std::vector<double> default_nu_schedule(double lo, double hi) { return geometric_grid_per_decade(lo, hi, 8); }

std::vector<std::size_t> probe_pairs(std::size_t family_size) {
  std::vector<std::size_t> out;
  for (std::size_t j = 1; j < family_size; j *= 2) out.push_back(j);
  return out;
}

AcResult run_ac(const AcProblem& problem, const FolnerSpec& folner) {
  folner.validate();
  problem.sampler.validate();
  if (problem.deltas.empty()) throw Error(ErrorCode::invalid_input, "ac: no delta values");
  if (problem.nus.size() < 4) throw Error(ErrorCode::invalid_input, "ac: need at least 4 nu values");
  for (double d : problem.deltas) require_delta(d, "ac");
  for (double nu : problem.nus) {
    if (!(nu > 0.0) || !(nu <= 1.0)) throw Error(ErrorCode::invalid_input, "ac: nu values must lie in (0, 1]");
  }

  const double min_delta = *std::min_element(problem.deltas.begin(), problem.deltas.end());
  const double radius = required_radius(folner, problem.sampler, min_delta) + 1.0;
  const std::vector<ModelSetParams> family = make_family(problem.family, problem.window, radius);
  auto sets = std::make_shared<std::vector<DeloneSet>>(family.size());
  parallel_for(family.size(), problem.threads, [&](std::size_t i) {
    (*sets)[i] = model_set(problem.cps, family[i], WindowVariant::closed, problem.resource_cap);
  });

  // Descending nu lets the cached bounds of large-nu decisions settle most small-nu ones.
  std::vector<std::size_t> order(problem.nus.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return problem.nus[x] > problem.nus[y]; });

  const std::vector<std::size_t> probes = probe_pairs(sets->size());
  const double floor = problem.cantor ? problem.cantor->resolution_floor() : 0.0;

  struct PerDelta {
    std::vector<AcRow> rows;
    std::vector<FrequencyRecord> freqs;
    bool spanning = true;
    std::uint64_t samples = 0;
  };
  std::vector<PerDelta> per(problem.deltas.size());
  parallel_for(problem.deltas.size(), problem.threads, [&](std::size_t d) {
    const double delta = problem.deltas[d];
    PairEvaluator evaluator(sets, delta, folner, problem.sampler);
    PerDelta& out = per[d];
    out.rows.resize(problem.nus.size());
    for (std::size_t idx : order) {
      const double nu = problem.nus[idx];
      const GreedyResult greedy = greedy_separated(evaluator, nu, problem.mode);
      out.spanning = out.spanning && verify_spanning(evaluator, greedy, nu);
      const SpanEstimate span = span_estimate(problem.cps, problem.window, delta, nu);
      out.rows[idx] = {nu, greedy.kept.size(), span.count, span.eps >= floor};
    }
    for (std::size_t j : probes) out.freqs.push_back({j, evaluator.frequency(0, j)});
    out.samples = evaluator.samples_evaluated();
  });

  AcResult result;
  result.ac_lower = -std::numeric_limits<double>::infinity();
  result.ac_upper = -std::numeric_limits<double>::infinity();
  for (std::size_t d = 0; d < per.size(); ++d) {
    std::vector<AcRow> rows = per[d].rows;
    std::sort(rows.begin(), rows.end(), [](const AcRow& x, const AcRow& y) { return x.nu < y.nu; });
    ComplexityFit fit = ac_fit(rows, problem.deltas[d]);
    result.ac_lower = std::max(result.ac_lower, fit.slope_lower);
    if (fit.upper_resolved && fit.slope_upper > result.ac_upper) {
      result.ac_upper = fit.slope_upper;
      result.r_squared = fit.r_squared;
    }
    result.fits.push_back(std::move(fit));
    for (auto& f : per[d].freqs) result.frequencies.push_back(std::move(f));
    result.spanning_verified = result.spanning_verified && per[d].spanning;
    result.samples_evaluated += per[d].samples;
  }
  if (!std::isfinite(result.ac_upper)) {
    throw Error(ErrorCode::resolution, "ac: no delta has 3 span rows above the window's resolution floor");
  }
  return result;
}

TheoremBound theorem_bound(const IntervalUnion& w, const std::optional<CantorSpec>& cantor) {
  if (!w.is_proper()) throw Error(ErrorCode::invalid_input, "theorem_bound: window must be proper");
  const std::vector<double> boundary = boundary_points(w);
  const std::vector<double> grid = cantor ? cantor->box_grid() : geometric_grid_per_decade(1e-6, 1e-1, 8);
  TheoremBound out;
  out.fit = box_dimension_fit(boundary, grid);
  out.boundary_dimension = std::max(0.0, out.fit.slope);
  if (out.boundary_dimension >= 1.0) {
    throw Error(ErrorCode::undefined_quantity, "theorem_bound: boundary dimension estimate reaches 1");
  }
  out.bound = 1.0 / (1.0 - out.boundary_dimension);
  return out;
}

FolnerComparison folner_compare(const AcProblem& problem, const FolnerSpec& first, const FolnerSpec& second) {
  FolnerComparison out;
  out.first = run_ac(problem, first);
  out.second = run_ac(problem, second);
  const auto& fa = out.first.frequencies;
  const auto& fb = out.second.frequencies;
  for (std::size_t i = 0; i < std::min(fa.size(), fb.size()); ++i) {
    out.max_frequency_deviation =
        std::max(out.max_frequency_deviation, std::abs(fa[i].frequency.estimate - fb[i].frequency.estimate));
  }
  out.lower_slope_deviation = std::abs(out.first.ac_lower - out.second.ac_lower);
  out.upper_slope_deviation = std::abs(out.first.ac_upper - out.second.ac_upper);
  out.slope_deviation = std::max(out.lower_slope_deviation, out.upper_slope_deviation);
  return out;
}

}  // namespace apec
