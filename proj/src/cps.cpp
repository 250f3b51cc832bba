#include "apec/cps.hpp"

#include <algorithm>
#include <limits>

#include "apec/error.hpp"

namespace apec {

namespace {

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw Error(ErrorCode::invalid_input, std::string(what) + ": non-finite value");
}

std::int64_t floor_to_int(double x) { return static_cast<std::int64_t>(std::floor(x)); }
std::int64_t ceil_to_int(double x) { return static_cast<std::int64_t>(std::ceil(x)); }

// Solves lo <= coef * k + offset <= hi for real k.
std::pair<double, double> slab(double coef, double offset, double lo, double hi) {
  if (coef == 0.0) {
    if (offset >= lo && offset <= hi) {
      return {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    }
    return {1.0, 0.0};  // empty
  }
  double a = (lo - offset) / coef;
  double b = (hi - offset) / coef;
  if (a > b) std::swap(a, b);
  return {a, b};
}

}  // namespace

CutProjectScheme::CutProjectScheme(LatticeVector v1, LatticeVector v2) : v1_(v1), v2_(v2) {
  for (double x : {v1.g, v1.h, v2.g, v2.h}) {
    if (!std::isfinite(x)) throw Error(ErrorCode::invalid_input, "cps: non-finite basis entry");
  }
  det_ = v1.g * v2.h - v2.g * v1.h;
  const double scale = std::hypot(v1.g, v1.h) * std::hypot(v2.g, v2.h);
  if (!(std::abs(det_) > 1e-12 * scale)) throw Error(ErrorCode::cps_singular, "cps: basis is singular");
}

std::pair<double, double> CutProjectScheme::coefficients(double g, double h) const {
  return {(v2_.h * g - v2_.g * h) / det_, (v1_.g * h - v1_.h * g) / det_};
}

CutProjectScheme fibonacci_cps() {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  return CutProjectScheme({1.0, 1.0}, {phi, -1.0 / phi});
}

IntegerBox integer_bounds(const CutProjectScheme& cps, const Box& box) {
  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
  double ylo = xlo, yhi = -xlo;
  for (double g : {box.g_lo, box.g_hi}) {
    for (double h : {box.h_lo, box.h_hi}) {
      auto [x, y] = cps.coefficients(g, h);
      xlo = std::min(xlo, x);
      xhi = std::max(xhi, x);
      ylo = std::min(ylo, y);
      yhi = std::max(yhi, y);
    }
  }
  // Corner coefficients carry rounding error; widen before snapping to integers.
  const auto pad = [](double v) { return 1e-9 * (1.0 + std::abs(v)); };
  return {floor_to_int(xlo - pad(xlo)), ceil_to_int(xhi + pad(xhi)), floor_to_int(ylo - pad(ylo)),
          ceil_to_int(yhi + pad(yhi))};
}

std::vector<LatticePoint> enumerate_lattice(const CutProjectScheme& cps, const Box& box, std::uint64_t resource_cap) {
  for (double x : {box.g_lo, box.g_hi, box.h_lo, box.h_hi}) require_finite(x, "enumerate_lattice");
  if (!(box.g_lo < box.g_hi) || !(box.h_lo < box.h_hi)) {
    throw Error(ErrorCode::invalid_input, "enumerate_lattice: need g_lo < g_hi and h_lo < h_hi");
  }
  const IntegerBox ib = integer_bounds(cps, box);
  const double m_count = static_cast<double>(ib.m_hi - ib.m_lo + 1);
  const double n_count = static_cast<double>(ib.n_hi - ib.n_lo + 1);
  const bool scan_n = n_count <= m_count;  // rows indexed by the shorter coordinate
  const double rows = scan_n ? n_count : m_count;
  if (rows > static_cast<double>(resource_cap)) {
    throw Error(ErrorCode::resource, "enumerate_lattice: integer box exceeds the resource cap");
  }

  const LatticeVector row_vec = scan_n ? cps.v2() : cps.v1();
  const LatticeVector col_vec = scan_n ? cps.v1() : cps.v2();
  const std::int64_t row_lo = scan_n ? ib.n_lo : ib.m_lo;
  const std::int64_t row_hi = scan_n ? ib.n_hi : ib.m_hi;
  const std::int64_t col_lo = scan_n ? ib.m_lo : ib.n_lo;
  const std::int64_t col_hi = scan_n ? ib.m_hi : ib.n_hi;

  std::vector<LatticePoint> out;
  std::uint64_t scanned = 0;
  for (std::int64_t r = row_lo; r <= row_hi; ++r) {
    const double rd = static_cast<double>(r);
    auto [glo, ghi] = slab(col_vec.g, rd * row_vec.g, box.g_lo, box.g_hi);
    auto [hlo, hhi] = slab(col_vec.h, rd * row_vec.h, box.h_lo, box.h_hi);
    const double lo = std::max(glo, hlo);
    const double hi = std::min(ghi, hhi);
    ++scanned;
    if (lo > hi + 2.0) continue;
    const std::int64_t c_lo = std::max(col_lo, std::isfinite(lo) ? floor_to_int(lo) - 1 : col_lo);
    const std::int64_t c_hi = std::min(col_hi, std::isfinite(hi) ? ceil_to_int(hi) + 1 : col_hi);
    for (std::int64_t c = c_lo; c <= c_hi; ++c) {
      if (++scanned > resource_cap) {
        throw Error(ErrorCode::resource, "enumerate_lattice: candidate count exceeds the resource cap");
      }
      const LatticePoint p = scan_n ? cps.point(c, r) : cps.point(r, c);
      if (p.g >= box.g_lo && p.g <= box.g_hi && p.h >= box.h_lo && p.h <= box.h_hi) out.push_back(p);
    }
  }
  std::sort(out.begin(), out.end(), [](const LatticePoint& a, const LatticePoint& b) {
    return a.g < b.g || (a.g == b.g && a.h < b.h);
  });
  return out;
}

IrrationalityReport irrationality_diagnostic(const CutProjectScheme& cps, double bound, double density_eps,
                                             std::uint64_t resource_cap) {
  if (!(bound > 0.0) || !(density_eps > 0.0)) {
    throw Error(ErrorCode::invalid_input, "irrationality_diagnostic: bound and density_eps must be > 0");
  }
  IrrationalityReport report;
  const double span = cps.covolume();
  const auto pts = enumerate_lattice(cps, {-bound, bound, 0.0, span}, resource_cap);
  report.points_checked = pts.size();

  for (const LatticePoint& p : pts) {
    if ((p.m != 0 || p.n != 0) && std::abs(p.g) <= kMergeTolerance) {
      report.injective = false;
      report.violations.push_back("nonzero lattice point (" + std::to_string(p.m) + "," + std::to_string(p.n) +
                                  ") projects to g = 0");
      break;
    }
  }
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i].g - pts[i - 1].g <= kMergeTolerance) {
      report.injective = false;
      report.violations.push_back("lattice points (" + std::to_string(pts[i - 1].m) + "," +
                                  std::to_string(pts[i - 1].n) + ") and (" + std::to_string(pts[i].m) + "," +
                                  std::to_string(pts[i].n) + ") share g");
      break;
    }
  }

  std::vector<double> hs;
  hs.reserve(pts.size());
  for (const LatticePoint& p : pts) hs.push_back(p.h);
  std::sort(hs.begin(), hs.end());
  double worst_end = span;
  double worst_gap = span;
  if (!hs.empty()) {
    worst_end = std::max(hs.front(), span - hs.back());
    worst_gap = 0.0;
    for (std::size_t i = 1; i < hs.size(); ++i) worst_gap = std::max(worst_gap, hs[i] - hs[i - 1]);
  }
  report.max_h_gap = std::max(worst_gap, worst_end);
  if (worst_end > density_eps || worst_gap > 2.0 * density_eps) {
    report.dense = false;
    report.violations.push_back("internal coordinates leave a gap of " + std::to_string(report.max_h_gap) +
                                " in [0, covolume]");
  }
  return report;
}

TorusPoint torus_reduce(const CutProjectScheme& cps, double g, double h) {
  require_finite(g, "torus_reduce");
  require_finite(h, "torus_reduce");
  auto [x, y] = cps.coefficients(g, h);
  const auto frac = [](double v) {
    double f = v - std::floor(v);
    if (1.0 - f < 1e-12 || f < 1e-12) f = 0.0;  // lattice points map to the origin
    return f;
  };
  TorusPoint out;
  out.x = frac(x);
  out.y = frac(y);
  out.coords = {out.x * cps.v1().g + out.y * cps.v2().g, out.x * cps.v1().h + out.y * cps.v2().h};
  return out;
}

void ModelSetParams::validate() const {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw Error(ErrorCode::invalid_input, "model set: radius must be > 0");
  require_finite(g_shift, "model set");
  require_finite(h_shift, "model set");
  if (!window.is_proper()) throw Error(ErrorCode::invalid_input, "model set: window must be proper");
}

DeloneSet model_set(const CutProjectScheme& cps, const ModelSetParams& params, WindowVariant variant,
                    std::uint64_t resource_cap) {
  params.validate();
  ModelSetProvenance meta{cps.v1().g, cps.v1().h, cps.v2().g, cps.v2().h,
                          params.g_shift, params.h_shift, params.window, variant};
  if (params.window.empty()) return DeloneSet({}, params.radius, std::move(meta));

  const Box box{-params.radius + params.g_shift, params.radius + params.g_shift,
                params.window.lo() + params.h_shift - kMergeTolerance,
                params.window.hi() + params.h_shift + kMergeTolerance};
  const auto pts = enumerate_lattice(cps, box, resource_cap);
  std::vector<double> out;
  out.reserve(pts.size());
  for (const LatticePoint& p : pts) {
    const double x = p.h - params.h_shift;
    const bool inside = variant == WindowVariant::closed ? params.window.contains(x) : params.window.contains_interior(x);
    if (!inside) continue;
    const double g = p.g - params.g_shift;
    if (std::abs(g) > params.radius) continue;
    if (!out.empty() && !(g > out.back())) continue;
    out.push_back(g);
  }
  return DeloneSet(std::move(out), params.radius, std::move(meta));
}

double pair_frequency_bound(const CutProjectScheme& /*cps*/, const IntervalUnion& w, double delta, double h,
                            double h_prime) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw Error(ErrorCode::invalid_input, "pair_frequency_bound: delta must be > 0");
  return std::min(1.0, (4.0 / delta) * symmetric_difference_measure(w, h_prime - h));
}

}  // namespace apec
