#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "apec/delone_set.hpp"
#include "apec/window.hpp"

namespace apec {

inline constexpr std::uint64_t kDefaultResourceCap = 100'000'000;

/// Vector in G x H = R x R; g is the external (physical) coordinate, h the internal one.
struct LatticeVector {
  double g = 0.0;
  double h = 0.0;
  friend bool operator==(const LatticeVector&, const LatticeVector&) = default;
};

struct LatticePoint {
  std::int64_t m = 0;
  std::int64_t n = 0;
  double g = 0.0;
  double h = 0.0;  // star-map image of g
  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
};

/// Rank-2 lattice L = Z v1 + Z v2 in R x R with the projections to G and H.
class CutProjectScheme {
 public:
  // Throws Error(cps_singular) when the basis is (numerically) degenerate.
  CutProjectScheme(LatticeVector v1, LatticeVector v2);

  const LatticeVector& v1() const { return v1_; }
  const LatticeVector& v2() const { return v2_; }
  double determinant() const { return det_; }
  double covolume() const { return std::abs(det_); }

  LatticePoint point(std::int64_t m, std::int64_t n) const {
    return {m, n, static_cast<double>(m) * v1_.g + static_cast<double>(n) * v2_.g,
            static_cast<double>(m) * v1_.h + static_cast<double>(n) * v2_.h};
  }

  // Real coefficients (x, y) with x v1 + y v2 = (g, h).
  std::pair<double, double> coefficients(double g, double h) const;

  friend bool operator==(const CutProjectScheme&, const CutProjectScheme&) = default;

 private:
  LatticeVector v1_;
  LatticeVector v2_;
  double det_ = 0.0;
};

/// v1 = (1, 1), v2 = (phi, -1/phi): the lattice behind the Fibonacci chain.
CutProjectScheme fibonacci_cps();

struct IrrationalityReport {
  bool injective = true;
  bool dense = true;
  std::size_t points_checked = 0;
  double max_h_gap = 0.0;  // largest gap between internal coordinates in the test interval
  std::vector<std::string> violations;

  bool passed() const { return injective && dense; }
};

/// Finite evidence for the CPS axioms: injectivity of the G-projection and
/// density of the H-projection, from the lattice points with |g| <= bound and
/// h in [0, covolume].
IrrationalityReport irrationality_diagnostic(const CutProjectScheme& cps, double bound, double density_eps,
                                             std::uint64_t resource_cap = kDefaultResourceCap);

struct Box {
  double g_lo = 0.0;
  double g_hi = 0.0;
  double h_lo = 0.0;
  double h_hi = 0.0;
};

/// All lattice points in the closed box, sorted by g.
///
/// The box is pulled back to integer coordinates; one coordinate is scanned
/// row by row and on each row the admissible range of the other coordinate is
/// solved from the two slab constraints before the exact membership filter.
/// Throws Error(resource) if more than `resource_cap` candidates would be scanned.
std::vector<LatticePoint> enumerate_lattice(const CutProjectScheme& cps, const Box& box,
                                            std::uint64_t resource_cap = kDefaultResourceCap);

/// Integer bounding box of the pulled-back box (inclusive), used by the scanner.
struct IntegerBox {
  std::int64_t m_lo, m_hi, n_lo, n_hi;
};
IntegerBox integer_bounds(const CutProjectScheme& cps, const Box& box);

struct TorusPoint {
  LatticeVector coords;  // representative in the half-open fundamental parallelogram
  double x = 0.0;        // coefficients of coords in the basis, in [0, 1)
  double y = 0.0;
};

TorusPoint torus_reduce(const CutProjectScheme& cps, double g, double h);

struct ModelSetParams {
  double g_shift = 0.0;
  double h_shift = 0.0;
  IntervalUnion window;
  double radius = 0.0;

  void validate() const;
};

/// Points g - g_shift of the lattice points with h - h_shift in the window and
/// |g - g_shift| <= radius. The closed variant realises the model set of W + h,
/// the interior variant that of int(W) + h.
DeloneSet model_set(const CutProjectScheme& cps, const ModelSetParams& params,
                    WindowVariant variant = WindowVariant::closed,
                    std::uint64_t resource_cap = kDefaultResourceCap);

/// min(1, (4/delta) m(W Δ (W + h' - h))): bound on the separation frequency of
/// the model sets with internal shifts h and h'.
double pair_frequency_bound(const CutProjectScheme& cps, const IntervalUnion& w, double delta, double h,
                            double h_prime);

}  // namespace apec
