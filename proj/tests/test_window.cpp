#include <cmath>
#include <limits>

#include "apec/fit.hpp"
#include "apec/window.hpp"
#include "oracles.hpp"

using namespace apec;

namespace {

IntervalUnion from_raw(const oracle::Raw& raw) {
  std::vector<Interval> v;
  for (auto [lo, hi] : raw) v.push_back({lo, hi});
  return normalize(v);
}

oracle::Raw to_raw(const IntervalUnion& w) {
  oracle::Raw raw;
  for (const Interval& iv : w.parts()) raw.emplace_back(iv.lo, iv.hi);
  return raw;
}

oracle::Raw random_raw(std::mt19937_64& rng, int max_count) {
  const int n = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_count));
  oracle::Raw raw;
  for (int i = 0; i < n; ++i) {
    const double lo = oracle::uniform(rng, -5.0, 5.0);
    raw.emplace_back(lo, lo + oracle::uniform(rng, 0.01, 2.0));
  }
  return raw;
}

}  // namespace

TEST_CASE("normalize merges, sorts and handles the empty list") {
  const IntervalUnion a = normalize({{0, 1}, {0.5, 2}});
  REQUIRE(a.size() == 1);
  CHECK(a.parts()[0] == Interval{0, 2});
  CHECK(normalize({}).empty());
  const IntervalUnion c = normalize({{3, 4}, {0, 1}});
  REQUIRE(c.size() == 2);
  CHECK(c.parts()[0] == Interval{0, 1});
  CHECK(c.parts()[1] == Interval{3, 4});
}

TEST_CASE("normalize rejects non-finite endpoints and reversed intervals") {
  CHECK_ERROR_CODE(normalize({{0, std::numeric_limits<double>::quiet_NaN()}}), ErrorCode::invalid_input);
  CHECK_ERROR_CODE(normalize({{-std::numeric_limits<double>::infinity(), 0}}), ErrorCode::invalid_input);
  CHECK_ERROR_CODE(normalize({{1, 0}}), ErrorCode::invalid_input);
}

TEST_CASE("normalize merges parts closer than the merge tolerance") {
  const IntervalUnion w = normalize({{0, 1}, {1 + kMergeTolerance / 2, 2}});
  CHECK(w.size() == 1);
  CHECK(normalize({{0, 1}, {1.001, 2}}).size() == 2);
}

TEST_CASE("measure examples") {
  CHECK(measure(normalize({{0, 1}})) == doctest::Approx(1.0));
  CHECK(measure(normalize({{0, 1}, {2, 3}})) == doctest::Approx(2.0));
  CHECK(measure(cantor_approximation({4.0, 2})) == doctest::Approx(0.25));
}

TEST_CASE("symmetric difference measure examples") {
  const IntervalUnion unit = normalize({{0, 1}});
  CHECK(symmetric_difference_measure(unit, 0.25) == doctest::Approx(0.5));
  CHECK(symmetric_difference_measure(unit, 0.0) == 0.0);
  CHECK(symmetric_difference_measure(remark_b_window(4.0, 5), 0.0) == 0.0);
  const double t = std::pow(4.0, -6);
  const double v = symmetric_difference_measure(remark_b_window(4.0, 12), t);
  CHECK(std::log(v) / std::log(t) == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("boundary points examples") {
  CHECK(boundary_points(normalize({{0, 1}})) == std::vector<double>{0, 1});
  CHECK(boundary_points(normalize({{0, 1}, {2, 3}})) == std::vector<double>{0, 1, 2, 3});
  const auto b = boundary_points(cantor_approximation({3.0, 1}));
  REQUIRE(b.size() == 4);
  CHECK(b[0] == 0.0);
  CHECK(b[1] == doctest::Approx(1.0 / 3));
  CHECK(b[2] == doctest::Approx(2.0 / 3));
  CHECK(b[3] == 1.0);
}

TEST_CASE("sausage measure examples") {
  const std::vector<double> pts{0.0, 1.0};
  CHECK(sausage_measure(pts, 0.1) == doctest::Approx(0.4));
  CHECK(sausage_measure(pts, 0.6) == doctest::Approx(2.2));
  CHECK_ERROR_CODE(sausage_measure(pts, 0.0), ErrorCode::invalid_input);
  CHECK_ERROR_CODE(sausage_measure(pts, -1.0), ErrorCode::invalid_input);
}

TEST_CASE("sausage of a Cantor boundary has exponent one half") {
  const auto pts = boundary_points(cantor_approximation({4.0, 10}));
  // Brute-force neighbourhood merge on two nearby scales around 4^-6.
  const double e1 = std::pow(4.0, -6), e2 = std::pow(4.0, -5);
  oracle::Raw r1, r2;
  for (double p : pts) {
    r1.emplace_back(p - e1, p + e1);
    r2.emplace_back(p - e2, p + e2);
  }
  const double m1 = oracle::union_measure(r1), m2 = oracle::union_measure(r2);
  CHECK(sausage_measure(pts, e1) == doctest::Approx(m1).epsilon(1e-9));
  CHECK(sausage_measure(pts, e2) == doctest::Approx(m2).epsilon(1e-9));
  CHECK(std::log(m2 / m1) / std::log(e2 / e1) == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("cantor approximation examples") {
  const IntervalUnion c3 = cantor_approximation({3.0, 1});
  REQUIRE(c3.size() == 2);
  CHECK(c3.parts()[0].hi == doctest::Approx(1.0 / 3));
  CHECK(c3.parts()[1].lo == doctest::Approx(2.0 / 3));
  const IntervalUnion c4 = cantor_approximation({4.0, 1});
  CHECK(c4.parts()[0] == Interval{0, 0.25});
  CHECK(c4.parts()[1] == Interval{0.75, 1});
  const IntervalUnion c42 = cantor_approximation({4.0, 2});
  REQUIRE(c42.size() == 4);
  const double expect[4][2] = {{0, 1.0 / 16}, {3.0 / 16, 0.25}, {0.75, 13.0 / 16}, {15.0 / 16, 1}};
  for (int i = 0; i < 4; ++i) {
    CHECK(c42.parts()[i].lo == doctest::Approx(expect[i][0]));
    CHECK(c42.parts()[i].hi == doctest::Approx(expect[i][1]));
  }
}

TEST_CASE("cantor approximation matches explicit recursion") {
  for (double gamma : {3.0, 4.0, 6.0, 2.5}) {
    for (int k = 0; k <= 8; ++k) {
      const IntervalUnion c = cantor_approximation({gamma, k});
      const oracle::Raw leaves = oracle::cantor_leaves(gamma, k);
      REQUIRE(c.size() == leaves.size());
      for (std::size_t i = 0; i < leaves.size(); ++i) {
        CHECK(std::abs(c.parts()[i].lo - leaves[i].first) <= 1e-12);
        CHECK(std::abs(c.parts()[i].hi - leaves[i].second) <= 1e-12);
      }
      CHECK(measure(c) == doctest::Approx(std::pow(2.0 / gamma, k)).epsilon(1e-10));
    }
  }
}

TEST_CASE("cantor spec validation and resolution guard") {
  CHECK_ERROR_CODE(cantor_approximation({2.0, 3}), ErrorCode::invalid_input);
  CHECK_ERROR_CODE(cantor_approximation({3.0, -1}), ErrorCode::invalid_input);
  CHECK_ERROR_CODE(cantor_approximation({10.0, 40}), ErrorCode::resolution);
  CHECK(CantorSpec{4.0, 12}.resolution_floor() == doctest::Approx(std::pow(4.0, -10)));
}

TEST_CASE("remark_b window examples") {
  const IntervalUnion w2 = remark_b_window(4.0, 2);
  REQUIRE(w2.size() == 3);
  CHECK(w2.parts()[0].hi == doctest::Approx(1.0 / 16));
  CHECK(w2.parts()[1].lo == doctest::Approx(3.0 / 16));
  CHECK(w2.parts()[1].hi == doctest::Approx(13.0 / 16));
  CHECK(w2.parts()[2].lo == doctest::Approx(15.0 / 16));
  CHECK(measure(w2) == doctest::Approx(0.75));
  const IntervalUnion w1 = remark_b_window(4.0, 1);
  REQUIRE(w1.size() == 1);
  CHECK(w1.parts()[0] == Interval{0, 1});
  double prev = 2.0;
  for (int k = 1; k <= 12; ++k) {
    const double m = measure(remark_b_window(4.0, k));
    CHECK(m <= prev + 1e-12);
    prev = m;
  }
}

TEST_CASE("remark_b window contains the Cantor approximation and is proper") {
  for (double gamma : {3.0, 4.0, 6.0}) {
    for (int k = 1; k <= 10; ++k) {
      const IntervalUnion w = remark_b_window(gamma, k);
      const IntervalUnion c = cantor_approximation({gamma, k});
      CHECK(w.is_proper());
      CHECK(measure(subtract(c, w)) <= 1e-12);
      for (const Interval& iv : w.parts()) CHECK(iv.length() > kMergeTolerance);
    }
  }
}

TEST_CASE("remark_a window census") {
  const IntervalUnion w1 = remark_a_window(1);
  CHECK(w1.is_proper());
  CHECK(!w1.empty());
  // No component of length >= 1/2 at depth 1.
  for (const Interval& iv : w1.parts()) CHECK(iv.length() < 0.5);
  for (int depth : {4, 8, 14}) {
    const IntervalUnion w = remark_a_window(depth);
    for (int n = 1; n <= depth; ++n) {
      std::size_t count = 0;
      for (const Interval& iv : w.parts()) count += iv.length() >= std::ldexp(1.0, -n) ? 1 : 0;
      CHECK_MESSAGE(count < static_cast<std::size_t>(n), "depth " << depth << " n " << n);
    }
    const auto census = component_census(w, depth);
    for (int n = 1; n <= depth; ++n) {
      std::size_t count = 0;
      for (const Interval& iv : w.parts()) count += iv.length() >= std::ldexp(1.0, -n) ? 1 : 0;
      CHECK(census[static_cast<std::size_t>(n - 1)] == count);
    }
  }
}

TEST_CASE("remark_a shift estimate") {
  const IntervalUnion w = remark_a_window(14);
  for (int j = 4; j <= 12; ++j) {
    const double eps = std::ldexp(1.0, -j);
    CHECK(symmetric_difference_measure(w, eps) <= 2.0 * eps * (-std::log2(eps) + 1.0) + 1e-15);
  }
}

TEST_CASE("remark_a schedule is reproducible and inside the window") {
  const auto s1 = remark_a_schedule(14);
  const auto s2 = remark_a_schedule(14);
  REQUIRE(s1.size() == s2.size());
  REQUIRE(!s1.empty());
  const IntervalUnion w = remark_a_window(14);
  for (std::size_t i = 0; i < s1.size(); ++i) {
    CHECK(s1[i].step == s2[i].step);
    CHECK(s1[i].gap == s2[i].gap);
    CHECK(w.contains(0.5 * (s1[i].gap.lo + s1[i].gap.hi)));
  }
}

TEST_CASE("box dimension fit examples") {
  const std::vector<double> origin{0.0};
  const auto grid = geometric_grid(1e-3, 1e-1, 9);
  const DimensionFit single = box_dimension_fit(origin, grid);
  CHECK(single.slope == 0.0);
  CHECK(single.degenerate);

  std::vector<double> equi;
  for (int i = 0; i < 10000; ++i) equi.push_back(i / 9999.0);
  const DimensionFit line = box_dimension_fit(equi, grid);
  CHECK(line.slope == doctest::Approx(1.0).epsilon(0.05));
  for (double eps : grid) {
    // points i/9999: a separated chain steps ceil(9999 eps) indices at a time
    const double stride = std::ceil(eps * 9999.0 - 1e-9);
    const double expect = std::floor(9999.0 / stride) + 1.0;
    CHECK(std::abs(static_cast<double>(separated_count(equi, eps)) - expect) <= 1.0);
    CHECK(std::abs(expect - (std::floor(1.0 / eps) + 1.0)) <= 0.05 * expect + 1.0);
  }

  const auto cantor = boundary_points(cantor_approximation({4.0, 12}));
  const auto cgrid = geometric_grid(std::pow(4.0, -10), std::pow(4.0, -3), 12);
  CHECK(box_dimension_fit(cantor, cgrid).slope == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("box dimension fit rejects short grids") {
  const std::vector<double> pts{0.0, 1.0};
  CHECK_ERROR_CODE(box_dimension_fit(pts, geometric_grid(1e-2, 1e-1, 6)), ErrorCode::invalid_input);
  CHECK_ERROR_CODE(box_dimension_fit(pts, geometric_grid(1e-4, 1e-1, 3)), ErrorCode::invalid_input);
}

TEST_CASE("shift exponent examples") {
  const auto grid = geometric_grid(1e-4, 1e-1, 10);
  CHECK(shift_exponent(normalize({{0, 1}}), grid).slope == doctest::Approx(1.0).epsilon(1e-9));
  const auto bgrid = geometric_grid(std::pow(4.0, -10), std::pow(4.0, -3), 15);
  CHECK(std::abs(shift_exponent(remark_b_window(4.0, 12), bgrid).slope - 0.5) <= 0.05);
  const auto agrid = geometric_grid(std::ldexp(1.0, -12), std::ldexp(1.0, -4), 9);
  CHECK(shift_exponent(remark_a_window(14), agrid).slope >= 0.9);
}

TEST_CASE("minkowski exponent of a two-point boundary is one") {
  const std::vector<double> pts{0.0, 1.0};
  const DimensionFit f = minkowski_exponent_fit(pts, geometric_grid(1e-4, 1e-1, 8));
  CHECK(f.slope == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("property: inclusion-exclusion and idempotence on random lists") {
  auto rng = oracle::rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const oracle::Raw ra = random_raw(rng, 6), rb = random_raw(rng, 6);
    const IntervalUnion a = from_raw(ra), b = from_raw(rb);
    CHECK(normalize(std::vector<Interval>(a.parts().begin(), a.parts().end())) == a);
    CHECK(measure(a) == doctest::Approx(oracle::union_measure(ra)).epsilon(1e-12));
    const double u = measure(unite(a, b)), i = measure(intersect(a, b));
    CHECK(std::abs(u + i - measure(a) - measure(b)) <= 1e-9);
    CHECK(i == doctest::Approx(intersection_measure(a, b)).epsilon(1e-12));
    oracle::Raw both = ra;
    both.insert(both.end(), rb.begin(), rb.end());
    CHECK(u == doctest::Approx(oracle::union_measure(both)).epsilon(1e-12));
    CHECK(measure(symmetric_difference(a, b)) == doctest::Approx(u - i).epsilon(1e-9));
    // Pointwise membership agrees with the raw list away from endpoints.
    for (int s = 0; s < 20; ++s) {
      const double x = oracle::uniform(rng, -6.0, 8.0);
      CHECK(a.contains(x) == oracle::in_union(ra, x));
    }
  }
}

TEST_CASE("property: symmetric difference measure is even in t and bounded") {
  auto rng = oracle::rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    const IntervalUnion w = from_raw(random_raw(rng, 5));
    const double t = oracle::uniform(rng, -3.0, 3.0);
    const double plus = symmetric_difference_measure(w, t), minus = symmetric_difference_measure(w, -t);
    CHECK(std::abs(plus - minus) <= 1e-9);
    CHECK(plus <= 2.0 * measure(w) + 1e-9);
    CHECK(plus == doctest::Approx(measure(symmetric_difference(w, w.translated(t)))).epsilon(1e-9));
    CHECK(measure(w.translated(t)) == doctest::Approx(measure(w)).epsilon(1e-12));
  }
}

TEST_CASE("property: sausage closed form, monotone and bounded") {
  auto rng = oracle::rng(13);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> pts;
    const int n = 1 + static_cast<int>(rng() % 30);
    for (int i = 0; i < n; ++i) pts.push_back(oracle::uniform(rng, 0.0, 10.0));
    std::sort(pts.begin(), pts.end());
    double prev = 0.0;
    for (double eps : geometric_grid(1e-3, 2.0, 12)) {
      const double s = sausage_measure(pts, eps);
      CHECK(s == doctest::Approx(oracle::sausage(pts, eps)).epsilon(1e-12));
      CHECK(s >= prev - 1e-12);
      CHECK(s <= 2.0 * eps * static_cast<double>(pts.size()) + 1e-12);
      prev = s;
    }
  }
}

TEST_CASE("property: box dimension slope lies in [0, 1]") {
  auto rng = oracle::rng(14);
  const auto grid = geometric_grid(1e-3, 1e-1, 9);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> pts;
    const int n = 1 + static_cast<int>(rng() % 2000);
    for (int i = 0; i < n; ++i) pts.push_back(oracle::uniform(rng, 0.0, 1.0));
    std::sort(pts.begin(), pts.end());
    const double slope = box_dimension_fit(pts, grid).slope;
    CHECK(slope >= -1e-12);
    CHECK(slope <= 1.0 + 1e-12);
  }
}

TEST_CASE("property: cantor parts have equal length") {
  for (double gamma : {3.0, 4.0, 6.0, 10.0}) {
    for (int k = 0; k <= 12; ++k) {
      const IntervalUnion c = cantor_approximation({gamma, k});
      CHECK(c.size() == (std::size_t{1} << k));
      for (const Interval& iv : c.parts()) CHECK(std::abs(iv.length() - std::pow(gamma, -k)) <= kMergeTolerance);
    }
  }
}

TEST_CASE("gap rule names round-trip") {
  for (GapRule r : {GapRule::none, GapRule::odd_levels, GapRule::sparse_dyadic}) {
    CHECK(gap_rule_from_string(to_string(r)) == r);
  }
  CHECK_ERROR_CODE(gap_rule_from_string("bogus"), ErrorCode::invalid_input);
}
