// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "apec/complexity.hpp"
#include "apec/config.hpp"
#include "apec/cps.hpp"
#include "apec/delone.hpp"
#include "apec/fit.hpp"
#include "apec/window.hpp"

using namespace apec;
namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

constexpr double kPhi = 1.6180339887498948482;
const IntervalUnion kFibWindow = normalize({{-1.0, kPhi - 1.0}});
const fs::path kWork = fs::temp_directory_path() / "apec_acceptance";

int failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
  std::printf("[%s] %2d %s: %s\n", pass ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int cli(const std::string& args) {
  const std::string cmd = "\"" APEC_CLI_PATH "\" " + args + " >/dev/null 2>" + (kWork / "stderr").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void cantor_dimension() {
  bool pass = true;
  std::string detail;
  for (double gamma : {3.0, 4.0, 6.0}) {
    const auto t0 = std::chrono::steady_clock::now();
    const CantorSpec spec{gamma, 12};
    const auto boundary = boundary_points(cantor_approximation(spec));
    const auto grid = spec.box_grid();
    const DimensionFit fit = box_dimension_fit(boundary, grid);
    const double secs = seconds_since(t0);
    const double target = std::log(2.0) / std::log(gamma);
    pass = pass && std::abs(fit.slope - target) <= 0.05 && fit.r_squared >= 0.98 && secs < 10.0;
    detail += fmt("gamma=%g", gamma) + fmt(" dim=%.4f", fit.slope) + fmt(" (target %.4f)", target) +
              fmt(" r2=%.4f", fit.r_squared) + fmt(" %.2fs; ", secs);
  }
  report(1, "cantor box dimension", pass, detail);
}

void shift_exponent_check() {
  const auto grid = geometric_grid_per_decade(std::pow(4.0, -10), std::pow(4.0, -3), 8);
  const DimensionFit fit = shift_exponent(remark_b_window(4.0, 12), grid);
  report(2, "shift exponent", std::abs(fit.slope - 0.5) <= 0.05,
         fmt("slope=%.4f", fit.slope) + fmt(" r2=%.4f", fit.r_squared) + " over [4^-10, 4^-3]");
}

void density_sandwich() {
  const auto t0 = std::chrono::steady_clock::now();
  const CutProjectScheme cps = fibonacci_cps();
  const DeloneSet s = model_set(cps, {0.0, 0.0, kFibWindow, 1e4});
  const double density = static_cast<double>(s.size()) / 2e4;
  const double secs = seconds_since(t0);
  // int W and W differ by two endpoints, so both have the same measure.
  const double lo = measure(kFibWindow) / cps.covolume() * 0.99;
  const double hi = measure(kFibWindow) / cps.covolume() * 1.01;
  report(3, "density sandwich", density >= lo && density <= hi && secs < 5.0,
         fmt("density=%.6f", density) + fmt(" in [%.6f", lo) + fmt(", %.6f]", hi) + fmt(" %.2fs", secs));
}

void frequency_bound_oracle() {
  const CutProjectScheme cps = fibonacci_cps();
  const FolnerSpec folner = default_folner();
  const OrbitSampler sampler;
  const double delta = 0.3;
  const double radius = required_radius(folner, sampler, delta) + 1.0;
  std::mt19937_64 rng(20260401);
  std::uniform_real_distribution<double> base(-0.5, 0.5), logdiff(std::log(1e-4), std::log(0.05));
  int ok = 0, informative = 0;
  double worst = -1.0;
  for (int i = 0; i < 50; ++i) {
    const double h = base(rng);
    const double h2 = h + (rng() & 1 ? 1.0 : -1.0) * std::exp(logdiff(rng));
    const DeloneSet a = model_set(cps, {0.0, h, kFibWindow, radius});
    const DeloneSet b = model_set(cps, {0.0, h2, kFibWindow, radius});
    const PairFrequency f = delta_frequency(a, b, delta, folner, sampler, static_cast<std::uint64_t>(i));
    const double bound = pair_frequency_bound(cps, kFibWindow, delta, h, h2);
    if (bound < 1.0) ++informative;
    worst = std::max(worst, f.estimate - bound - 3.0 * f.std_error);
    if (f.estimate <= bound + 3.0 * f.std_error) ++ok;
  }
  report(4, "frequency bound oracle", ok == 50,
         std::to_string(ok) + "/50 within bound + 3 SE (" + std::to_string(informative) +
             " with bound < 1); max excess " + fmt("%.4f", worst));
}

struct AcRun {
  Json summary;
  double seconds = 0.0;
  bool ok = false;
};

AcRun cli_ac(const std::string& preset, int threads, const std::string& dir) {
  const auto t0 = std::chrono::steady_clock::now();
  AcRun r;
  const int code = cli("ac --preset " + preset + " --threads " + std::to_string(threads) + " --out " + (kWork / dir).string());
  r.seconds = seconds_since(t0);
  r.ok = code == 0;
  if (r.ok) {
    r.summary = Json::parse(slurp(kWork / dir / "summary.json"));
  } else {
    std::printf("  ac %s exited %d: %s\n", preset.c_str(), code, slurp(kWork / "stderr").c_str());
  }
  return r;
}

// Index of the smallest grid value >= x.
std::ptrdiff_t grid_index(const std::vector<double>& grid, double x) {
  return std::lower_bound(grid.begin(), grid.end(), x * (1.0 - 1e-12)) - grid.begin();
}

void metric_suite() {
  const CutProjectScheme cps = fibonacci_cps();
  const auto grid = default_metric_grid();
  const double radius = 1.0 / grid.front() + grid.back() + 2.0;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> hdist(-0.8, 0.8), unit(0.0, 1.0);
  int violations = 0, separated_cases = 0;
  std::string first;
  auto violate = [&](const std::string& what) {
    if (violations++ == 0) first = what;
  };
  for (int trial = 0; trial < 1000; ++trial) {
    const double h1 = hdist(rng);
    // Mix close fibres (small distances) with unrelated ones.
    const double h2 = trial % 2 ? hdist(rng) : h1 + (unit(rng) - 0.5) * 1e-3;
    const DeloneSet a = model_set(cps, {0.0, h1, kFibWindow, radius + 1.0});
    const DeloneSet b = model_set(cps, {0.0, h2, kFibWindow, radius + 1.0});
    const DeloneSet a_in = shifted(a, 0.0);
    const double ab = delone_distance(a_in, b), ba = delone_distance(b, a_in);
    if (std::abs(grid_index(grid, ab) - grid_index(grid, ba)) > 1) violate("symmetry");
    if (delone_distance(a_in, a_in) > grid.front()) violate("self distance");
    if (ab > kDistanceCap || ba > kDistanceCap) violate("cap");

    const double g = (unit(rng) * 2.0 - 1.0) * kDistanceCap * 0.999;
    const double dg = delone_distance(shifted(a, 0.0), shifted(a, g));
    if (grid_index(grid, dg) > grid_index(grid, std::max(std::abs(g), grid.front())) + 1) violate("shift continuity");

    const double delta = 0.05 + unit(rng) * 0.6;
    if (ab >= delta) {
      ++separated_cases;
      const double s = (unit(rng) * 2.0 - 1.0) * delta / 2.0 * 0.999;
      const double moved = delone_distance(a_in, shifted(b, -s));
      if (grid_index(grid, moved) < grid_index(grid, delta / 2.0) - 1) violate("shifted separation");
    }
  }
  report(8, "metric property suite", violations == 0,
         std::to_string(violations) + " violations in 1000 trials (" + std::to_string(separated_cases) +
             " shifted-separation cases)" + (first.empty() ? "" : "; first: " + first));
}

void lattice_oracle(bool spanning, const std::string& spanning_detail) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> entry(-2.0, 2.0), pos(-30.0, 30.0), width(0.1, 12.0);
  int matched = 0, trials = 0;
  while (trials < 100) {
    const double a = entry(rng), b = entry(rng), c = entry(rng), d = entry(rng);
    const double det = a * d - c * b;
    if (std::abs(det) < 0.3) continue;
    const double g0 = pos(rng), h0 = pos(rng) / 3.0;
    const Box box{g0, g0 + width(rng), h0, h0 + width(rng) / 2.0};
    double reach = 0.0;
    for (double g : {box.g_lo, box.g_hi}) {
      for (double h : {box.h_lo, box.h_hi}) {
        reach = std::max({reach, std::abs((d * g - c * h) / det), std::abs((a * h - b * g) / det)});
      }
    }
    const auto range = static_cast<std::int64_t>(std::ceil(reach)) + 1;
    if ((2 * range + 1) * (2 * range + 1) > 100000) continue;
    ++trials;
    std::set<std::pair<std::int64_t, std::int64_t>> want, got;
    for (std::int64_t m = -range; m <= range; ++m) {
      for (std::int64_t n = -range; n <= range; ++n) {
        const double g = static_cast<double>(m) * a + static_cast<double>(n) * c;
        const double h = static_cast<double>(m) * b + static_cast<double>(n) * d;
        if (g >= box.g_lo && g <= box.g_hi && h >= box.h_lo && h <= box.h_hi) want.emplace(m, n);
      }
    }
    const auto pts = enumerate_lattice(CutProjectScheme({a, b}, {c, d}), box);
    for (const auto& p : pts) got.emplace(p.m, p.n);
    if (got == want && pts.size() == want.size()) ++matched;
  }
  report(9, "lattice oracle and spanning", matched == 100 && spanning,
         std::to_string(matched) + "/100 boxes match brute force; " + spanning_detail);
}

}  // namespace

int main() {
  fs::remove_all(kWork);
  fs::create_directories(kWork);

  cantor_dimension();
  shift_exponent_check();
  density_sandwich();
  frequency_bound_oracle();

  const AcRun fib1 = cli_ac("fibonacci", 1, "fib_t1");
  const AcRun fib4 = cli_ac("fibonacci", 4, "fib_t4");
  if (fib1.ok) {
    const double upper = fib1.summary["ac_upper"], r2 = fib1.summary["r2"];
    report(5, "interval window bound", upper <= 1.15 && r2 >= 0.9,
           fmt("ac_upper=%.4f", upper) + fmt(" r2=%.4f", r2) + fmt(" ac_lower=%.4f", fib1.summary["ac_lower"].get<double>()) +
               fmt(" theorem_bound=%.4f", fib1.summary["theorem_bound"].get<double>()) + fmt(" %.1fs", fib1.seconds));
  } else {
    report(5, "interval window bound", false, "ac run failed");
  }

  const AcRun cantor = cli_ac("remark_b", 4, "remark_b");
  if (cantor.ok) {
    double lower_best = -1.0;
    for (const auto& fit : cantor.summary["run"]["fits"]) lower_best = std::max(lower_best, fit["slope_lower"].get<double>());
    const double upper = cantor.summary["ac_upper"];
    report(6, "cantor window bound", upper <= 2.3 && lower_best >= 1.2 && cantor.seconds < 600.0,
           fmt("ac_upper=%.4f", upper) + fmt(" greedy lower slope=%.4f", lower_best) +
               fmt(" theorem_bound=%.4f", cantor.summary["theorem_bound"].get<double>()) + fmt(" %.1fs", cantor.seconds));
  } else {
    report(6, "cantor window bound", false, "ac run failed");
  }

  if (fib1.ok) {
    const Json& cmp = fib1.summary["folner_compare"];
    const double fdev = cmp["max_frequency_deviation"], sdev = cmp["slope_deviation"];
    report(7, "folner independence", fdev <= 0.05 && sdev <= 0.1,
           fmt("frequency deviation=%.4f", fdev) + fmt(" slope deviation=%.4f", sdev) + " ([0,T] vs [-T,T])");
  } else {
    report(7, "folner independence", false, "ac run failed");
  }

  metric_suite();

  bool spanning = true;
  int runs = 0;
  for (const AcRun* r : {&fib1, &fib4, &cantor}) {
    if (!r->ok) {
      spanning = false;
      continue;
    }
    ++runs;
    spanning = spanning && r->summary["spanning_verified"].get<bool>();
  }
  lattice_oracle(spanning, "greedy families spanning in " + std::to_string(runs) + "/3 ac runs" +
                               (spanning ? "" : " (a run failed or was not spanning)"));

  bool identical = fib1.ok && fib4.ok;
  std::string which;
  for (const char* f : {"results.csv", "frequencies.csv", "frequencies_compare.csv"}) {
    const bool same = identical && slurp(kWork / "fib_t1" / f) == slurp(kWork / "fib_t4" / f) &&
                      !slurp(kWork / "fib_t1" / f).empty();
    if (!same) which += std::string(" ") + f;
    identical = identical && same;
  }
  report(10, "thread determinism", identical,
         identical ? "results.csv, frequencies.csv, frequencies_compare.csv byte-identical for --threads 1 and 4"
                   : "differs:" + which);

  std::printf("%s: %d criteria failed\n", failures ? "FAILED" : "OK", failures);
  return failures ? 1 : 0;
}
