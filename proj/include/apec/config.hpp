#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "apec/complexity.hpp"
#include "apec/cps.hpp"
#include "apec/window.hpp"

namespace apec {

enum class WindowKind { interval, cantor, remark_a, remark_b };

std::string to_string(WindowKind kind);
WindowKind window_kind_from_string(const std::string& name);

struct WindowConfig {
  WindowKind kind = WindowKind::interval;
  std::vector<Interval> intervals;  // interval kind
  double gamma = 4.0;               // cantor, remark_b
  int depth = 12;                   // cantor, remark_b, remark_a
  GapRule gap_rule = GapRule::none; // cantor
};

/// Everything a command needs; parsed from flat key-value text.
struct RunConfig {
  std::string name = "run";
  std::uint64_t seed = 0;
  LatticeVector v1 = fibonacci_cps().v1();
  LatticeVector v2 = fibonacci_cps().v2();
  WindowConfig window;

  // generate
  double radius = 1000.0;
  double g_shift = 0.0;
  double h_shift = 0.0;
  WindowVariant variant = WindowVariant::closed;

  // ac
  FolnerSpec folner = default_folner();
  std::optional<FolnerSpec> compare;
  OrbitSampler sampler;
  std::vector<double> deltas{0.4, 0.3, 0.2, 0.1};
  double nu_min = 1e-3;
  double nu_max = 1e-1;
  int nu_per_decade = 8;
  FamilySpec family;
  FrequencyMode mode = FrequencyMode::mc;

  // dim; zero bounds select the automatic grid
  double dim_eps_min = 0.0;
  double dim_eps_max = 0.0;
  int dim_per_decade = 8;

  std::string out_dir = "out";
  std::uint64_t resource_cap = kDefaultResourceCap;
  unsigned threads = 1;  // wall time only; not part of the canonical echo
};

/// Applies the assignments in `text` on top of `base`.
/// Throws Error(config) on syntax errors, unknown keys or malformed values.
RunConfig parse_config(std::string_view text, RunConfig base = {});
RunConfig load_config_file(const std::string& path, RunConfig base = {});

// Presets: fibonacci, remark_a, remark_b (gamma 4), remark_b3, remark_b4, remark_b6.
std::vector<std::string> preset_names();
std::string preset_text(const std::string& name);
RunConfig preset(const std::string& name);

/// Canonical key-value echo; parse_config of its text reproduces the config exactly.
std::vector<std::pair<std::string, std::string>> to_key_values(const RunConfig& config);
std::string to_config_text(const RunConfig& config);

CutProjectScheme build_cps(const RunConfig& config);
IntervalUnion build_window(const RunConfig& config);
std::optional<CantorSpec> build_cantor(const RunConfig& config);
std::vector<double> nu_schedule(const RunConfig& config);
std::vector<double> dimension_grid(const RunConfig& config);
AcProblem build_ac_problem(const RunConfig& config);

/// Checks every guard the commands rely on before any heavy work.
void validate(const RunConfig& config);

}  // namespace apec
