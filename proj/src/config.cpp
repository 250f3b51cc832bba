#include "apec/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "apec/error.hpp"
#include "apec/fit.hpp"

namespace apec {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* expected) {
  throw Error(ErrorCode::config, "key '" + key + "': expected " + expected + ", got '" + value + "'");
}

double to_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, x);
  if (v.empty() || ec != std::errc() || ptr != end || !std::isfinite(x)) bad_value(key, v, "a finite number");
  return x;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::uint64_t x = 0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, x);
  if (v.empty() || ec != std::errc() || ptr != end) bad_value(key, v, "an unsigned integer");
  return x;
}

int to_int(const std::string& key, const std::string& v) {
  int x = 0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, x);
  if (v.empty() || ec != std::errc() || ptr != end) bad_value(key, v, "an integer");
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  bad_value(key, v, "true or false");
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  if (v.empty()) return out;
  for (const auto& item : split(v, ',')) out.push_back(to_double(key, item));
  return out;
}

LatticeVector to_vector(const std::string& key, const std::string& v) {
  const auto xs = to_list(key, v);
  if (xs.size() != 2) bad_value(key, v, "two numbers 'g, h'");
  return {xs[0], xs[1]};
}

std::vector<Interval> to_intervals(const std::string& key, const std::string& v) {
  std::vector<Interval> out;
  if (v.empty()) return out;
  for (const auto& item : split(v, ';')) {
    const auto xs = to_list(key, item);
    if (xs.size() != 2) bad_value(key, v, "'lo, hi' pairs separated by ';'");
    out.push_back({xs[0], xs[1]});
  }
  return out;
}

template <class Enum>
Enum to_enum(const std::string& key, const std::string& v, Enum (*from)(const std::string&)) {
  try {
    return from(v);
  } catch (const Error&) {
    throw Error(ErrorCode::config, "key '" + key + "': unknown value '" + v + "'");
  }
}

WindowVariant variant_from_string(const std::string& name) {
  if (name == "closed") return WindowVariant::closed;
  if (name == "interior") return WindowVariant::interior;
  throw Error(ErrorCode::config, "unknown window variant '" + name + "'");
}

// Shortest text that parses back to the same double.
std::string num(double x) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

std::string list(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + num(xs[i]);
  return out;
}

struct Key {
  const char* name;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;  // empty for input-only keys
};

const std::vector<Key>& keys() {
  static const std::vector<Key> table = {
      {"run.name", [](RunConfig& c, const std::string& v) { c.name = v; }, [](const RunConfig& c) { return c.name; }},
      {"run.seed", [](RunConfig& c, const std::string& v) { c.seed = to_u64("run.seed", v); },
       [](const RunConfig& c) { return std::to_string(c.seed); }},
      {"cps.preset",
       [](RunConfig& c, const std::string& v) {
         if (v != "fibonacci") bad_value("cps.preset", v, "'fibonacci'");
         c.v1 = fibonacci_cps().v1();
         c.v2 = fibonacci_cps().v2();
       },
       nullptr},
      {"cps.v1", [](RunConfig& c, const std::string& v) { c.v1 = to_vector("cps.v1", v); },
       [](const RunConfig& c) { return num(c.v1.g) + ", " + num(c.v1.h); }},
      {"cps.v2", [](RunConfig& c, const std::string& v) { c.v2 = to_vector("cps.v2", v); },
       [](const RunConfig& c) { return num(c.v2.g) + ", " + num(c.v2.h); }},
      {"window.kind", [](RunConfig& c, const std::string& v) { c.window.kind = to_enum("window.kind", v, window_kind_from_string); },
       [](const RunConfig& c) { return to_string(c.window.kind); }},
      {"window.intervals", [](RunConfig& c, const std::string& v) { c.window.intervals = to_intervals("window.intervals", v); },
       [](const RunConfig& c) {
         std::string out;
         for (std::size_t i = 0; i < c.window.intervals.size(); ++i) {
           out += (i ? "; " : "") + num(c.window.intervals[i].lo) + ", " + num(c.window.intervals[i].hi);
         }
         return out;
       }},
      {"window.gamma", [](RunConfig& c, const std::string& v) { c.window.gamma = to_double("window.gamma", v); },
       [](const RunConfig& c) { return num(c.window.gamma); }},
      {"window.depth", [](RunConfig& c, const std::string& v) { c.window.depth = to_int("window.depth", v); },
       [](const RunConfig& c) { return std::to_string(c.window.depth); }},
      {"window.gap_rule", [](RunConfig& c, const std::string& v) { c.window.gap_rule = to_enum("window.gap_rule", v, gap_rule_from_string); },
       [](const RunConfig& c) { return to_string(c.window.gap_rule); }},
      {"model.radius", [](RunConfig& c, const std::string& v) { c.radius = to_double("model.radius", v); },
       [](const RunConfig& c) { return num(c.radius); }},
      {"model.g_shift", [](RunConfig& c, const std::string& v) { c.g_shift = to_double("model.g_shift", v); },
       [](const RunConfig& c) { return num(c.g_shift); }},
      {"model.h_shift", [](RunConfig& c, const std::string& v) { c.h_shift = to_double("model.h_shift", v); },
       [](const RunConfig& c) { return num(c.h_shift); }},
      {"model.variant", [](RunConfig& c, const std::string& v) { c.variant = to_enum("model.variant", v, variant_from_string); },
       [](const RunConfig& c) { return std::string(c.variant == WindowVariant::closed ? "closed" : "interior"); }},
      {"folner.kind", [](RunConfig& c, const std::string& v) { c.folner.kind = to_enum("folner.kind", v, folner_kind_from_string); },
       [](const RunConfig& c) { return to_string(c.folner.kind); }},
      {"folner.lengths", [](RunConfig& c, const std::string& v) { c.folner.lengths = to_list("folner.lengths", v); },
       [](const RunConfig& c) { return list(c.folner.lengths); }},
      {"folner.compare_kind",
       [](RunConfig& c, const std::string& v) {
         if (v == "none") {
           c.compare.reset();
           return;
         }
         if (!c.compare) c.compare = FolnerSpec{FolnerKind::symmetric, c.folner.lengths};
         c.compare->kind = to_enum("folner.compare_kind", v, folner_kind_from_string);
       },
       [](const RunConfig& c) { return c.compare ? to_string(c.compare->kind) : std::string("none"); }},
      {"folner.compare_lengths",
       [](RunConfig& c, const std::string& v) {
         if (v.empty() && !c.compare) return;
         if (!c.compare) c.compare = FolnerSpec{FolnerKind::symmetric, {}};
         c.compare->lengths = to_list("folner.compare_lengths", v);
       },
       [](const RunConfig& c) { return c.compare ? list(c.compare->lengths) : std::string(); }},
      {"sampler.spacing", [](RunConfig& c, const std::string& v) { c.sampler.spacing = to_double("sampler.spacing", v); },
       [](const RunConfig& c) { return num(c.sampler.spacing); }},
      {"sampler.jitter", [](RunConfig& c, const std::string& v) { c.sampler.jitter = to_bool("sampler.jitter", v); },
       [](const RunConfig& c) { return std::string(c.sampler.jitter ? "true" : "false"); }},
      {"ac.deltas", [](RunConfig& c, const std::string& v) { c.deltas = to_list("ac.deltas", v); },
       [](const RunConfig& c) { return list(c.deltas); }},
      {"ac.nu_min", [](RunConfig& c, const std::string& v) { c.nu_min = to_double("ac.nu_min", v); },
       [](const RunConfig& c) { return num(c.nu_min); }},
      {"ac.nu_max", [](RunConfig& c, const std::string& v) { c.nu_max = to_double("ac.nu_max", v); },
       [](const RunConfig& c) { return num(c.nu_max); }},
      {"ac.nu_per_decade", [](RunConfig& c, const std::string& v) { c.nu_per_decade = to_int("ac.nu_per_decade", v); },
       [](const RunConfig& c) { return std::to_string(c.nu_per_decade); }},
      {"ac.mode", [](RunConfig& c, const std::string& v) { c.mode = to_enum("ac.mode", v, frequency_mode_from_string); },
       [](const RunConfig& c) { return to_string(c.mode); }},
      {"family.h_count", [](RunConfig& c, const std::string& v) { c.family.h_count = to_u64("family.h_count", v); },
       [](const RunConfig& c) { return std::to_string(c.family.h_count); }},
      {"family.h_offset", [](RunConfig& c, const std::string& v) { c.family.h_offset = to_double("family.h_offset", v); },
       [](const RunConfig& c) { return num(c.family.h_offset); }},
      {"family.h_range", [](RunConfig& c, const std::string& v) { c.family.h_range = to_double("family.h_range", v); },
       [](const RunConfig& c) { return num(c.family.h_range); }},
      {"family.g_count", [](RunConfig& c, const std::string& v) { c.family.g_count = to_u64("family.g_count", v); },
       [](const RunConfig& c) { return std::to_string(c.family.g_count); }},
      {"family.g_spacing", [](RunConfig& c, const std::string& v) { c.family.g_spacing = to_double("family.g_spacing", v); },
       [](const RunConfig& c) { return num(c.family.g_spacing); }},
      {"dim.eps_min", [](RunConfig& c, const std::string& v) { c.dim_eps_min = to_double("dim.eps_min", v); },
       [](const RunConfig& c) { return num(c.dim_eps_min); }},
      {"dim.eps_max", [](RunConfig& c, const std::string& v) { c.dim_eps_max = to_double("dim.eps_max", v); },
       [](const RunConfig& c) { return num(c.dim_eps_max); }},
      {"dim.per_decade", [](RunConfig& c, const std::string& v) { c.dim_per_decade = to_int("dim.per_decade", v); },
       [](const RunConfig& c) { return std::to_string(c.dim_per_decade); }},
      {"resource.cap", [](RunConfig& c, const std::string& v) { c.resource_cap = to_u64("resource.cap", v); },
       [](const RunConfig& c) { return std::to_string(c.resource_cap); }},
      // Where outputs go does not affect them, so the echo leaves it out.
      {"output.dir", [](RunConfig& c, const std::string& v) { c.out_dir = v; }, nullptr},
  };
  return table;
}

const char* const kFibonacciPreset = R"(# Fibonacci chain: interval window [-1, phi - 1]
run.name = fibonacci
cps.preset = fibonacci
window.kind = interval
window.intervals = -1, 0.61803398874989485
family.h_count = 200
family.h_range = 0.1
folner.compare_kind = one_sided_right
)";

const char* const kRemarkAPreset = R"(# Sparse-gap Cantor window
run.name = remark_a
cps.preset = fibonacci
window.kind = remark_a
window.depth = 12
family.h_count = 500
family.h_range = 0.001
)";

std::string remark_b_preset(const std::string& gamma) {
  return "# Cantor window with the odd-step gaps filled\n"
         "run.name = remark_b" + gamma + "\n"
         "cps.preset = fibonacci\n"
         "window.kind = remark_b\n"
         "window.gamma = " + gamma + "\n"
         "window.depth = 12\n"
         "family.h_count = 1000\n"
         "family.h_range = 0.001\n";
}

}  // namespace

std::string to_string(WindowKind kind) {
  switch (kind) {
    case WindowKind::interval: return "interval";
    case WindowKind::cantor: return "cantor";
    case WindowKind::remark_a: return "remark_a";
    case WindowKind::remark_b: return "remark_b";
  }
  return "interval";
}

WindowKind window_kind_from_string(const std::string& name) {
  for (auto k : {WindowKind::interval, WindowKind::cantor, WindowKind::remark_a, WindowKind::remark_b}) {
    if (to_string(k) == name) return k;
  }
  throw Error(ErrorCode::config, "unknown window kind '" + name + "'");
}

RunConfig parse_config(std::string_view text, RunConfig base) {
  std::string section;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    auto where = [&] { return "config line " + std::to_string(line_no) + ": "; };
    if (line.front() == '[') {
      if (line.back() != ']') throw Error(ErrorCode::config, where() + "unterminated section header");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::config, where() + "expected 'key = value'");
    std::string key = trim(std::string_view(line).substr(0, eq));
    if (key.empty()) throw Error(ErrorCode::config, where() + "empty key");
    if (!section.empty()) key = section + "." + key;
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    const auto& table = keys();
    const auto hit = std::find_if(table.begin(), table.end(), [&](const Key& k) { return key == k.name; });
    if (hit == table.end()) throw Error(ErrorCode::config, where() + "unknown key '" + key + "'");
    try {
      hit->set(base, value);
    } catch (const Error& e) {
      throw Error(ErrorCode::config, where() + e.what());
    }
  }
  return base;
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::config, "cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), std::move(base));
}

std::vector<std::string> preset_names() {
  return {"fibonacci", "remark_a", "remark_b", "remark_b3", "remark_b4", "remark_b6"};
}

std::string preset_text(const std::string& name) {
  if (name == "fibonacci") return kFibonacciPreset;
  if (name == "remark_a") return kRemarkAPreset;
  if (name == "remark_b" || name == "remark_b4") return remark_b_preset("4");
  if (name == "remark_b3") return remark_b_preset("3");
  if (name == "remark_b6") return remark_b_preset("6");
  throw Error(ErrorCode::config, "unknown preset '" + name + "'");
}

RunConfig preset(const std::string& name) { return parse_config(preset_text(name)); }

std::vector<std::pair<std::string, std::string>> to_key_values(const RunConfig& config) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const Key& k : keys()) {
    if (k.get) out.emplace_back(k.name, k.get(config));
  }
  return out;
}

std::string to_config_text(const RunConfig& config) {
  std::string out;
  for (const auto& [k, v] : to_key_values(config)) out += k + " = " + v + "\n";
  return out;
}

CutProjectScheme build_cps(const RunConfig& config) { return CutProjectScheme(config.v1, config.v2); }

IntervalUnion build_window(const RunConfig& config) {
  const WindowConfig& w = config.window;
  switch (w.kind) {
    case WindowKind::interval: return normalize(w.intervals);
    case WindowKind::cantor: return cantor_window({w.gamma, w.depth, w.gap_rule});
    case WindowKind::remark_a: return remark_a_window(w.depth);
    case WindowKind::remark_b: return remark_b_window(w.gamma, w.depth);
  }
  return {};
}

std::optional<CantorSpec> build_cantor(const RunConfig& config) {
  const WindowConfig& w = config.window;
  switch (w.kind) {
    case WindowKind::cantor: return CantorSpec{w.gamma, w.depth, w.gap_rule};
    case WindowKind::remark_a: return remark_a_cantor(w.depth);
    case WindowKind::remark_b: return CantorSpec{w.gamma, w.depth, GapRule::odd_levels};
    default: return std::nullopt;
  }
}

std::vector<double> nu_schedule(const RunConfig& config) {
  if (!(config.nu_min > 0.0) || !(config.nu_max <= 1.0) || !(config.nu_min < config.nu_max) || config.nu_per_decade < 1) {
    throw Error(ErrorCode::invalid_input, "nu schedule: need 0 < nu_min < nu_max <= 1 and nu_per_decade >= 1");
  }
  return geometric_grid_per_decade(config.nu_min, config.nu_max, config.nu_per_decade);
}

std::vector<double> dimension_grid(const RunConfig& config) {
  if (config.dim_per_decade < 1) throw Error(ErrorCode::invalid_input, "dim.per_decade must be >= 1");
  double lo = config.dim_eps_min;
  double hi = config.dim_eps_max;
  const auto cantor = build_cantor(config);
  if (lo == 0.0) lo = cantor ? cantor->resolution_floor() : 1e-6;
  if (hi == 0.0) hi = cantor ? 1.0 / cantor->gamma : 1e-1;
  if (!(lo > 0.0) || !(lo < hi)) throw Error(ErrorCode::invalid_input, "dim: need 0 < eps_min < eps_max");
  if (cantor && lo < cantor->resolution_floor() * (1.0 - 1e-12)) {
    throw Error(ErrorCode::resolution, "dim: eps_min is below the window's resolution floor");
  }
  return geometric_grid_per_decade(lo, hi, config.dim_per_decade);
}

AcProblem build_ac_problem(const RunConfig& config) {
  AcProblem p;
  p.cps = build_cps(config);
  p.window = build_window(config);
  p.cantor = build_cantor(config);
  p.family = config.family;
  p.deltas = config.deltas;
  p.nus = nu_schedule(config);
  p.sampler = config.sampler;
  p.sampler.seed = config.seed;
  p.mode = config.mode;
  p.threads = config.threads;
  p.resource_cap = config.resource_cap;
  return p;
}

void validate(const RunConfig& config) {
  const CutProjectScheme cps = build_cps(config);
  const IntervalUnion w = build_window(config);
  if (!w.is_proper()) throw Error(ErrorCode::invalid_input, "window is not proper");
  ModelSetParams{config.g_shift, config.h_shift, w, config.radius}.validate();
  config.folner.validate();
  if (config.compare) config.compare->validate();
  config.sampler.validate();
  for (double d : config.deltas) {
    if (!(d >= 0x1p-12) || !(d <= kDistanceCap)) throw Error(ErrorCode::invalid_input, "ac.deltas must lie in [2^-12, 1/sqrt(2)]");
  }
  if (config.deltas.empty()) throw Error(ErrorCode::invalid_input, "ac.deltas is empty");
  const auto nus = nu_schedule(config);
  if (nus.size() < 4 || std::log10(config.nu_max / config.nu_min) < 1.5 - 1e-9) {
    throw Error(ErrorCode::invalid_input, "nu schedule must have 4 values over at least 1.5 decades");
  }
  if (config.family.h_count < 2 || config.family.g_count < 1) {
    throw Error(ErrorCode::invalid_input, "family needs h_count >= 2 and g_count >= 1");
  }
  dimension_grid(config);
  (void)cps;
}

}  // namespace apec
