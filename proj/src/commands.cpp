#include "apec/commands.hpp"

#include <cmath>
#include <filesystem>

#include <json.hpp>

#include "apec/complexity.hpp"
#include "apec/delone.hpp"
#include "apec/io.hpp"
#include "apec/version.hpp"

namespace apec {

namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

Json manifest(const RunConfig& config, const char* command, const std::vector<std::string>& files) {
  Json m;
  m["library"] = "apec";
  m["version"] = version();
  m["command"] = command;
  m["seed"] = config.seed;
  Json echo = Json::object();
  for (const auto& [k, v] : to_key_values(config)) echo[k] = v;
  m["config"] = echo;
  const FolnerSpec defaults = default_folner();
  m["defaults"] = {
      {"folner_lengths", defaults.lengths},
      {"sampler_spacing", OrbitSampler{}.spacing},
      {"nu_per_decade", 8},
      {"merge_tolerance", kMergeTolerance},
      {"patch_tolerance", kPatchTolerance},
      {"metric_grid", {{"min", 0x1p-12}, {"max", kDistanceCap}, {"count", 48}}},
      {"resource_cap", kDefaultResourceCap},
  };
  if (config.window.kind == WindowKind::remark_a) {
    Json schedule = Json::array();
    for (const FilledGap& g : remark_a_schedule(config.window.depth)) {
      schedule.push_back({{"step", g.step}, {"index", g.index}, {"gap", {g.gap.lo, g.gap.hi}}});
    }
    m["remark_a_schedule"] = schedule;
  }
  m["files"] = files;
  return m;
}

void finish(const RunConfig& config, const char* command, CommandResult& result) {
  result.files.push_back("manifest.json");
  write_text(fs::path(config.out_dir) / "manifest.json", manifest(config, command, result.files).dump(2) + "\n");
}

std::string results_csv_rows(const std::string& run_id, const AcResult& r) {
  std::string out;
  for (const ComplexityFit& fit : r.fits) {
    for (const AcRow& row : fit.rows) {
      out += run_id + "," + format_double(fit.delta) + "," + format_double(row.nu) + "," + std::to_string(row.sep) + "," +
             std::to_string(row.span) + "," + format_double(fit.slope_lower) + "," + format_double(fit.slope_upper) + "," +
             format_double(fit.r_squared) + "\n";
    }
  }
  return out;
}

std::string frequency_csv(const AcResult& r) {
  std::string out = "pair_id,delta,T_n,value,bound\n";
  for (const FrequencyRecord& rec : r.frequencies) {
    const std::string bound = rec.frequency.bound ? format_double(*rec.frequency.bound) : "";
    for (const auto& [t, value] : rec.frequency.per_n) {
      out += "0-" + std::to_string(rec.pair_id) + "," + format_double(rec.frequency.delta) + "," + format_double(t) + "," +
             format_double(value) + "," + bound + "\n";
    }
  }
  return out;
}

Json run_summary(const AcResult& r) {
  Json fits = Json::array();
  for (const ComplexityFit& f : r.fits) {
    fits.push_back({{"delta", f.delta},
                    {"slope_lower", f.slope_lower},
                    {"r2_lower", f.r_squared_lower},
                    {"slope_upper", f.slope_upper},
                    {"r2", f.r_squared},
                    {"upper_resolved", f.upper_resolved},
                    {"warnings", f.warnings}});
  }
  return {{"ac_lower", r.ac_lower},
          {"ac_upper", r.ac_upper},
          {"r2", r.r_squared},
          {"spanning_verified", r.spanning_verified},
          {"fits", fits}};
}

}  // namespace

CommandResult cmd_generate(const RunConfig& config) {
  validate(config);
  const CutProjectScheme cps = build_cps(config);
  const IntervalUnion w = build_window(config);
  const DeloneSet set = model_set(cps, {config.g_shift, config.h_shift, w, config.radius}, config.variant, config.resource_cap);

  CommandResult result;
  if (w.empty()) result.warnings.push_back("window is empty; the model set is empty");
  const fs::path dir(config.out_dir);
  write_text(dir / "model_set.csv", points_csv(set.points()));
  write_text(dir / "window.json", interval_union_json(w) + "\n");
  write_text(dir / "cps.json", cps_json(cps) + "\n");
  result.files = {"model_set.csv", "window.json", "cps.json"};

  Json summary;
  summary["command"] = "generate";
  summary["points"] = set.size();
  summary["radius"] = config.radius;
  summary["density"] = static_cast<double>(set.size()) / (2.0 * config.radius);
  summary["expected_density"] = measure(w) / cps.covolume();
  if (set.size() >= 2) {
    summary["min_gap"] = min_gap(set);
    summary["covering_radius"] = covering_radius(set);
  }
  summary["warnings"] = result.warnings;
  result.summary = summary.dump();
  finish(config, "generate", result);
  return result;
}

CommandResult cmd_ac(const RunConfig& config) {
  validate(config);
  const AcProblem problem = build_ac_problem(config);
  const TheoremBound tb = theorem_bound(problem.window, problem.cantor);

  const std::string run_id = config.name + "/" + to_string(config.folner.kind);
  std::optional<FolnerComparison> cmp;
  AcResult primary;
  if (config.compare) {
    cmp = folner_compare(problem, config.folner, *config.compare);
    primary = cmp->first;
  } else {
    primary = run_ac(problem, config.folner);
  }

  CommandResult result;
  const fs::path dir(config.out_dir);
  std::string results = "run_id,delta,nu,sep,span,slope_lower,slope_upper,r2\n" + results_csv_rows(run_id, primary);
  if (cmp) results += results_csv_rows(config.name + "/compare/" + to_string(config.compare->kind), cmp->second);
  write_text(dir / "results.csv", results);
  write_text(dir / "frequencies.csv", frequency_csv(primary));
  result.files = {"results.csv", "frequencies.csv"};
  if (cmp) {
    write_text(dir / "frequencies_compare.csv", frequency_csv(cmp->second));
    result.files.push_back("frequencies_compare.csv");
  }

  constexpr double kTolerance = 0.15;
  Json summary;
  summary["command"] = "ac";
  summary["run_id"] = run_id;
  summary["ac_lower"] = primary.ac_lower;
  summary["ac_upper"] = primary.ac_upper;
  summary["r2"] = primary.r_squared;
  summary["boundary_dimension"] = tb.boundary_dimension;
  summary["theorem_bound"] = tb.bound;
  summary["tolerance"] = kTolerance;
  summary["pass"] = primary.ac_upper <= tb.bound * (1.0 + kTolerance);
  summary["spanning_verified"] = primary.spanning_verified && (!cmp || cmp->second.spanning_verified);
  summary["run"] = run_summary(primary);
  if (cmp) {
    summary["folner_compare"] = {{"first", to_string(config.folner.kind)},
                                 {"second", to_string(config.compare->kind)},
                                 {"max_frequency_deviation", cmp->max_frequency_deviation},
                                 {"slope_deviation", cmp->slope_deviation},
                                 {"lower_slope_deviation", cmp->lower_slope_deviation},
                                 {"upper_slope_deviation", cmp->upper_slope_deviation},
                                 {"second_run", run_summary(cmp->second)}};
  }
  result.summary = summary.dump();
  write_text(dir / "summary.json", summary.dump(2) + "\n");
  result.files.push_back("summary.json");
  finish(config, "ac", result);
  return result;
}

CommandResult cmd_dim(const RunConfig& config) {
  validate(config);
  const IntervalUnion w = build_window(config);
  if (w.empty()) throw Error(ErrorCode::undefined_quantity, "dim: the window is empty and has no boundary");
  const std::vector<double> boundary = boundary_points(w);
  const std::vector<double> grid = dimension_grid(config);
  const DimensionFit box = box_dimension_fit(boundary, grid);
  const DimensionFit mink = minkowski_exponent_fit(boundary, grid);

  CommandResult result;
  for (const auto* f : {&box, &mink}) {
    for (const auto& warn : f->warnings) result.warnings.push_back(warn);
  }
  std::string fits = "method,slope,intercept,r2,dimension,degenerate\n";
  fits += "box," + format_double(box.slope) + "," + format_double(box.intercept) + "," + format_double(box.r_squared) +
          "," + format_double(box.slope) + "," + (box.degenerate ? "1" : "0") + "\n";
  fits += "minkowski," + format_double(mink.slope) + "," + format_double(mink.intercept) + "," +
          format_double(mink.r_squared) + "," + format_double(1.0 - mink.slope) + "," + (mink.degenerate ? "1" : "0") + "\n";
  std::string points = "method,log_eps,log_value\n";
  for (const auto& [x, y] : box.points) points += "box," + format_double(x) + "," + format_double(y) + "\n";
  for (const auto& [x, y] : mink.points) points += "minkowski," + format_double(x) + "," + format_double(y) + "\n";
  const fs::path dir(config.out_dir);
  write_text(dir / "dimension.csv", fits);
  write_text(dir / "dimension_points.csv", points);
  result.files = {"dimension.csv", "dimension_points.csv"};

  Json summary;
  summary["command"] = "dim";
  summary["box_dimension"] = box.slope;
  summary["box_r2"] = box.r_squared;
  summary["minkowski_exponent"] = mink.slope;
  summary["minkowski_dimension"] = 1.0 - mink.slope;
  summary["minkowski_r2"] = mink.r_squared;
  summary["consistent"] = std::abs(box.slope - (1.0 - mink.slope)) <= 0.05;
  summary["warnings"] = result.warnings;
  result.summary = summary.dump();
  finish(config, "dim", result);
  return result;
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::resolution:
    case ErrorCode::insufficient_data: return 3;
    case ErrorCode::resource: return 4;
    default: return 2;
  }
}

std::string error_json(const Error& e) {
  Json j;
  j["error"] = {{"code", std::string(error_code_name(e.code()))}, {"message", e.what()}};
  return j.dump();
}

}  // namespace apec
