#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "apec/commands.hpp"
#include "apec/complexity.hpp"
#include "apec/config.hpp"
#include "apec/cps.hpp"
#include "apec/delone.hpp"
#include "apec/fit.hpp"
#include "apec/version.hpp"
#include "apec/window.hpp"

namespace py = pybind11;

namespace {

using Pairs = std::vector<std::pair<double, double>>;

apec::IntervalUnion to_union(const Pairs& raw) {
  std::vector<apec::Interval> v;
  v.reserve(raw.size());
  for (const auto& [lo, hi] : raw) v.push_back({lo, hi});
  return apec::normalize(std::move(v));
}

Pairs to_pairs(const apec::IntervalUnion& w) {
  Pairs out;
  for (const auto& iv : w.parts()) out.emplace_back(iv.lo, iv.hi);
  return out;
}

py::array_t<double> to_array(std::span<const double> xs) {
  return py::array_t<double>(static_cast<py::ssize_t>(xs.size()), xs.data());
}

py::dict fit_dict(const apec::DimensionFit& f) {
  py::dict d;
  d["slope"] = f.slope;
  d["intercept"] = f.intercept;
  d["r_squared"] = f.r_squared;
  d["degenerate"] = f.degenerate;
  d["points"] = f.points;
  d["warnings"] = f.warnings;
  return d;
}

apec::CutProjectScheme scheme(const std::optional<std::pair<std::pair<double, double>, std::pair<double, double>>>& basis) {
  if (!basis) return apec::fibonacci_cps();
  return apec::CutProjectScheme({basis->first.first, basis->first.second}, {basis->second.first, basis->second.second});
}

apec::WindowVariant variant(const std::string& name) {
  if (name == "closed") return apec::WindowVariant::closed;
  if (name == "interior") return apec::WindowVariant::interior;
  throw apec::Error(apec::ErrorCode::invalid_input, "variant must be 'closed' or 'interior'");
}

apec::DeloneSet make_set(const std::vector<double>& points, double radius) {
  std::vector<double> pts = points;
  std::sort(pts.begin(), pts.end());
  return apec::DeloneSet(std::move(pts), radius);
}

apec::RunConfig resolve(const std::string& preset, const std::string& config_text, std::optional<std::uint64_t> seed) {
  apec::RunConfig c = preset.empty() ? apec::RunConfig{} : apec::preset(preset);
  c = apec::parse_config(config_text, c);
  if (seed) c.seed = *seed;
  return c;
}

}  // namespace

PYBIND11_MODULE(_apec, m) {
  m.doc() = "Cut-and-project model sets, Delone metrics and amorphic complexity estimates";

  py::exception<apec::Error>(m, "ApecError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const apec::Error& e) {
      py::object cls = py::module_::import("apec._apec").attr("ApecError");
      py::object inst = cls(e.what());
      inst.attr("code") = std::string(apec::error_code_name(e.code()));
      PyErr_SetObject(cls.ptr(), inst.ptr());
    }
  });

  m.attr("__version__") = apec::version();
  m.attr("MERGE_TOLERANCE") = apec::kMergeTolerance;
  m.attr("PATCH_TOLERANCE") = apec::kPatchTolerance;
  m.attr("DISTANCE_CAP") = apec::kDistanceCap;

  // Windows
  m.def("normalize", [](const Pairs& raw) { return to_pairs(to_union(raw)); }, py::arg("intervals"));
  m.def("measure", [](const Pairs& w) { return apec::measure(to_union(w)); }, py::arg("window"));
  m.def("symmetric_difference_measure",
        [](const Pairs& w, double t) { return apec::symmetric_difference_measure(to_union(w), t); }, py::arg("window"),
        py::arg("t"));
  m.def("boundary_points", [](const Pairs& w) { return to_array(apec::boundary_points(to_union(w))); }, py::arg("window"));
  m.def("sausage_measure", [](std::vector<double> pts, double eps) {
    std::sort(pts.begin(), pts.end());
    return apec::sausage_measure(pts, eps);
  }, py::arg("points"), py::arg("eps"));
  m.def("cantor_window",
        [](double gamma, int depth, const std::string& gap_rule) {
          return to_pairs(apec::cantor_window({gamma, depth, apec::gap_rule_from_string(gap_rule)}));
        },
        py::arg("gamma"), py::arg("depth"), py::arg("gap_rule") = "none");
  m.def("remark_b_window", [](double gamma, int depth) { return to_pairs(apec::remark_b_window(gamma, depth)); },
        py::arg("gamma"), py::arg("depth"));
  m.def("remark_a_window", [](int depth) { return to_pairs(apec::remark_a_window(depth)); }, py::arg("depth"));
  m.def("geometric_grid", [](double lo, double hi, int per_decade) {
    return to_array(apec::geometric_grid_per_decade(lo, hi, per_decade));
  }, py::arg("lo"), py::arg("hi"), py::arg("per_decade") = 8);
  m.def("box_dimension_fit", [](std::vector<double> pts, const std::vector<double>& grid) {
    std::sort(pts.begin(), pts.end());
    return fit_dict(apec::box_dimension_fit(pts, grid));
  }, py::arg("points"), py::arg("eps_grid"));
  m.def("minkowski_exponent_fit", [](std::vector<double> pts, const std::vector<double>& grid) {
    std::sort(pts.begin(), pts.end());
    return fit_dict(apec::minkowski_exponent_fit(pts, grid));
  }, py::arg("points"), py::arg("eps_grid"));
  m.def("shift_exponent", [](const Pairs& w, const std::vector<double>& grid) {
    return fit_dict(apec::shift_exponent(to_union(w), grid));
  }, py::arg("window"), py::arg("eps_grid"));

  // Lattices and model sets. basis is ((v1_g, v1_h), (v2_g, v2_h)); None means the Fibonacci scheme.
  m.def("enumerate_lattice",
        [](double g_lo, double g_hi, double h_lo, double h_hi,
           const std::optional<std::pair<std::pair<double, double>, std::pair<double, double>>>& basis,
           std::uint64_t cap) {
          std::vector<std::tuple<std::int64_t, std::int64_t, double, double>> out;
          for (const auto& p : apec::enumerate_lattice(scheme(basis), {g_lo, g_hi, h_lo, h_hi}, cap)) {
            out.emplace_back(p.m, p.n, p.g, p.h);
          }
          return out;
        },
        py::arg("g_lo"), py::arg("g_hi"), py::arg("h_lo"), py::arg("h_hi"), py::arg("basis") = py::none(),
        py::arg("resource_cap") = apec::kDefaultResourceCap);
  m.def("model_set",
        [](const Pairs& window, double radius, double g_shift, double h_shift, const std::string& var,
           const std::optional<std::pair<std::pair<double, double>, std::pair<double, double>>>& basis,
           std::uint64_t cap) {
          const auto s = apec::model_set(scheme(basis), {g_shift, h_shift, to_union(window), radius}, variant(var), cap);
          return to_array(s.points());
        },
        py::arg("window"), py::arg("radius"), py::arg("g_shift") = 0.0, py::arg("h_shift") = 0.0,
        py::arg("variant") = "closed", py::arg("basis") = py::none(), py::arg("resource_cap") = apec::kDefaultResourceCap);
  m.def("pair_frequency_bound",
        [](const Pairs& w, double delta, double h, double h_prime) {
          return apec::pair_frequency_bound(apec::fibonacci_cps(), to_union(w), delta, h, h_prime);
        },
        py::arg("window"), py::arg("delta"), py::arg("h"), py::arg("h_prime"));

  // Delone sets, given as point lists with their data radius
  m.def("min_gap", [](const std::vector<double>& pts, double radius) { return apec::min_gap(make_set(pts, radius)); },
        py::arg("points"), py::arg("radius"));
  m.def("covering_radius",
        [](const std::vector<double>& pts, double radius) { return apec::covering_radius(make_set(pts, radius)); },
        py::arg("points"), py::arg("radius"));
  m.def("delone_distance",
        [](const std::vector<double>& a, const std::vector<double>& b, double radius) {
          return apec::delone_distance(make_set(a, radius), make_set(b, radius));
        },
        py::arg("a"), py::arg("b"), py::arg("radius"));
  m.def("delta_frequency",
        [](const std::vector<double>& a, const std::vector<double>& b, double radius, double delta,
           const std::vector<double>& lengths, const std::string& kind, double spacing, std::uint64_t seed, bool jitter) {
          apec::FolnerSpec folner{apec::folner_kind_from_string(kind), lengths};
          if (lengths.empty()) folner = apec::default_folner(folner.kind);
          apec::OrbitSampler sampler{spacing, seed, jitter};
          const auto f = apec::delta_frequency(make_set(a, radius), make_set(b, radius), delta, folner, sampler);
          py::dict d;
          d["estimate"] = f.estimate;
          d["per_n"] = f.per_n;
          d["std_error"] = f.std_error;
          return d;
        },
        py::arg("a"), py::arg("b"), py::arg("radius"), py::arg("delta"), py::arg("lengths") = std::vector<double>{},
        py::arg("kind") = "symmetric", py::arg("spacing") = 0.1, py::arg("seed") = 0, py::arg("jitter") = false);

  // Config-driven commands
  m.def("preset_names", &apec::preset_names);
  m.def("preset_text", &apec::preset_text, py::arg("name"));
  m.def("resolve_config",
        [](const std::string& preset, const std::string& text, std::optional<std::uint64_t> seed) {
          return apec::to_key_values(resolve(preset, text, seed));
        },
        py::arg("preset") = "", py::arg("config") = "", py::arg("seed") = py::none());
  m.def("run",
        [](const std::string& command, const std::string& out_dir, const std::string& preset, const std::string& text,
           std::optional<std::uint64_t> seed, unsigned threads) {
          apec::RunConfig c = resolve(preset, text, seed);
          c.out_dir = out_dir;
          c.threads = threads;
          apec::CommandResult r;
          {
            py::gil_scoped_release release;
            if (command == "generate") {
              r = apec::cmd_generate(c);
            } else if (command == "ac") {
              r = apec::cmd_ac(c);
            } else if (command == "dim") {
              r = apec::cmd_dim(c);
            } else {
              throw apec::Error(apec::ErrorCode::invalid_input, "unknown command '" + command + "'");
            }
          }
          py::dict d;
          d["summary"] = r.summary;
          d["files"] = r.files;
          d["warnings"] = r.warnings;
          return d;
        },
        py::arg("command"), py::arg("out_dir"), py::arg("preset") = "", py::arg("config") = "",
        py::arg("seed") = py::none(), py::arg("threads") = 1);
}
