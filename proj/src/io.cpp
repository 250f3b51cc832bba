#include "apec/io.hpp"

#include <cstdio>
#include <fstream>

#include "apec/error.hpp"

namespace apec {

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string interval_union_json(const IntervalUnion& w) {
  std::string out = "[";
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Interval& iv = w.parts()[i];
    out += (i ? ", [" : "[") + format_double(iv.lo) + ", " + format_double(iv.hi) + "]";
  }
  return out + "]";
}

std::string cps_json(const CutProjectScheme& cps) {
  return "{\"basis\": [[" + format_double(cps.v1().g) + ", " + format_double(cps.v1().h) + "], [" +
         format_double(cps.v2().g) + ", " + format_double(cps.v2().h) + "]]}";
}

std::string points_csv(std::span<const double> points) {
  std::string out;
  out.reserve(points.size() * 24);
  for (double p : points) {
    out += format_double(p);
    out += '\n';
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::invalid_input, "cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw Error(ErrorCode::invalid_input, "cannot write '" + path.string() + "'");
}

}  // namespace apec
