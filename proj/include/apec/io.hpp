#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "apec/cps.hpp"
#include "apec/window.hpp"

namespace apec {

// 17 significant digits: enough to round-trip every double.
std::string format_double(double x);

// [[lo, hi], ...]
std::string interval_union_json(const IntervalUnion& w);
// {"basis": [[a, c], [b, d]]} with v1 = (a, c), v2 = (b, d).
std::string cps_json(const CutProjectScheme& cps);
// One point per line.
std::string points_csv(std::span<const double> points);

void write_text(const std::filesystem::path& path, const std::string& content);

}  // namespace apec
