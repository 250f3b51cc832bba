#pragma once

#include <optional>
#include <span>
#include <vector>

#include "apec/window.hpp"

namespace apec {

enum class WindowVariant {
  closed,    // model set of W + h
  interior,  // model set of int(W) + h
};

/// Where a DeloneSet came from when it was generated as a model set.
struct ModelSetProvenance {
  double v1_g = 0.0, v1_h = 0.0, v2_g = 0.0, v2_h = 0.0;  // lattice basis
  double g_shift = 0.0;
  double h_shift = 0.0;
  IntervalUnion window;
  WindowVariant variant = WindowVariant::closed;
};

/// Finite truncation of a Delone set in R: strictly increasing points inside [-radius, radius].
///
/// The radius records how far the data is valid; consumers needing a look-ahead
/// (metric balls, averaging windows) check it instead of silently truncating.
class DeloneSet {
 public:
  DeloneSet() = default;
  DeloneSet(std::vector<double> points, double radius, std::optional<ModelSetProvenance> meta = std::nullopt);

  std::span<const double> points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  double radius() const { return radius_; }
  const std::optional<ModelSetProvenance>& meta() const { return meta_; }

 private:
  std::vector<double> points_;
  double radius_ = 0.0;
  std::optional<ModelSetProvenance> meta_;
};

}  // namespace apec
