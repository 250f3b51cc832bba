#include "apec/delone_set.hpp"

#include <cmath>

#include "apec/error.hpp"

namespace apec {

DeloneSet::DeloneSet(std::vector<double> points, double radius, std::optional<ModelSetProvenance> meta)
    : points_(std::move(points)), radius_(radius), meta_(std::move(meta)) {
  if (!(radius_ > 0.0) || !std::isfinite(radius_)) throw Error(ErrorCode::invalid_input, "DeloneSet: radius must be > 0");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i]) || std::abs(points_[i]) > radius_) {
      throw Error(ErrorCode::invalid_input, "DeloneSet: point outside [-radius, radius]");
    }
    if (i > 0 && !(points_[i] > points_[i - 1])) {
      throw Error(ErrorCode::invalid_input, "DeloneSet: points must be strictly increasing");
    }
  }
}

}  // namespace apec
