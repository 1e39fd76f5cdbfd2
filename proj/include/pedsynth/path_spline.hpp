#pragma once

/// Arc-length parameterized piecewise linear path.

#include <algorithm>
#include <span>
#include <vector>

#include "pedsynth/types.hpp"

namespace pedsynth {

/**
 * A polyline through a trajectory's waypoints, addressed by distance
 * traveled along it: at(0) is the first waypoint, at(length()) the last,
 * with linear interpolation inside segments. Zero-length segments are
 * dropped at construction. Queries outside [0, length()] clamp to the
 * nearest endpoint.
 */
class PathSpline {
 public:
  /// Requires >= 2 waypoints and at least one segment of positive length.
  /// A polyline of total length zero throws NumericError; callers treat
  /// that path as degenerate and redraw.
  explicit PathSpline(std::span<const Vec2> waypoints) {
    if (waypoints.size() < 2)
      throw DomainError("path spline: need at least 2 waypoints");
    points_.push_back(waypoints[0]);
    cumulative_.push_back(0.0);
    for (std::size_t i = 1; i < waypoints.size(); ++i) {
      const double seg = distance(waypoints[i], points_.back());
      if (seg == 0.0) continue;
      points_.push_back(waypoints[i]);
      cumulative_.push_back(cumulative_.back() + seg);
    }
    if (points_.size() < 2)
      throw NumericError("path spline: all waypoints coincide (zero-length path)");
  }

  double length() const { return cumulative_.back(); }

  Vec2 at(double dist) const {
    if (dist <= 0.0) return points_.front();
    if (dist >= length()) return points_.back();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), dist);
    const std::size_t seg = static_cast<std::size_t>(it - cumulative_.begin());
    const double seg_start = cumulative_[seg - 1];
    const double frac = (dist - seg_start) / (cumulative_[seg] - seg_start);
    return points_[seg - 1] + frac * (points_[seg] - points_[seg - 1]);
  }

 private:
  std::vector<Vec2> points_;
  std::vector<double> cumulative_;  // prefix arc lengths, cumulative_[0] == 0
};

}  // namespace pedsynth
