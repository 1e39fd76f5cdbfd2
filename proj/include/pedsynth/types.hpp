#pragma once

/**
 * @file types.hpp
 * @brief Core value types shared across the toolkit: 2D points, annotation
 *        records, per-pedestrian trajectories, whole-scene datasets and
 *        probabilistic prediction sets.
 */

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace pedsynth {

/// Base class of every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text: wrong field count, non-numeric token, bad id.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Structurally inconsistent data: duplicate keys, gapped tracks, ragged
/// sample counts.
class StructureError : public Error {
 public:
  using Error::Error;
};

/// An operation was invoked outside its domain (empty dataset, too-short
/// track, empty speed pool, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure: degenerate truncated-normal tail, zero-length path.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// File or stream failure.
class IoError : public Error {
 public:
  using Error::Error;
};

/// 2D point or displacement in meters, world frame (top-down view).
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator*(double c, Vec2 v) { return {c * v.x, c * v.y}; }
  friend constexpr Vec2 operator*(Vec2 v, double c) { return {c * v.x, c * v.y}; }
  friend constexpr bool operator==(Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }
};

inline double norm(Vec2 v) { return std::sqrt(v.x * v.x + v.y * v.y); }

inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

/// One annotated observation: pedestrian `ped_id` at frame `frame_id`.
struct AnnotationRecord {
  std::int64_t frame_id = 0;
  std::int64_t ped_id = 0;
  Vec2 position;

  friend bool operator==(const AnnotationRecord&, const AnnotationRecord&) = default;
};

/// One pedestrian's time-ordered positions at a uniform timestep.
struct Trajectory {
  std::int64_t ped_id = 0;
  std::int64_t start_frame = 0;  ///< frame_id of the first observation
  std::vector<Vec2> positions;

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

/**
 * A set of annotated pedestrian tracks sharing one timestep convention.
 *
 * Invariants (established by the parser, preserved by the generator):
 *  - records are sorted by (frame_id, ped_id) and contain no duplicate pair;
 *  - within one pedestrian, consecutive frame ids differ by exactly
 *    `frame_stride`;
 *  - every pedestrian has at least 2 records.
 */
struct SceneDataset {
  std::vector<AnnotationRecord> records;
  std::int64_t frame_stride = 10;  ///< annotation frames between consecutive timesteps
  double dt = 0.4;                 ///< seconds between consecutive timesteps

  friend bool operator==(const SceneDataset&, const SceneDataset&) = default;

  /// Groups records into per-pedestrian trajectories, ordered by ped_id.
  /// Records must already be frame-sorted (as the parser guarantees).
  std::vector<Trajectory> trajectories() const {
    std::map<std::int64_t, Trajectory> by_ped;
    for (const AnnotationRecord& rec : records) {
      Trajectory& traj = by_ped[rec.ped_id];
      if (traj.positions.empty()) {
        traj.ped_id = rec.ped_id;
        traj.start_frame = rec.frame_id;
      }
      traj.positions.push_back(rec.position);
    }
    std::vector<Trajectory> result;
    result.reserve(by_ped.size());
    for (auto& [id, traj] : by_ped) result.push_back(std::move(traj));
    return result;
  }

  /// Number of distinct frame ids present.
  std::size_t frame_count() const {
    std::size_t count = 0;
    std::int64_t last = 0;
    bool first = true;
    for (const AnnotationRecord& rec : records) {  // records are frame-sorted
      if (first || rec.frame_id != last) ++count;
      last = rec.frame_id;
      first = false;
    }
    return count;
  }
};

/**
 * Probabilistic predictions: J sampled future positions per pedestrian per
 * future timestep, optionally paired with ground truth for scoring.
 *
 * `samples[t][j]` is the j-th sampled position at the t-th future timestep
 * (t ascending in frame order). Ground truth is empty until attached; the
 * metrics require it for every scored (pedestrian, timestep).
 */
struct PredictionSet {
  struct Track {
    std::int64_t ped_id = 0;
    std::vector<std::int64_t> frames;            ///< predicted frame ids, ascending
    std::vector<std::vector<Vec2>> samples;      ///< [timestep][sample]
    std::vector<Vec2> ground_truth;              ///< [timestep], may be empty

    friend bool operator==(const Track&, const Track&) = default;
  };

  int samples_per_point = 0;  ///< J, uniform across all pedestrian-timesteps
  int horizon = 0;            ///< T, set once tracks are rectangular
  std::vector<Track> tracks;  ///< ordered by ped_id

  friend bool operator==(const PredictionSet&, const PredictionSet&) = default;
};

}  // namespace pedsynth
