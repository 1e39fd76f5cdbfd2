#pragma once

/**
 * @file metrics.hpp
 * @brief Displacement-error metrics over probabilistic prediction sets:
 *        average (ADE), minimum (MDE) and final-step (FDE) displacement
 *        error, plus the per-rank quantile distance curve.
 */

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pedsynth/types.hpp"

namespace pedsynth {

namespace detail {

/// Validates the rectangular (pedestrian, timestep) grid with ground truth
/// and uniform J that all metrics assume.
inline void require_scorable(const PredictionSet& preds) {
  if (preds.tracks.empty() || preds.horizon < 1 || preds.samples_per_point < 1)
    throw DomainError("metrics: empty prediction set");
  const std::size_t horizon = static_cast<std::size_t>(preds.horizon);
  const std::size_t j = static_cast<std::size_t>(preds.samples_per_point);
  for (const auto& track : preds.tracks) {
    if (track.samples.size() != horizon || track.ground_truth.size() != horizon)
      throw DomainError("metrics: pedestrian " + std::to_string(track.ped_id) +
                        " is not scorable over the full horizon; align predictions "
                        "with ground truth first");
    for (const auto& samples : track.samples)
      if (samples.size() != j)
        throw DomainError("metrics: pedestrian " + std::to_string(track.ped_id) +
                          " has a ragged sample count");
  }
}

}  // namespace detail

/**
 * Attaches ground-truth positions from `truth` to each predicted track and
 * rectangularizes the set: the horizon becomes the longest track, and
 * tracks that are shorter or lack a ground-truth record at any predicted
 * (frame, pedestrian) are removed. Returns the number of removed tracks.
 */
inline std::size_t attach_ground_truth(PredictionSet& preds, const SceneDataset& truth) {
  std::map<std::pair<std::int64_t, std::int64_t>, Vec2> positions;
  for (const AnnotationRecord& rec : truth.records)
    positions[{rec.frame_id, rec.ped_id}] = rec.position;

  std::size_t horizon = 0;
  for (const auto& track : preds.tracks)
    horizon = std::max(horizon, track.frames.size());

  std::vector<PredictionSet::Track> kept;
  std::size_t excluded = 0;
  for (auto& track : preds.tracks) {
    if (track.frames.size() != horizon) {
      ++excluded;
      continue;
    }
    std::vector<Vec2> truth_points;
    truth_points.reserve(horizon);
    bool complete = true;
    for (std::int64_t frame : track.frames) {
      const auto it = positions.find({frame, track.ped_id});
      if (it == positions.end()) {
        complete = false;
        break;
      }
      truth_points.push_back(it->second);
    }
    if (!complete) {
      ++excluded;
      continue;
    }
    track.ground_truth = std::move(truth_points);
    kept.push_back(std::move(track));
  }
  preds.tracks = std::move(kept);
  preds.horizon = static_cast<int>(horizon);
  return excluded;
}

/// Mean over pedestrians and timesteps of the mean sample distance to the
/// ground truth.
inline double ade(const PredictionSet& preds) {
  detail::require_scorable(preds);
  double total = 0.0;
  for (const auto& track : preds.tracks) {
    for (std::size_t t = 0; t < track.samples.size(); ++t) {
      double mean = 0.0;
      for (const Vec2& sample : track.samples[t])
        mean += distance(sample, track.ground_truth[t]);
      total += mean / static_cast<double>(track.samples[t].size());
    }
  }
  return total / (static_cast<double>(preds.tracks.size()) *
                  static_cast<double>(preds.horizon));
}

/// Mean over pedestrians and timesteps of the closest sample's distance.
inline double mde(const PredictionSet& preds) {
  detail::require_scorable(preds);
  double total = 0.0;
  for (const auto& track : preds.tracks) {
    for (std::size_t t = 0; t < track.samples.size(); ++t) {
      double best = distance(track.samples[t][0], track.ground_truth[t]);
      for (const Vec2& sample : track.samples[t])
        best = std::min(best, distance(sample, track.ground_truth[t]));
      total += best;
    }
  }
  return total / (static_cast<double>(preds.tracks.size()) *
                  static_cast<double>(preds.horizon));
}

/// Mean over pedestrians of the mean sample distance at the final timestep.
inline double fde(const PredictionSet& preds) {
  detail::require_scorable(preds);
  const std::size_t last = static_cast<std::size_t>(preds.horizon) - 1;
  double total = 0.0;
  for (const auto& track : preds.tracks) {
    double mean = 0.0;
    for (const Vec2& sample : track.samples[last])
      mean += distance(sample, track.ground_truth[last]);
    total += mean / static_cast<double>(track.samples[last].size());
  }
  return total / static_cast<double>(preds.tracks.size());
}

/**
 * Per-rank distance curve: for each (pedestrian, timestep) the J sample
 * distances are sorted ascending; entry q is the mean of the q-th smallest
 * across all pedestrian-timesteps. Entry 0 therefore equals the MDE and
 * the curve's mean equals the ADE. With J = 100 ranks read as percentiles.
 */
inline std::vector<double> quantile_curve(const PredictionSet& preds) {
  detail::require_scorable(preds);
  const std::size_t j = static_cast<std::size_t>(preds.samples_per_point);
  std::vector<double> curve(j, 0.0);
  std::vector<double> distances(j);
  for (const auto& track : preds.tracks) {
    for (std::size_t t = 0; t < track.samples.size(); ++t) {
      for (std::size_t s = 0; s < j; ++s)
        distances[s] = distance(track.samples[t][s], track.ground_truth[t]);
      std::sort(distances.begin(), distances.end());
      for (std::size_t s = 0; s < j; ++s) curve[s] += distances[s];
    }
  }
  const double cells = static_cast<double>(preds.tracks.size()) *
                       static_cast<double>(preds.horizon);
  for (double& value : curve) value /= cells;
  return curve;
}

struct MetricsReport {
  double ade = 0.0;
  double mde = 0.0;
  double fde = 0.0;
  std::vector<double> quantile_curve;  ///< ascending, one entry per sample rank
};

inline MetricsReport compute_metrics(const PredictionSet& preds) {
  MetricsReport report;
  report.ade = ade(preds);
  report.mde = mde(preds);
  report.fde = fde(preds);
  report.quantile_curve = quantile_curve(preds);
  return report;
}

}  // namespace pedsynth
