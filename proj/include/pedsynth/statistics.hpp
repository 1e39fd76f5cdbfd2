#pragma once

/**
 * @file statistics.hpp
 * @brief Summary statistics extracted from a real dataset: per-step walking
 *        speeds, per-pedestrian mean speeds, the pooled within-pedestrian
 *        speed variance, and the mean/variance of the per-frame pedestrian
 *        count. These are the inputs the trajectory sampler is calibrated
 *        with.
 */

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pedsynth/types.hpp"

namespace pedsynth {

struct SceneStatistics {
  std::int64_t pedestrian_count = 0;  ///< K: pedestrians with >= 2 observations
  double mean_peds_per_frame = 0.0;   ///< mean of the per-frame count
  double var_peds_per_frame = 0.0;    ///< population variance of the per-frame count
  double pooled_speed_variance = 0.0; ///< common within-pedestrian step-speed variance

  /// Mean step speed per pedestrian, m/s.
  std::map<std::int64_t, double> mean_speeds;
  /// Step speeds per pedestrian, m/s; one fewer entry than observations.
  std::map<std::int64_t, std::vector<double>> step_speeds;
};

/// Step speeds of one trajectory: Euclidean distance between consecutive
/// positions divided by dt. A track of T positions yields T-1 speeds.
inline std::vector<double> step_speeds(const Trajectory& traj, double dt) {
  if (traj.positions.size() < 2)
    throw DomainError("step_speeds: pedestrian " + std::to_string(traj.ped_id) +
                      " has fewer than 2 positions");
  if (dt <= 0.0) throw DomainError("step_speeds: dt must be > 0");
  std::vector<double> speeds;
  speeds.reserve(traj.positions.size() - 1);
  for (std::size_t i = 1; i < traj.positions.size(); ++i)
    speeds.push_back(distance(traj.positions[i], traj.positions[i - 1]) / dt);
  return speeds;
}

/**
 * Mean and population variance of the per-frame pedestrian count. The count
 * at a frame includes every pedestrian whose track spans it (entry frame <=
 * frame <= exit frame); the frame population is the set of distinct frame
 * ids present in the dataset.
 */
inline std::pair<double, double> frame_count_stats(const SceneDataset& data) {
  if (data.records.empty()) throw DomainError("frame_count_stats: empty dataset");

  std::vector<std::int64_t> frames;  // distinct, ascending (records are sorted)
  for (const AnnotationRecord& rec : data.records)
    if (frames.empty() || frames.back() != rec.frame_id) frames.push_back(rec.frame_id);

  std::map<std::int64_t, std::pair<std::int64_t, std::int64_t>> span_by_ped;
  for (const AnnotationRecord& rec : data.records) {
    auto [it, inserted] = span_by_ped.emplace(
        rec.ped_id, std::pair{rec.frame_id, rec.frame_id});
    if (!inserted) {
      it->second.first = std::min(it->second.first, rec.frame_id);
      it->second.second = std::max(it->second.second, rec.frame_id);
    }
  }

  // Difference array over the frame index axis; a pedestrian's entry and
  // exit frames are its own records, hence guaranteed members of `frames`.
  std::vector<double> delta(frames.size() + 1, 0.0);
  for (const auto& [ped, span] : span_by_ped) {
    const auto lo = std::lower_bound(frames.begin(), frames.end(), span.first);
    const auto hi = std::lower_bound(frames.begin(), frames.end(), span.second);
    delta[static_cast<std::size_t>(lo - frames.begin())] += 1.0;
    delta[static_cast<std::size_t>(hi - frames.begin()) + 1] -= 1.0;
  }

  double sum = 0.0, sum_sq = 0.0, count = 0.0;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    count += delta[i];
    sum += count;
    sum_sq += count * count;
  }
  const double n = static_cast<double>(frames.size());
  const double mean = sum / n;
  return {mean, sum_sq / n - mean * mean};
}

/**
 * Pooled within-pedestrian sample variance of step speeds:
 * sum over pedestrians of the squared deviations from that pedestrian's own
 * mean, divided by the summed degrees of freedom (n_k - 1). Pedestrians
 * with fewer than 2 step speeds contribute nothing to either sum.
 */
inline double pooled_speed_variance(
    const std::map<std::int64_t, std::vector<double>>& speeds_by_ped) {
  double sum_sq_dev = 0.0;
  double dof = 0.0;
  for (const auto& [ped, speeds] : speeds_by_ped) {
    if (speeds.size() < 2) continue;
    double mean = 0.0;
    for (double s : speeds) mean += s;
    mean /= static_cast<double>(speeds.size());
    for (double s : speeds) sum_sq_dev += (s - mean) * (s - mean);
    dof += static_cast<double>(speeds.size() - 1);
  }
  if (dof == 0.0)
    throw DomainError("pooled_speed_variance: no pedestrian has 2 or more step speeds");
  return sum_sq_dev / dof;
}

/// Computes the full statistics bundle for a dataset. Iteration is in
/// ped_id order throughout, so the result is independent of input order
/// and bitwise reproducible.
inline SceneStatistics compute_statistics(const SceneDataset& data) {
  SceneStatistics stats;
  for (const Trajectory& traj : data.trajectories()) {
    if (traj.positions.size() < 2) continue;  // parser drops these for real data
    std::vector<double> speeds = step_speeds(traj, data.dt);
    double mean = 0.0;
    for (double s : speeds) mean += s;
    mean /= static_cast<double>(speeds.size());
    stats.mean_speeds[traj.ped_id] = mean;
    stats.step_speeds[traj.ped_id] = std::move(speeds);
  }
  stats.pedestrian_count = static_cast<std::int64_t>(stats.mean_speeds.size());
  if (stats.pedestrian_count == 0)
    throw DomainError("compute_statistics: no pedestrian has 2 or more observations");
  std::tie(stats.mean_peds_per_frame, stats.var_peds_per_frame) = frame_count_stats(data);
  stats.pooled_speed_variance = pooled_speed_variance(stats.step_speeds);
  return stats;
}

}  // namespace pedsynth
