#pragma once

/**
 * @file predictor.hpp
 * @brief Probabilistic constant-velocity baseline predictor. Exists to
 *        exercise the prediction file format and the metric suite end to
 *        end without a learned model.
 */

#include <cstdint>
#include <string>
#include <vector>

#include "pedsynth/rng.hpp"
#include "pedsynth/types.hpp"

namespace pedsynth {

struct PredictorConfig {
  int observe_len = 8;         ///< observed timesteps per pedestrian
  int horizon = 8;             ///< predicted timesteps (T)
  int samples_per_point = 100; ///< J
  double noise_scale = 0.1;    ///< meters of added std dev per future timestep
  std::uint64_t seed = 0;

  void validate() const {
    if (observe_len < 2) throw DomainError("predictor config: observe_len must be >= 2");
    if (horizon < 1) throw DomainError("predictor config: horizon must be >= 1");
    if (samples_per_point < 1)
      throw DomainError("predictor config: samples per point must be >= 1");
    if (!(noise_scale >= 0.0))
      throw DomainError("predictor config: noise scale must be >= 0");
  }
};

struct PredictionResult {
  PredictionSet predictions;        ///< ground truth attached from the input
  std::size_t skipped_tracks = 0;   ///< pedestrians too short to observe and score
};

/**
 * Constant-velocity prediction with linearly widening Gaussian spread: the
 * velocity is the mean displacement rate across the first observe_len
 * positions, sample j at future step t is
 *     last_observed + velocity * t * dt + noise,
 * noise being isotropic Gaussian with per-axis std dev noise_scale * t.
 * Each pedestrian draws from its own child stream Rng(seed, ped_id), in
 * (timestep, sample, axis) order. Pedestrians observed for fewer than
 * observe_len + horizon timesteps are skipped and counted.
 */
inline PredictionResult predict_constant_velocity(const SceneDataset& data,
                                                  const PredictorConfig& cfg) {
  cfg.validate();
  PredictionResult result;
  PredictionSet& set = result.predictions;
  set.samples_per_point = cfg.samples_per_point;
  set.horizon = cfg.horizon;

  const std::size_t needed =
      static_cast<std::size_t>(cfg.observe_len) + static_cast<std::size_t>(cfg.horizon);
  for (const Trajectory& track : data.trajectories()) {
    if (track.positions.size() < needed) {
      ++result.skipped_tracks;
      continue;
    }
    const std::size_t last_obs = static_cast<std::size_t>(cfg.observe_len) - 1;
    const Vec2 velocity =
        (1.0 / (static_cast<double>(last_obs) * data.dt)) *
        (track.positions[last_obs] - track.positions[0]);
    const Vec2 anchor = track.positions[last_obs];

    Rng rng(cfg.seed, static_cast<std::uint64_t>(track.ped_id));
    PredictionSet::Track out;
    out.ped_id = track.ped_id;
    out.frames.reserve(static_cast<std::size_t>(cfg.horizon));
    out.samples.reserve(static_cast<std::size_t>(cfg.horizon));
    out.ground_truth.reserve(static_cast<std::size_t>(cfg.horizon));
    for (int t = 1; t <= cfg.horizon; ++t) {
      const Vec2 mean = anchor + (static_cast<double>(t) * data.dt) * velocity;
      const double spread = cfg.noise_scale * static_cast<double>(t);
      std::vector<Vec2> samples;
      samples.reserve(static_cast<std::size_t>(cfg.samples_per_point));
      for (int j = 0; j < cfg.samples_per_point; ++j)
        samples.push_back(mean + Vec2{spread * rng.normal(), spread * rng.normal()});
      out.frames.push_back(track.start_frame +
                           (static_cast<std::int64_t>(last_obs) + t) * data.frame_stride);
      out.samples.push_back(std::move(samples));
      out.ground_truth.push_back(track.positions[last_obs + static_cast<std::size_t>(t)]);
    }
    set.tracks.push_back(std::move(out));
  }
  if (set.tracks.empty())
    throw DomainError("predict: no pedestrian has the required " +
                      std::to_string(needed) + " timesteps");
  return result;
}

}  // namespace pedsynth
