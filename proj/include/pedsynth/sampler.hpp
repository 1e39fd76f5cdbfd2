#pragma once

/**
 * @file sampler.hpp
 * @brief Stochastic trajectory sampling: draws a crowd size and per-
 *        pedestrian walking speeds from statistics of a real dataset,
 *        perturbs real paths (translation, reversal, truncation), and walks
 *        each perturbed path at constant speed to produce synthetic scenes.
 *
 * Reproducibility contract. Scene j of a generation run uses the child
 * stream Rng(seed, j) and consumes draws in this fixed order:
 *   1. crowd size: one truncated-normal draw (2 engine outputs per
 *      rejection round; none when the variance is zero);
 *   2. per pedestrian, in index order:
 *      a. speed-pool index (1 output),
 *      b. speed: truncated-normal draw,
 *      c. path attempts until a non-degenerate polyline results, each
 *         attempt costing: path-pool index (1), translation x and y (2),
 *         reversal decision (1), truncation count (1);
 *      d. walking the spline costs nothing.
 * Because the order is fixed and every scene owns a private stream,
 * output is byte-identical regardless of thread count.
 */

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "pedsynth/path_spline.hpp"
#include "pedsynth/rng.hpp"
#include "pedsynth/statistics.hpp"
#include "pedsynth/truncated_normal.hpp"
#include "pedsynth/types.hpp"

namespace pedsynth {

/// What to do when a pedestrian's required travel distance exceeds the
/// perturbed polyline's length.
enum class ExhaustionPolicy {
  kClamp,          ///< hold the final point; trajectory keeps all N+1 timesteps
  kDropRemaining,  ///< end the trajectory at the last reachable timestep
};

struct SamplerConfig {
  int timesteps = 20;                 ///< N: a trajectory spans N+1 timesteps
  int repetitions = 500;              ///< M: independently sampled scenes
  double dt = 0.4;                    ///< seconds per timestep
  double translation_radius = 2.0;    ///< r: uniform shift bound per axis, meters
  double reversal_probability = 0.5;  ///< p_r
  double truncation_max_fraction = 0.5;  ///< cap on the removable waypoint fraction
  std::uint64_t seed = 0;
  bool zero_sigma_s = false;  ///< ablation: sample speeds without variance
  bool zero_sigma_p = false;  ///< ablation: sample crowd sizes without variance
  ExhaustionPolicy exhaustion = ExhaustionPolicy::kClamp;
  std::int64_t frame_stride = 10;  ///< frame ids per timestep in serialized output

  void validate() const {
    if (timesteps < 1) throw DomainError("sampler config: timesteps must be >= 1");
    if (repetitions < 1) throw DomainError("sampler config: repetitions must be >= 1");
    if (!(dt > 0.0)) throw DomainError("sampler config: dt must be > 0");
    if (!(translation_radius >= 0.0))
      throw DomainError("sampler config: translation radius must be >= 0");
    if (!(reversal_probability >= 0.0 && reversal_probability <= 1.0))
      throw DomainError("sampler config: reversal probability must be in [0, 1]");
    if (!(truncation_max_fraction >= 0.0 && truncation_max_fraction < 1.0))
      throw DomainError("sampler config: truncation max fraction must be in [0, 1)");
    if (frame_stride < 1) throw DomainError("sampler config: frame stride must be >= 1");
  }
};

/// A real trajectory serving as raw material for perturbation.
struct SourcePath {
  std::int64_t ped_id = 0;
  std::vector<Vec2> waypoints;
};

using PathPool = std::vector<SourcePath>;

/// Paths eligible for sampling, in ped_id order. Requires every track to
/// have >= 2 waypoints, which parsed datasets guarantee.
inline PathPool make_path_pool(const SceneDataset& data) {
  PathPool pool;
  for (Trajectory& traj : data.trajectories()) {
    if (traj.positions.size() < 2) continue;
    pool.push_back({traj.ped_id, std::move(traj.positions)});
  }
  return pool;
}

/// The multiset of per-pedestrian mean speeds, in ped_id order.
inline std::vector<double> make_speed_pool(const SceneStatistics& stats) {
  std::vector<double> pool;
  pool.reserve(stats.mean_speeds.size());
  for (const auto& [ped, mean] : stats.mean_speeds) pool.push_back(mean);
  return pool;
}

/// Crowd size: truncated-normal draw around the real per-frame mean,
/// rounded half-up and clamped below at 1.
inline int sample_crowd_size(const SceneStatistics& stats, const SamplerConfig& cfg,
                             Rng& rng) {
  if (!(stats.mean_peds_per_frame > 0.0))
    throw DomainError("sample_crowd_size: mean pedestrians per frame must be > 0");
  const double var = cfg.zero_sigma_p ? 0.0 : stats.var_peds_per_frame;
  const double draw = sample_truncated_normal(stats.mean_peds_per_frame, var, rng);
  const double rounded = std::floor(draw + 0.5);
  return rounded < 1.0 ? 1 : static_cast<int>(rounded);
}

struct SpeedDraw {
  double mean_speed = 0.0;  ///< pool member the pedestrian was assigned
  double speed = 0.0;       ///< constant walking speed, m/s
};

/// One pedestrian's speed: a uniformly drawn pool mean, then a truncated
/// normal around it with the pooled variance (exactly the mean when the
/// sigma_s ablation is on).
inline SpeedDraw sample_speed(std::span<const double> speed_pool, double pooled_var,
                              const SamplerConfig& cfg, Rng& rng) {
  if (speed_pool.empty()) throw DomainError("sample_speed: empty speed pool");
  SpeedDraw draw;
  draw.mean_speed = speed_pool[rng.uniform_index(speed_pool.size())];
  const double var = cfg.zero_sigma_s ? 0.0 : pooled_var;
  draw.speed = sample_truncated_normal(draw.mean_speed, var, rng);
  return draw;
}

inline SpeedDraw sample_speed(const SceneStatistics& stats, const SamplerConfig& cfg,
                              Rng& rng) {
  const std::vector<double> pool = make_speed_pool(stats);
  return sample_speed(pool, stats.pooled_speed_variance, cfg, rng);
}

/// The random choices made while perturbing one path.
struct PerturbationDraw {
  Vec2 translation;
  bool reversed = false;
  int truncated_waypoints = 0;
};

/**
 * Applies the three path perturbations in fixed order: translate every
 * waypoint by a uniform draw from [-r, r]^2, reverse the waypoint sequence
 * with probability p_r, then drop a uniform number of trailing waypoints
 * up to floor(truncation_max_fraction * (n - 2)). The result always keeps
 * at least 2 waypoints. Consumes exactly 4 engine outputs.
 */
inline std::vector<Vec2> perturb_path(std::span<const Vec2> path,
                                      const SamplerConfig& cfg, Rng& rng,
                                      PerturbationDraw* draw_out = nullptr) {
  if (path.size() < 2) throw DomainError("perturb_path: need at least 2 waypoints");
  PerturbationDraw draw;
  const double r = cfg.translation_radius;
  draw.translation.x = rng.uniform_range(-r, r);
  draw.translation.y = rng.uniform_range(-r, r);
  draw.reversed = rng.uniform_double() < cfg.reversal_probability;
  const auto max_cut = static_cast<std::uint64_t>(
      cfg.truncation_max_fraction * static_cast<double>(path.size() - 2));
  draw.truncated_waypoints = static_cast<int>(rng.uniform_index(max_cut + 1));

  std::vector<Vec2> result;
  result.reserve(path.size() - static_cast<std::size_t>(draw.truncated_waypoints));
  const std::size_t kept = path.size() - static_cast<std::size_t>(draw.truncated_waypoints);
  for (std::size_t i = 0; i < kept; ++i) {
    const Vec2 src = draw.reversed ? path[path.size() - 1 - i] : path[i];
    result.push_back(src + draw.translation);
  }
  if (draw_out) *draw_out = draw;
  return result;
}

/// How one synthetic pedestrian was produced.
struct PedestrianProvenance {
  std::int64_t source_ped_id = 0;  ///< real pedestrian whose path was used
  Vec2 translation;
  bool reversed = false;
  int truncated_waypoints = 0;
  double mean_speed = 0.0;  ///< drawn pool mean
  double speed = 0.0;       ///< constant walking speed
  int on_path_steps = 0;    ///< timesteps whose arc distance fit on the polyline
};

/// One sampled scene: n_p synthetic trajectories plus their provenance.
struct SyntheticScene {
  std::vector<std::vector<Vec2>> trajectories;  ///< [pedestrian][timestep]
  std::vector<PedestrianProvenance> provenance; ///< parallel to trajectories

  int pedestrian_count() const { return static_cast<int>(trajectories.size()); }
};

/// Attempts to find a usable (non-degenerate) perturbed path; a stationary
/// source track can collapse to a single point, in which case the path is
/// redrawn.
inline constexpr int kMaxPathRetries = 64;

/**
 * Samples one scene: crowd size, then per pedestrian a speed, a perturbed
 * real path and the constant-speed walk along it. Position l (1-based, up
 * to N+1) sits at arc distance speed * dt * l along the perturbed
 * polyline. When that distance overruns the polyline the exhaustion policy
 * decides: clamp holds the final point so the trajectory keeps exactly
 * N+1 positions; drop ends it at the last reachable timestep (keeping at
 * least the path endpoint).
 */
inline SyntheticScene sample_scene(const SceneStatistics& stats, const PathPool& paths,
                                   const SamplerConfig& cfg, Rng& rng) {
  cfg.validate();
  if (paths.empty()) throw DomainError("sample_scene: empty path pool");
  const std::vector<double> speed_pool = make_speed_pool(stats);
  if (speed_pool.empty()) throw DomainError("sample_scene: empty speed pool");

  const int crowd = sample_crowd_size(stats, cfg, rng);
  SyntheticScene scene;
  scene.trajectories.reserve(static_cast<std::size_t>(crowd));
  scene.provenance.reserve(static_cast<std::size_t>(crowd));

  for (int i = 0; i < crowd; ++i) {
    PedestrianProvenance prov;
    const SpeedDraw speed = sample_speed(speed_pool, stats.pooled_speed_variance, cfg, rng);
    prov.mean_speed = speed.mean_speed;
    prov.speed = speed.speed;

    std::optional<PathSpline> spline;
    for (int attempt = 0; attempt < kMaxPathRetries && !spline; ++attempt) {
      const SourcePath& source = paths[rng.uniform_index(paths.size())];
      PerturbationDraw draw;
      const std::vector<Vec2> perturbed = perturb_path(source.waypoints, cfg, rng, &draw);
      try {
        spline.emplace(perturbed);
      } catch (const NumericError&) {
        continue;  // degenerate (zero-length) path, redraw
      }
      prov.source_ped_id = source.ped_id;
      prov.translation = draw.translation;
      prov.reversed = draw.reversed;
      prov.truncated_waypoints = draw.truncated_waypoints;
    }
    if (!spline)
      throw NumericError("sample_scene: no non-degenerate path after " +
                         std::to_string(kMaxPathRetries) + " attempts; the path pool "
                         "appears to consist of stationary tracks");

    const double step = prov.speed * cfg.dt;
    const double total = spline->length();
    std::vector<Vec2> positions;
    positions.reserve(static_cast<std::size_t>(cfg.timesteps) + 1);
    for (int l = 1; l <= cfg.timesteps + 1; ++l) {
      const double dist = step * static_cast<double>(l);
      if (dist <= total) {
        positions.push_back(spline->at(dist));
        prov.on_path_steps = l;
      } else if (cfg.exhaustion == ExhaustionPolicy::kClamp) {
        positions.push_back(spline->at(total));
      } else {
        break;
      }
    }
    if (positions.empty()) positions.push_back(spline->at(total));

    scene.trajectories.push_back(std::move(positions));
    scene.provenance.push_back(prov);
  }
  return scene;
}

struct GenerateOptions {
  int threads = 1;
  /// When set, generation stops once the synthetic dataset holds at least
  /// this many distinct frames (the frame-count parity mode); repetitions
  /// are ignored.
  std::optional<std::uint64_t> target_frames;
};

struct GenerationResult {
  SceneDataset dataset;
  std::vector<SyntheticScene> scenes;  ///< in scene-index order
};

namespace detail {

/// Serializes scenes into one dataset. Scene j occupies the frame block
/// [j*(N+1), (j+1)*(N+1)) in timestep units; pedestrian ids are assigned
/// sequentially from 1 in (scene, pedestrian) order.
inline SceneDataset assemble_scenes(const std::vector<SyntheticScene>& scenes,
                                    const SamplerConfig& cfg) {
  SceneDataset out;
  out.dt = cfg.dt;
  out.frame_stride = cfg.frame_stride;
  std::int64_t next_ped = 1;
  const std::int64_t block = static_cast<std::int64_t>(cfg.timesteps) + 1;
  for (std::size_t j = 0; j < scenes.size(); ++j) {
    for (const std::vector<Vec2>& traj : scenes[j].trajectories) {
      for (std::size_t l = 0; l < traj.size(); ++l) {
        AnnotationRecord rec;
        rec.frame_id =
            (static_cast<std::int64_t>(j) * block + static_cast<std::int64_t>(l)) *
            cfg.frame_stride;
        rec.ped_id = next_ped;
        rec.position = traj[l];
        out.records.push_back(rec);
      }
      ++next_ped;
    }
  }
  std::sort(out.records.begin(), out.records.end(), [](const auto& a, const auto& b) {
    return std::tie(a.frame_id, a.ped_id) < std::tie(b.frame_id, b.ped_id);
  });
  return out;
}

inline std::size_t scene_frame_span(const SyntheticScene& scene) {
  std::size_t longest = 0;
  for (const auto& traj : scene.trajectories) longest = std::max(longest, traj.size());
  return longest;
}

}  // namespace detail

/**
 * Generates a full synthetic dataset: M independent scenes (or as many as
 * needed to reach `target_frames`), each from its own child stream
 * Rng(cfg.seed, scene_index). Scenes are laid out in disjoint frame blocks
 * with globally unique pedestrian ids. Under the clamp policy the result
 * holds exactly scenes * (N+1) distinct frames.
 */
inline GenerationResult generate_dataset(const SceneStatistics& stats,
                                         const PathPool& paths, const SamplerConfig& cfg,
                                         const GenerateOptions& opts = {}) {
  cfg.validate();
  if (opts.threads < 1) throw DomainError("generate_dataset: threads must be >= 1");
  GenerationResult result;

  if (opts.target_frames && cfg.exhaustion == ExhaustionPolicy::kDropRemaining) {
    // Scene frame spans vary under the drop policy; generate sequentially
    // until the tally reaches the target.
    std::uint64_t frames = 0;
    for (std::uint64_t j = 0; frames < *opts.target_frames; ++j) {
      Rng rng(cfg.seed, j);
      result.scenes.push_back(sample_scene(stats, paths, cfg, rng));
      frames += detail::scene_frame_span(result.scenes.back());
    }
  } else {
    std::uint64_t scene_count;
    if (opts.target_frames) {
      const auto block = static_cast<std::uint64_t>(cfg.timesteps) + 1;
      scene_count = (*opts.target_frames + block - 1) / block;
    } else {
      scene_count = static_cast<std::uint64_t>(cfg.repetitions);
    }
    result.scenes.resize(scene_count);

    const unsigned workers = std::min<std::uint64_t>(
        scene_count, static_cast<std::uint64_t>(opts.threads));
    if (workers <= 1) {
      for (std::uint64_t j = 0; j < scene_count; ++j) {
        Rng rng(cfg.seed, j);
        try {
          result.scenes[j] = sample_scene(stats, paths, cfg, rng);
        } catch (const std::exception& e) {
          throw Error("scene " + std::to_string(j) + ": " + e.what());
        }
      }
    } else {
      std::atomic<std::uint64_t> next{0};
      std::atomic<bool> failed{false};
      std::vector<std::string> errors(workers);
      std::vector<std::thread> threads;
      threads.reserve(workers);
      for (unsigned w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
          for (;;) {
            const std::uint64_t j = next.fetch_add(1);
            if (j >= scene_count || failed.load()) return;
            Rng rng(cfg.seed, j);
            try {
              result.scenes[j] = sample_scene(stats, paths, cfg, rng);
            } catch (const std::exception& e) {
              errors[w] = "scene " + std::to_string(j) + ": " + e.what();
              failed.store(true);
              return;
            }
          }
        });
      }
      for (std::thread& t : threads) t.join();
      if (failed.load()) {
        for (const std::string& msg : errors)
          if (!msg.empty()) throw Error(msg);
      }
    }
  }

  result.dataset = detail::assemble_scenes(result.scenes, cfg);
  return result;
}

}  // namespace pedsynth
