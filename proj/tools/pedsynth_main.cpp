// Command-line front end: stats, sample, predict-baseline, evaluate and
// quantile-curve subcommands over the annotation/prediction text formats.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pedsynth/dataset_io.hpp"
#include "pedsynth/manifest.hpp"
#include "pedsynth/metrics.hpp"
#include "pedsynth/predictor.hpp"
#include "pedsynth/sampler.hpp"
#include "pedsynth/statistics.hpp"
#include "pedsynth/truncated_normal.hpp"
#include "pedsynth/version.hpp"

namespace {

using pedsynth::detail::format_double;

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  std::random_device device;
  const std::uint64_t seed =
      (static_cast<std::uint64_t>(device()) << 32) ^ device();
  std::cerr << "note: no --seed given, using randomly chosen seed " << seed << "\n";
  return seed;
}

std::string bool_str(bool value) { return value ? "true" : "false"; }

void write_curve_csv(const std::vector<double>& curve, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw pedsynth::IoError("cannot open output file: " + path);
  out << "rank,mean_distance\n";
  for (std::size_t i = 0; i < curve.size(); ++i)
    out << (i + 1) << ',' << format_double(curve[i]) << '\n';
  if (!out) throw pedsynth::IoError("curve write failed: " + path);
}

// ---------------------------------------------------------------------------
// stats

struct StatsArgs {
  std::string input;
  double dt = 0.4;
  std::string csv_out;
};

int run_stats(const StatsArgs& args) {
  const pedsynth::ParsedDataset parsed = pedsynth::load_dataset(args.input, args.dt);
  if (parsed.short_tracks_dropped > 0)
    std::cerr << "warning: dropped " << parsed.short_tracks_dropped
              << " track(s) shorter than 2 timesteps\n";
  const pedsynth::SceneStatistics stats = pedsynth::compute_statistics(parsed.dataset);

  std::cout << "stats_version=" << pedsynth::kFormatVersion << '\n'
            << "K=" << stats.pedestrian_count << '\n'
            << "mu_p=" << format_double(stats.mean_peds_per_frame) << '\n'
            << "sigma_p=" << format_double(std::sqrt(stats.var_peds_per_frame)) << '\n'
            << "sigma_s=" << format_double(std::sqrt(stats.pooled_speed_variance)) << '\n';

  if (!args.csv_out.empty()) {
    std::ofstream csv(args.csv_out);
    if (!csv) throw pedsynth::IoError("cannot open output file: " + args.csv_out);
    csv << "ped_id,mean_speed\n";
    for (const auto& [ped, mean] : stats.mean_speeds)
      csv << ped << ',' << format_double(mean) << '\n';
    csv.flush();

    pedsynth::RunManifest manifest;
    manifest.subcommand = "stats";
    manifest.add_config("input", args.input);
    manifest.add_config("dt", format_double(args.dt));
    manifest.add_config("csv_out", args.csv_out);
    manifest.add_input(args.input);
    manifest.add_output(args.csv_out);
    pedsynth::write_manifest(manifest, args.csv_out);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// sample

struct SampleArgs {
  std::string input;
  std::string out;
  pedsynth::SamplerConfig cfg;
  std::optional<std::uint64_t> seed;
  bool equal_frames = false;
  std::string exhaustion = "clamp";
  std::string provenance_out;
  int threads = 1;
};

int run_sample(SampleArgs& args) {
  args.cfg.seed = resolve_seed(args.seed);
  args.cfg.exhaustion = args.exhaustion == "drop"
                            ? pedsynth::ExhaustionPolicy::kDropRemaining
                            : pedsynth::ExhaustionPolicy::kClamp;
  args.cfg.validate();

  const pedsynth::ParsedDataset parsed = pedsynth::load_dataset(args.input, args.cfg.dt);
  if (parsed.short_tracks_dropped > 0)
    std::cerr << "warning: dropped " << parsed.short_tracks_dropped
              << " track(s) shorter than 2 timesteps\n";
  const pedsynth::SceneStatistics stats = pedsynth::compute_statistics(parsed.dataset);
  const pedsynth::PathPool paths = pedsynth::make_path_pool(parsed.dataset);

  pedsynth::GenerateOptions opts;
  opts.threads = args.threads;
  if (args.equal_frames)
    opts.target_frames = static_cast<std::uint64_t>(parsed.dataset.frame_count());

  const pedsynth::GenerationResult result =
      pedsynth::generate_dataset(stats, paths, args.cfg, opts);
  pedsynth::save_dataset(result.dataset, args.out);

  if (!args.provenance_out.empty()) {
    std::ofstream csv(args.provenance_out);
    if (!csv) throw pedsynth::IoError("cannot open output file: " + args.provenance_out);
    csv << "scene,ped_id,source_ped_id,translation_x,translation_y,reversed,"
           "truncated_waypoints,mean_speed,speed,on_path_steps\n";
    std::int64_t ped_id = 1;  // mirrors the id assignment in the dataset
    for (std::size_t j = 0; j < result.scenes.size(); ++j) {
      for (const pedsynth::PedestrianProvenance& prov : result.scenes[j].provenance) {
        csv << j << ',' << ped_id++ << ',' << prov.source_ped_id << ','
            << format_double(prov.translation.x) << ','
            << format_double(prov.translation.y) << ',' << (prov.reversed ? 1 : 0)
            << ',' << prov.truncated_waypoints << ','
            << format_double(prov.mean_speed) << ',' << format_double(prov.speed)
            << ',' << prov.on_path_steps << '\n';
      }
    }
  }

  pedsynth::RunManifest manifest;
  manifest.subcommand = "sample";
  manifest.seed = args.cfg.seed;
  manifest.has_seed = true;
  manifest.add_config("input", args.input);
  manifest.add_config("out", args.out);
  manifest.add_config("reps", std::to_string(args.cfg.repetitions));
  manifest.add_config("timesteps", std::to_string(args.cfg.timesteps));
  manifest.add_config("dt", format_double(args.cfg.dt));
  manifest.add_config("radius", format_double(args.cfg.translation_radius));
  manifest.add_config("p_reverse", format_double(args.cfg.reversal_probability));
  manifest.add_config("trunc_max", format_double(args.cfg.truncation_max_fraction));
  manifest.add_config("zero_sigma_s", bool_str(args.cfg.zero_sigma_s));
  manifest.add_config("zero_sigma_p", bool_str(args.cfg.zero_sigma_p));
  manifest.add_config("equal_frames", bool_str(args.equal_frames));
  if (opts.target_frames)
    manifest.add_config("target_frames", std::to_string(*opts.target_frames));
  manifest.add_config("exhaustion", args.exhaustion);
  manifest.add_config("frame_stride", std::to_string(args.cfg.frame_stride));
  manifest.add_config("rng", std::string(pedsynth::Rng::kAlgorithm));
  manifest.add_input(args.input);
  manifest.add_output(args.out);
  if (!args.provenance_out.empty()) manifest.add_output(args.provenance_out);
  pedsynth::write_manifest(manifest, args.out);

  std::cout << "wrote " << args.out << ": " << result.scenes.size() << " scene(s), "
            << result.dataset.frame_count() << " frames\n";
  return 0;
}

// ---------------------------------------------------------------------------
// predict-baseline

struct PredictArgs {
  std::string input;
  std::string out;
  pedsynth::PredictorConfig cfg;
  std::optional<std::uint64_t> seed;
  double dt = 0.4;
};

int run_predict(PredictArgs& args) {
  args.cfg.seed = resolve_seed(args.seed);
  args.cfg.validate();
  const pedsynth::ParsedDataset parsed = pedsynth::load_dataset(args.input, args.dt);
  const pedsynth::PredictionResult result =
      pedsynth::predict_constant_velocity(parsed.dataset, args.cfg);
  if (result.skipped_tracks > 0)
    std::cerr << "note: skipped " << result.skipped_tracks
              << " track(s) shorter than observe_len + horizon\n";
  pedsynth::save_predictions(result.predictions, args.out);

  pedsynth::RunManifest manifest;
  manifest.subcommand = "predict-baseline";
  manifest.seed = args.cfg.seed;
  manifest.has_seed = true;
  manifest.add_config("input", args.input);
  manifest.add_config("out", args.out);
  manifest.add_config("observe", std::to_string(args.cfg.observe_len));
  manifest.add_config("horizon", std::to_string(args.cfg.horizon));
  manifest.add_config("samples", std::to_string(args.cfg.samples_per_point));
  manifest.add_config("noise", format_double(args.cfg.noise_scale));
  manifest.add_config("dt", format_double(args.dt));
  manifest.add_config("rng", std::string(pedsynth::Rng::kAlgorithm));
  manifest.add_input(args.input);
  manifest.add_output(args.out);
  pedsynth::write_manifest(manifest, args.out);

  std::cout << "wrote " << args.out << ": " << result.predictions.tracks.size()
            << " track(s), J=" << result.predictions.samples_per_point
            << ", horizon=" << result.predictions.horizon << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// evaluate / quantile-curve

struct EvaluateArgs {
  std::string gt;
  std::string pred;
  std::string curve_out;
  double dt = 0.4;
};

pedsynth::PredictionSet load_scorable(const EvaluateArgs& args, std::size_t* excluded) {
  const pedsynth::ParsedDataset truth = pedsynth::load_dataset(args.gt, args.dt);
  pedsynth::PredictionSet preds = pedsynth::load_predictions(args.pred);
  *excluded = pedsynth::attach_ground_truth(preds, truth.dataset);
  return preds;
}

void write_curve_manifest(const EvaluateArgs& args, const char* subcommand) {
  pedsynth::RunManifest manifest;
  manifest.subcommand = subcommand;
  manifest.add_config("gt", args.gt);
  manifest.add_config("pred", args.pred);
  manifest.add_config("curve_out", args.curve_out);
  manifest.add_input(args.gt);
  manifest.add_input(args.pred);
  manifest.add_output(args.curve_out);
  pedsynth::write_manifest(manifest, args.curve_out);
}

int run_evaluate(const EvaluateArgs& args) {
  std::size_t excluded = 0;
  const pedsynth::PredictionSet preds = load_scorable(args, &excluded);
  const pedsynth::MetricsReport report = pedsynth::compute_metrics(preds);
  std::cout << "ade_m=" << format_double(report.ade) << '\n'
            << "mde_m=" << format_double(report.mde) << '\n'
            << "fde_m=" << format_double(report.fde) << '\n'
            << "excluded_tracks=" << excluded << '\n';
  if (!args.curve_out.empty()) {
    write_curve_csv(report.quantile_curve, args.curve_out);
    write_curve_manifest(args, "evaluate");
  }
  return 0;
}

int run_quantile_curve(const EvaluateArgs& args) {
  std::size_t excluded = 0;
  const pedsynth::PredictionSet preds = load_scorable(args, &excluded);
  write_curve_csv(pedsynth::quantile_curve(preds), args.curve_out);
  write_curve_manifest(args, "quantile-curve");
  if (excluded > 0) std::cerr << "note: excluded " << excluded << " track(s)\n";
  std::cout << "wrote " << args.curve_out << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pedestrian trajectory statistics, synthesis and evaluation"};
  app.set_version_flag("--version",
                       std::string(pedsynth::kToolName) + " " +
                           std::string(pedsynth::kToolVersion));
  app.require_subcommand(1);

  StatsArgs stats_args;
  CLI::App* stats = app.add_subcommand(
      "stats", "Print summary statistics of an annotation file");
  stats->add_option("input", stats_args.input, "annotation file (frame ped x y)")
      ->required();
  stats->add_option("--dt", stats_args.dt, "seconds per timestep");
  stats->add_option("--csv-out", stats_args.csv_out, "per-pedestrian mean-speed CSV");

  SampleArgs sample_args;
  CLI::App* sample = app.add_subcommand(
      "sample", "Generate a synthetic dataset from a real one");
  sample->add_option("--input", sample_args.input, "real annotation file")->required();
  sample->add_option("--out", sample_args.out, "synthetic annotation file")->required();
  sample->add_option("--reps", sample_args.cfg.repetitions, "number of sampled scenes");
  sample->add_option("--timesteps", sample_args.cfg.timesteps,
                     "timesteps per scene minus one (a scene spans N+1 steps)");
  sample->add_option("--dt", sample_args.cfg.dt, "seconds per timestep");
  sample->add_option("--radius", sample_args.cfg.translation_radius,
                     "translation perturbation bound per axis, meters");
  sample->add_option("--p-reverse", sample_args.cfg.reversal_probability,
                     "path reversal probability");
  sample->add_option("--trunc-max", sample_args.cfg.truncation_max_fraction,
                     "max fraction of waypoints the truncation may remove");
  sample->add_option("--seed", sample_args.seed, "RNG seed (random when omitted)");
  sample->add_flag("--zero-sigma-s", sample_args.cfg.zero_sigma_s,
                   "sample speeds without variance");
  sample->add_flag("--zero-sigma-p", sample_args.cfg.zero_sigma_p,
                   "sample crowd sizes without variance");
  sample->add_flag("--equal-frames", sample_args.equal_frames,
                   "stop once the synthetic frame count reaches the input's");
  sample->add_option("--exhaustion", sample_args.exhaustion,
                     "policy when a path runs out: clamp or drop")
      ->check(CLI::IsMember({"clamp", "drop"}));
  sample->add_option("--frame-stride", sample_args.cfg.frame_stride,
                     "frame ids per timestep in the output");
  sample->add_option("--provenance", sample_args.provenance_out,
                     "per-pedestrian provenance CSV");
  sample->add_option("--threads", sample_args.threads, "worker threads");

  PredictArgs predict_args;
  CLI::App* predict = app.add_subcommand(
      "predict-baseline", "Constant-velocity probabilistic predictions");
  predict->add_option("--input", predict_args.input, "annotation file")->required();
  predict->add_option("--out", predict_args.out, "prediction file")->required();
  predict->add_option("--observe", predict_args.cfg.observe_len, "observed timesteps");
  predict->add_option("--horizon", predict_args.cfg.horizon, "predicted timesteps");
  predict->add_option("--samples", predict_args.cfg.samples_per_point,
                      "probabilistic samples per point");
  predict->add_option("--noise", predict_args.cfg.noise_scale,
                      "noise std dev per future timestep, meters");
  predict->add_option("--seed", predict_args.seed, "RNG seed (random when omitted)");
  predict->add_option("--dt", predict_args.dt, "seconds per timestep");

  EvaluateArgs evaluate_args;
  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "Score predictions against ground truth (ADE, MDE, FDE)");
  evaluate->add_option("--gt", evaluate_args.gt, "ground-truth annotation file")
      ->required();
  evaluate->add_option("--pred", evaluate_args.pred, "prediction file")->required();
  evaluate->add_option("--curve-out", evaluate_args.curve_out,
                       "also write the quantile distance curve CSV");
  evaluate->add_option("--dt", evaluate_args.dt, "seconds per timestep");

  EvaluateArgs curve_args;
  CLI::App* curve = app.add_subcommand(
      "quantile-curve", "Write the per-rank mean distance curve");
  curve->add_option("--gt", curve_args.gt, "ground-truth annotation file")->required();
  curve->add_option("--pred", curve_args.pred, "prediction file")->required();
  curve->add_option("--out", curve_args.curve_out, "curve CSV")->required();
  curve->add_option("--dt", curve_args.dt, "seconds per timestep");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp" ||
        e.get_name() == "CallForVersion")
      return app.exit(e);
    app.exit(e);
    return 2;
  }

  try {
    if (stats->parsed()) return run_stats(stats_args);
    if (sample->parsed()) return run_sample(sample_args);
    if (predict->parsed()) return run_predict(predict_args);
    if (evaluate->parsed()) return run_evaluate(evaluate_args);
    if (curve->parsed()) return run_quantile_curve(curve_args);
  } catch (const pedsynth::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
