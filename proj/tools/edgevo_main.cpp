// Command-line front end: run odometry on a TUM-format sequence, evaluate
// trajectories, run the edge-vs-random ablation study, and generate synthetic
// benchmark sequences.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "edgevo/dataset.hpp"
#include "edgevo/errors.hpp"
#include "edgevo/evaluation.hpp"
#include "edgevo/pipeline.hpp"
#include "edgevo/synthetic.hpp"
#include "edgevo/tracker.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitDataError = 2;
constexpr int kExitTrackingAborted = 3;

edgevo::CameraIntrinsics default_intrinsics(int width, int height) {
  // TUM Freiburg-style defaults, scaled to the actual resolution.
  edgevo::CameraIntrinsics K;
  K.width = width;
  K.height = height;
  K.fx = 525.0 * width / 640.0;
  K.fy = 525.0 * width / 640.0;
  K.cx = (width - 1) / 2.0;
  K.cy = (height - 1) / 2.0;
  return K;
}

struct RunOptions {
  std::string dataset;
  std::string edge = "canny";
  int keyframe = 4;
  bool no_motion_prior = false;
  int levels = 3;
  int max_iters = 20;
  int min_points = 300;
  double assoc_tolerance = edgevo::kDefaultAssociationTol;
  double depth_scale = edgevo::kTumDepthScale;
  std::string out = "trajectory.txt";
  std::string diag;
  double fx = 0, fy = 0, cx = -1, cy = -1;
};

edgevo::TrackerConfig tracker_config(const RunOptions& opt) {
  edgevo::TrackerConfig cfg;
  cfg.detector = edgevo::edge_detector_from_string(opt.edge);
  cfg.keyframe_interval = opt.keyframe;
  cfg.use_motion_prior = !opt.no_motion_prior;
  cfg.pyramid_levels = opt.levels;
  cfg.max_iterations_per_level = opt.max_iters;
  cfg.min_valid_points = opt.min_points;
  cfg.validate();
  return cfg;
}

edgevo::CameraIntrinsics resolve_intrinsics(const RunOptions& opt,
                                            const std::filesystem::path& dir, int width,
                                            int height) {
  if (opt.fx > 0 && opt.fy > 0 && opt.cx >= 0 && opt.cy >= 0) {
    edgevo::CameraIntrinsics K{opt.fx, opt.fy, opt.cx, opt.cy, width, height};
    return K;
  }
  if (auto K = edgevo::read_calibration(dir)) {
    if (K->width != width || K->height != height)
      throw edgevo::IoError("calibration.txt does not match the image resolution");
    return *K;
  }
  std::cerr << "note: no calibration found, using scaled TUM defaults\n";
  return default_intrinsics(width, height);
}

int cmd_run(const RunOptions& opt) {
  const std::filesystem::path dir(opt.dataset);
  const edgevo::SequenceIndex index = edgevo::parse_sequence(dir);
  const std::vector<edgevo::AssociatedFrame> assoc =
      edgevo::associate(index, opt.assoc_tolerance);
  if (assoc.size() < 2) {
    std::cerr << "error: fewer than 2 associated frames\n";
    return kExitDataError;
  }

  edgevo::Frame first = edgevo::load_frame(index, assoc[0], opt.depth_scale);
  const edgevo::CameraIntrinsics K =
      resolve_intrinsics(opt, dir, first.gray.width, first.gray.height);
  const edgevo::TrackerConfig cfg = tracker_config(opt);

  std::size_t next_index = 0;
  const edgevo::FrameSource source = [&]() -> std::optional<edgevo::Frame> {
    if (next_index >= assoc.size()) return std::nullopt;
    if (next_index == 0) {
      ++next_index;
      return std::move(first);
    }
    return edgevo::load_frame(index, assoc[next_index++], opt.depth_scale);
  };

  const edgevo::SequenceRunResult result = edgevo::run_sequence(source, K, cfg);
  edgevo::write_trajectory(result.trajectory, opt.out);
  if (!opt.diag.empty()) edgevo::write_diagnostics_csv(result.diagnostics, opt.diag);

  const int attempted = result.frames_total - 1;
  const int tracked = attempted - result.frames_lost;
  std::fprintf(stderr,
               "tracked %d/%d frames (%d lost), %.0f edge pixels/frame, %.2f ms/frame "
               "(%.1f fps)\n",
               tracked, attempted, result.frames_lost, result.meanPixels(),
               result.meanLatencyMs(),
               result.meanLatencyMs() > 0 ? 1000.0 / result.meanLatencyMs() : 0.0);
  std::fprintf(stderr, "trajectory written to %s\n", opt.out.c_str());

  if (attempted > 0 && tracked == 0) return kExitTrackingAborted;
  return kExitOk;
}

struct EvalOptions {
  std::string gt, est;
  std::string metric = "rpe";
  double delta = 1.0;
  double tolerance = 0.02;
  std::string csv;
};

int cmd_eval(const EvalOptions& opt) {
  const edgevo::Trajectory gt = edgevo::read_trajectory(opt.gt);
  const edgevo::Trajectory est = edgevo::read_trajectory(opt.est);
  edgevo::EvalConfig cfg;
  cfg.delta_t = opt.delta;
  cfg.pairing_tolerance = opt.tolerance;

  edgevo::MetricResult result;
  if (opt.metric == "rpe") {
    result = edgevo::rpe(gt, est, cfg);
    std::fprintf(stderr, "rpe rmse over %zu pairs (delta %.3g s) [m/s]:\n",
                 result.samples.size(), cfg.delta_t);
  } else if (opt.metric == "ate") {
    result = edgevo::ate(gt, est, cfg);
    std::fprintf(stderr, "ate rmse over %zu samples [m]:\n", result.samples.size());
  } else {
    throw CLI::ValidationError("--metric must be rpe or ate");
  }
  std::printf("%.5f\n", result.rmse);
  if (!opt.csv.empty())
    edgevo::write_error_csv(result, opt.csv, opt.metric == "rpe" ? "trans_m_per_s" : "trans_m");
  return kExitOk;
}

struct AblateOptions {
  std::string dataset;
  std::vector<double> fractions = {0.125, 0.25, 0.5, 1.0};
  std::uint64_t seed = 1;
  int seeds = 5;
  std::string out = "ablation.csv";
  std::string edge = "canny";
  int keyframe = 4;
  int levels = 3;
  int min_points = 50;
  double depth_scale = edgevo::kTumDepthScale;
};

int cmd_ablate(const AblateOptions& opt) {
  const std::filesystem::path dir(opt.dataset);
  const edgevo::SequenceIndex index = edgevo::parse_sequence(dir);
  if (!index.hasGroundtruth()) {
    std::cerr << "error: ablation needs groundtruth.txt in the sequence directory\n";
    return kExitDataError;
  }
  const edgevo::Trajectory gt = edgevo::groundtruth_trajectory(index);
  const std::vector<edgevo::AssociatedFrame> assoc = edgevo::associate(index);

  std::vector<edgevo::Frame> frames;
  frames.reserve(assoc.size());
  for (const auto& a : assoc) frames.push_back(edgevo::load_frame(index, a, opt.depth_scale));
  if (frames.size() < 2) {
    std::cerr << "error: fewer than 2 associated frames\n";
    return kExitDataError;
  }

  RunOptions ro;
  ro.edge = opt.edge;
  ro.keyframe = opt.keyframe;
  ro.levels = opt.levels;
  ro.min_points = opt.min_points;
  const edgevo::TrackerConfig cfg = tracker_config(ro);
  const edgevo::CameraIntrinsics K =
      resolve_intrinsics(ro, dir, frames[0].gray.width, frames[0].gray.height);

  std::ofstream csv(opt.out);
  if (!csv) throw edgevo::IoError("cannot open " + opt.out);
  csv << "mode,fraction,seed_count,rpe_mps,pixels_mean,latency_ms_mean\n";

  for (const edgevo::AblationMode mode :
       {edgevo::AblationMode::EdgesSubset, edgevo::AblationMode::RandomPixels}) {
    for (const double fraction : opt.fractions) {
      double rpe_sum = 0, px_sum = 0, lat_sum = 0;
      for (int s = 0; s < opt.seeds; ++s) {
        const edgevo::AblationRunResult r =
            edgevo::ablation_run(frames, gt, K, cfg, mode, fraction, opt.seed + s);
        rpe_sum += r.rpe_mps;
        px_sum += r.mean_pixels;
        lat_sum += r.mean_latency_ms;
      }
      char line[192];
      std::snprintf(line, sizeof(line), "%s,%g,%d,%.9g,%.1f,%.3f\n", to_string(mode), fraction,
                    opt.seeds, rpe_sum / opt.seeds, px_sum / opt.seeds, lat_sum / opt.seeds);
      csv << line;
      std::fprintf(stderr, "%s", line);
    }
  }
  std::fprintf(stderr, "ablation table written to %s\n", opt.out.c_str());
  return kExitOk;
}

struct SynthOptions {
  std::string out;
  int frames = 100;
  double velocity = 0.1;
  double noise = 0.0;
  std::uint64_t seed = 1;
  int width = 640, height = 480;
  double fps = 30.0;
};

int cmd_synth(const SynthOptions& opt) {
  const edgevo::CameraIntrinsics K = default_intrinsics(opt.width, opt.height);
  const edgevo::SyntheticScene scene = edgevo::make_default_scene(K, opt.seed);
  const std::vector<edgevo::PoseSE3> poses =
      edgevo::constant_velocity_trajectory(opt.frames, opt.velocity, opt.fps);
  const edgevo::SyntheticSequence seq =
      edgevo::generate_sequence(scene, poses, opt.fps, opt.noise, opt.seed);
  edgevo::write_tum_sequence(seq, K, opt.out);
  std::fprintf(stderr, "wrote %d frames to %s\n", opt.frames, opt.out.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"edgevo: edge-direct visual odometry for RGB-D sequences"};
  app.require_subcommand(1);
  app.set_config("--config", "", "config file with key=value lines; CLI flags win");

  RunOptions run_opt;
  CLI::App* run = app.add_subcommand("run", "track a TUM-format sequence");
  run->add_option("dataset", run_opt.dataset, "sequence directory")->required();
  run->add_option("--edge", run_opt.edge, "edge detector: canny|log|sobel")
      ->check(CLI::IsMember({"canny", "log", "sobel"}));
  run->add_option("--keyframe", run_opt.keyframe, "keyframe every N frames; 0 = frame-to-frame");
  run->add_flag("--no-motion-prior", run_opt.no_motion_prior, "disable constant-motion init");
  run->add_option("--levels", run_opt.levels, "pyramid levels (1-3)");
  run->add_option("--max-iters", run_opt.max_iters, "Gauss-Newton iterations per level");
  run->add_option("--min-points", run_opt.min_points, "minimum residual support per level");
  run->add_option("--assoc-tolerance", run_opt.assoc_tolerance, "rgb/depth pairing tolerance, s");
  run->add_option("--depth-scale", run_opt.depth_scale, "depth PNG units per meter");
  run->add_option("--out", run_opt.out, "output trajectory (TUM format)");
  run->add_option("--diag", run_opt.diag, "per-frame diagnostics CSV");
  run->add_option("--fx", run_opt.fx, "focal length x (overrides calibration.txt)");
  run->add_option("--fy", run_opt.fy, "focal length y");
  run->add_option("--cx", run_opt.cx, "principal point x");
  run->add_option("--cy", run_opt.cy, "principal point y");

  EvalOptions eval_opt;
  CLI::App* eval = app.add_subcommand("eval", "compare a trajectory against ground truth");
  eval->add_option("--gt", eval_opt.gt, "ground-truth trajectory file")->required();
  eval->add_option("--est", eval_opt.est, "estimated trajectory file")->required();
  eval->add_option("--metric", eval_opt.metric, "rpe or ate")
      ->check(CLI::IsMember({"rpe", "ate"}));
  eval->add_option("--delta", eval_opt.delta, "RPE interval, seconds");
  eval->add_option("--tolerance", eval_opt.tolerance, "timestamp pairing tolerance, s");
  eval->add_option("--csv", eval_opt.csv, "per-sample error CSV");

  AblateOptions abl_opt;
  CLI::App* ablate = app.add_subcommand("ablate", "edge-subset vs random-pixel ablation study");
  ablate->add_option("dataset", abl_opt.dataset, "sequence directory with groundtruth.txt")
      ->required();
  ablate->add_option("--fractions", abl_opt.fractions, "pixel fractions to test")
      ->delimiter(',');
  ablate->add_option("--seed", abl_opt.seed, "base RNG seed");
  ablate->add_option("--seeds", abl_opt.seeds, "seeded repetitions to average");
  ablate->add_option("--out", abl_opt.out, "output CSV");
  ablate->add_option("--edge", abl_opt.edge, "edge detector")
      ->check(CLI::IsMember({"canny", "log", "sobel"}));
  ablate->add_option("--keyframe", abl_opt.keyframe, "keyframe interval (forced >= 1)");
  ablate->add_option("--levels", abl_opt.levels, "pyramid levels (1-3)");
  ablate->add_option("--min-points", abl_opt.min_points, "minimum residual support per level");
  ablate->add_option("--depth-scale", abl_opt.depth_scale, "depth PNG units per meter");

  SynthOptions syn_opt;
  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic TUM-format sequence");
  synth->add_option("--out", syn_opt.out, "output directory")->required();
  synth->add_option("--frames", syn_opt.frames, "frame count");
  synth->add_option("--velocity", syn_opt.velocity, "camera velocity, m/s");
  synth->add_option("--noise", syn_opt.noise, "intensity noise sigma");
  synth->add_option("--seed", syn_opt.seed, "scene and noise seed");
  synth->add_option("--width", syn_opt.width, "image width");
  synth->add_option("--height", syn_opt.height, "image height");
  synth->add_option("--fps", syn_opt.fps, "frame rate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (run->parsed()) return cmd_run(run_opt);
    if (eval->parsed()) return cmd_eval(eval_opt);
    if (ablate->parsed()) return cmd_ablate(abl_opt);
    if (synth->parsed()) return cmd_synth(syn_opt);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDataError;
  }
  return kExitUsage;
}
