#include "edgevo/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "edgevo/errors.hpp"

namespace edgevo {

double SequenceRunResult::meanLatencyMs() const {
  if (diagnostics.size() < 2) return 0.0;
  double s = 0.0;
  for (std::size_t i = 1; i < diagnostics.size(); ++i) s += diagnostics[i].latency_ms;
  return s / (diagnostics.size() - 1);
}

double SequenceRunResult::meanPixels() const {
  if (diagnostics.size() < 2) return 0.0;
  double s = 0.0;
  for (std::size_t i = 1; i < diagnostics.size(); ++i) s += diagnostics[i].pixels;
  return s / (diagnostics.size() - 1);
}

SequenceRunResult run_sequence(const FrameSource& next, const CameraIntrinsics& K,
                               const TrackerConfig& cfg, MaskFilter mask_filter) {
  Tracker tracker(K, cfg);
  if (mask_filter) tracker.setMaskFilter(std::move(mask_filter));

  SequenceRunResult result;
  while (auto frame = next()) {
    const TrackResult tr = tracker.track_frame(*frame);
    result.trajectory.entries.push_back({frame->timestamp, tr.world_pose});
    result.diagnostics.push_back(tr.diag);
    ++result.frames_total;
    if (tr.diag.lost) ++result.frames_lost;
  }
  return result;
}

SequenceRunResult run_sequence(const std::vector<Frame>& frames, const CameraIntrinsics& K,
                               const TrackerConfig& cfg, MaskFilter mask_filter) {
  std::size_t i = 0;
  return run_sequence(
      [&]() -> std::optional<Frame> {
        if (i >= frames.size()) return std::nullopt;
        return frames[i++];
      },
      K, cfg, std::move(mask_filter));
}

void write_diagnostics_csv(const std::vector<FrameDiagnostics>& diags,
                           const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw IoError("write_diagnostics_csv: cannot open " + path.string());
  f << "# edgevo diagnostics schema v1\n";
  f << "frame_ts,level0_iters,level1_iters,level2_iters,error,inliers,pixels,latency_ms,lost\n";
  char line[256];
  for (const FrameDiagnostics& d : diags) {
    std::snprintf(line, sizeof(line), "%.6f,%d,%d,%d,%.9g,%d,%d,%.3f,%d\n", d.frame_ts,
                  d.level_iters[0], d.level_iters[1], d.level_iters[2], d.error, d.inliers,
                  d.pixels, d.latency_ms, d.lost ? 1 : 0);
    f << line;
  }
}

const char* to_string(AblationMode mode) {
  return mode == AblationMode::EdgesSubset ? "edges" : "random";
}

namespace {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Draws `count` entries without replacement (partial Fisher-Yates).
std::vector<std::int32_t> sample_without_replacement(std::vector<std::int32_t> pool,
                                                     std::size_t count, std::mt19937_64& rng) {
  count = std::min(count, pool.size());
  for (std::size_t i = 0; i < count; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(count);
  return pool;
}

}  // namespace

MaskFilter make_ablation_filter(AblationMode mode, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw std::invalid_argument("ablation: fraction must be in (0, 1]");
  return [mode, fraction, seed](int level, int frame_index, const EdgeMask& detected,
                                const DepthImage& reference_depth) {
    // Candidates are intersected with valid reference depth in both modes so
    // the two modes select exactly the same number of usable pixels.
    std::vector<std::int32_t> edge_px;
    edge_px.reserve(detected.count);
    for (int y = 0; y < detected.height; ++y)
      for (int x = 0; x < detected.width; ++x)
        if (detected.get(x, y) && reference_depth.validAt(x, y))
          edge_px.push_back(y * detected.width + x);

    const auto target = static_cast<std::size_t>(std::llround(fraction * edge_px.size()));
    std::mt19937_64 rng(mix64(seed) ^ mix64(static_cast<std::uint64_t>(frame_index) * 31 +
                                            static_cast<std::uint64_t>(level)));

    std::vector<std::int32_t> chosen;
    if (mode == AblationMode::EdgesSubset) {
      chosen = sample_without_replacement(std::move(edge_px), target, rng);
    } else {
      std::vector<std::int32_t> all_px;
      all_px.reserve(static_cast<std::size_t>(detected.width) * detected.height);
      for (int y = 0; y < detected.height; ++y)
        for (int x = 0; x < detected.width; ++x)
          if (reference_depth.validAt(x, y)) all_px.push_back(y * detected.width + x);
      chosen = sample_without_replacement(std::move(all_px), target, rng);
    }

    EdgeMask out(detected.width, detected.height);
    for (const std::int32_t idx : chosen)
      out.set(idx % detected.width, idx / detected.width, true);
    return out;
  };
}

AblationRunResult ablation_run(const std::vector<Frame>& frames, const Trajectory& groundtruth,
                               const CameraIntrinsics& K, TrackerConfig cfg, AblationMode mode,
                               double fraction, std::uint64_t seed) {
  cfg.use_motion_prior = false;
  if (cfg.keyframe_interval <= 0) cfg.keyframe_interval = 4;

  const SequenceRunResult run =
      run_sequence(frames, K, cfg, make_ablation_filter(mode, fraction, seed));

  AblationRunResult result;
  result.rpe_mps = rpe(groundtruth, run.trajectory).rmse;
  result.mean_pixels = run.meanPixels();
  result.mean_latency_ms = run.meanLatencyMs();
  result.frames_lost = run.frames_lost;
  return result;
}

}  // namespace edgevo
