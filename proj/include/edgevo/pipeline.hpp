#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "edgevo/evaluation.hpp"
#include "edgevo/tracker.hpp"

namespace edgevo {

struct SequenceRunResult {
  Trajectory trajectory;  // world pose per frame, first frame at identity
  std::vector<FrameDiagnostics> diagnostics;
  int frames_total = 0;
  int frames_lost = 0;

  double meanLatencyMs() const;  // over tracked frames (the first is excluded)
  double meanPixels() const;
};

/// Pulls frames from `next` until it returns empty and tracks them in order.
using FrameSource = std::function<std::optional<Frame>()>;
SequenceRunResult run_sequence(const FrameSource& next, const CameraIntrinsics& K,
                               const TrackerConfig& cfg, MaskFilter mask_filter = nullptr);
SequenceRunResult run_sequence(const std::vector<Frame>& frames, const CameraIntrinsics& K,
                               const TrackerConfig& cfg, MaskFilter mask_filter = nullptr);

/// Diagnostics CSV, one row per frame:
/// frame_ts,level0_iters,level1_iters,level2_iters,error,inliers,pixels,latency_ms,lost
void write_diagnostics_csv(const std::vector<FrameDiagnostics>& diags,
                           const std::filesystem::path& path);

enum class AblationMode { EdgesSubset, RandomPixels };

const char* to_string(AblationMode mode);

struct AblationRunResult {
  double rpe_mps = 0.0;
  double mean_pixels = 0.0;
  double mean_latency_ms = 0.0;
  int frames_lost = 0;
};

/// One seeded ablation pass: keyframes stay on, the constant-motion prior is
/// dropped, and per level either a random `fraction` of the edge pixels is
/// kept, or the same number of pixels is drawn from all valid-depth pixels.
AblationRunResult ablation_run(const std::vector<Frame>& frames, const Trajectory& groundtruth,
                               const CameraIntrinsics& K, TrackerConfig cfg, AblationMode mode,
                               double fraction, std::uint64_t seed);

/// Builds the mask filter ablation_run installs; exposed for tests.
MaskFilter make_ablation_filter(AblationMode mode, double fraction, std::uint64_t seed);

}  // namespace edgevo
