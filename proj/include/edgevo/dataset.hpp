#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "edgevo/camera.hpp"
#include "edgevo/evaluation.hpp"
#include "edgevo/image.hpp"
#include "edgevo/se3.hpp"
#include "edgevo/tracker.hpp"

namespace edgevo {

inline constexpr double kTumDepthScale = 5000.0;       // raw units per meter
inline constexpr double kDefaultAssociationTol = 0.02; // seconds

/// Parsed TUM sequence directory: rgb.txt / depth.txt file lists and the
/// optional groundtruth.txt.
struct SequenceIndex {
  struct Stamped {
    double timestamp;
    std::string path;  // relative to the sequence directory
  };
  struct GroundTruthEntry {
    double timestamp;
    PoseSE3 pose;  // camera-to-world
  };
  std::filesystem::path directory;
  std::vector<Stamped> rgb, depth;
  std::vector<GroundTruthEntry> groundtruth;

  bool hasGroundtruth() const { return !groundtruth.empty(); }
};

struct AssociatedFrame {
  double rgb_timestamp, depth_timestamp;
  std::string rgb_path, depth_path;
};

/// Parses rgb.txt, depth.txt and (when present) groundtruth.txt. Lines are
/// whitespace-delimited with '#' comments; groundtruth quaternions are
/// normalized on read. Timestamps must be strictly increasing.
SequenceIndex parse_sequence(const std::filesystem::path& dir);

/// Pairs rgb and depth entries by greedy mutual nearest-neighbor timestamp
/// matching. Throws when nothing matches.
std::vector<AssociatedFrame> associate(const SequenceIndex& index,
                                       double max_difference = kDefaultAssociationTol);

/// 16-bit TUM depth PNG: meters = raw / depth_scale, raw 0 stays invalid.
DepthImage read_depth(const std::filesystem::path& path, double depth_scale = kTumDepthScale);

/// Grayscale intensity from an 8-bit gray or RGB PNG.
GrayImage read_gray(const std::filesystem::path& path);

/// Nearest groundtruth pose within max_difference of t; empty inside gaps.
std::optional<PoseSE3> groundtruth_pose_at(const SequenceIndex& index, double t,
                                           double max_difference = kDefaultAssociationTol);

Frame load_frame(const SequenceIndex& index, const AssociatedFrame& assoc,
                 double depth_scale = kTumDepthScale);

Trajectory groundtruth_trajectory(const SequenceIndex& index);

/// Optional per-sequence calibration.txt: "fx fy cx cy width height".
std::optional<CameraIntrinsics> read_calibration(const std::filesystem::path& dir);
void write_calibration(const std::filesystem::path& dir, const CameraIntrinsics& K);

}  // namespace edgevo
