#pragma once

#include <optional>

#include <Eigen/Core>

namespace edgevo {

/// Pinhole camera model. Focal lengths and principal point in pixels.
struct CameraIntrinsics {
  double fx = 0, fy = 0, cx = 0, cy = 0;
  int width = 0, height = 0;

  bool valid() const {
    return fx > 0 && fy > 0 && width > 0 && height > 0 && cx >= 0 &&
           cx < width && cy >= 0 && cy < height;
  }
};

/// Projects a camera-frame point to pixel coordinates. Empty if Z <= 0
/// (point behind the camera; caller drops it).
std::optional<Eigen::Vector2d> project(const Eigen::Vector3d& P,
                                       const CameraIntrinsics& K);

/// Backprojects pixel + depth to a camera-frame 3D point. Throws on depth <= 0.
Eigen::Vector3d backproject(const Eigen::Vector2d& px, double depth,
                            const CameraIntrinsics& K);

/// Intrinsics for pyramid level `level` (0..2): focal lengths halve per level,
/// the principal point follows the pixel-center convention (c+0.5)/2 - 0.5,
/// width/height halve with floor.
CameraIntrinsics scale_intrinsics(const CameraIntrinsics& K, int level);

inline constexpr int kMaxPyramidLevels = 3;

}  // namespace edgevo
