#include "edgevo/camera.hpp"

#include <stdexcept>

namespace edgevo {

std::optional<Eigen::Vector2d> project(const Eigen::Vector3d& P,
                                       const CameraIntrinsics& K) {
  if (P.z() <= 0.0) return std::nullopt;
  const double inv_z = 1.0 / P.z();
  return Eigen::Vector2d(K.fx * P.x() * inv_z + K.cx,
                         K.fy * P.y() * inv_z + K.cy);
}

Eigen::Vector3d backproject(const Eigen::Vector2d& px, double depth,
                            const CameraIntrinsics& K) {
  if (depth <= 0.0) throw std::invalid_argument("backproject: depth must be > 0");
  return {(px.x() - K.cx) / K.fx * depth, (px.y() - K.cy) / K.fy * depth, depth};
}

CameraIntrinsics scale_intrinsics(const CameraIntrinsics& K, int level) {
  if (level < 0 || level >= kMaxPyramidLevels)
    throw std::invalid_argument("scale_intrinsics: level must be in [0, 2]");
  CameraIntrinsics s = K;
  for (int l = 0; l < level; ++l) {
    s.fx *= 0.5;
    s.fy *= 0.5;
    s.cx = (s.cx + 0.5) * 0.5 - 0.5;
    s.cy = (s.cy + 0.5) * 0.5 - 0.5;
    s.width /= 2;
    s.height /= 2;
  }
  return s;
}

}  // namespace edgevo
