#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "edgevo/edges.hpp"
#include "edgevo/pyramid.hpp"
#include "edgevo/se3.hpp"

namespace edgevo {

struct Frame {
  double timestamp = 0.0;
  GrayImage gray;
  DepthImage depth;
};

/// Residual support built from the reference image: for every selected edge
/// pixel with valid depth, the backprojected camera-frame point and the
/// reference intensity at that pixel.
struct ReferencePointSet {
  std::vector<Eigen::Vector2f> pixels;     // coordinates at the level's scale
  std::vector<Eigen::Vector3d> points3d;   // camera frame, meters
  std::vector<float> intensities;

  std::size_t size() const { return points3d.size(); }
};

struct TrackerConfig {
  EdgeDetectorKind detector = EdgeDetectorKind::Canny;
  int pyramid_levels = 3;
  int max_iterations_per_level = 20;
  double convergence_eps = 1e-6;
  double huber_tuning = 1.345;
  int keyframe_interval = 4;  // n frames between keyframes; 0 = frame-to-frame
  bool use_motion_prior = true;
  int min_valid_points = 300;

  void validate() const;
};

struct TrackerState {
  Frame reference;
  PoseSE3 reference_pose_world;
  Twist last_relative_motion;     // frame-to-frame motion of the previous step
  PoseSE3 last_pose_to_reference; // previous frame relative to the reference
  int frames_since_keyframe = 0;
  std::vector<PyramidLevel> reference_pyramid;
};

struct NormalEquations {
  Matrix6d JtWJ = Matrix6d::Zero();
  Vector6d JtWr = Vector6d::Zero();
  double total_error = 0.0;  // sum of w_i r_i^2
  int inlier_count = 0;      // residuals within the Huber threshold
  int valid_count = 0;
};

/// Per-point warp results; entries are meaningful only where valid is set.
struct ResidualData {
  std::vector<float> residuals;
  std::vector<Eigen::Vector2f> warped;
  std::vector<float> grad_x, grad_y;  // bilinear-cell gradient at the warp
  std::vector<std::uint8_t> valid;
  int valid_count = 0;

  std::vector<float> validResiduals() const;
};

struct TrackingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InsufficientPointsError : TrackingError {
  using TrackingError::TrackingError;
};
struct InsufficientOverlapError : TrackingError {
  using TrackingError::TrackingError;
};
struct DegenerateGeometryError : TrackingError {
  using TrackingError::TrackingError;
};

/// Backprojects every set mask pixel with valid reference depth. Throws
/// InsufficientPointsError when fewer than min_points survive.
ReferencePointSet build_reference_points(const GrayImage& gray, const DepthImage& depth,
                                         const EdgeMask& mask, const CameraIntrinsics& K,
                                         int min_points);
ReferencePointSet build_reference_points(const Frame& reference, const EdgeMask& mask,
                                         const CameraIntrinsics& K, int min_points);

/// Warps each reference point by T, samples the target level bilinearly and
/// returns residual = sampled - reference intensity. Points behind the camera
/// or out of bounds are flagged invalid. Throws InsufficientOverlapError when
/// fewer than min_valid remain.
ResidualData evaluate_residuals(const ReferencePointSet& points, const PyramidLevel& target,
                                const PoseSE3& T, int min_valid = 1);
ResidualData evaluate_residuals(const ReferencePointSet& points, const PyramidLevel& target,
                                const Twist& xi, int min_valid = 1);

/// Huber influence weight: 1 inside the threshold, k/|r| outside.
double huber_weight(double r, double k);

/// Robust Huber scale: tuning * 1.4826 * MAD, floored at 1e-4 intensity units.
double robust_scale(std::span<const float> residuals, double tuning = 1.345);

NormalEquations assemble_normal_equations(const ReferencePointSet& points,
                                          const PyramidLevel& target, const PoseSE3& T,
                                          double k);
NormalEquations assemble_normal_equations(const ReferencePointSet& points,
                                          const PyramidLevel& target, const Twist& xi,
                                          double k);

struct LevelResult {
  Twist xi;
  double final_error = 0.0;       // total weighted error of the last accepted iterate
  int final_inliers = 0;
  int iterations = 0;
  std::vector<double> accepted_mean_errors;  // per accepted iterate, for monotonicity checks
};

/// Iteratively re-weighted Gauss-Newton at one pyramid level. The Huber scale
/// is recomputed from the residual MAD each iteration; the 6x6 system gets
/// Levenberg damping 1e-6 * trace/6 on the diagonal. A step that increases
/// the mean weighted error is reverted and terminates the level.
LevelResult gauss_newton_at_level(const ReferencePointSet& points, const PyramidLevel& target,
                                  const Twist& xi_init, const TrackerConfig& cfg);

/// Constant-motion initialization: the previous frame-to-frame motion applied
/// on top of the previous frame's pose relative to the reference.
Twist constant_motion_init(const Twist& last_relative_motion, const PoseSE3& prev_to_reference);

struct FrameDiagnostics {
  double frame_ts = 0.0;
  std::array<int, 3> level_iters = {0, 0, 0};
  double error = 0.0;  // final weighted photometric error at the finest level
  int inliers = 0;
  int pixels = 0;      // residual support size at level 0
  double latency_ms = 0.0;
  bool lost = false;
};

struct TrackResult {
  PoseSE3 relative_to_reference;
  PoseSE3 world_pose;
  FrameDiagnostics diag;
};

/// Replaces the detected per-level mask before point selection; used by the
/// ablation study to subsample edges or substitute random pixels.
using MaskFilter = std::function<EdgeMask(int level, int frame_index, const EdgeMask& detected,
                                          const DepthImage& reference_depth)>;

/// Edge-direct alignment over a frame stream. The first frame becomes the
/// reference; each subsequent frame is tracked against the current reference
/// coarse-to-fine, then the keyframe policy decides whether it replaces it.
class Tracker {
 public:
  Tracker(const CameraIntrinsics& K, const TrackerConfig& cfg);

  TrackResult track_frame(const Frame& frame);

  const TrackerState& state() const { return state_; }
  bool hasReference() const { return has_reference_; }
  int frameIndex() const { return frame_index_; }

  void setMaskFilter(MaskFilter filter) { mask_filter_ = std::move(filter); }

 private:
  void promoteToReference(Frame frame, std::vector<PyramidLevel> pyramid,
                          const PoseSE3& world_pose);

  CameraIntrinsics intrinsics_;
  TrackerConfig cfg_;
  TrackerState state_;
  bool has_reference_ = false;
  int frame_index_ = 0;
  MaskFilter mask_filter_;
};

}  // namespace edgevo
