#include "edgevo/tracker.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace edgevo {

void TrackerConfig::validate() const {
  if (pyramid_levels < 1 || pyramid_levels > kMaxPyramidLevels)
    throw std::invalid_argument("TrackerConfig: pyramid_levels must be in [1, 3]");
  if (max_iterations_per_level < 1)
    throw std::invalid_argument("TrackerConfig: max_iterations_per_level must be >= 1");
  if (convergence_eps <= 0.0) throw std::invalid_argument("TrackerConfig: convergence_eps must be > 0");
  if (huber_tuning <= 0.0) throw std::invalid_argument("TrackerConfig: huber_tuning must be > 0");
  if (keyframe_interval < 0) throw std::invalid_argument("TrackerConfig: keyframe_interval must be >= 0");
  if (min_valid_points < 6)
    throw std::invalid_argument("TrackerConfig: min_valid_points must cover the 6 pose DOF");
}

std::vector<float> ResidualData::validResiduals() const {
  std::vector<float> out;
  out.reserve(valid_count);
  for (std::size_t i = 0; i < residuals.size(); ++i)
    if (valid[i]) out.push_back(residuals[i]);
  return out;
}

ReferencePointSet build_reference_points(const GrayImage& gray, const DepthImage& depth,
                                         const EdgeMask& mask, const CameraIntrinsics& K,
                                         int min_points) {
  if (mask.width != gray.width || mask.height != gray.height ||
      depth.width != gray.width || depth.height != gray.height)
    throw std::invalid_argument("build_reference_points: dimension mismatch");

  ReferencePointSet set;
  set.pixels.reserve(mask.count);
  set.points3d.reserve(mask.count);
  set.intensities.reserve(mask.count);
  const double inv_fx = 1.0 / K.fx, inv_fy = 1.0 / K.fy;
  for (int y = 0; y < mask.height; ++y)
    for (int x = 0; x < mask.width; ++x) {
      if (!mask.get(x, y)) continue;
      const float d = depth.at(x, y);
      if (d <= 0.0f) continue;
      set.pixels.emplace_back(static_cast<float>(x), static_cast<float>(y));
      set.points3d.emplace_back((x - K.cx) * inv_fx * d, (y - K.cy) * inv_fy * d,
                                static_cast<double>(d));
      set.intensities.push_back(gray.at(x, y));
    }
  if (static_cast<int>(set.size()) < min_points)
    throw InsufficientPointsError("build_reference_points: only " +
                                  std::to_string(set.size()) + " of the required " +
                                  std::to_string(min_points) + " points survive");
  return set;
}

ReferencePointSet build_reference_points(const Frame& reference, const EdgeMask& mask,
                                         const CameraIntrinsics& K, int min_points) {
  return build_reference_points(reference.gray, reference.depth, mask, K, min_points);
}

ResidualData evaluate_residuals(const ReferencePointSet& points, const PyramidLevel& target,
                                const PoseSE3& T, int min_valid) {
  const std::size_t n = points.size();
  ResidualData out;
  out.residuals.assign(n, 0.0f);
  out.warped.assign(n, Eigen::Vector2f::Zero());
  out.grad_x.assign(n, 0.0f);
  out.grad_y.assign(n, 0.0f);
  out.valid.assign(n, 0);

  const double fx = target.K.fx, fy = target.K.fy, cx = target.K.cx, cy = target.K.cy;
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Vector3d P = T.R * points.points3d[i] + T.t;
    if (P.z() <= 1e-6) continue;
    const double inv_z = 1.0 / P.z();
    const double u = fx * P.x() * inv_z + cx;
    const double v = fy * P.y() * inv_z + cy;
    const auto s = sample_intensity_gradient(target.gray, u, v);
    if (!s) continue;
    out.residuals[i] = s->value - points.intensities[i];
    out.warped[i] = Eigen::Vector2f(static_cast<float>(u), static_cast<float>(v));
    out.grad_x[i] = s->gx;
    out.grad_y[i] = s->gy;
    out.valid[i] = 1;
    ++out.valid_count;
  }
  if (out.valid_count < min_valid)
    throw InsufficientOverlapError("evaluate_residuals: only " +
                                   std::to_string(out.valid_count) + " of the required " +
                                   std::to_string(min_valid) + " points remain in view");
  return out;
}

ResidualData evaluate_residuals(const ReferencePointSet& points, const PyramidLevel& target,
                                const Twist& xi, int min_valid) {
  return evaluate_residuals(points, target, exp_se3(xi), min_valid);
}

double huber_weight(double r, double k) {
  const double a = std::abs(r);
  return a <= k ? 1.0 : k / a;
}

double robust_scale(std::span<const float> residuals, double tuning) {
  if (residuals.size() < 2)
    throw std::invalid_argument("robust_scale: needs at least 2 residuals");
  std::vector<float> buf(residuals.begin(), residuals.end());
  const auto mid = buf.begin() + buf.size() / 2;
  std::nth_element(buf.begin(), mid, buf.end());
  const float med = *mid;
  for (float& v : buf) v = std::abs(v - med);
  std::nth_element(buf.begin(), mid, buf.end());
  const double mad = *mid;
  return std::max(tuning * 1.4826 * mad, 1e-4);
}

namespace {

// Shared accumulation over precomputed warp samples. The Jacobian row is
// grad * dpi/dP * [I | -[P]x] per Eq. 12's chain, with grad the bilinear-cell
// gradient of the target image at the warped pixel.
NormalEquations accumulate_normal_equations(const ReferencePointSet& points,
                                            const PyramidLevel& target, const PoseSE3& T,
                                            const ResidualData& data, double k) {
  NormalEquations ne;
  const double fx = target.K.fx, fy = target.K.fy;
  double H[21] = {0.0};
  double b[6] = {0.0};

  const std::size_t n = points.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!data.valid[i]) continue;
    const Eigen::Vector3d P = T.R * points.points3d[i] + T.t;
    const double inv_z = 1.0 / P.z();
    const double r = data.residuals[i];
    const double w = huber_weight(r, k);

    const double g0 = data.grad_x[i] * fx * inv_z;
    const double g1 = data.grad_y[i] * fy * inv_z;
    const double g2 = -(g0 * P.x() + g1 * P.y()) * inv_z;
    const double J[6] = {g0,
                         g1,
                         g2,
                         P.y() * g2 - P.z() * g1,
                         P.z() * g0 - P.x() * g2,
                         P.x() * g1 - P.y() * g0};

    const double wr = w * r;
    int idx = 0;
    for (int a = 0; a < 6; ++a) {
      b[a] += wr * J[a];
      const double wJa = w * J[a];
      for (int c = a; c < 6; ++c) H[idx++] += wJa * J[c];
    }
    ne.total_error += wr * r;
    if (std::abs(r) <= k) ++ne.inlier_count;
    ++ne.valid_count;
  }

  int idx = 0;
  for (int a = 0; a < 6; ++a)
    for (int c = a; c < 6; ++c) {
      ne.JtWJ(a, c) = H[idx];
      ne.JtWJ(c, a) = H[idx];
      ++idx;
    }
  for (int a = 0; a < 6; ++a) ne.JtWr(a) = b[a];
  return ne;
}

}  // namespace

NormalEquations assemble_normal_equations(const ReferencePointSet& points,
                                          const PyramidLevel& target, const PoseSE3& T,
                                          double k) {
  const ResidualData data = evaluate_residuals(points, target, T, 0);
  return accumulate_normal_equations(points, target, T, data, k);
}

NormalEquations assemble_normal_equations(const ReferencePointSet& points,
                                          const PyramidLevel& target, const Twist& xi,
                                          double k) {
  return assemble_normal_equations(points, target, exp_se3(xi), k);
}

LevelResult gauss_newton_at_level(const ReferencePointSet& points, const PyramidLevel& target,
                                  const Twist& xi_init, const TrackerConfig& cfg) {
  PoseSE3 T = exp_se3(xi_init);
  PoseSE3 T_accepted = T;
  LevelResult res;
  double prev_mean = std::numeric_limits<double>::infinity();
  double final_error = 0.0;
  int final_inliers = 0;

  for (int it = 0; it < cfg.max_iterations_per_level; ++it) {
    const ResidualData data = evaluate_residuals(points, target, T, cfg.min_valid_points);
    const double k = robust_scale(data.validResiduals(), cfg.huber_tuning);
    const NormalEquations ne = accumulate_normal_equations(points, target, T, data, k);
    const double mean_err = ne.total_error / ne.valid_count;

    if (mean_err > prev_mean) {
      T = T_accepted;  // revert the diverging step and stop this level
      break;
    }
    prev_mean = mean_err;
    final_error = ne.total_error;
    final_inliers = ne.inlier_count;
    res.accepted_mean_errors.push_back(mean_err);
    T_accepted = T;

    Matrix6d Hd = ne.JtWJ;
    Hd.diagonal().array() += 1e-6 * ne.JtWJ.trace() / 6.0;
    Eigen::LDLT<Matrix6d> ldlt(Hd);
    const Vector6d delta = ldlt.solve(-ne.JtWr);
    if (ldlt.info() != Eigen::Success || !delta.allFinite())
      throw DegenerateGeometryError("gauss_newton_at_level: singular system after damping");

    ++res.iterations;
    T = exp_se3(Twist(delta)) * T;
    if (delta.norm() < cfg.convergence_eps) {
      T_accepted = T;
      break;
    }
  }

  res.xi = log_se3(T_accepted);
  res.final_error = final_error;
  res.final_inliers = final_inliers;
  return res;
}

Twist constant_motion_init(const Twist& last_relative_motion,
                           const PoseSE3& prev_to_reference) {
  return log_se3(exp_se3(last_relative_motion) * prev_to_reference);
}

Tracker::Tracker(const CameraIntrinsics& K, const TrackerConfig& cfg)
    : intrinsics_(K), cfg_(cfg) {
  cfg_.validate();
  if (!K.valid()) throw std::invalid_argument("Tracker: invalid intrinsics");
}

TrackResult Tracker::track_frame(const Frame& frame) {
  const auto t0 = std::chrono::steady_clock::now();
  if (frame.gray.width != intrinsics_.width || frame.gray.height != intrinsics_.height ||
      frame.depth.width != frame.gray.width || frame.depth.height != frame.gray.height)
    throw std::invalid_argument("track_frame: frame does not match intrinsics");

  TrackResult out;
  out.diag.frame_ts = frame.timestamp;

  std::vector<PyramidLevel> new_pyr =
      build_pyramid(frame.gray, frame.depth, intrinsics_, cfg_.pyramid_levels);

  if (!has_reference_) {
    out.relative_to_reference = PoseSE3::identity();
    out.world_pose = PoseSE3::identity();
    promoteToReference(frame, std::move(new_pyr), PoseSE3::identity());
    has_reference_ = true;
    ++frame_index_;
    out.diag.latency_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return out;
  }

  // Edges come from the new image at every level and mask the reference;
  // masks are re-detected per level rather than downsampled.
  Twist xi = cfg_.use_motion_prior
                 ? constant_motion_init(state_.last_relative_motion, state_.last_pose_to_reference)
                 : Twist();

  bool finest_ok = false;
  double final_error = 0.0;
  int final_inliers = 0;
  int pixels0 = 0;

  for (int l = cfg_.pyramid_levels - 1; l >= 0; --l) {
    EdgeMask mask = detect_edges(new_pyr[l].gray, cfg_.detector);
    if (mask_filter_)
      mask = mask_filter_(l, frame_index_, mask, state_.reference_pyramid[l].depth);

    const ReferencePointSet pts =
        build_reference_points(state_.reference_pyramid[l].gray, state_.reference_pyramid[l].depth,
                               mask, state_.reference_pyramid[l].K, 0);
    if (l == 0) pixels0 = static_cast<int>(pts.size());
    if (static_cast<int>(pts.size()) < cfg_.min_valid_points) continue;

    try {
      const LevelResult lr = gauss_newton_at_level(pts, new_pyr[l], xi, cfg_);
      xi = lr.xi;
      out.diag.level_iters[l] = lr.iterations;
      if (l == 0) {
        finest_ok = true;
        final_error = lr.final_error;
        final_inliers = lr.final_inliers;
      }
    } catch (const TrackingError&) {
      // Keep the current estimate and let the finer level try.
    }
  }

  // When even the finest level failed we fall back to the initialization
  // (the motion prior when enabled) and flag the frame.
  out.diag.lost = !finest_ok;
  out.diag.error = final_error;
  out.diag.inliers = final_inliers;
  out.diag.pixels = pixels0;

  const PoseSE3 T_rel = exp_se3(xi);
  const PoseSE3 world = state_.reference_pose_world * T_rel.inverse();
  out.relative_to_reference = T_rel;
  out.world_pose = world;

  state_.last_relative_motion = log_se3(T_rel * state_.last_pose_to_reference.inverse());

  const int n = cfg_.keyframe_interval <= 0 ? 1 : cfg_.keyframe_interval;
  ++state_.frames_since_keyframe;
  if (state_.frames_since_keyframe >= n) {
    promoteToReference(frame, std::move(new_pyr), world);
  } else {
    state_.last_pose_to_reference = T_rel;
  }

  ++frame_index_;
  out.diag.latency_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

void Tracker::promoteToReference(Frame frame, std::vector<PyramidLevel> pyramid,
                                 const PoseSE3& world_pose) {
  state_.reference = std::move(frame);
  state_.reference_pyramid = std::move(pyramid);
  state_.reference_pose_world = world_pose;
  state_.last_pose_to_reference = PoseSE3::identity();
  state_.frames_since_keyframe = 0;
}

}  // namespace edgevo
