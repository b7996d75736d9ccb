#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "edgevo/se3.hpp"

namespace edgevo {

/// Timestamped world-frame pose sequence; the unit of exchange with the
/// TUM-benchmark evaluation.
struct Trajectory {
  struct Entry {
    double timestamp;
    PoseSE3 pose;
  };
  std::vector<Entry> entries;

  std::vector<double> timestamps() const {
    std::vector<double> ts;
    ts.reserve(entries.size());
    for (const Entry& e : entries) ts.push_back(e.timestamp);
    return ts;
  }
};

struct EvalConfig {
  double delta_t = 1.0;            // RPE interval, seconds
  double pairing_tolerance = 0.02; // timestamp association tolerance, seconds
};

struct EvaluationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateAlignmentError : EvaluationError {
  using EvaluationError::EvaluationError;
};

struct SampleError {
  double timestamp;
  double value;          // meters (ATE) or m/s (RPE, translational)
  double rot_deg = 0.0;  // rotational part (deg/s for RPE); secondary
};

struct MetricResult {
  double rmse = 0.0;
  std::vector<SampleError> samples;
};

/// Relative pose error over delta_t: for time-associated samples,
/// E = (Q_t^-1 Q_{t+dt})^-1 (P_t^-1 P_{t+dt}); reports ||trans(E)||/dt RMSE.
MetricResult rpe(const Trajectory& gt, const Trajectory& est, const EvalConfig& cfg = {});

/// Rigid (no scale) least-squares alignment S minimizing
/// sum ||gt_i - S est_i||^2, SVD-based with reflection correction.
PoseSE3 umeyama_align(const std::vector<Eigen::Vector3d>& gt_points,
                      const std::vector<Eigen::Vector3d>& est_points);

/// Absolute trajectory error after umeyama alignment; RMSE in meters.
MetricResult ate(const Trajectory& gt, const Trajectory& est, const EvalConfig& cfg = {});

/// TUM trajectory text format: "timestamp tx ty tz qx qy qz qw" per line,
/// 6 decimals for the timestamp, 9 significant digits for values.
void write_trajectory(const Trajectory& traj, const std::filesystem::path& path);
Trajectory read_trajectory(const std::filesystem::path& path);

void write_error_csv(const MetricResult& result, const std::filesystem::path& path,
                     const std::string& value_header);

}  // namespace edgevo
