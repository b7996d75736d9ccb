#include "edgevo/evaluation.hpp"

#include <Eigen/Geometry>
#include <Eigen/SVD>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "edgevo/association.hpp"
#include "edgevo/errors.hpp"

namespace edgevo {

namespace {

struct AssociatedPoses {
  std::vector<double> times;  // ground-truth timestamps
  std::vector<PoseSE3> gt, est;
};

AssociatedPoses associate_trajectories(const Trajectory& gt, const Trajectory& est,
                                       double tolerance) {
  const auto pairs = associate_timestamps(gt.timestamps(), est.timestamps(), tolerance);
  AssociatedPoses out;
  out.times.reserve(pairs.size());
  for (const auto& [gi, ei] : pairs) {
    out.times.push_back(gt.entries[gi].timestamp);
    out.gt.push_back(gt.entries[gi].pose);
    out.est.push_back(est.entries[ei].pose);
  }
  return out;
}

double rmse_of(const std::vector<SampleError>& samples) {
  double s = 0.0;
  for (const SampleError& e : samples) s += e.value * e.value;
  return std::sqrt(s / samples.size());
}

// Index of the associated sample nearest to `target` time.
int nearest_index(const std::vector<double>& times, double target) {
  const auto it = std::lower_bound(times.begin(), times.end(), target);
  int best = static_cast<int>(std::min<std::size_t>(it - times.begin(), times.size() - 1));
  if (it != times.begin()) {
    const int prev = static_cast<int>(it - times.begin()) - 1;
    if (std::abs(times[prev] - target) <= std::abs(times[best] - target)) best = prev;
  }
  return best;
}

}  // namespace

MetricResult rpe(const Trajectory& gt, const Trajectory& est, const EvalConfig& cfg) {
  if (cfg.delta_t <= 0.0) throw EvaluationError("rpe: delta_t must be > 0");
  const AssociatedPoses ap = associate_trajectories(gt, est, cfg.pairing_tolerance);
  if (ap.times.size() < 2) throw EvaluationError("rpe: fewer than 2 associated samples");

  MetricResult result;
  for (std::size_t a = 0; a < ap.times.size(); ++a) {
    const double target = ap.times[a] + cfg.delta_t;
    const int b = nearest_index(ap.times, target);
    if (std::abs(ap.times[b] - target) > cfg.pairing_tolerance) continue;
    const PoseSE3 rel_gt = ap.gt[a].inverse() * ap.gt[b];
    const PoseSE3 rel_est = ap.est[a].inverse() * ap.est[b];
    const PoseSE3 err = rel_gt.inverse() * rel_est;
    result.samples.push_back({ap.times[a], err.t.norm() / cfg.delta_t,
                              rotation_angle(err.R) * 180.0 / M_PI / cfg.delta_t});
  }
  if (result.samples.empty())
    throw EvaluationError("rpe: no sample pairs span delta_t within tolerance");
  result.rmse = rmse_of(result.samples);
  return result;
}

PoseSE3 umeyama_align(const std::vector<Eigen::Vector3d>& gt_points,
                      const std::vector<Eigen::Vector3d>& est_points) {
  if (gt_points.size() != est_points.size())
    throw std::invalid_argument("umeyama_align: point count mismatch");
  const std::size_t n = gt_points.size();
  if (n < 3) throw DegenerateAlignmentError("umeyama_align: needs at least 3 points");

  Eigen::Vector3d gc = Eigen::Vector3d::Zero(), ec = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    gc += gt_points[i];
    ec += est_points[i];
  }
  gc /= static_cast<double>(n);
  ec /= static_cast<double>(n);

  Eigen::Matrix3d H = Eigen::Matrix3d::Zero();
  for (std::size_t i = 0; i < n; ++i)
    H += (est_points[i] - ec) * (gt_points[i] - gc).transpose();

  Eigen::JacobiSVD<Eigen::Matrix3d> svd(H, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Vector3d sv = svd.singularValues();
  if (sv(0) <= 0.0 || sv(1) <= 1e-9 * sv(0))
    throw DegenerateAlignmentError("umeyama_align: coincident or collinear points");

  Eigen::Matrix3d D = Eigen::Matrix3d::Identity();
  if ((svd.matrixV() * svd.matrixU().transpose()).determinant() < 0.0) D(2, 2) = -1.0;
  const Eigen::Matrix3d R = svd.matrixV() * D * svd.matrixU().transpose();
  return {R, gc - R * ec};
}

MetricResult ate(const Trajectory& gt, const Trajectory& est, const EvalConfig& cfg) {
  const AssociatedPoses ap = associate_trajectories(gt, est, cfg.pairing_tolerance);
  std::vector<Eigen::Vector3d> gp, ep;
  gp.reserve(ap.times.size());
  ep.reserve(ap.times.size());
  for (std::size_t i = 0; i < ap.times.size(); ++i) {
    gp.push_back(ap.gt[i].t);
    ep.push_back(ap.est[i].t);
  }
  const PoseSE3 S = umeyama_align(gp, ep);

  MetricResult result;
  for (std::size_t i = 0; i < ap.times.size(); ++i)
    result.samples.push_back({ap.times[i], (gp[i] - S * ep[i]).norm()});
  result.rmse = rmse_of(result.samples);
  return result;
}

void write_trajectory(const Trajectory& traj, const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw IoError("write_trajectory: cannot open " + path.string());
  f << "# timestamp tx ty tz qx qy qz qw\n";
  char line[256];
  for (const Trajectory::Entry& e : traj.entries) {
    Eigen::Quaterniond q(e.pose.R);
    q.normalize();
    if (q.w() < 0) q.coeffs() = -q.coeffs();
    std::snprintf(line, sizeof(line), "%.6f %.9g %.9g %.9g %.9g %.9g %.9g %.9g\n",
                  e.timestamp, e.pose.t.x(), e.pose.t.y(), e.pose.t.z(), q.x(), q.y(),
                  q.z(), q.w());
    f << line;
  }
  if (!f) throw IoError("write_trajectory: write failed for " + path.string());
}

Trajectory read_trajectory(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw IoError("read_trajectory: cannot open " + path.string());
  Trajectory traj;
  std::string line;
  int line_no = 0;
  while (std::getline(f, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ss(line);
    double ts, tx, ty, tz, qx, qy, qz, qw;
    if (!(ss >> ts >> tx >> ty >> tz >> qx >> qy >> qz >> qw))
      throw ParseError(path, line_no, "expected 'timestamp tx ty tz qx qy qz qw'");
    Eigen::Quaterniond q(qw, qx, qy, qz);
    if (q.norm() < 0.1) throw ParseError(path, line_no, "quaternion norm too small");
    q.normalize();
    if (!traj.entries.empty() && ts <= traj.entries.back().timestamp)
      throw ParseError(path, line_no, "timestamps must be strictly increasing");
    traj.entries.push_back({ts, PoseSE3(q.toRotationMatrix(), {tx, ty, tz})});
  }
  return traj;
}

void write_error_csv(const MetricResult& result, const std::filesystem::path& path,
                     const std::string& value_header) {
  std::ofstream f(path);
  if (!f) throw IoError("write_error_csv: cannot open " + path.string());
  f << "timestamp," << value_header << ",rot_deg\n";
  char line[128];
  for (const SampleError& e : result.samples) {
    std::snprintf(line, sizeof(line), "%.6f,%.9g,%.9g\n", e.timestamp, e.value, e.rot_deg);
    f << line;
  }
}

}  // namespace edgevo
