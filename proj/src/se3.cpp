#include "edgevo/se3.hpp"

#include <algorithm>
#include <cmath>

namespace edgevo {

Eigen::Matrix3d skew(const Eigen::Vector3d& a) {
  Eigen::Matrix3d s;
  // clang-format off
  s <<     0, -a.z(),  a.y(),
       a.z(),      0, -a.x(),
      -a.y(),  a.x(),      0;
  // clang-format on
  return s;
}

PoseSE3 exp_se3(const Twist& xi) {
  const double theta2 = xi.w.squaredNorm();
  const double theta = std::sqrt(theta2);
  const Eigen::Matrix3d W = skew(xi.w);
  const Eigen::Matrix3d W2 = W * W;

  // R = I + a W + b W^2,  V = I + b W + c W^2
  double a, b, c;
  if (theta < 1e-8) {
    a = 1.0 - theta2 / 6.0;
    b = 0.5 - theta2 / 24.0;
    c = 1.0 / 6.0 - theta2 / 120.0;
  } else {
    const double s = std::sin(theta);
    const double cth = std::cos(theta);
    a = s / theta;
    b = (1.0 - cth) / theta2;
    c = (theta - s) / (theta2 * theta);
  }

  PoseSE3 p;
  p.R = Eigen::Matrix3d::Identity() + a * W + b * W2;
  p.t = (Eigen::Matrix3d::Identity() + b * W + c * W2) * xi.v;
  return p;
}

Twist log_se3(const PoseSE3& p) {
  const double cos_theta = std::clamp((p.R.trace() - 1.0) / 2.0, -1.0, 1.0);
  double theta = std::acos(cos_theta);
  const Eigen::Vector3d vee(p.R(2, 1) - p.R(1, 2), p.R(0, 2) - p.R(2, 0),
                            p.R(1, 0) - p.R(0, 1));

  Eigen::Vector3d w;
  if (theta < 1e-8) {
    w = 0.5 * vee;
  } else if (theta > M_PI - 1e-4) {
    // sin(theta) vanishes; get the axis from the symmetric part and refine
    // the angle from the skew part, where sine is well conditioned.
    const double theta_refined = M_PI - std::asin(std::min(0.5 * vee.norm(), 1.0));
    const double one_minus_c = 1.0 - cos_theta;
    Eigen::Vector3d a2 = (p.R.diagonal().array() - cos_theta) / one_minus_c;
    a2 = a2.cwiseMax(0.0);
    int k = 0;
    a2.maxCoeff(&k);
    Eigen::Vector3d axis = Eigen::Vector3d::Zero();
    axis[k] = std::sqrt(a2[k]);
    const int i1 = (k + 1) % 3;
    const int i2 = (k + 2) % 3;
    axis[i1] = (p.R(k, i1) + p.R(i1, k)) / (2.0 * axis[k] * one_minus_c);
    axis[i2] = (p.R(k, i2) + p.R(i2, k)) / (2.0 * axis[k] * one_minus_c);
    axis.normalize();
    if (vee.dot(axis) < 0.0) axis = -axis;
    theta = theta_refined;
    w = theta * axis;
  } else {
    w = (theta / (2.0 * std::sin(theta))) * vee;
  }

  // v = V^{-1} t with V^{-1} = I - W/2 + g W^2
  const Eigen::Matrix3d W = skew(w);
  const Eigen::Matrix3d W2 = W * W;
  const double theta2 = theta * theta;
  double g;
  if (theta < 1e-4) {
    g = 1.0 / 12.0 + theta2 / 720.0;
  } else {
    g = (1.0 - theta * std::sin(theta) / (2.0 * (1.0 - std::cos(theta)))) / theta2;
  }
  const Eigen::Matrix3d Vinv = Eigen::Matrix3d::Identity() - 0.5 * W + g * W2;
  return {Vinv * p.t, w};
}

PoseSE3 compose(const Twist& update, const PoseSE3& base) {
  return exp_se3(update) * base;
}

double rotation_angle(const Eigen::Matrix3d& R) {
  return std::acos(std::clamp((R.trace() - 1.0) / 2.0, -1.0, 1.0));
}

}  // namespace edgevo
