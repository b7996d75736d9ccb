#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace edgevo {

using Vector6d = Eigen::Matrix<double, 6, 1>;
using Matrix6d = Eigen::Matrix<double, 6, 6>;

/// se(3) element. Translational part first, rotational (axis-angle) part second.
struct Twist {
  Eigen::Vector3d v = Eigen::Vector3d::Zero();
  Eigen::Vector3d w = Eigen::Vector3d::Zero();

  Twist() = default;
  Twist(const Eigen::Vector3d& v_, const Eigen::Vector3d& w_) : v(v_), w(w_) {}
  explicit Twist(const Vector6d& xi) : v(xi.head<3>()), w(xi.tail<3>()) {}

  Vector6d vector() const {
    Vector6d xi;
    xi << v, w;
    return xi;
  }
  double norm() const { return std::sqrt(v.squaredNorm() + w.squaredNorm()); }
  bool allFinite() const { return v.allFinite() && w.allFinite(); }
};

/// Rigid transform in SE(3): x -> R x + t.
struct PoseSE3 {
  Eigen::Matrix3d R = Eigen::Matrix3d::Identity();
  Eigen::Vector3d t = Eigen::Vector3d::Zero();

  PoseSE3() = default;
  PoseSE3(const Eigen::Matrix3d& R_, const Eigen::Vector3d& t_) : R(R_), t(t_) {}

  static PoseSE3 identity() { return {}; }

  Eigen::Vector3d operator*(const Eigen::Vector3d& p) const { return R * p + t; }
  PoseSE3 operator*(const PoseSE3& o) const { return {R * o.R, R * o.t + t}; }

  PoseSE3 inverse() const {
    Eigen::Matrix3d Rt = R.transpose();
    return {Rt, -(Rt * t)};
  }

  Eigen::Matrix4d matrix() const {
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    m.topLeftCorner<3, 3>() = R;
    m.topRightCorner<3, 1>() = t;
    return m;
  }

  /// Max-norm orthonormality defect of R, for drift checks.
  double orthonormalityError() const {
    return (R.transpose() * R - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
  }
};

Eigen::Matrix3d skew(const Eigen::Vector3d& a);

/// Exponential map se(3) -> SE(3). Closed-form Rodrigues with a second-order
/// Taylor fallback below ||w|| = 1e-8.
PoseSE3 exp_se3(const Twist& xi);

/// Logarithm map SE(3) -> se(3). Requires rotation angle <= pi; the angle-pi
/// axis ambiguity is resolved by largest-diagonal axis extraction.
Twist log_se3(const PoseSE3& p);

/// Left-multiplied pose update: exp(update) * base.
PoseSE3 compose(const Twist& update, const PoseSE3& base);

/// Rotation angle of R in radians, in [0, pi].
double rotation_angle(const Eigen::Matrix3d& R);

}  // namespace edgevo
