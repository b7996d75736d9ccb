#include <doctest.h>

#include <cmath>
#include <random>

#include "edgevo/camera.hpp"
#include "edgevo/se3.hpp"

using namespace edgevo;

namespace {

Twist random_twist(std::mt19937_64& rng, double max_angle) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::Vector3d v(u(rng), u(rng), u(rng));
  Eigen::Vector3d w(u(rng), u(rng), u(rng));
  if (w.norm() > 1e-12) w *= std::uniform_real_distribution<double>(0.0, max_angle)(rng) / w.norm();
  return {v, w};
}

const CameraIntrinsics kTumK{525.0, 525.0, 319.5, 239.5, 640, 480};

}  // namespace

TEST_SUITE_BEGIN("geometry");

TEST_CASE("exp of zero twist is the identity") {
  const PoseSE3 p = exp_se3(Twist());
  CHECK((p.R - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
  CHECK(p.t.norm() == doctest::Approx(0.0));
}

TEST_CASE("exp of a pure translation") {
  const PoseSE3 p = exp_se3(Twist({1, 2, 3}, {0, 0, 0}));
  CHECK((p.R - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((p.t - Eigen::Vector3d(1, 2, 3)).norm() < 1e-15);
}

TEST_CASE("exp of a 90 degree rotation about x matches Rodrigues by hand") {
  const PoseSE3 p = exp_se3(Twist({0, 0, 0}, {M_PI / 2, 0, 0}));
  Eigen::Matrix3d expected;
  // clang-format off
  expected << 1, 0,  0,
              0, 0, -1,
              0, 1,  0;
  // clang-format on
  CHECK((p.R - expected).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(p.t.norm() < 1e-15);
}

TEST_CASE("log of identity and of a pure translation") {
  CHECK(log_se3(PoseSE3::identity()).norm() == doctest::Approx(0.0));
  const Twist xi = log_se3(PoseSE3(Eigen::Matrix3d::Identity(), {1, 2, 3}));
  CHECK((xi.v - Eigen::Vector3d(1, 2, 3)).norm() < 1e-15);
  CHECK(xi.w.norm() < 1e-15);
}

TEST_CASE("exp/log roundtrip for random twists with angle up to 3") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    const Twist xi = random_twist(rng, 3.0);
    const Twist back = log_se3(exp_se3(xi));
    CHECK((back.vector() - xi.vector()).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("log resolves the angle-pi axis ambiguity") {
  for (const Eigen::Vector3d& axis :
       {Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, 1, 0),
        Eigen::Vector3d(1, 2, 2).normalized()}) {
    const PoseSE3 p = exp_se3(Twist({0.1, -0.2, 0.3}, axis * M_PI));
    const PoseSE3 back = exp_se3(log_se3(p));
    CHECK((back.R - p.R).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((back.t - p.t).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("small-angle fallback stays consistent with the closed form") {
  for (const double angle : {1e-12, 1e-9, 5e-9, 2e-8, 1e-6}) {
    const Twist xi({0.5, -0.25, 1.0}, Eigen::Vector3d(1, -1, 2).normalized() * angle);
    const Twist back = log_se3(exp_se3(xi));
    CHECK((back.vector() - xi.vector()).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("compose with identity update and with identity base") {
  std::mt19937_64 rng(3);
  const Twist xi = random_twist(rng, 2.0);
  const PoseSE3 base = exp_se3(xi);
  const PoseSE3 same = compose(Twist(), base);
  CHECK((same.R - base.R).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((same.t - base.t).cwiseAbs().maxCoeff() < 1e-15);

  const PoseSE3 from_identity = compose(xi, PoseSE3::identity());
  CHECK((from_identity.R - base.R).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((from_identity.t - base.t).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("compose of two pure translations sums them") {
  const PoseSE3 p = compose(Twist({1, 0, 2}, {0, 0, 0}),
                            exp_se3(Twist({-3, 1, 1}, {0, 0, 0})));
  CHECK((p.t - Eigen::Vector3d(-2, 1, 3)).norm() < 1e-15);
}

TEST_CASE("compose matches the 4x4 matrix-product oracle") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const Twist a = random_twist(rng, 2.5);
    const Twist b = random_twist(rng, 2.5);
    const PoseSE3 base = exp_se3(b);
    const PoseSE3 got = compose(a, base);
    const Eigen::Matrix4d expected = exp_se3(a).matrix() * base.matrix();
    CHECK((got.matrix() - expected).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("compose associativity against the matrix product") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 100; ++i) {
    const Twist a = random_twist(rng, 2.0);
    const Twist b = random_twist(rng, 2.0);
    const PoseSE3 T = exp_se3(random_twist(rng, 2.0));
    const PoseSE3 lhs = compose(a, compose(b, T));
    const Eigen::Matrix4d rhs = exp_se3(a).matrix() * exp_se3(b).matrix() * T.matrix();
    CHECK((lhs.matrix() - rhs).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("1000 compositions keep the rotation orthonormal") {
  std::mt19937_64 rng(17);
  PoseSE3 p = PoseSE3::identity();
  for (int i = 0; i < 1000; ++i) p = compose(random_twist(rng, 0.5), p);
  CHECK(p.orthonormalityError() < 1e-6);
  CHECK(std::abs(p.R.determinant() - 1.0) < 1e-6);
}

TEST_CASE("pose inverse composes to the identity") {
  std::mt19937_64 rng(19);
  for (int i = 0; i < 50; ++i) {
    const PoseSE3 p = exp_se3(random_twist(rng, 3.0));
    const PoseSE3 id = p * p.inverse();
    CHECK((id.R - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(id.t.norm() < 1e-9);
  }
}

TEST_CASE("project on the optical axis hits the principal point") {
  const auto px = project({0, 0, 2}, kTumK);
  REQUIRE(px.has_value());
  CHECK(px->x() == doctest::Approx(319.5));
  CHECK(px->y() == doctest::Approx(239.5));
}

TEST_CASE("project hand-evaluated sample") {
  const auto px = project({1, 0, 2}, kTumK);
  REQUIRE(px.has_value());
  CHECK(px->x() == doctest::Approx(582.0));  // 525 * 0.5 + 319.5
  CHECK(px->y() == doctest::Approx(239.5));
}

TEST_CASE("project rejects points behind the camera") {
  CHECK_FALSE(project({0, 0, 0}, kTumK).has_value());
  CHECK_FALSE(project({1, 1, -2}, kTumK).has_value());
}

TEST_CASE("backproject hand-evaluated samples") {
  const Eigen::Vector3d on_axis = backproject({319.5, 239.5}, 1.0, kTumK);
  CHECK((on_axis - Eigen::Vector3d(0, 0, 1)).norm() < 1e-15);
  const Eigen::Vector3d off = backproject({319.5 + 525.0, 239.5}, 2.0, kTumK);
  CHECK((off - Eigen::Vector3d(2, 0, 2)).norm() < 1e-12);
}

TEST_CASE("backproject rejects invalid depth") {
  CHECK_THROWS_AS(backproject({10, 10}, 0.0, kTumK), std::invalid_argument);
  CHECK_THROWS_AS(backproject({10, 10}, -1.0, kTumK), std::invalid_argument);
}

TEST_CASE("project and backproject are mutually inverse") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> ux(0.0, 639.0), uy(0.0, 479.0), uz(1e-3, 100.0);
  for (int i = 0; i < 1000; ++i) {
    const Eigen::Vector2d px(ux(rng), uy(rng));
    const double z = uz(rng);
    const auto back = project(backproject(px, z, kTumK), kTumK);
    REQUIRE(back.has_value());
    CHECK((*back - px).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("scale_intrinsics level 0 is the identity") {
  const CameraIntrinsics s = scale_intrinsics(kTumK, 0);
  CHECK(s.fx == kTumK.fx);
  CHECK(s.cx == kTumK.cx);
  CHECK(s.width == kTumK.width);
}

TEST_CASE("scale_intrinsics level 1 hand-evaluated") {
  const CameraIntrinsics s = scale_intrinsics(kTumK, 1);
  CHECK(s.fx == doctest::Approx(262.5));
  CHECK(s.fy == doctest::Approx(262.5));
  CHECK(s.cx == doctest::Approx(159.5));
  CHECK(s.cy == doctest::Approx(119.5));
  CHECK(s.width == 320);
  CHECK(s.height == 240);
}

TEST_CASE("scale_intrinsics rejects level 3") {
  CHECK_THROWS_AS(scale_intrinsics(kTumK, 3), std::invalid_argument);
  CHECK_THROWS_AS(scale_intrinsics(kTumK, -1), std::invalid_argument);
}

TEST_SUITE_END();
