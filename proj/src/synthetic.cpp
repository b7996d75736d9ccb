#include "edgevo/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>

#include "edgevo/dataset.hpp"
#include "edgevo/errors.hpp"
#include "edgevo/png_io.hpp"

namespace edgevo {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

double lattice_value(std::uint64_t seed, std::int64_t i, std::int64_t j) {
  std::uint64_t h = splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(i)));
  h = splitmix64(h ^ splitmix64(static_cast<std::uint64_t>(j) * 0x9e3779b97f4a7c15ull));
  return static_cast<double>(h >> 11) * (1.0 / 9007199254740992.0);
}

}  // namespace

double PlaneTexture::value(double u, double v) const {
  const double gu = u / noise_cell, gv = v / noise_cell;
  const double fi = std::floor(gu), fj = std::floor(gv);
  const auto i0 = static_cast<std::int64_t>(fi);
  const auto j0 = static_cast<std::int64_t>(fj);
  const double fu = gu - fi, fv = gv - fj;
  const double n00 = lattice_value(seed, i0, j0);
  const double n10 = lattice_value(seed, i0 + 1, j0);
  const double n01 = lattice_value(seed, i0, j0 + 1);
  const double n11 = lattice_value(seed, i0 + 1, j0 + 1);
  const double noise = (1 - fv) * ((1 - fu) * n00 + fu * n10) + fv * ((1 - fu) * n01 + fu * n11);
  double val = base + noise_amplitude * (noise - 0.5);

  const double du = std::abs(u - std::round(u / grid_spacing) * grid_spacing);
  const double dv = std::abs(v - std::round(v / grid_spacing) * grid_spacing);
  if (du < 0.5 * grid_width || dv < 0.5 * grid_width) val = grid_value;
  return std::clamp(val, 0.0, 1.0);
}

SyntheticScene make_default_scene(const CameraIntrinsics& K, std::uint64_t seed) {
  SyntheticScene scene;
  scene.K = K;

  TexturedPlane backdrop;
  backdrop.pose = PoseSE3(Eigen::Matrix3d::Identity(), {0.0, 0.0, 6.0});
  backdrop.half_width = 10.0;
  backdrop.half_height = 8.0;
  backdrop.texture.seed = splitmix64(seed);
  backdrop.texture.noise_cell = 0.5;
  backdrop.texture.grid_spacing = 1.0;
  backdrop.texture.grid_width = 0.05;
  scene.planes.push_back(backdrop);

  TexturedPlane left;
  left.pose = PoseSE3(Eigen::AngleAxisd(0.45, Eigen::Vector3d::UnitY()).toRotationMatrix(),
                      {-0.9, 0.15, 2.8});
  left.half_width = 1.3;
  left.half_height = 1.0;
  left.texture.seed = splitmix64(seed ^ 0x51ed);
  left.texture.noise_cell = 0.22;
  left.texture.grid_spacing = 0.45;
  left.texture.grid_width = 0.025;
  scene.planes.push_back(left);

  TexturedPlane right;
  right.pose = PoseSE3((Eigen::AngleAxisd(-0.35, Eigen::Vector3d::UnitY()) *
                        Eigen::AngleAxisd(0.25, Eigen::Vector3d::UnitX()))
                           .toRotationMatrix(),
                       {1.1, -0.3, 3.4});
  right.half_width = 1.4;
  right.half_height = 1.1;
  right.texture.seed = splitmix64(seed ^ 0xbeef);
  right.texture.noise_cell = 0.28;
  right.texture.grid_spacing = 0.5;
  right.texture.grid_width = 0.03;
  scene.planes.push_back(right);

  return scene;
}

RenderOutput render_detailed(const SyntheticScene& scene, const PoseSE3& cam_to_world,
                             double timestamp) {
  const CameraIntrinsics& K = scene.K;
  RenderOutput out;
  out.frame.timestamp = timestamp;
  out.frame.gray = GrayImage(K.width, K.height);
  out.frame.depth = DepthImage(K.width, K.height);
  out.exact_depth.assign(static_cast<std::size_t>(K.width) * K.height, 0.0);

  struct PlaneLocal {
    Eigen::Vector3d normal_w, center_w;
    Eigen::Matrix3d world_to_plane;
    const TexturedPlane* plane;
  };
  std::vector<PlaneLocal> locals;
  locals.reserve(scene.planes.size());
  for (const TexturedPlane& p : scene.planes)
    locals.push_back({p.pose.R.col(2), p.pose.t, p.pose.R.transpose(), &p});

  const Eigen::Vector3d origin = cam_to_world.t;
  std::size_t hits = 0;
  for (int y = 0; y < K.height; ++y)
    for (int x = 0; x < K.width; ++x) {
      const Eigen::Vector3d dir_cam((x - K.cx) / K.fx, (y - K.cy) / K.fy, 1.0);
      const Eigen::Vector3d dir_w = cam_to_world.R * dir_cam;

      double best_s = std::numeric_limits<double>::infinity();
      double best_val = 0.0;
      for (const PlaneLocal& pl : locals) {
        const double denom = pl.normal_w.dot(dir_w);
        if (std::abs(denom) < 1e-12) continue;
        const double s = pl.normal_w.dot(pl.center_w - origin) / denom;
        if (s <= 1e-6 || s >= best_s) continue;
        const Eigen::Vector3d local = pl.world_to_plane * (origin + s * dir_w - pl.center_w);
        if (std::abs(local.x()) > pl.plane->half_width ||
            std::abs(local.y()) > pl.plane->half_height)
          continue;
        best_s = s;
        best_val = pl.plane->texture.value(local.x(), local.y());
      }
      if (!std::isinf(best_s)) {
        // dir_cam.z == 1, so the ray parameter is the camera-frame depth
        out.frame.gray.at(x, y) = static_cast<float>(best_val);
        out.frame.depth.at(x, y) = static_cast<float>(best_s);
        out.exact_depth[static_cast<std::size_t>(y) * K.width + x] = best_s;
        ++hits;
      }
    }
  if (hits == 0) throw RenderError("render: no scene geometry visible from this pose");
  return out;
}

Frame render(const SyntheticScene& scene, const PoseSE3& cam_to_world, double timestamp) {
  return render_detailed(scene, cam_to_world, timestamp).frame;
}

SyntheticSequence generate_sequence(const SyntheticScene& scene,
                                    const std::vector<PoseSE3>& cam_poses, double fps,
                                    double noise_sigma, std::uint64_t noise_seed) {
  if (cam_poses.empty()) throw std::invalid_argument("generate_sequence: no poses");
  SyntheticSequence seq;
  seq.frames.reserve(cam_poses.size());
  for (std::size_t i = 0; i < cam_poses.size(); ++i) {
    const double ts = static_cast<double>(i) / fps;
    Frame frame = render(scene, cam_poses[i], ts);
    if (noise_sigma > 0.0) {
      std::mt19937_64 rng(splitmix64(noise_seed ^ (i + 1)));
      std::normal_distribution<float> noise(0.0f, static_cast<float>(noise_sigma));
      for (float& v : frame.gray.data) v = std::clamp(v + noise(rng), 0.0f, 1.0f);
    }
    seq.frames.push_back(std::move(frame));
    seq.groundtruth.entries.push_back({ts, cam_poses[i]});
  }
  return seq;
}

void write_tum_sequence(const SyntheticSequence& seq, const CameraIntrinsics& K,
                        const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "rgb");
  fs::create_directories(dir / "depth");

  std::ofstream rgb_list(dir / "rgb.txt");
  std::ofstream depth_list(dir / "depth.txt");
  if (!rgb_list || !depth_list)
    throw IoError("write_tum_sequence: cannot create file lists in " + dir.string());
  rgb_list << "# timestamp filename\n";
  depth_list << "# timestamp filename\n";

  std::vector<std::uint8_t> gray8;
  std::vector<std::uint16_t> depth16;
  char name[64];
  for (const Frame& frame : seq.frames) {
    std::snprintf(name, sizeof(name), "%.6f.png", frame.timestamp);
    const std::string base(name);

    gray8.resize(frame.gray.size());
    for (std::size_t i = 0; i < gray8.size(); ++i)
      gray8[i] = static_cast<std::uint8_t>(std::lround(frame.gray.data[i] * 255.0f));
    write_png_gray8(dir / "rgb" / base, frame.gray.width, frame.gray.height, gray8.data());

    depth16.resize(frame.depth.data.size());
    for (std::size_t i = 0; i < depth16.size(); ++i) {
      const double raw = std::round(frame.depth.data[i] * kTumDepthScale);
      depth16[i] = static_cast<std::uint16_t>(std::clamp(raw, 0.0, 65535.0));
    }
    write_png_gray16(dir / "depth" / base, frame.depth.width, frame.depth.height,
                     depth16.data());

    char ts[32];
    std::snprintf(ts, sizeof(ts), "%.6f", frame.timestamp);
    rgb_list << ts << " rgb/" << base << "\n";
    depth_list << ts << " depth/" << base << "\n";
  }
  write_trajectory(seq.groundtruth, dir / "groundtruth.txt");
  write_calibration(dir, K);
}

std::vector<PoseSE3> constant_velocity_trajectory(int frames, double velocity, double fps) {
  std::vector<PoseSE3> poses;
  poses.reserve(frames);
  for (int i = 0; i < frames; ++i)
    poses.emplace_back(Eigen::Matrix3d::Identity(),
                       Eigen::Vector3d(velocity * i / fps, 0.0, 0.0));
  return poses;
}

}  // namespace edgevo
