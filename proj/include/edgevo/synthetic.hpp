#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <vector>

#include "edgevo/camera.hpp"
#include "edgevo/evaluation.hpp"
#include "edgevo/tracker.hpp"

namespace edgevo {

/// Procedural plane texture: seeded value noise (bilinear interpolation of a
/// random lattice) plus high-contrast grid lines so every edge detector finds
/// enough pixels.
struct PlaneTexture {
  std::uint64_t seed = 1;
  double noise_cell = 0.25;       // meters per noise lattice cell
  double noise_amplitude = 0.35;  // peak-to-peak intensity swing of the noise
  double base = 0.45;
  double grid_spacing = 0.5;      // meters between grid lines
  double grid_width = 0.03;       // full line width, meters
  double grid_value = 0.95;

  double value(double u, double v) const;
};

/// Finite textured rectangle: local frame has the plane at z = 0 with the
/// rectangle spanning [-half_width, half_width] x [-half_height, half_height].
struct TexturedPlane {
  PoseSE3 pose;  // plane-to-world
  double half_width = 1.0, half_height = 1.0;
  PlaneTexture texture;
};

struct SyntheticScene {
  CameraIntrinsics K;
  std::vector<TexturedPlane> planes;
};

struct RenderError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Backdrop plus two tilted foreground planes; covers the full field of view
/// for moderate motion around the origin looking down +z.
SyntheticScene make_default_scene(const CameraIntrinsics& K, std::uint64_t seed);

struct RenderOutput {
  Frame frame;
  std::vector<double> exact_depth;  // double-precision depths for oracle use
};

/// Ray-casts every pixel against the scene planes; the nearest intersection
/// gives the depth (camera-frame z) and the texture gives the intensity.
/// Deterministic for a fixed scene. Throws RenderError when no pixel hits
/// any plane.
RenderOutput render_detailed(const SyntheticScene& scene, const PoseSE3& cam_to_world,
                             double timestamp = 0.0);
Frame render(const SyntheticScene& scene, const PoseSE3& cam_to_world, double timestamp = 0.0);

struct SyntheticSequence {
  std::vector<Frame> frames;
  Trajectory groundtruth;  // camera-to-world poses, exact
};

/// Renders one frame per pose at 1/fps spacing; optional additive Gaussian
/// intensity noise (seeded, clamped to [0, 1]).
SyntheticSequence generate_sequence(const SyntheticScene& scene,
                                    const std::vector<PoseSE3>& cam_poses, double fps,
                                    double noise_sigma, std::uint64_t noise_seed);

/// Writes a TUM-format sequence directory: rgb/ (8-bit gray PNG), depth/
/// (16-bit PNG at 5000 units/m), rgb.txt, depth.txt, groundtruth.txt and
/// calibration.txt.
void write_tum_sequence(const SyntheticSequence& seq, const CameraIntrinsics& K,
                        const std::filesystem::path& dir);

/// Constant-velocity lateral trajectory: translate along +x at `velocity`
/// m/s, identity rotation, starting at the origin.
std::vector<PoseSE3> constant_velocity_trajectory(int frames, double velocity, double fps);

}  // namespace edgevo
