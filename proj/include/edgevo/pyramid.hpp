#pragma once

#include <vector>

#include "edgevo/camera.hpp"
#include "edgevo/image.hpp"

namespace edgevo {

/// One coarse-to-fine level: intensity, depth, gradients and the intrinsics
/// scaled to this resolution. Level 0 is the input resolution.
struct PyramidLevel {
  GrayImage gray;
  DepthImage depth;
  GradientImage grad;
  CameraIntrinsics K;
  int level = 0;
};

inline constexpr int kMinPyramidDim = 60;

/// Builds `levels` pyramid levels (1..3). Each level is a 2x2 box-filtered
/// copy of the previous one with matching scaled intrinsics. More than three
/// levels, or a coarsest level smaller than kMinPyramidDim on either side,
/// is rejected: repeated downsampling aliases edge structure away.
std::vector<PyramidLevel> build_pyramid(const GrayImage& gray, const DepthImage& depth,
                                        const CameraIntrinsics& K, int levels);

}  // namespace edgevo
