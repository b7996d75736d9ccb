#include "edgevo/pyramid.hpp"

#include <stdexcept>
#include <string>

namespace edgevo {

std::vector<PyramidLevel> build_pyramid(const GrayImage& gray, const DepthImage& depth,
                                        const CameraIntrinsics& K, int levels) {
  if (levels < 1 || levels > kMaxPyramidLevels)
    throw std::invalid_argument("build_pyramid: levels must be in [1, 3]");
  if (gray.width != depth.width || gray.height != depth.height)
    throw std::invalid_argument("build_pyramid: gray/depth dimensions differ");
  if (gray.width != K.width || gray.height != K.height)
    throw std::invalid_argument("build_pyramid: image does not match intrinsics");

  const int cw = gray.width >> (levels - 1);
  const int ch = gray.height >> (levels - 1);
  if (std::min(cw, ch) < kMinPyramidDim)
    throw std::invalid_argument("build_pyramid: coarsest level " + std::to_string(cw) +
                                "x" + std::to_string(ch) + " is below the " +
                                std::to_string(kMinPyramidDim) + "px floor");

  std::vector<PyramidLevel> pyr;
  pyr.reserve(levels);
  for (int l = 0; l < levels; ++l) {
    PyramidLevel lvl;
    lvl.level = l;
    if (l == 0) {
      lvl.gray = gray;
      lvl.depth = depth;
    } else {
      lvl.gray = downsample_gray(pyr[l - 1].gray);
      lvl.depth = downsample_depth(pyr[l - 1].depth);
    }
    lvl.grad = gradient(lvl.gray);
    lvl.K = scale_intrinsics(K, l);
    pyr.push_back(std::move(lvl));
  }
  return pyr;
}

}  // namespace edgevo
