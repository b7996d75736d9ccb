#pragma once

#include <utility>
#include <vector>

namespace edgevo {

/// Greedy mutual nearest-neighbor matching of two ascending timestamp lists
/// (the TUM association convention): candidate pairs within max_difference
/// are taken best-difference-first, each entry used at most once. Returned
/// pairs are sorted by the first list's index.
std::vector<std::pair<int, int>> associate_timestamps(const std::vector<double>& a,
                                                      const std::vector<double>& b,
                                                      double max_difference);

}  // namespace edgevo
