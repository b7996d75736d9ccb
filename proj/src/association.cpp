#include "edgevo/association.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace edgevo {

std::vector<std::pair<int, int>> associate_timestamps(const std::vector<double>& a,
                                                      const std::vector<double>& b,
                                                      double max_difference) {
  struct Candidate {
    double dt;
    int i, j;
  };
  std::vector<Candidate> cands;
  std::size_t lo = 0;
  for (int i = 0; i < static_cast<int>(a.size()); ++i) {
    while (lo < b.size() && b[lo] < a[i] - max_difference) ++lo;
    for (std::size_t j = lo; j < b.size() && b[j] <= a[i] + max_difference; ++j)
      cands.push_back({std::abs(a[i] - b[j]), i, static_cast<int>(j)});
  }
  std::sort(cands.begin(), cands.end(), [](const Candidate& x, const Candidate& y) {
    return std::tie(x.dt, x.i, x.j) < std::tie(y.dt, y.i, y.j);
  });

  std::vector<char> used_a(a.size(), 0), used_b(b.size(), 0);
  std::vector<std::pair<int, int>> pairs;
  for (const Candidate& c : cands) {
    if (used_a[c.i] || used_b[c.j]) continue;
    used_a[c.i] = used_b[c.j] = 1;
    pairs.emplace_back(c.i, c.j);
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

}  // namespace edgevo
