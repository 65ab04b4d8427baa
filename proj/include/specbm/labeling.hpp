#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "specbm/errors.hpp"

namespace specbm {

// Two-way partition as a vector of +1/-1 signs.
struct Labeling {
  std::vector<std::int8_t> signs;

  int n() const { return static_cast<int>(signs.size()); }

  // Ground truth for the balanced two-block model: +1 on the first half.
  static Labeling ground_truth(int n) {
    Labeling l;
    l.signs.assign(n, 1);
    for (int i = n / 2; i < n; ++i) l.signs[i] = -1;
    return l;
  }
};

// Fraction of correctly classified nodes, maximized over the global sign
// flip; always >= 1/2 for two balanced classes.
inline double agreement(const Labeling& result, const Labeling& truth) {
  if (result.n() != truth.n())
    throw ParameterError("agreement: labeling length mismatch");
  int match = 0;
  for (int i = 0; i < result.n(); ++i)
    if (result.signs[i] == truth.signs[i]) ++match;
  int best = std::max(match, result.n() - match);
  return static_cast<double>(best) / result.n();
}

}  // namespace specbm
