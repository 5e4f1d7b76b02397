// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

namespace pedsim {

// Cost at or above this value marks a forbidden pair: the solver may be
// forced through such entries when nothing else completes the matching, so
// callers drop assigned pairs whose cost reaches the sentinel. Infinity in
// the input is mapped onto it.
inline constexpr double kForbiddenCost = 1e15;

struct Assignment {
  std::vector<int> row_to_col;  // -1 = unassigned (only when rows > cols)
  std::vector<int> col_to_row;
  double cost = 0.0;  // sum of the chosen entries from the input matrix
};

// Minimum-cost bipartite assignment (Jonker-Volgenant style shortest
// augmenting paths, O(n^2 m)). Rectangular matrices are fine; the smaller
// side is fully assigned. Entries must be non-negative and not NaN; +inf is
// treated as kForbiddenCost. Ties resolve toward lower indices, so equal-cost
// inputs always produce the same matching. Throws std::invalid_argument on
// ragged, negative, or NaN input.
Assignment hungarian(const std::vector<std::vector<double>>& cost);

}  // namespace pedsim
