// SPDX-License-Identifier: Apache-2.0
#include "pedsim/hungarian.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace pedsim {

namespace {

// Core solver for n <= m. Returns row -> col, all rows assigned.
// Potentials (u, v) plus Dijkstra-like augmentation; scanning columns in
// ascending order makes tie-breaking deterministic toward lower indices.
std::vector<int> solve(const std::vector<std::vector<double>>& a, int n,
                       int m) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<int> match(m + 1, 0);  // column -> row, 1-based, 0 = free
  std::vector<int> way(m + 1, 0);

  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> min_slack(m + 1, kInf);
    std::vector<bool> used(m + 1, false);
    do {
      used[j0] = true;
      const int i0 = match[j0];
      int j1 = -1;
      double delta = kInf;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = a[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < min_slack[j]) {
          min_slack[j] = cur;
          way[j] = j0;
        }
        if (min_slack[j] < delta) {
          delta = min_slack[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          min_slack[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= m; ++j)
    if (match[j] != 0) row_to_col[match[j] - 1] = j - 1;
  return row_to_col;
}

}  // namespace

Assignment hungarian(const std::vector<std::vector<double>>& cost) {
  const int rows = static_cast<int>(cost.size());
  const int cols = rows > 0 ? static_cast<int>(cost[0].size()) : 0;
  for (const auto& row : cost) {
    if (static_cast<int>(row.size()) != cols)
      throw std::invalid_argument("assignment: ragged cost matrix");
    for (const double c : row) {
      if (std::isnan(c))
        throw std::invalid_argument("assignment: NaN cost");
      if (c < 0.0)
        throw std::invalid_argument("assignment: negative cost");
    }
  }

  Assignment result;
  result.row_to_col.assign(rows, -1);
  result.col_to_row.assign(cols, -1);
  if (rows == 0 || cols == 0) return result;

  const bool transposed = rows > cols;
  const int n = transposed ? cols : rows;
  const int m = transposed ? rows : cols;
  std::vector<std::vector<double>> a(n, std::vector<double>(m));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      const double c = transposed ? cost[j][i] : cost[i][j];
      a[i][j] = std::isinf(c) ? kForbiddenCost : c;
    }

  const std::vector<int> assigned = solve(a, n, m);
  for (int i = 0; i < n; ++i) {
    const int j = assigned[i];
    if (transposed) {
      result.row_to_col[j] = i;
      result.col_to_row[i] = j;
    } else {
      result.row_to_col[i] = j;
      result.col_to_row[j] = i;
    }
  }
  for (int i = 0; i < rows; ++i)
    if (result.row_to_col[i] >= 0) {
      double c = cost[i][result.row_to_col[i]];
      if (std::isinf(c)) c = kForbiddenCost;
      result.cost += c;
    }
  return result;
}

}  // namespace pedsim
