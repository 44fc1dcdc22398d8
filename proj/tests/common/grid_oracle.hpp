#pragma once

// Brute-force minimiser of a convex objective over a box, by nested grid
// search: a full coarse grid, then windows of +-3 cells around the best point
// on grids five times finer, down to the requested resolution.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

inline Eigen::VectorXd grid_minimise(const std::function<double(const Eigen::VectorXd&)>& f,
                                     const Eigen::VectorXd& lo, const Eigen::VectorXd& hi, double resolution) {
  const int n = static_cast<int>(lo.size());
  Eigen::VectorXd best = lo;
  double best_val = f(best);
  Eigen::VectorXd wlo = lo, whi = hi;
  double h = 0.05;
  for (;;) {
    std::vector<int> counts(n), idx(n, 0);
    for (int i = 0; i < n; ++i) counts[i] = static_cast<int>(std::floor((whi[i] - wlo[i]) / h + 1e-9)) + 1;
    Eigen::VectorXd x(n);
    for (;;) {
      for (int i = 0; i < n; ++i) x[i] = std::min(wlo[i] + idx[i] * h, whi[i]);
      const double v = f(x);
      if (v < best_val) {
        best_val = v;
        best = x;
      }
      int k = 0;
      while (k < n && ++idx[k] == counts[k]) idx[k++] = 0;
      if (k == n) break;
    }
    if (h <= resolution * (1 + 1e-9)) break;
    const double next = std::max(resolution, h / 5.0);
    for (int i = 0; i < n; ++i) {
      wlo[i] = std::max(lo[i], best[i] - 3 * h);
      whi[i] = std::min(hi[i], best[i] + 3 * h);
    }
    h = next;
  }
  return best;
}

}  // namespace oracle
