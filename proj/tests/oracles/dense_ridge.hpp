#pragma once

// Dense ridge-regression oracles over the circulant data model
//   r(j) = sum_u t(u) x(u + j)   (circular shifts),
// solved directly via normal equations. Independent of the Fourier path.

#include <Eigen/Dense>

#include "dmdcf/core/array.hpp"

namespace dmdcf::oracle {

// Minimizes 0.5 * ||R t - y||^2 + 0.5 * lambda * ||t||^2 where column u of R
// is the circulant shift pattern of x, restricted to active (masked) cells.
// Returns the spatial filter embedded in the full grid (zeros outside).
inline RealArray dense_masked_ridge(const RealArray& x, const RealArray& y,
                                    const ByteArray& mask, double lambda) {
  const int rows = x.rows(), cols = x.cols();
  const int n = rows * cols;

  std::vector<int> active;
  for (int u = 0; u < n; ++u)
    if (mask[u]) active.push_back(u);
  const int a = static_cast<int>(active.size());

  Eigen::MatrixXd design(n, a);
  for (int j = 0; j < n; ++j) {
    const int jr = j / cols, jc = j % cols;
    for (int k = 0; k < a; ++k) {
      const int ur = active[k] / cols, uc = active[k] % cols;
      design(j, k) = x((ur + jr) % rows, (uc + jc) % cols);
    }
  }
  Eigen::VectorXd target(n);
  for (int j = 0; j < n; ++j) target(j) = y[j];

  Eigen::MatrixXd normal = design.transpose() * design;
  normal.diagonal().array() += lambda;
  Eigen::VectorXd solution = normal.ldlt().solve(design.transpose() * target);

  RealArray t(rows, cols, 0.0);
  for (int k = 0; k < a; ++k) t[active[k]] = solution(k);
  return t;
}

inline RealArray dense_ridge(const RealArray& x, const RealArray& y, double lambda) {
  ByteArray all(x.rows(), x.cols(), 1);
  return dense_masked_ridge(x, y, all, lambda);
}

}  // namespace dmdcf::oracle
