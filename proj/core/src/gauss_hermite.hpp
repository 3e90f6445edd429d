#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "squidbec/constants.hpp"

// Gauss-Hermite nodes/weights for \int e^{-x^2} f(x) dx, by Golub-Welsch on
// the symmetric Jacobi matrix (off-diagonal sqrt(i/2)).  Internal helper
// shared by the well-state quadrature and the condensate coupling.

namespace squidbec::detail {

struct GaussHermite {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline GaussHermite gauss_hermite(int n) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const double b = std::sqrt(0.5 * i);
    j(i, i - 1) = b;
    j(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  GaussHermite gh;
  gh.nodes.resize(n);
  gh.weights.resize(n);
  const double sqrt_pi = std::sqrt(kPi);
  for (int i = 0; i < n; ++i) {
    gh.nodes[i] = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    gh.weights[i] = sqrt_pi * v0 * v0;
  }
  return gh;
}

}  // namespace squidbec::detail
