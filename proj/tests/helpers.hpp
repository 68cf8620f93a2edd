#pragma once

// Shared fixtures for the unit tests.

#include <random>

#include "biphoton/block_operator.hpp"
#include "biphoton/covariance.hpp"
#include "biphoton/spectral.hpp"

namespace biphoton::test {

inline CMatrix random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> n(0.0, 1.0);
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = cd{n(rng), n(rng)};
  }
  return m;
}

inline CMatrix random_hermitian(std::mt19937_64& rng, Eigen::Index n) {
  const CMatrix a = random_matrix(rng, n, n);
  return (a + a.adjoint()) / 2.0;
}

/// Gaussian JSA on a small grid that still passes the coverage check.
inline DiscretizedJsa small_gaussian_jsa(double delta_plus, double delta_minus, std::size_t points) {
  GaussianJsaModel m{delta_plus, delta_minus, 0.0, 0.0};
  const auto [gs, gi] = default_gaussian_grids(m, points);
  return build_gaussian_jsa(m, gs, gi);
}

/// Random complex JSA on uniform grids, normalized.
inline DiscretizedJsa random_jsa(std::mt19937_64& rng, std::size_t ns, std::size_t ni, bool symmetric = false) {
  DiscretizedJsa j{FrequencyGrid::uniform(-1.0, 1.0, ns), FrequencyGrid::uniform(-1.0, 1.0, ni),
                   random_matrix(rng, static_cast<Eigen::Index>(ns), static_cast<Eigen::Index>(ni))};
  if (symmetric) j.values = (j.values + j.values.transpose()).eval() / 2.0;
  j.values /= std::sqrt(j.norm2());
  return j;
}

inline double max_abs_diff(const CMatrix& a, const CMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace biphoton::test
