#pragma once

// Dense brute-force references for tests. Independent of the block-operator path:
// only Eigen decompositions are used. Problem sizes are capped.

#include <cstddef>
#include <vector>

#include "biphoton/block_operator.hpp"
#include "biphoton/covariance.hpp"

namespace biphoton::oracle {

constexpr std::size_t kMaxDimension = 4000;

struct DenseState {
  CMatrix matrix;   // Hermitian, weight-symmetrized
  RVector weights;  // flattened quadrature weights
};

/// Gamma = (exp(2Z) - 1)/2 through the eigendecomposition of the Hermitian generator.
DenseState dense_covariance_exp(const GeneratorZ& z);

/// log |det(1 + K)| through a full-pivoting LU factorization.
double dense_log_det(const CMatrix& k);
double dense_log_det(const DenseState& s);

/// Ascending eigenvalues of the principal submatrix on the listed indices.
std::vector<double> dense_projection_eigs(const DenseState& s, const std::vector<std::size_t>& mask);

/// Joint photon-number distribution of a two-mode squeezed vacuum with squeezing
/// parameter sigma (P(n, n) = sech^2(sigma/2) tanh^(2n)(sigma/2)) after binomial loss
/// with field transmittivity eta on each arm. Row-major over (n_max + 1)^2.
std::vector<double> tmsv_statistics(double sigma, double eta, std::size_t n_max);

}  // namespace biphoton::oracle
