#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <numeric>

#include "biphoton/errors.hpp"
#include "biphoton/oracle.hpp"
#include "helpers.hpp"

using namespace biphoton;

TEST_CASE("dense covariance from the generator") {
  const auto jsa = test::small_gaussian_jsa(1.0, 3.0, 30);
  const GeneratorZ z0 = build_generator(jsa, 0.0, ProcessType::TypeII);
  CHECK(oracle::dense_covariance_exp(z0).matrix.cwiseAbs().maxCoeff() == 0.0);
  const double c = 1.2;
  const GeneratorZ z = build_generator(jsa, c, ProcessType::TypeII);
  const auto dense = oracle::dense_covariance_exp(z);
  const auto s = schmidt_decompose(jsa);
  const auto exact = build_covariance_exact(s, jsa.grid_signal, jsa.grid_idler, c, ProcessType::TypeII);
  CHECK(test::max_abs_diff(dense.matrix, exact.op.to_dense()) < 1e-9);
  CHECK(dense.weights.size() == 4 * 30);

  // separable source: eigenvalues (e^{+-sigma} - 1)/2
  const auto sep = test::small_gaussian_jsa(1.0, 1.0, 12);
  const auto d1 = oracle::dense_covariance_exp(build_generator(sep, 0.8, ProcessType::Type0I));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Eigen::MatrixXcd(d1.matrix), Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues().maxCoeff() == doctest::Approx(std::expm1(1.6) / 2).epsilon(1e-10));
  CHECK(es.eigenvalues().minCoeff() == doctest::Approx(std::expm1(-1.6) / 2).epsilon(1e-10));
}

TEST_CASE("dense log-determinant") {
  CHECK(oracle::dense_log_det(CMatrix::Zero(5, 5)) == 0.0);
  CMatrix d = CMatrix::Zero(3, 3);
  d(0, 0) = 0.5;
  d(1, 1) = -0.25;
  d(2, 2) = 2.0;
  CHECK(oracle::dense_log_det(d) == doctest::Approx(std::log(1.5) + std::log(0.75) + std::log(3.0)).epsilon(1e-15));
  CHECK_THROWS_AS(oracle::dense_log_det(CMatrix::Zero(2, 3)), ShapeError);
  CHECK_THROWS_AS(oracle::dense_log_det(CMatrix::Zero(oracle::kMaxDimension + 1, oracle::kMaxDimension + 1)), DomainError);
}

TEST_CASE("projected eigenvalues") {
  std::mt19937_64 rng(13);
  oracle::DenseState st;
  st.matrix = test::random_hermitian(rng, 10);
  std::vector<std::size_t> all(10);
  std::iota(all.begin(), all.end(), 0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Eigen::MatrixXcd(st.matrix), Eigen::EigenvaluesOnly);
  const auto full = oracle::dense_projection_eigs(st, all);
  for (std::size_t k = 0; k < 10; ++k) CHECK(full[k] == doctest::Approx(es.eigenvalues()[static_cast<Eigen::Index>(k)]).epsilon(1e-12));
  // rank one: the projected eigenvalue cannot exceed the original
  const CVector v = test::random_matrix(rng, 10, 1).col(0);
  st.matrix = v * v.adjoint();
  const auto half = oracle::dense_projection_eigs(st, {0, 1, 2, 3, 4});
  CHECK(half.back() <= v.squaredNorm() + 1e-12);
  CHECK(half.back() == doctest::Approx(v.head(5).squaredNorm()).epsilon(1e-12));
  for (std::size_t k = 0; k + 1 < half.size(); ++k) CHECK(std::abs(half[k]) < 1e-12);
}

TEST_CASE("two-mode squeezed vacuum statistics") {
  const auto vac = oracle::tmsv_statistics(0.0, 0.5, 3);
  CHECK(vac[0] == 1.0);
  const auto p = oracle::tmsv_statistics(0.7, 1.0, 5);
  double total = 0.0;
  for (std::size_t a = 0; a <= 5; ++a) {
    for (std::size_t b = 0; b <= 5; ++b) {
      if (a != b) CHECK(p[a * 6 + b] == 0.0);
      total += p[a * 6 + b];
    }
  }
  const double t2 = std::pow(std::tanh(0.35), 2);
  CHECK(p[0] == doctest::Approx(1 - t2).epsilon(1e-15));
  CHECK(total == doctest::Approx(1 - std::pow(t2, 6)).epsilon(1e-14));
}
