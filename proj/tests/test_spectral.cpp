#include <doctest.h>

#include <cmath>
#include <sstream>

#include "biphoton/errors.hpp"
#include "biphoton/spectral.hpp"
#include "helpers.hpp"

using namespace biphoton;

TEST_CASE("Gaussian JSA: normalization, separability at aspect 1, coverage check") {
  const DiscretizedJsa sym = test::small_gaussian_jsa(1.0, 1.0, 41);
  CHECK(sym.norm2() == doctest::Approx(1.0).epsilon(1e-12));
  // aspect 1: psi(m, n) psi(c, c) = psi(m, c) psi(c, n)
  const auto c = static_cast<Eigen::Index>(20);
  double worst = 0.0;
  for (Eigen::Index m = 0; m < sym.values.rows(); ++m) {
    for (Eigen::Index n = 0; n < sym.values.cols(); ++n) {
      worst = std::max(worst, std::abs(sym.values(m, n) * sym.values(c, c) - sym.values(m, c) * sym.values(c, n)));
    }
  }
  CHECK(worst < 1e-10);
  GaussianJsaModel model{1.0, 3.0, 0.0, 0.0};
  const auto narrow = FrequencyGrid::uniform(-3.0, 3.0, 20);
  CHECK_THROWS_AS(build_gaussian_jsa(model, narrow, narrow), CoverageError);
  CHECK_THROWS_AS(build_gaussian_jsa(GaussianJsaModel{-1.0, 1.0, 0, 0}, narrow, narrow), ConfigError);
}

TEST_CASE("analytic Gaussian Schmidt spectrum") {
  const auto one = analytic_gaussian_schmidt(1.0, 5);
  CHECK(one.lambdas()[0] == 1.0);
  for (std::size_t j = 1; j < 5; ++j) CHECK(one.lambdas()[j] == 0.0);
  CHECK(analytic_gaussian_schmidt_number(1.0) == 1.0);
  const auto three = analytic_gaussian_schmidt(3.0, 200);
  // zeta = 1/2
  CHECK(three.lambdas()[0] == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(three.lambdas()[1] == doctest::Approx(0.1875).epsilon(1e-15));
  CHECK(schmidt_number(three) == doctest::Approx(5.0 / 3.0).epsilon(1e-10));
  CHECK(analytic_gaussian_schmidt_number(3.0) == doctest::Approx(5.0 / 3.0).epsilon(1e-15));
  const auto third = analytic_gaussian_schmidt(1.0 / 3.0, 200);
  for (std::size_t j = 0; j < 200; ++j) CHECK(third.coefficients[j] == doctest::Approx(three.coefficients[j]).epsilon(1e-14));
  CHECK_THROWS_AS(analytic_gaussian_schmidt(0.0, 3), DomainError);
}

TEST_CASE("numerical Schmidt decomposition") {
  SUBCASE("separable JSA has a single mode") {
    std::mt19937_64 rng(5);
    const auto f = test::random_matrix(rng, 12, 1);
    const auto g = test::random_matrix(rng, 9, 1);
    DiscretizedJsa j{FrequencyGrid::uniform(0, 1, 12), FrequencyGrid::uniform(0, 2, 9), f * g.transpose()};
    j.values /= std::sqrt(j.norm2());
    const auto s = schmidt_decompose(j);
    REQUIRE(!s.coefficients.empty());
    CHECK(s.coefficients[0] == doctest::Approx(1.0).epsilon(1e-8));
    for (std::size_t k = 1; k < s.coefficients.size(); ++k) CHECK(s.coefficients[k] < 1e-7);
  }
  SUBCASE("aspect-3 Gaussian matches the analytic spectrum") {
    GaussianJsaModel m{1.0, 3.0, 0.0, 0.0};
    const auto [gs, gi] = default_gaussian_grids(m, default_gaussian_points(m));
    const auto jsa = build_gaussian_jsa(m, gs, gi);
    const auto s = schmidt_decompose(jsa);
    const auto ref = analytic_gaussian_schmidt(3.0, 10).lambdas();
    const auto got = s.lambdas();
    for (std::size_t k = 0; k < 10; ++k) CHECK(std::abs(got[k] - ref[k]) < 1e-6);
    const auto r1 = schmidt_decompose(jsa, 1);
    CHECK(r1.coefficients.size() == 1);
    CHECK(std::abs(r1.truncation_tail - 0.25) < 1e-6);
    // modes are orthonormal in the weighted inner product
    const CMatrix u = gs.sqrt_weights().cast<cd>().asDiagonal() * s.modes_signal->leftCols(5);
    CHECK(test::max_abs_diff(u.adjoint() * u, CMatrix::Identity(5, 5)) < 1e-10);
  }
}

TEST_CASE("marginals") {
  GaussianJsaModel m{1.0, 3.0, 0.0, 0.0};
  const auto [gs, gi] = default_gaussian_grids(m, default_gaussian_points(m));
  const auto jsa = build_gaussian_jsa(m, gs, gi);
  const auto [ps, pi] = marginals(jsa);
  double mass = 0.0, second = 0.0, worst = 0.0;
  for (std::size_t k = 0; k < ps.size(); ++k) {
    mass += gs.weights[k] * ps[k];
    second += gs.weights[k] * ps[k] * gs.points[k] * gs.points[k];
    worst = std::max(worst, std::abs(ps[k] - pi[k]));
  }
  CHECK(worst < 1e-12);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
  // integrating the 2D Gaussian: variance (Dp^2 + Dm^2) / 2
  CHECK(std::abs(second / mass - 5.0) < 1e-6);
}

TEST_CASE("Schmidt number of explicit spectra") {
  SchmidtSpectrum s;
  s.coefficients = {1.0};
  CHECK(schmidt_number(s) == 1.0);
  s.coefficients = {0.5, 0.5, 0.5, 0.5};
  CHECK(schmidt_number(s) == doctest::Approx(4.0).epsilon(1e-15));
  s.coefficients = {};
  CHECK_THROWS_AS(schmidt_number(s), DomainError);
}

TEST_CASE("JSA CSV round trip") {
  std::mt19937_64 rng(6);
  const auto j = test::random_jsa(rng, 5, 4);
  std::stringstream ss;
  write_jsa_csv(ss, j);
  const auto back = read_jsa_csv(ss);
  CHECK(back.grid_signal.points == j.grid_signal.points);
  CHECK(back.grid_idler.points == j.grid_idler.points);
  CHECK(test::max_abs_diff(back.values, j.values) < 1e-15);
  std::istringstream bad("omega_s,omega_i,re_psi,im_psi\r\n0,0,1,0\r\n");
  CHECK_THROWS_AS(read_jsa_csv(bad), ConfigError);
}
