#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "biphoton/bounds.hpp"
#include "biphoton/csv.hpp"
#include "biphoton/detection.hpp"
#include "biphoton/errors.hpp"

using namespace biphoton;

TEST_CASE("truncated hyperbolic functions") {
  CHECK(truncated_cosh_sinh(2.0, 0) == std::pair<double, double>{1.0, 0.0});
  const auto [c3, s3] = truncated_cosh_sinh(1.0, 3);
  CHECK(c3 == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(s3 == doctest::Approx(1.0 + 1.0 / 6.0).epsilon(1e-15));
  for (double x : {0.0, 0.5, 2.0, 5.0}) {
    const auto [c, s] = truncated_cosh_sinh(x, 60);
    CHECK(c == doctest::Approx(std::cosh(x)).epsilon(1e-15));
    CHECK(s == doctest::Approx(std::sinh(x)).epsilon(1e-15));
  }
  CHECK_THROWS_AS(truncated_cosh_sinh(1.0, -1), DomainError);
}

TEST_CASE("covariance truncation bound") {
  for (double s1 : {0.1, 1.0, 2.0}) CHECK(covariance_truncation_bound({s1, s1 / 2}, 30).value < 1e-12);
  // one mode, N = 2: the odd tail sinh(s) - s over sinh(s)
  const double s = 0.7;
  CHECK(covariance_truncation_bound({s}, 2).value == doctest::Approx((std::sinh(s) - s) / std::sinh(s)).epsilon(1e-12));
  // N = 1: the even tail cosh(s) - 1 over sinh(s)
  CHECK(covariance_truncation_bound({s}, 1).value == doctest::Approx((std::cosh(s) - 1) / std::sinh(s)).epsilon(1e-12));
  // large squeezing stays finite thanks to the common shift
  CHECK(std::isfinite(covariance_truncation_bound({800.0, 1.0}, 4).value));
  CHECK(truncation_ratio_sinh(s, 2) == doctest::Approx((std::sinh(s) - s) / std::sinh(s)).epsilon(1e-12));
  CHECK(truncation_ratio_cosh(s, 2) == doctest::Approx((std::cosh(s) - 1 - s * s / 2) / std::sinh(s)).epsilon(1e-12));
  CHECK_THROWS_AS(covariance_truncation_bound({}, 2), DomainError);
  CHECK_THROWS_AS(covariance_truncation_bound({0.0}, 2), DomainError);
}

TEST_CASE("determinant truncation bounds") {
  CHECK(det_truncation_bound_eigen({0.0, 0.0}, 1.0, 2).value == 0.0);
  const double ref = std::expm1(std::abs(std::log(1.1) - 0.1 + 0.005) / 2);
  CHECK(det_truncation_bound_eigen({0.1}, 1.0, 2).value == doctest::Approx(ref).epsilon(1e-12));
  CHECK(ref == doctest::Approx(1.55e-4).epsilon(1e-2));
  CHECK(det_truncation_bound_hs(0.0, 0.0, 1.0, 2).value == 0.0);
  CHECK(det_truncation_bound_hs(1e-150, 2e-300, 1.0, 2).value < 1e-200);
  CHECK(log_series_remainder(0.3, 2) == doctest::Approx(std::log1p(0.3) - 0.3 + 0.045).epsilon(1e-12));
  CHECK(log_series_remainder(-0.8, 3) == doctest::Approx(std::log1p(-0.8) + 0.8 + 0.32 + 0.512 / 3).epsilon(1e-12));
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-0.3, 0.45);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> l(8);
    for (double& x : l) x = u(rng);
    double hs2 = 0.0, l1 = 0.0;
    for (double x : l) {
      hs2 += x * x;
      l1 = std::max(l1, std::abs(x));
    }
    for (double e2 : {0.1, 0.5, 1.0}) {
      for (int n : {1, 2, 3, 5}) {
        CHECK(det_truncation_bound_eigen(l, e2, n).value <= det_truncation_bound_hs(l1, hs2, e2, n).value * (1 + 1e-12));
      }
    }
  }
  CHECK_THROWS_AS(det_truncation_bound_eigen({1.2}, 1.0, 2), DomainError);
  CHECK_THROWS_AS(det_truncation_bound_hs(1.2, 2.0, 1.0, 2), DomainError);
}

TEST_CASE("Poisson versus second-order bound") {
  CHECK(poisson_vs_n2_bound(0.0, 3.0, 1.0, 1.0, ProcessType::TypeII).value == 0.0);
  CHECK(poisson_vs_n2_bound(1.0, 1.0, 1.0, 1.0, ProcessType::TypeII).value ==
        doctest::Approx(1 - std::exp(-1.0 / 16)).epsilon(1e-14));
  CHECK(poisson_vs_n2_bound(1.0, 1e12, 1.0, 1.0, ProcessType::TypeII).value < 1e-12);
  CHECK(poisson_vs_n2_bound(0.5, 2.0, 1.0, 1.0, ProcessType::TypeII).kind == BoundKind::PoissonVsN2);
}

TEST_CASE("vacuum range brackets exact sources") {
  CHECK(vacuum_range(0.0, ProcessType::TypeII) == std::pair<double, double>{1.0, 1.0});
  const auto [up, lo] = vacuum_range(1.0, ProcessType::TypeII);
  CHECK(up == doctest::Approx(0.5));
  CHECK(lo == doctest::Approx(0.367879441171442).epsilon(1e-14));
  CHECK(vacuum_range(1.0, ProcessType::Type0I).first == doctest::Approx(1 / std::sqrt(3.0)));
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    SchmidtSpectrum s;
    s.coefficients.resize(1 + trial % 7);
    for (double& c : s.coefficients) c = u(rng) + 1e-3;
    double nrm = 0.0;
    for (double c : s.coefficients) nrm += c * c;
    for (double& c : s.coefficients) c /= std::sqrt(nrm);
    std::sort(s.coefficients.rbegin(), s.coefficients.rend());
    for (auto p : {ProcessType::Type0I, ProcessType::TypeII}) {
      const double mu = 3.0 * u(rng);
      VacuumQuery q;
      q.schmidt = s;
      q.process = p;
      q.gain = gain_for_mean_pairs(s.coefficients, mu, p);
      const double v = vacuum_probability(q, Method::Exact);
      const auto [hi, low] = vacuum_range(mu, p);
      CHECK(v <= hi * (1 + 1e-12));
      CHECK(v >= low * (1 - 1e-12));
    }
  }
}

TEST_CASE("interval certificate and bound sweeps") {
  const auto [lo, hi] = vacuum_interval(0.4, 0.02);
  CHECK(lo == doctest::Approx(std::exp(-0.2)));
  CHECK(hi == doctest::Approx(std::exp(-0.19)));
  CHECK(absolute_from_relative(0.1, 0.5) == doctest::Approx(0.1 * 0.5 / 0.9));
  std::ostringstream os;
  write_bound_sweep(os, {1.0, 2.0}, {covariance_truncation_bound({1.0}, 2), covariance_truncation_bound({2.0}, 2)});
  std::istringstream is(os.str());
  const auto rows = csv::parse(is);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0][0] == "x");
  CHECK(rows[0][1] == "value");
  CHECK(rows[0][2] == "kind");
  CHECK(rows[1][2] == "COVARIANCE_TRUNC");
}
