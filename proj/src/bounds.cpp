#include "biphoton/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "biphoton/csv.hpp"
#include "biphoton/errors.hpp"
#include "biphoton/numerics.hpp"

namespace biphoton {

namespace {

// sum over n > n0 with n of the given parity of sigma^n / n!, scaled by e^-shift
double exp_tail(double sigma, int n0, int parity, double shift) {
  if (sigma == 0.0) return 0.0;
  const double ls = std::log(sigma);
  int n = n0 + 1;
  if (n % 2 != parity) ++n;
  CompensatedSum sum;
  for (;; n += 2) {
    const double term = std::exp(n * ls - std::lgamma(n + 1.0) - shift);
    sum.add(term);
    if (n > sigma && term <= 1e-18 * std::abs(sum.value())) break;
    if (n > sigma + 50.0 * std::sqrt(sigma + 1.0) + 200.0) break;
  }
  return sum.value();
}

// sinh(sigma) e^-shift
double scaled_sinh(double sigma, double shift) {
  if (sigma < 20.0) return std::sinh(sigma) * std::exp(-shift);
  return 0.5 * (std::exp(sigma - shift) - std::exp(-sigma - shift));
}

// sum_{k > n} x^k / k for 0 <= x < 1
double log_tail(double x, int n) {
  if (x == 0.0) return 0.0;
  if (x > 0.5) {
    double partial = 0.0;
    double p = 1.0;
    for (int k = 1; k <= n; ++k) {
      p *= x;
      partial += p / k;
    }
    return -std::log1p(-x) - partial;
  }
  CompensatedSum sum;
  double p = std::pow(x, n);
  for (int k = n + 1; k < n + 2000; ++k) {
    p *= x;
    const double term = p / k;
    sum.add(term);
    if (term <= 1e-19 * sum.value()) break;
  }
  return sum.value();
}

void check_order(int n) {
  if (n < 0) throw DomainError("truncation order must be >= 0");
}

}  // namespace

std::string to_string(BoundKind k) {
  switch (k) {
    case BoundKind::CovarianceTrunc: return "COVARIANCE_TRUNC";
    case BoundKind::DetTruncEigen: return "DET_TRUNC_EIGEN";
    case BoundKind::DetTruncHs: return "DET_TRUNC_HS";
    case BoundKind::PoissonVsN2: return "POISSON_VS_N2";
    case BoundKind::VacuumRange: return "VACUUM_RANGE";
  }
  return "UNKNOWN";
}

std::pair<double, double> truncated_cosh_sinh(double x, int n) {
  check_order(n);
  double c = 0.0;
  double s = 0.0;
  double term = 1.0;
  for (int k = 0; k <= n; ++k) {
    if (k > 0) term *= x / k;
    (k % 2 == 0 ? c : s) += term;
  }
  return {c, s};
}

double truncation_ratio_sinh(double sigma, int n) {
  check_order(n);
  if (!(sigma > 0.0)) throw DomainError("ratio needs sigma > 0");
  return exp_tail(sigma, n, 1, sigma) / scaled_sinh(sigma, sigma);
}

double truncation_ratio_cosh(double sigma, int n) {
  check_order(n);
  if (!(sigma > 0.0)) throw DomainError("ratio needs sigma > 0");
  return exp_tail(sigma, n, 0, sigma) / scaled_sinh(sigma, sigma);
}

BoundReport covariance_truncation_bound(const std::vector<double>& sigmas, int n) {
  check_order(n);
  if (sigmas.empty()) throw DomainError("need at least one squeezing parameter");
  double shift = 0.0;
  for (double s : sigmas) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw DomainError("squeezing parameters must be finite and >= 0");
    shift = std::max(shift, s);
  }
  if (shift == 0.0) throw DomainError("all squeezing parameters vanish");
  // even N: the odd part of the tail; odd N: the even part
  const int parity = n % 2 == 0 ? 1 : 0;
  CompensatedSum num;
  CompensatedSum den;
  for (double s : sigmas) {
    num.add(exp_tail(s, n, parity, shift));
    den.add(scaled_sinh(s, shift));
  }
  BoundReport r;
  r.kind = BoundKind::CovarianceTrunc;
  r.value = num.value() / den.value();
  r.inputs = {{"N", static_cast<double>(n)},
              {"M", static_cast<double>(sigmas.size())},
              {"sigma1", shift}};
  return r;
}

double log_series_remainder(double x, int n) {
  check_order(n);
  if (!(x > -1.0)) throw DomainError("log(1 + x) needs x > -1");
  if (std::abs(x) <= 0.5) {
    // -sum_{k > n} (-x)^k / k
    CompensatedSum sum;
    double p = std::pow(-x, n);
    for (int k = n + 1; k < n + 2000; ++k) {
      p *= -x;
      const double term = p / k;
      sum.add(term);
      if (std::abs(term) <= 1e-19 * std::abs(sum.value()) || p == 0.0) break;
    }
    return -sum.value();
  }
  double partial = 0.0;
  double p = 1.0;
  for (int k = 1; k <= n; ++k) {
    p *= -x;
    partial += p / k;
  }
  return std::log1p(x) + partial;
}

BoundReport det_truncation_bound_eigen(const std::vector<double>& lambdas, double eta2, int n) {
  check_order(n);
  if (!(eta2 >= 0.0 && eta2 <= 1.0)) throw DomainError("eta^2 must lie in [0, 1]");
  CompensatedSum sum;
  double lambda1 = 0.0;
  for (double l : lambdas) {
    const double x = eta2 * l;
    if (!(std::abs(x) < 1.0)) throw DomainError("log series diverges: |eta^2 Lambda| >= 1");
    sum.add(std::abs(log_series_remainder(x, n)));
    lambda1 = std::max(lambda1, std::abs(l));
  }
  BoundReport r;
  r.kind = BoundKind::DetTruncEigen;
  r.value = std::expm1(0.5 * sum.value());
  r.inputs = {{"N", static_cast<double>(n)}, {"eta2", eta2}, {"Lambda1", lambda1},
              {"modes", static_cast<double>(lambdas.size())}};
  return r;
}

BoundReport det_truncation_bound_hs(double lambda1, double hs_norm2, double eta2, int n) {
  check_order(n);
  if (!(eta2 >= 0.0 && eta2 <= 1.0)) throw DomainError("eta^2 must lie in [0, 1]");
  if (!(hs_norm2 >= 0.0)) throw DomainError("Hilbert-Schmidt norm must be >= 0");
  const double l1 = std::abs(lambda1);
  const double x = eta2 * l1;
  if (!(x < 1.0)) throw DomainError("log series diverges: eta^2 |Lambda_1| >= 1");
  BoundReport r;
  r.kind = BoundKind::DetTruncHs;
  r.inputs = {{"N", static_cast<double>(n)}, {"eta2", eta2}, {"Lambda1", l1}, {"hs_norm2", hs_norm2}};
  if (l1 == 0.0 || x == 0.0) return r;
  // log of the base equals the tail sum_{k > N} x^k / k
  const double exponent = hs_norm2 / (2.0 * l1 * l1);
  r.value = std::expm1(exponent * log_tail(x, n));
  return r;
}

BoundReport poisson_vs_n2_bound(double gain, double schmidt_k, double eta_s, double eta_i,
                                ProcessType process) {
  if (!(gain >= 0.0) || !(schmidt_k >= 1.0) || !(eta_s >= 0.0) || !(eta_i >= 0.0)) {
    throw DomainError("bound inputs must be non-negative (K >= 1)");
  }
  const double c4 = std::pow(gain, 4);
  double arg = 0.0;
  if (process == ProcessType::Type0I) {
    arg = std::pow(eta_s, 4) * c4 / (2.0 * schmidt_k);
  } else {
    arg = (std::pow(eta_s, 4) + std::pow(eta_i, 4)) * c4 / (32.0 * schmidt_k);
  }
  BoundReport r;
  r.kind = BoundKind::PoissonVsN2;
  r.value = -std::expm1(-arg);
  r.inputs = {{"C", gain}, {"K", schmidt_k}, {"eta_s", eta_s}, {"eta_i", eta_i}};
  return r;
}

std::pair<double, double> vacuum_range(double mu, ProcessType process) {
  if (!(mu >= 0.0)) throw DomainError("mean pair number must be >= 0");
  const double upper = process == ProcessType::Type0I ? 1.0 / std::sqrt(1.0 + 2.0 * mu) : 1.0 / (1.0 + mu);
  return {upper, std::exp(-mu)};
}

std::pair<double, double> vacuum_interval(double trace_k, double trace_k2) {
  return {std::exp(-0.5 * trace_k), std::exp(-0.5 * trace_k + 0.5 * trace_k2)};
}

double absolute_from_relative(double r, double approx) {
  if (!(r >= 0.0)) return std::numeric_limits<double>::infinity();
  if (r >= 1.0) return r;
  return std::min(r, r * std::abs(approx) / (1.0 - r));
}

void write_bound_sweep(std::ostream& os, const std::vector<double>& xs, const std::vector<BoundReport>& reports) {
  if (xs.size() != reports.size()) throw ShapeError("one x value per bound report");
  csv::Writer w(os);
  std::vector<std::string> head{"x", "value", "kind"};
  if (!reports.empty()) {
    for (const auto& [k, v] : reports.front().inputs) head.push_back(k);
  }
  w.header(head);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    std::vector<std::string> row{csv::format_number(xs[i]), csv::format_number(reports[i].value),
                                 to_string(reports[i].kind)};
    for (const auto& [k, v] : reports[i].inputs) row.push_back(csv::format_number(v));
    w.row(row);
  }
}

}  // namespace biphoton
