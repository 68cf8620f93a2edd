#pragma once

// Closed-form error bounds for the covariance series, the truncated log-determinant
// series and the Poisson approximation, plus the exact vacuum-probability range.

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "biphoton/covariance.hpp"

namespace biphoton {

enum class BoundKind { CovarianceTrunc, DetTruncEigen, DetTruncHs, PoissonVsN2, VacuumRange };
std::string to_string(BoundKind k);

struct BoundReport {
  double value = 0.0;
  BoundKind kind = BoundKind::VacuumRange;
  std::map<std::string, double> inputs;
};

/// Even and odd partial sums of exp(x) up to total order n.
std::pair<double, double> truncated_cosh_sinh(double x, int n);

/// [sinh x - s_N(x)] / sinh x and [cosh x - c_N(x)] / sinh x.
double truncation_ratio_sinh(double sigma, int n);
double truncation_ratio_cosh(double sigma, int n);

/// Relative trace-norm error of the order-N covariance series from the leading squeezing parameters.
BoundReport covariance_truncation_bound(const std::vector<double>& sigmas, int n);

/// Err_N(x) = ln(1 + x) + sum_{n=1}^N (-x)^n / n, summed as a tail when |x| is small.
double log_series_remainder(double x, int n);

/// exp(1/2 sum_j |Err_N(eta2 Lambda_j)|) - 1.
BoundReport det_truncation_bound_eigen(const std::vector<double>& lambdas, double eta2, int n);
/// Relaxation through the largest eigenvalue and the Hilbert-Schmidt norm.
BoundReport det_truncation_bound_hs(double lambda1, double hs_norm2, double eta2, int n);

/// Extra relative error of dropping the fourth-order terms. eta_s and eta_i are field
/// transmittivities; type-0/I uses eta_s.
BoundReport poisson_vs_n2_bound(double gain, double schmidt_k, double eta_s, double eta_i,
                                ProcessType process);

/// (upper, lower) vacuum probability over all spectra with mean pair number mu.
std::pair<double, double> vacuum_range(double mu, ProcessType process);

/// Bounds on det(1 + K)^(-1/2) from Tr K and Tr K^2, valid when every eigenvalue of K is >= -1/2.
std::pair<double, double> vacuum_interval(double trace_k, double trace_k2);

/// Absolute error implied by a relative error bound r on the exact value, given the approximation.
double absolute_from_relative(double r, double approx);

/// Bound sweep export: `x,value,kind,<input names>`.
void write_bound_sweep(std::ostream& os, const std::vector<double>& xs, const std::vector<BoundReport>& reports);

}  // namespace biphoton
