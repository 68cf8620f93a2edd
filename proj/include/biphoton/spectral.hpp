#pragma once

// Joint spectral amplitudes: grids, the Gaussian model, Schmidt analysis.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "biphoton/block_operator.hpp"

namespace biphoton {

struct FrequencyGrid {
  std::vector<double> points;
  std::vector<double> weights;

  /// n equally spaced points on [lo, hi] with trapezoidal weights.
  static FrequencyGrid uniform(double lo, double hi, std::size_t n);
  /// n equally spaced points with equal weights (the conjugate grid of a DFT).
  static FrequencyGrid uniform_equal_weights(double lo, double hi, std::size_t n);

  std::size_t size() const { return points.size(); }
  double spacing() const;
  bool is_uniform(double rel_tol = 1e-9) const;
  RVector sqrt_weights() const;
  /// Throws ConfigError unless points increase strictly, weights are positive and n >= 2.
  void validate() const;
  bool operator==(const FrequencyGrid& o) const = default;
};

struct GaussianJsaModel {
  double delta_plus = 1.0;
  double delta_minus = 1.0;
  double center_signal = 0.0;
  double center_idler = 0.0;

  double aspect_ratio() const { return delta_minus / delta_plus; }
  /// Standard deviation of either marginal spectral density.
  double marginal_std() const;
  void validate() const;
};

struct DiscretizedJsa {
  FrequencyGrid grid_signal;
  FrequencyGrid grid_idler;
  CMatrix values;  // values(m, n) = psi(omega_s[m], omega_i[n])

  /// sqrt(w_m) psi_mn sqrt(w_n)
  CMatrix symmetrized() const;
  /// sum_mn w_m w_n |psi_mn|^2
  double norm2() const;
};

struct SchmidtSpectrum {
  std::vector<double> coefficients;      // sqrt(lambda_j), descending
  std::optional<CMatrix> modes_signal;   // column j holds u_j on the signal grid
  std::optional<CMatrix> modes_idler;    // column j holds v_j on the idler grid
  double truncation_tail = 0.0;

  std::vector<double> lambdas() const;
  bool has_modes() const { return modes_signal.has_value() && modes_idler.has_value(); }
};

/// Grids of n points each, wide enough for the coverage check of build_gaussian_jsa.
/// extent_sigma scales the half-width in marginal standard deviations.
std::pair<FrequencyGrid, FrequencyGrid> default_gaussian_grids(const GaussianJsaModel& model,
                                                               std::size_t points,
                                                               double extent_sigma = 6.0);
/// Point count giving the default resolution (two samples per narrower width).
std::size_t default_gaussian_points(const GaussianJsaModel& model, double extent_sigma = 6.0);

/// Upper bound on the JSD mass outside the rectangle spanned by the grids.
double gaussian_mass_outside(const GaussianJsaModel& model, const FrequencyGrid& gs,
                             const FrequencyGrid& gi);

DiscretizedJsa build_gaussian_jsa(const GaussianJsaModel& model, const FrequencyGrid& grid_s,
                                  const FrequencyGrid& grid_i);

SchmidtSpectrum analytic_gaussian_schmidt(double aspect_ratio, std::size_t j_max);
double analytic_gaussian_schmidt_number(double aspect_ratio);

SchmidtSpectrum schmidt_decompose(const DiscretizedJsa& jsa,
                                  std::optional<std::size_t> rank = std::nullopt);

std::pair<std::vector<double>, std::vector<double>> marginals(const DiscretizedJsa& jsa);

double schmidt_number(const SchmidtSpectrum& spectrum);

void write_jsa_csv(std::ostream& os, const DiscretizedJsa& jsa);
/// Reads the long-format CSV, infers both grids and renormalizes.
DiscretizedJsa read_jsa_csv(std::istream& is);

}  // namespace biphoton
