#pragma once

// Generating functions of the detection statistics and photon-number distributions.
//
// Convention: G(w) = det(1 + W Gamma)^(-1/2) with one weight w_d per detector.
// G(0) = 1, the vacuum (no-click) probability is G(1), and
// P(n) = coefficient of prod_d (1 - w_d)^(n_d) in G.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "biphoton/block_operator.hpp"
#include "biphoton/covariance.hpp"
#include "biphoton/series.hpp"
#include "biphoton/spectral.hpp"
#include "biphoton/transforms.hpp"

namespace biphoton {

enum class Method { Exact, LogSeries, Poisson, Hermite, Linear, Quadratic };
Method parse_method(const std::string& s);
std::string to_string(Method m);

struct PoissonParams {
  double mu = 0.0;
  double p_s = 0.0;
  double p_i = 0.0;
  double p_si = 0.0;

  /// p_s + p_i - p_si, probability that at least one photon of a pair is detected.
  double p_union() const { return p_s + p_i - p_si; }
  void validate() const;
};

struct HermiteParams {
  double mu = 0.0;
  double eps2 = 0.0;
  double eta_s2 = 1.0;
  double eta_i2 = 1.0;
  void validate() const;
};

/// epsilon^2 and the corrected mean pair number from the gain and Schmidt number.
HermiteParams hermite_params(double gain, double schmidt_k, ProcessType process,
                             double eta_s2 = 1.0, double eta_i2 = 1.0);
/// g2 of the signal marginal from the moment generating function G(1 - e^t).
double hermite_g2(const HermiteParams& p);

struct ExactProductGf {
  SqueezingSpectrum spectrum;
  std::vector<double> eta2;  // intensity transmission per detector
};
struct LogSeriesGf {
  std::vector<PowerSeries> traces;  // t_n(w) = Tr[(K(w))^n], n = 1..N, polynomials in w
};
struct PoissonGf {
  PoissonParams params;
  ProcessType process = ProcessType::TypeII;
};
struct HermiteGf {
  HermiteParams params;
  ProcessType process = ProcessType::TypeII;
};

struct GeneratingFunctionSpec {
  std::variant<ExactProductGf, LogSeriesGf, PoissonGf, HermiteGf> representation;
  std::size_t detector_count = 1;
};

double evaluate_gf(const GeneratingFunctionSpec& gf, std::span<const double> w);

/// Closed-form generating function of a Schmidt-diagonal source with uniform losses.
/// Type-0/I takes one weight, type-II takes (w_s, w_i).
double gf_exact(const SqueezingSpectrum& spectrum, std::span<const double> w,
                std::span<const double> eta2 = {});

struct LogDetSeries {
  double value = 0.0;  // approximation of log det(1 + K)
  double spectral_radius_estimate = 0.0;
  bool radius_warning = false;  // estimate above 0.95
};
/// Power-iteration estimate of the spectral radius.
double spectral_radius_estimate(const BlockOperator& k, int iterations = 20);
LogDetSeries log_det_series(const BlockOperator& k, int order);

/// Traces t_n(w) = Tr[(sum_d w_d K_d)^n] for n = 1..order, collected by monomial.
std::vector<PowerSeries> trace_polynomials(const std::vector<BlockOperator>& k_ops, int order);
/// Same with a degree cap per variable.
std::vector<PowerSeries> trace_polynomials(const std::vector<BlockOperator>& k_ops, int order,
                                           const std::vector<std::size_t>& caps);
/// log G(w) for the truncated log series.
PowerSeries log_series_exponent(const std::vector<PowerSeries>& traces);

PoissonParams poisson_params(const DiscretizedJsa& jsa, const LossProfile& eta,
                             const DetectionProjection& windows, double gain, ProcessType process);
double gf_poisson(const PoissonParams& p, double w_s, double w_i);
double gf_hermite(double mu, double eps2, double eta_s2, double eta_i2, double w_s, double w_i);

/// log G(w) of the Poisson and Hermite approximations for detection operators
/// D_d = s^dag P_d s acting on the generator Z.
PowerSeries poisson_exponent(const std::vector<BlockOperator>& d_ops, const BlockOperator& z);
PowerSeries hermite_exponent(const std::vector<BlockOperator>& d_ops, const BlockOperator& z);
/// Pair parameters read off a Poisson exponent (two detectors, or one for type-0/I).
PoissonParams poisson_params_from_exponent(const PowerSeries& e, double mu, ProcessType process);

struct PhotonStatistics {
  std::vector<std::size_t> cutoffs;
  std::vector<double> probabilities;  // row-major over (cutoff_d + 1)
  double normalization_deficit = 0.0;
  double most_negative = 0.0;  // smallest raw coefficient before clipping

  double at(const std::vector<std::size_t>& n) const;
  void write_csv(std::ostream& os, int precision = 17) const;
};

PhotonStatistics pnd(const GeneratingFunctionSpec& gf, const std::vector<std::size_t>& n_max);
/// Distribution from log G given as a series in u = 1 - w.
PhotonStatistics pnd_from_log_series(const PowerSeries& log_g_u);
/// Exact distribution for detection operators D_d and covariance Gamma (dense, small problems).
PhotonStatistics pnd_exact_operator(const std::vector<BlockOperator>& d_ops, const BlockOperator& gamma,
                                    const std::vector<std::size_t>& n_max);
/// Exact log det(1 + K) through an LU factorization.
double log_det_exact(const BlockOperator& k);

/// Vacuum probability from the two-pair truncation of the source state (uniform loss,
/// unbounded windows).
double quadratic_vacuum(const SchmidtSpectrum& spectrum, double gain, double eta, ProcessType process);
double quadratic_vacuum(const SchmidtSpectrum& spectrum, double gain, double eta_s, double eta_i,
                        ProcessType process);

/// Inputs for vacuum_probability; each method reads the fields it needs.
struct VacuumQuery {
  std::optional<SchmidtSpectrum> schmidt;
  double gain = 0.0;
  ProcessType process = ProcessType::TypeII;
  double eta_s = 1.0;  // uniform field transmittivities
  double eta_i = 1.0;
  std::optional<BlockOperator> operand;  // s^dag P s Gamma, for log series
  int order = 2;
  std::optional<PoissonParams> poisson;
  std::optional<HermiteParams> hermite;
};

double vacuum_probability(const VacuumQuery& q, Method method);

}  // namespace biphoton
