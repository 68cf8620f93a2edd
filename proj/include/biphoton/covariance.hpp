#pragma once

// Renormalized covariance Gamma = (gamma - 1)/2 of the pair source, its generator Z
// and the truncated exponential series.
//
// Block layout is the standard complex ordering (a_1 .. a_M, a_1^dag .. a_M^dag).
// Type-0/I sources have one DOF; type-II sources have two (signal a, idler b).

#include <iosfwd>
#include <string>
#include <vector>

#include "biphoton/block_operator.hpp"
#include "biphoton/spectral.hpp"

namespace biphoton {

enum class ProcessType { Type0I, TypeII };
enum class Domain { Frequency, Time };

ProcessType parse_process(const std::string& s);
std::string to_string(ProcessType p);

struct DofAxis {
  FrequencyGrid grid;  // frequency or time samples, depending on domain
  Domain domain = Domain::Frequency;
  std::string label;
};

struct SqueezingSpectrum {
  std::vector<double> sigmas;  // descending
  ProcessType process = ProcessType::TypeII;
  double gain = 0.0;

  static SqueezingSpectrum from_schmidt(const SchmidtSpectrum& s, double gain, ProcessType process);
  /// Mean number of photons, sum_j (cosh sigma_j - 1) times 1/2 (type-0/I) or 1 (type-II).
  double mean_photon_number() const;
  /// Mean number of pairs: half the photon number.
  double mean_pairs() const { return mean_photon_number() / 2.0; }
};

/// Gain C giving mean pair number mu for a Schmidt spectrum (bisection on the exact law).
double gain_for_mean_pairs(const std::vector<double>& schmidt_coefficients, double mu, ProcessType process);

/// Operator over 2M blocks plus the DOF description.
struct ModeOperator {
  BlockOperator op;
  std::vector<DofAxis> dofs;
  std::size_t mode_count() const { return dofs.size(); }
  std::vector<std::size_t> dims() const;
};

struct RenormalizedCovariance : ModeOperator {};

struct GeneratorZ : ModeOperator {
  ProcessType process = ProcessType::TypeII;
};

/// Block dims (n_1..n_M, n_1..n_M) for a DOF list.
std::vector<std::size_t> sector_dims(const std::vector<DofAxis>& dofs);

/// DOF axes of the pair source for a JSA.
std::vector<DofAxis> source_dofs(const DiscretizedJsa& jsa, ProcessType process);

GeneratorZ build_generator(const DiscretizedJsa& jsa, double gain, ProcessType process);

RenormalizedCovariance build_covariance_exact(const SchmidtSpectrum& spectrum,
                                              const FrequencyGrid& grid_s,
                                              const FrequencyGrid& grid_i, double gain,
                                              ProcessType process);

RenormalizedCovariance covariance_series(const GeneratorZ& z, int order);

/// Lambda_{+j} and Lambda_{-j}, descending; type-II repeats each value.
std::vector<double> covariance_eigenvalues(const SqueezingSpectrum& spectrum);

double mean_photon_number(const RenormalizedCovariance& gamma);

struct Norms {
  double trace_norm = 0.0;
  double hs_norm = 0.0;
  double largest_abs_eigenvalue = 0.0;
};
Norms norms(const RenormalizedCovariance& gamma);
Norms norms(const SqueezingSpectrum& spectrum);
/// Eigenvalues of a Hermitian block operator, ascending.
std::vector<double> hermitian_eigenvalues(const BlockOperator& op);

/// Debug dump: one row per nonzero entry, `block_row,block_col,row,col,re,im`.
void write_blocks_csv(std::ostream& os, const BlockOperator& op);

}  // namespace biphoton
