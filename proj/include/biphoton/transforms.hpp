#pragma once

// Linear mode transformations acting on the renormalized covariance as
// Gamma -> s Gamma s^dag, detection windows, and determinant compression.

#include <cstddef>
#include <vector>

#include "biphoton/block_operator.hpp"
#include "biphoton/covariance.hpp"

namespace biphoton {

struct Window {
  enum class Kind { Full, Empty, Range };
  Kind kind = Kind::Full;
  double lo = 0.0;
  double hi = 0.0;
  Domain domain = Domain::Frequency;

  static Window full() { return {}; }
  static Window empty() { return {Kind::Empty, 0.0, 0.0, Domain::Frequency}; }
  static Window range(double lo, double hi, Domain d);
};

/// One window per DOF.
struct DetectionProjection {
  std::vector<Window> windows;
  static DetectionProjection full(std::size_t m);
  static DetectionProjection empty(std::size_t m);
};

/// 0/1 mask of the grid points inside a window. Range endpoints round outward to the
/// enclosing grid points. Throws on a domain mismatch or a range missing the grid.
RVector window_mask(const Window& w, const DofAxis& axis);

struct LossProfile {
  std::vector<RVector> eta;  // field transmittivity per DOF and grid point
  static LossProfile uniform(const std::vector<DofAxis>& dofs, double eta);
};

struct SymplecticTransform {
  BlockOperator s;  // 2 M_out x 2 M_in blocks
  std::vector<DofAxis> in_dofs;
  std::vector<DofAxis> out_dofs;
  bool passive = true;     // unitary on the annihilation sector
  bool symplectic = true;  // false for loss and projections
};

SymplecticTransform identity_transform(const std::vector<DofAxis>& dofs);

/// a(w) -> exp(i phi(w)) a(w) on one DOF with phi = phi0 + tau w + beta_L w^2 / 2.
SymplecticTransform phase_shift(double phi0, double tau, double beta_l,
                                const std::vector<DofAxis>& dofs, std::size_t dof);

/// Conjugate time grid of a uniform frequency grid: spacing 2 pi / (N dw), centered on 0.
FrequencyGrid fourier_time_grid(const FrequencyGrid& freq);
/// Unitary DFT exp(-i w_n t_k)/sqrt(N) on one frequency-domain DOF.
SymplecticTransform fourier(const std::vector<DofAxis>& dofs, std::size_t dof);

/// a_p -> T a_p + R a_q, a_q -> -R a_p + T a_q pointwise in frequency.
SymplecticTransform beam_splitter(const RVector& t, const RVector& r, std::size_t p, std::size_t q,
                                  const std::vector<DofAxis>& dofs);

SymplecticTransform loss_transform(const LossProfile& eta, const std::vector<DofAxis>& dofs);
SymplecticTransform projection_transform(const DetectionProjection& p,
                                         const std::vector<DofAxis>& dofs);

/// second after first.
SymplecticTransform compose(const SymplecticTransform& second, const SymplecticTransform& first);

/// max |S K S^dag - K| with K = diag(1, -1).
double symplectic_defect(const SymplecticTransform& s);
/// max |s^dag s - 1| over the annihilation sector.
double unitarity_defect(const SymplecticTransform& s);

RenormalizedCovariance apply_loss(const RenormalizedCovariance& gamma, const LossProfile& eta);
RenormalizedCovariance apply_transform(const SymplecticTransform& s,
                                       const RenormalizedCovariance& gamma);
/// Gamma extended by vacuum DOFs, placed after the existing ones.
RenormalizedCovariance with_vacuum(const RenormalizedCovariance& gamma,
                                   const std::vector<DofAxis>& extra);

/// Keeps the columns of the first m_prime input DOFs (vacuum inputs are ordered last).
SymplecticTransform compress(const SymplecticTransform& full, std::size_t m_prime);

/// s^dag P s, the detection operator pulled back to the source DOFs.
BlockOperator pulled_back_projection(const SymplecticTransform& s, const DetectionProjection& p);
/// s^dag P s Gamma; det(1 + this) equals det(1 + P s Gamma s^dag P).
BlockOperator compressed_determinant_operand(const SymplecticTransform& s,
                                             const DetectionProjection& p,
                                             const RenormalizedCovariance& gamma);

RenormalizedCovariance apply_projection(const DetectionProjection& p,
                                        const RenormalizedCovariance& gamma);

}  // namespace biphoton
