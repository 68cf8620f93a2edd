#include "biphoton/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "biphoton/errors.hpp"

namespace biphoton {

namespace {

void check_dof(std::size_t dof, const std::vector<DofAxis>& dofs) {
  if (dof >= dofs.size()) {
    throw ConfigError("DOF index " + std::to_string(dof) + " out of range (M = " +
                      std::to_string(dofs.size()) + ")");
  }
}

SymplecticTransform diagonal_transform(const std::vector<DofAxis>& dofs,
                                       const std::vector<CVector>& annihilation) {
  SymplecticTransform t;
  t.in_dofs = t.out_dofs = dofs;
  const auto dims = sector_dims(dofs);
  t.s = BlockOperator(dims, dims);
  const std::size_t m = dofs.size();
  for (std::size_t k = 0; k < m; ++k) {
    t.s.set(k, k, Block::diagonal(annihilation[k]));
    t.s.set(m + k, m + k, Block::diagonal(annihilation[k].conjugate()));
  }
  return t;
}

bool same_axes(const std::vector<DofAxis>& a, const std::vector<DofAxis>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k].grid.size() != b[k].grid.size() || a[k].domain != b[k].domain) return false;
  }
  return true;
}

}  // namespace

Window Window::range(double lo, double hi, Domain d) {
  if (!(lo <= hi)) throw ConfigError("window needs lo <= hi");
  return {Kind::Range, lo, hi, d};
}

DetectionProjection DetectionProjection::full(std::size_t m) {
  return {std::vector<Window>(m, Window::full())};
}

DetectionProjection DetectionProjection::empty(std::size_t m) {
  return {std::vector<Window>(m, Window::empty())};
}

RVector window_mask(const Window& w, const DofAxis& axis) {
  const std::size_t n = axis.grid.size();
  switch (w.kind) {
    case Window::Kind::Full:
      return RVector::Ones(static_cast<Eigen::Index>(n));
    case Window::Kind::Empty:
      return RVector::Zero(static_cast<Eigen::Index>(n));
    case Window::Kind::Range:
      break;
  }
  if (w.domain != axis.domain) {
    throw ConfigError(std::string("window is given in the ") +
                      (w.domain == Domain::Time ? "time" : "frequency") + " domain but DOF '" +
                      axis.label + "' is in the " +
                      (axis.domain == Domain::Time ? "time" : "frequency") +
                      " domain; add a fourier step first");
  }
  const auto& p = axis.grid.points;
  if (w.hi < p.front() || w.lo > p.back()) {
    throw CoverageError("window lies outside the grid of DOF '" + axis.label + "'");
  }
  // outward rounding: last point <= lo through first point >= hi
  std::size_t lo = static_cast<std::size_t>(std::upper_bound(p.begin(), p.end(), w.lo) - p.begin());
  lo = lo == 0 ? 0 : lo - 1;
  std::size_t hi = static_cast<std::size_t>(std::lower_bound(p.begin(), p.end(), w.hi) - p.begin());
  hi = std::min(hi, n - 1);
  RVector m = RVector::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t k = lo; k <= hi; ++k) m[static_cast<Eigen::Index>(k)] = 1.0;
  return m;
}

LossProfile LossProfile::uniform(const std::vector<DofAxis>& dofs, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw ConfigError("transmittivity must lie in [0, 1]");
  LossProfile p;
  for (const auto& d : dofs) p.eta.push_back(RVector::Constant(static_cast<Eigen::Index>(d.grid.size()), eta));
  return p;
}

SymplecticTransform identity_transform(const std::vector<DofAxis>& dofs) {
  SymplecticTransform t;
  t.in_dofs = t.out_dofs = dofs;
  t.s = BlockOperator::identity(sector_dims(dofs));
  return t;
}

SymplecticTransform phase_shift(double phi0, double tau, double beta_l,
                                const std::vector<DofAxis>& dofs, std::size_t dof) {
  check_dof(dof, dofs);
  if (dofs[dof].domain != Domain::Frequency) {
    throw ConfigError("phase shifts act on frequency-domain DOFs");
  }
  if (phi0 == 0.0 && tau == 0.0 && beta_l == 0.0) return identity_transform(dofs);
  std::vector<CVector> diag;
  for (const auto& d : dofs) diag.push_back(CVector::Ones(static_cast<Eigen::Index>(d.grid.size())));
  const auto& w = dofs[dof].grid.points;
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double phi = phi0 + tau * w[k] + 0.5 * beta_l * w[k] * w[k];
    diag[dof][static_cast<Eigen::Index>(k)] = std::polar(1.0, phi);
  }
  return diagonal_transform(dofs, diag);
}

FrequencyGrid fourier_time_grid(const FrequencyGrid& freq) {
  if (!freq.is_uniform()) throw ConfigError("Fourier transform needs a uniform grid");
  const std::size_t n = freq.size();
  const double dt = 2.0 * std::numbers::pi / (static_cast<double>(n) * freq.spacing());
  const double half = dt * static_cast<double>(n - 1) / 2.0;
  return FrequencyGrid::uniform_equal_weights(-half, half, n);
}

SymplecticTransform fourier(const std::vector<DofAxis>& dofs, std::size_t dof) {
  check_dof(dof, dofs);
  if (dofs[dof].domain != Domain::Frequency) throw ConfigError("DOF is already in the time domain");
  const FrequencyGrid tg = fourier_time_grid(dofs[dof].grid);
  const auto n = static_cast<Eigen::Index>(tg.size());
  CMatrix f(n, n);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index j = 0; j < n; ++j) {
      f(k, j) = std::polar(norm, -dofs[dof].grid.points[static_cast<std::size_t>(j)] *
                                     tg.points[static_cast<std::size_t>(k)]);
    }
  }
  SymplecticTransform t = identity_transform(dofs);
  t.out_dofs[dof].grid = tg;
  t.out_dofs[dof].domain = Domain::Time;
  const std::size_t m = dofs.size();
  t.s.set(dof, dof, Block::dense(f));
  t.s.set(m + dof, m + dof, Block::dense(f.conjugate()));
  return t;
}

SymplecticTransform beam_splitter(const RVector& t, const RVector& r, std::size_t p, std::size_t q,
                                  const std::vector<DofAxis>& dofs) {
  check_dof(p, dofs);
  check_dof(q, dofs);
  if (p == q) throw ConfigError("beam splitter needs two distinct DOFs");
  if (!(dofs[p].grid == dofs[q].grid) || dofs[p].domain != dofs[q].domain) {
    throw ConfigError("beam splitter DOFs must share grid and domain");
  }
  const auto n = static_cast<Eigen::Index>(dofs[p].grid.size());
  if (t.size() != n || r.size() != n) throw ConfigError("beam splitter profiles must match the grid");
  for (Eigen::Index k = 0; k < n; ++k) {
    if (std::abs(t[k] * t[k] + r[k] * r[k] - 1.0) > 1e-12) {
      throw ConfigError("beam splitter violates T^2 + R^2 = 1");
    }
  }
  SymplecticTransform bs = identity_transform(dofs);
  const std::size_t m = dofs.size();
  for (std::size_t sector : {std::size_t{0}, m}) {
    bs.s.set(sector + p, sector + p, Block::diagonal(t.cast<cd>()));
    bs.s.set(sector + p, sector + q, Block::diagonal(r.cast<cd>()));
    bs.s.set(sector + q, sector + p, Block::diagonal((-r).cast<cd>()));
    bs.s.set(sector + q, sector + q, Block::diagonal(t.cast<cd>()));
  }
  return bs;
}

SymplecticTransform loss_transform(const LossProfile& eta, const std::vector<DofAxis>& dofs) {
  if (eta.eta.size() != dofs.size()) throw ShapeError("loss profile needs one entry per DOF");
  std::vector<CVector> diag;
  for (std::size_t k = 0; k < dofs.size(); ++k) {
    if (static_cast<std::size_t>(eta.eta[k].size()) != dofs[k].grid.size()) {
      throw ShapeError("loss profile grid does not match DOF '" + dofs[k].label + "'");
    }
    if ((eta.eta[k].array() < 0.0).any() || (eta.eta[k].array() > 1.0).any()) {
      throw ConfigError("transmittivity must lie in [0, 1]");
    }
    diag.push_back(eta.eta[k].cast<cd>());
  }
  SymplecticTransform t = diagonal_transform(dofs, diag);
  t.symplectic = t.passive = (diag.empty() || std::all_of(diag.begin(), diag.end(), [](const CVector& d) {
                                return (d.array() == cd{1.0}).all();
                              }));
  return t;
}

SymplecticTransform projection_transform(const DetectionProjection& p,
                                         const std::vector<DofAxis>& dofs) {
  if (p.windows.size() != dofs.size()) throw ShapeError("projection needs one window per DOF");
  std::vector<CVector> diag;
  for (std::size_t k = 0; k < dofs.size(); ++k) diag.push_back(window_mask(p.windows[k], dofs[k]).cast<cd>());
  SymplecticTransform t = diagonal_transform(dofs, diag);
  t.symplectic = t.passive = false;
  return t;
}

SymplecticTransform compose(const SymplecticTransform& second, const SymplecticTransform& first) {
  if (!same_axes(second.in_dofs, first.out_dofs)) throw ShapeError("compose: DOF layouts differ");
  SymplecticTransform t;
  t.s = second.s * first.s;
  t.in_dofs = first.in_dofs;
  t.out_dofs = second.out_dofs;
  t.passive = first.passive && second.passive;
  t.symplectic = first.symplectic && second.symplectic;
  return t;
}

double symplectic_defect(const SymplecticTransform& s) {
  const CMatrix m = s.s.to_dense();
  auto sign = [](const std::vector<DofAxis>& dofs) {
    const auto dims = sector_dims(dofs);
    std::size_t half = 0;
    for (std::size_t k = 0; k < dofs.size(); ++k) half += dims[k];
    RVector d = RVector::Ones(static_cast<Eigen::Index>(2 * half));
    d.tail(static_cast<Eigen::Index>(half)).setConstant(-1.0);
    return d;
  };
  const RVector kin = sign(s.in_dofs);
  const RVector kout = sign(s.out_dofs);
  const CMatrix lhs = m * kin.cast<cd>().asDiagonal() * m.adjoint();
  const CMatrix rhs = kout.cast<cd>().asDiagonal();
  return (lhs - rhs).cwiseAbs().maxCoeff();
}

double unitarity_defect(const SymplecticTransform& s) {
  const CMatrix m = s.s.to_dense();
  return (m.adjoint() * m - CMatrix::Identity(m.cols(), m.cols())).cwiseAbs().maxCoeff();
}

RenormalizedCovariance apply_loss(const RenormalizedCovariance& gamma, const LossProfile& eta) {
  return apply_transform(loss_transform(eta, gamma.dofs), gamma);
}

RenormalizedCovariance apply_transform(const SymplecticTransform& s,
                                       const RenormalizedCovariance& gamma) {
  if (!same_axes(s.in_dofs, gamma.dofs)) throw ShapeError("transform input does not match covariance DOFs");
  RenormalizedCovariance out;
  out.dofs = s.out_dofs;
  out.op = s.s * gamma.op * s.s.adjoint();
  return out;
}

RenormalizedCovariance with_vacuum(const RenormalizedCovariance& gamma,
                                   const std::vector<DofAxis>& extra) {
  RenormalizedCovariance out;
  out.dofs = gamma.dofs;
  out.dofs.insert(out.dofs.end(), extra.begin(), extra.end());
  const auto dims = sector_dims(out.dofs);
  out.op = BlockOperator(dims, dims);
  const std::size_t m = gamma.dofs.size();
  const std::size_t mt = out.dofs.size();
  auto map = [&](std::size_t i) { return i < m ? i : mt + (i - m); };
  for (std::size_t i = 0; i < 2 * m; ++i) {
    for (std::size_t j = 0; j < 2 * m; ++j) out.op.set(map(i), map(j), gamma.op.at(i, j));
  }
  return out;
}

SymplecticTransform compress(const SymplecticTransform& full, std::size_t m_prime) {
  const std::size_t m = full.in_dofs.size();
  if (m_prime > m) throw ConfigError("compress: M' exceeds the number of input DOFs");
  if (m_prime == m) return full;
  std::vector<std::size_t> rows(full.s.block_rows());
  for (std::size_t k = 0; k < rows.size(); ++k) rows[k] = k;
  std::vector<std::size_t> cols;
  for (std::size_t k = 0; k < m_prime; ++k) cols.push_back(k);
  for (std::size_t k = 0; k < m_prime; ++k) cols.push_back(m + k);
  SymplecticTransform out;
  out.s = full.s.select(rows, cols);
  out.in_dofs.assign(full.in_dofs.begin(), full.in_dofs.begin() + static_cast<std::ptrdiff_t>(m_prime));
  out.out_dofs = full.out_dofs;
  out.passive = false;
  out.symplectic = false;
  return out;
}

BlockOperator pulled_back_projection(const SymplecticTransform& s, const DetectionProjection& p) {
  const SymplecticTransform pt = projection_transform(p, s.out_dofs);
  return s.s.adjoint() * (pt.s * s.s);
}

BlockOperator compressed_determinant_operand(const SymplecticTransform& s,
                                             const DetectionProjection& p,
                                             const RenormalizedCovariance& gamma) {
  if (!same_axes(s.in_dofs, gamma.dofs)) throw ShapeError("operand: transform input does not match covariance");
  return pulled_back_projection(s, p) * gamma.op;
}

RenormalizedCovariance apply_projection(const DetectionProjection& p,
                                        const RenormalizedCovariance& gamma) {
  return apply_transform(projection_transform(p, gamma.dofs), gamma);
}

}  // namespace biphoton
