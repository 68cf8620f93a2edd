#include "biphoton/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>

#include <Eigen/Eigenvalues>

#include "biphoton/csv.hpp"
#include "biphoton/errors.hpp"

namespace biphoton {

namespace {

constexpr double kMaxSigma = 700.0;  // e^sigma must stay finite

void require_symmetric(const DiscretizedJsa& jsa) {
  if (!(jsa.grid_signal == jsa.grid_idler)) {
    throw ConfigError("type-0/I sources need identical signal and idler grids");
  }
  const double scale = jsa.values.cwiseAbs().maxCoeff();
  const double asym = (jsa.values - jsa.values.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * std::max(scale, 1e-300)) {
    throw ConfigError("type-0/I sources need a symmetric JSA, psi(w, w') = psi(w', w)");
  }
}

}  // namespace

ProcessType parse_process(const std::string& s) {
  if (s == "type0" || s == "type-0" || s == "type1" || s == "type-I" || s == "type0I" ||
      s == "type-0/I" || s == "TYPE_0I") {
    return ProcessType::Type0I;
  }
  if (s == "type2" || s == "type-II" || s == "typeII" || s == "TYPE_II") return ProcessType::TypeII;
  throw ConfigError("unknown process '" + s + "' (use type-0/I or type-II)");
}

std::string to_string(ProcessType p) { return p == ProcessType::Type0I ? "type-0/I" : "type-II"; }

SqueezingSpectrum SqueezingSpectrum::from_schmidt(const SchmidtSpectrum& s, double gain,
                                                  ProcessType process) {
  if (!(gain >= 0.0) || !std::isfinite(gain)) throw DomainError("gain must be finite and >= 0");
  SqueezingSpectrum out;
  out.process = process;
  out.gain = gain;
  const double f = process == ProcessType::Type0I ? 2.0 * gain : gain;
  out.sigmas.reserve(s.coefficients.size());
  for (double c : s.coefficients) out.sigmas.push_back(f * c);
  return out;
}

double SqueezingSpectrum::mean_photon_number() const {
  double sum = 0.0;
  double comp = 0.0;
  for (double sg : sigmas) {
    const double sh = std::sinh(sg / 2.0);
    const double v = 2.0 * sh * sh;
    const double t = sum + v;
    comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  sum += comp;
  return process == ProcessType::Type0I ? sum / 2.0 : sum;
}

double gain_for_mean_pairs(const std::vector<double>& schmidt_coefficients, double mu, ProcessType process) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw DomainError("mean pair number must be finite and >= 0");
  if (mu == 0.0) return 0.0;
  if (schmidt_coefficients.empty()) throw DomainError("empty Schmidt spectrum");
  SqueezingSpectrum sq;
  sq.process = process;
  const double f = process == ProcessType::Type0I ? 2.0 : 1.0;
  auto pairs = [&](double c) {
    sq.sigmas.clear();
    for (double s : schmidt_coefficients) sq.sigmas.push_back(f * c * s);
    return sq.mean_pairs();
  };
  double lo = 0.0;
  double hi = 1.0;
  while (pairs(hi) < mu) {
    hi *= 2.0;
    if (hi > 1e6) throw DomainError("mean pair number out of reach");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (pairs(mid) < mu ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<std::size_t> ModeOperator::dims() const { return sector_dims(dofs); }

std::vector<std::size_t> sector_dims(const std::vector<DofAxis>& dofs) {
  std::vector<std::size_t> d;
  for (int rep = 0; rep < 2; ++rep) {
    for (const auto& a : dofs) d.push_back(a.grid.size());
  }
  return d;
}

std::vector<DofAxis> source_dofs(const DiscretizedJsa& jsa, ProcessType process) {
  if (process == ProcessType::Type0I) return {DofAxis{jsa.grid_signal, Domain::Frequency, "a"}};
  return {DofAxis{jsa.grid_signal, Domain::Frequency, "signal"},
          DofAxis{jsa.grid_idler, Domain::Frequency, "idler"}};
}

GeneratorZ build_generator(const DiscretizedJsa& jsa, double gain, ProcessType process) {
  if (!(gain >= 0.0) || !std::isfinite(gain)) throw DomainError("gain must be finite and >= 0");
  if (process == ProcessType::Type0I) require_symmetric(jsa);
  GeneratorZ z;
  z.process = process;
  z.dofs = source_dofs(jsa, process);
  z.op = BlockOperator(z.dims(), z.dims());
  if (gain == 0.0) return z;
  const CMatrix psi = jsa.symmetrized();
  if (process == ProcessType::Type0I) {
    z.op.set(0, 1, Block::dense(gain * psi));
    z.op.set(1, 0, Block::dense(gain * psi.adjoint()));
  } else {
    const double h = gain / 2.0;
    z.op.set(0, 3, Block::dense(h * psi));
    z.op.set(1, 2, Block::dense(h * psi.transpose()));
    z.op.set(2, 1, Block::dense(h * psi.conjugate()));
    z.op.set(3, 0, Block::dense(h * psi.adjoint()));
  }
  return z;
}

RenormalizedCovariance build_covariance_exact(const SchmidtSpectrum& spectrum,
                                              const FrequencyGrid& grid_s,
                                              const FrequencyGrid& grid_i, double gain,
                                              ProcessType process) {
  if (!spectrum.has_modes()) throw ConfigError("exact covariance needs Schmidt modes");
  if (process == ProcessType::Type0I && !(grid_s == grid_i)) {
    throw ConfigError("type-0/I sources need identical signal and idler grids");
  }
  const SqueezingSpectrum sq = SqueezingSpectrum::from_schmidt(spectrum, gain, process);
  RenormalizedCovariance g;
  if (process == ProcessType::Type0I) {
    g.dofs = {DofAxis{grid_s, Domain::Frequency, "a"}};
  } else {
    g.dofs = {DofAxis{grid_s, Domain::Frequency, "signal"}, DofAxis{grid_i, Domain::Frequency, "idler"}};
  }
  g.op = BlockOperator(g.dims(), g.dims());
  if (gain == 0.0 || sq.sigmas.empty()) return g;
  const auto j = static_cast<Eigen::Index>(sq.sigmas.size());
  CMatrix u = grid_s.sqrt_weights().cast<cd>().asDiagonal() * spectrum.modes_signal->leftCols(j);
  CMatrix v = grid_i.sqrt_weights().cast<cd>().asDiagonal() * spectrum.modes_idler->leftCols(j);
  RVector ch(j);  // (cosh sigma - 1)/2
  RVector sh(j);  // sinh sigma / 2
  for (Eigen::Index k = 0; k < j; ++k) {
    const double s = sq.sigmas[static_cast<std::size_t>(k)];
    if (s > kMaxSigma) throw DomainError("squeezing parameter too large to assemble the covariance");
    const double h = std::sinh(s / 2.0);
    ch[k] = h * h;
    sh[k] = std::sinh(s) / 2.0;
  }
  const CMatrix a = u * ch.cast<cd>().asDiagonal() * u.adjoint();
  const CMatrix b = u * sh.cast<cd>().asDiagonal() * v.adjoint();
  const CMatrix d = v * ch.cast<cd>().asDiagonal() * v.adjoint();
  if (process == ProcessType::Type0I) {
    g.op.set(0, 0, Block::dense(a));
    g.op.set(0, 1, Block::dense(b));
    g.op.set(1, 0, Block::dense(b.adjoint()));
    g.op.set(1, 1, Block::dense(d));
  } else {
    // (a, b, a^dag, b^dag): the (a, b^dag) sector and its complex conjugate
    g.op.set(0, 0, Block::dense(a));
    g.op.set(0, 3, Block::dense(b));
    g.op.set(3, 0, Block::dense(b.adjoint()));
    g.op.set(3, 3, Block::dense(d));
    g.op.set(2, 2, Block::dense(a.conjugate()));
    g.op.set(2, 1, Block::dense(b.conjugate()));
    g.op.set(1, 2, Block::dense(b.transpose()));
    g.op.set(1, 1, Block::dense(d.conjugate()));
  }
  return g;
}

RenormalizedCovariance covariance_series(const GeneratorZ& z, int order) {
  if (order < 1) throw DomainError("series order must be at least 1");
  RenormalizedCovariance g;
  g.dofs = z.dofs;
  const BlockOperator two_z = z.op.scaled(2.0);
  BlockOperator term = two_z;  // (2Z)^n / n!
  BlockOperator acc = term.scaled(0.5);
  for (int n = 2; n <= order; ++n) {
    term = (term * two_z).scaled(1.0 / n);
    acc = acc + term.scaled(0.5);
  }
  g.op = std::move(acc);
  return g;
}

std::vector<double> covariance_eigenvalues(const SqueezingSpectrum& spectrum) {
  std::vector<double> out;
  const int rep = spectrum.process == ProcessType::TypeII ? 2 : 1;
  for (double s : spectrum.sigmas) {
    if (s > kMaxSigma) throw DomainError("squeezing parameter overflows e^sigma");
    const double plus = std::expm1(s) / 2.0;
    const double minus = std::expm1(-s) / 2.0;
    for (int r = 0; r < rep; ++r) {
      out.push_back(plus);
      out.push_back(minus);
    }
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

double mean_photon_number(const RenormalizedCovariance& gamma) { return gamma.op.trace().real() / 2.0; }

std::vector<double> hermitian_eigenvalues(const BlockOperator& op) {
  CMatrix m = op.to_dense();
  Eigen::MatrixXcd h = (m + m.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw DomainError("Hermitian eigensolver failed");
  const RVector ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

namespace {
Norms norms_from(const std::vector<double>& ev) {
  Norms n;
  double hs = 0.0;
  for (double e : ev) {
    n.trace_norm += std::abs(e);
    hs += e * e;
    n.largest_abs_eigenvalue = std::max(n.largest_abs_eigenvalue, std::abs(e));
  }
  n.hs_norm = std::sqrt(hs);
  return n;
}
}  // namespace

Norms norms(const RenormalizedCovariance& gamma) { return norms_from(hermitian_eigenvalues(gamma.op)); }

Norms norms(const SqueezingSpectrum& spectrum) { return norms_from(covariance_eigenvalues(spectrum)); }

void write_blocks_csv(std::ostream& os, const BlockOperator& op) {
  csv::Writer w(os);
  w.header({"block_row", "block_col", "row", "col", "re", "im"});
  for (std::size_t i = 0; i < op.block_rows(); ++i) {
    for (std::size_t j = 0; j < op.block_cols(); ++j) {
      if (op.at(i, j).is_zero()) continue;
      const CMatrix m = op.at(i, j).to_dense();
      for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
          if (m(r, c) == cd{}) continue;
          w.row(std::vector<double>{static_cast<double>(i), static_cast<double>(j),
                                    static_cast<double>(r), static_cast<double>(c), m(r, c).real(),
                                    m(r, c).imag()});
        }
      }
    }
  }
}

}  // namespace biphoton
