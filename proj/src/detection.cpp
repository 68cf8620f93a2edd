#include "biphoton/detection.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>

#include <Eigen/LU>

#include "biphoton/csv.hpp"
#include "biphoton/errors.hpp"
#include "biphoton/kernels.hpp"
#include "biphoton/numerics.hpp"

namespace biphoton {

namespace {

constexpr std::size_t kMaxSeriesSize = 1u << 20;

using Monomial = std::vector<std::size_t>;
using MatPoly = std::map<Monomial, BlockOperator>;

void accumulate(MatPoly& p, const Monomial& k, BlockOperator m) {
  auto it = p.find(k);
  if (it == p.end()) {
    p.emplace(k, std::move(m));
  } else {
    it->second = it->second + m;
  }
}

bool within(const Monomial& k, const Monomial& caps, std::size_t max_degree) {
  std::size_t deg = 0;
  for (std::size_t d = 0; d < k.size(); ++d) {
    if (k[d] > caps[d]) return false;
    deg += k[d];
  }
  return deg <= max_degree;
}

// p * (l0 + sum_d w_d l_d), monomials beyond the caps dropped
MatPoly multiply_letters(const MatPoly& p, const BlockOperator* l0, const std::vector<BlockOperator>& ld,
                         const Monomial& caps, std::size_t max_degree) {
  MatPoly out;
  for (const auto& [k, c] : p) {
    if (l0 != nullptr) accumulate(out, k, c * *l0);
    for (std::size_t d = 0; d < ld.size(); ++d) {
      Monomial kk = k;
      ++kk[d];
      if (within(kk, caps, max_degree)) accumulate(out, kk, c * ld[d]);
    }
  }
  return out;
}

void check_series_size(const std::vector<std::size_t>& cutoffs) {
  std::size_t total = 1;
  for (std::size_t c : cutoffs) {
    total *= c + 1;
    if (total > kMaxSeriesSize) throw DomainError("photon-number cutoff too large for series extraction");
  }
}

std::size_t expected_detectors(ProcessType p) { return p == ProcessType::Type0I ? 1 : 2; }

// log G of the Schmidt-diagonal source at "no-click weight" y
double log_gf_product(const std::vector<double>& sigmas, ProcessType process, double y) {
  const double p = process == ProcessType::Type0I ? 0.5 : 1.0;
  CompensatedSum sum;
  for (double s : sigmas) {
    const double c = std::cosh(s / 2.0);
    const double sech2 = std::isfinite(c) ? 1.0 / (c * c) : 0.0;
    const double radicand = (1.0 - y) + y * sech2;
    if (!(radicand > 0.0)) throw DomainError("generating function argument outside its domain");
    sum.add(2.0 * log_cosh(s / 2.0) + std::log(radicand));
  }
  return -p * sum.value();
}

// y = prod over the detectors of (1 - eta2 w), squared for type-0/I
double no_click_weight(ProcessType process, std::span<const double> w, std::span<const double> eta2) {
  if (process == ProcessType::Type0I) {
    const double f = 1.0 - eta2[0] * w[0];
    return f * f;
  }
  return (1.0 - eta2[0] * w[0]) * (1.0 - eta2[1] * w[1]);
}

std::vector<double> eta2_or_ones(std::span<const double> eta2, std::size_t d) {
  if (eta2.empty()) return std::vector<double>(d, 1.0);
  if (eta2.size() != d) throw ShapeError("need one transmission per detector");
  for (double e : eta2) {
    if (!(e >= 0.0 && e <= 1.0)) throw ConfigError("transmission must lie in [0, 1]");
  }
  return {eta2.begin(), eta2.end()};
}

// the two weights seen by signal and idler; one detector means both photons share it
std::pair<PowerSeries, PowerSeries> pair_weights(std::size_t detectors, const std::vector<std::size_t>& cut) {
  PowerSeries ws = PowerSeries::variable(cut, 0);
  PowerSeries wi = detectors == 1 ? ws : PowerSeries::variable(cut, 1);
  return {ws, wi};
}

PowerSeries poisson_exponent_w(const PoissonParams& p, std::size_t detectors) {
  const std::vector<std::size_t> cut(detectors, 2);
  auto [ws, wi] = pair_weights(detectors, cut);
  PowerSeries e = ws * p.p_s + wi * p.p_i - (ws * wi) * p.p_si;
  return e * (-p.mu);
}

PowerSeries hermite_exponent_w(const HermiteParams& h, std::size_t detectors) {
  const std::vector<std::size_t> cut(detectors, 4);
  auto [ws, wi] = pair_weights(detectors, cut);
  const PowerSeries one = PowerSeries::constant(cut, 1.0);
  const PowerSeries fs = one - ws * h.eta_s2;
  const PowerSeries fi = one - wi * h.eta_i2;
  const PowerSeries f = fs * fi;
  return (one - f * f) * (-h.eps2 / 2.0) - (one - f) * (h.mu - h.eps2);
}

PhotonStatistics from_exponent_w(const PowerSeries& e_w, const std::vector<std::size_t>& n_max) {
  check_series_size(n_max);
  return pnd_from_log_series(e_w.reflect().truncated(n_max));
}

PowerSeries exact_product_log_series(const ExactProductGf& g, const std::vector<std::size_t>& n_max) {
  const auto& sp = g.spectrum;
  const std::size_t d = expected_detectors(sp.process);
  const auto eta2 = eta2_or_ones(g.eta2, d);
  const double p = sp.process == ProcessType::Type0I ? 0.5 : 1.0;
  // y(u) with w = 1 - u
  PowerSeries y;
  if (sp.process == ProcessType::Type0I) {
    const PowerSeries f = PowerSeries::constant(n_max, 1.0 - eta2[0]) + PowerSeries::variable(n_max, 0) * eta2[0];
    y = f * f;
  } else {
    const PowerSeries fs = PowerSeries::constant(n_max, 1.0 - eta2[0]) + PowerSeries::variable(n_max, 0) * eta2[0];
    const PowerSeries fi = PowerSeries::constant(n_max, 1.0 - eta2[1]) + PowerSeries::variable(n_max, 1) * eta2[1];
    y = fs * fi;
  }
  const double y0 = y.constant_term();
  PowerSeries z = y;
  z.at_flat(0) = 0.0;

  const std::size_t kmax = std::accumulate(n_max.begin(), n_max.end(), std::size_t{0});
  std::vector<CompensatedSum> power_sums(kmax + 1);
  for (double s : sp.sigmas) {
    const double c = std::cosh(s / 2.0);
    const double sech2 = std::isfinite(c) ? 1.0 / (c * c) : 0.0;
    const double t2 = 1.0 - sech2;
    const double r = t2 / ((1.0 - y0) + y0 * sech2);
    double rk = 1.0;
    for (std::size_t k = 1; k <= kmax; ++k) {
      rk *= r;
      if (rk == 0.0) break;
      power_sums[k].add(rk);
    }
  }
  // sum_k S_k z^k / k by Horner
  PowerSeries acc(n_max);
  for (std::size_t k = kmax; k >= 1; --k) {
    acc = z * acc;
    acc.at_flat(0) += power_sums[k].value() / static_cast<double>(k);
  }
  acc = z * acc;
  PowerSeries out = acc * p;
  out.at_flat(0) = log_gf_product(sp.sigmas, sp.process, y0);
  return out;
}

CMatrix dense_plus_identity(const BlockOperator& k) {
  if (k.total_rows() != k.total_cols()) throw ShapeError("determinant operand must be square");
  CMatrix m = k.to_dense();
  m += CMatrix::Identity(m.rows(), m.cols());
  return m;
}

}  // namespace

Method parse_method(const std::string& s) {
  if (s == "exact" || s == "EXACT") return Method::Exact;
  if (s == "log_series" || s == "LOG_SERIES") return Method::LogSeries;
  if (s == "poisson" || s == "POISSON") return Method::Poisson;
  if (s == "hermite" || s == "HERMITE") return Method::Hermite;
  if (s == "linear" || s == "LINEAR") return Method::Linear;
  if (s == "quadratic" || s == "QUADRATIC") return Method::Quadratic;
  throw ConfigError("unknown method '" + s + "'");
}

std::string to_string(Method m) {
  switch (m) {
    case Method::Exact: return "exact";
    case Method::LogSeries: return "log_series";
    case Method::Poisson: return "poisson";
    case Method::Hermite: return "hermite";
    case Method::Linear: return "linear";
    case Method::Quadratic: return "quadratic";
  }
  return "unknown";
}

void PoissonParams::validate() const {
  constexpr double tol = 1e-12;
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw DomainError("Poisson mean must be finite and >= 0");
  for (double p : {p_s, p_i, p_si}) {
    if (!(p >= -tol && p <= 1.0 + tol)) throw DomainError("detection probabilities must lie in [0, 1]");
  }
  if (p_si > std::min(p_s, p_i) + tol) throw DomainError("coincidence probability exceeds a marginal");
  if (p_union() > 1.0 + tol) throw DomainError("p_s + p_i - p_si exceeds 1");
}

void HermiteParams::validate() const {
  if (!(eps2 >= 0.0) || !std::isfinite(mu)) throw DomainError("Hermite parameters must be finite, eps^2 >= 0");
  if (mu < eps2) throw DomainError("invalid Hermite distribution: mu < eps^2");
  for (double e : {eta_s2, eta_i2}) {
    if (!(e >= 0.0 && e <= 1.0)) throw DomainError("transmission must lie in [0, 1]");
  }
}

HermiteParams hermite_params(double gain, double schmidt_k, ProcessType process, double eta_s2,
                             double eta_i2) {
  if (!(schmidt_k >= 1.0)) throw DomainError("Schmidt number must be >= 1");
  const double c2 = gain * gain;
  const double c4 = c2 * c2;
  HermiteParams h;
  h.eta_s2 = eta_s2;
  h.eta_i2 = eta_i2;
  if (process == ProcessType::Type0I) {
    h.eps2 = c4 / (2.0 * schmidt_k);
    h.mu = c2 / 2.0 + c4 / (6.0 * schmidt_k);
  } else {
    h.eps2 = c4 / (16.0 * schmidt_k);
    h.mu = c2 / 4.0 + c4 / (48.0 * schmidt_k);
  }
  return h;
}

double hermite_g2(const HermiteParams& p) {
  p.validate();
  const std::vector<std::size_t> cut{2};
  // w = 1 - e^t
  PowerSeries w(cut);
  w.at_flat(1) = -1.0;
  w.at_flat(2) = -0.5;
  const PowerSeries one = PowerSeries::constant(cut, 1.0);
  const PowerSeries f = one - w * p.eta_s2;
  const PowerSeries e = (one - f * f) * (-p.eps2 / 2.0) - (one - f) * (p.mu - p.eps2);
  const PowerSeries m = e.exp();
  const double n1 = m.at_flat(1);
  const double n2 = 2.0 * m.at_flat(2);
  if (!(n1 > 0.0)) throw DomainError("g2 undefined for zero mean photon number");
  return (n2 - n1) / (n1 * n1);
}

double gf_exact(const SqueezingSpectrum& spectrum, std::span<const double> w, std::span<const double> eta2) {
  const std::size_t d = expected_detectors(spectrum.process);
  if (w.size() != d) throw ShapeError("gf_exact: wrong number of detector weights");
  const auto e = eta2_or_ones(eta2, d);
  return std::exp(log_gf_product(spectrum.sigmas, spectrum.process, no_click_weight(spectrum.process, w, e)));
}

double gf_poisson(const PoissonParams& p, double w_s, double w_i) {
  return std::exp(-p.mu * (w_s * p.p_s + w_i * p.p_i - w_s * w_i * p.p_si));
}

double gf_hermite(double mu, double eps2, double eta_s2, double eta_i2, double w_s, double w_i) {
  HermiteParams{mu, eps2, eta_s2, eta_i2}.validate();
  const double f = (1.0 - eta_s2 * w_s) * (1.0 - eta_i2 * w_i);
  return std::exp(-eps2 / 2.0 * (1.0 - f * f) - (mu - eps2) * (1.0 - f));
}

double evaluate_gf(const GeneratingFunctionSpec& gf, std::span<const double> w) {
  if (w.size() != gf.detector_count) throw ShapeError("wrong number of detector weights");
  const double ws = w[0];
  const double wi = w.size() > 1 ? w[1] : w[0];
  return std::visit(
      [&](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, ExactProductGf>) {
          return gf_exact(r.spectrum, w, r.eta2);
        } else if constexpr (std::is_same_v<T, LogSeriesGf>) {
          return std::exp(log_series_exponent(r.traces).evaluate({w.begin(), w.end()}));
        } else if constexpr (std::is_same_v<T, PoissonGf>) {
          return gf_poisson(r.params, ws, wi);
        } else {
          return gf_hermite(r.params.mu, r.params.eps2, r.params.eta_s2, r.params.eta_i2, ws, wi);
        }
      },
      gf.representation);
}

double spectral_radius_estimate(const BlockOperator& k, int iterations) {
  const std::size_t n = k.total_cols();
  if (n == 0) return 0.0;
  CVector x(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    // fixed, non-symmetric start vector
    x[static_cast<Eigen::Index>(i)] = cd{1.0 + 0.5 * std::sin(1.7 * static_cast<double>(i)),
                                         0.25 * std::cos(0.9 * static_cast<double>(i))};
  }
  x.normalize();
  double est = 0.0;
  for (int it = 0; it < iterations; ++it) {
    CVector y = k.apply(x);
    est = y.norm();
    if (est == 0.0) return 0.0;
    x = y / est;
  }
  return est;
}

LogDetSeries log_det_series(const BlockOperator& k, int order) {
  if (order < 1) throw DomainError("log series order must be at least 1");
  LogDetSeries out;
  out.spectral_radius_estimate = spectral_radius_estimate(k);
  out.radius_warning = out.spectral_radius_estimate > 0.95;
  CompensatedSum sum;
  BlockOperator power = k;
  sum.add(k.trace().real());
  for (int n = 2; n <= order; ++n) {
    const double tr = trace_product(power, k).real();
    sum.add((n % 2 == 0 ? -1.0 : 1.0) * tr / n);
    if (n < order) power = power * k;
  }
  out.value = sum.value();
  return out;
}

std::vector<PowerSeries> trace_polynomials(const std::vector<BlockOperator>& k_ops, int order) {
  if (order < 1) throw DomainError("log series order must be at least 1");
  return trace_polynomials(k_ops, order,
                                  std::vector<std::size_t>(k_ops.size(), static_cast<std::size_t>(order)));
}

std::vector<PowerSeries> trace_polynomials(const std::vector<BlockOperator>& k_ops, int order,
                                                  const std::vector<std::size_t>& caps) {
  const std::size_t d = k_ops.size();
  if (d == 0) throw ShapeError("need at least one detector operator");
  check_series_size(caps);
  const auto max_deg = static_cast<std::size_t>(order);
  std::vector<PowerSeries> traces;
  MatPoly level;  // (sum_d w_d K_d)^(n-1) by monomial
  for (int n = 1; n <= order; ++n) {
    PowerSeries t(caps);
    if (n == 1) {
      for (std::size_t e = 0; e < d; ++e) {
        Monomial k(d, 0);
        k[e] = 1;
        if (within(k, caps, max_deg)) t[k] += k_ops[e].trace().real();
      }
    } else {
      for (const auto& [k, c] : level) {
        for (std::size_t e = 0; e < d; ++e) {
          Monomial kk = k;
          ++kk[e];
          if (within(kk, caps, max_deg)) t[kk] += trace_product(c, k_ops[e]).real();
        }
      }
    }
    traces.push_back(std::move(t));
    if (n < order) {
      if (n == 1) {
        for (std::size_t e = 0; e < d; ++e) {
          Monomial k(d, 0);
          k[e] = 1;
          if (within(k, caps, max_deg)) level.emplace(k, k_ops[e]);
        }
      } else {
        level = multiply_letters(level, nullptr, k_ops, caps, max_deg);
      }
    }
    if (n > 1 && level.empty()) {
      for (int m = n + 1; m <= order; ++m) traces.emplace_back(caps);
      break;
    }
  }
  return traces;
}

PowerSeries log_series_exponent(const std::vector<PowerSeries>& traces) {
  if (traces.empty()) throw ShapeError("empty trace list");
  PowerSeries e(traces.front().cutoffs());
  for (std::size_t n = 1; n <= traces.size(); ++n) {
    const double coef = (n % 2 == 1 ? 1.0 : -1.0) / static_cast<double>(n);
    e += traces[n - 1] * (-0.5 * coef);
  }
  return e;
}

PoissonParams poisson_params(const DiscretizedJsa& jsa, const LossProfile& eta,
                             const DetectionProjection& windows, double gain, ProcessType process) {
  if (!std::isfinite(gain)) throw DomainError("gain must be finite");
  const auto dofs = source_dofs(jsa, process);
  const std::size_t m = dofs.size();
  if (eta.eta.size() != m) throw ShapeError("loss profile needs one entry per source DOF");
  if (windows.windows.size() != m) throw ShapeError("need one window per source DOF");
  CMatrix psi = jsa.symmetrized();
  if (process == ProcessType::Type0I) {
    const auto sym = (psi - psi.transpose()).cwiseAbs().maxCoeff();
    if (sym > 1e-10 * psi.cwiseAbs().maxCoeff()) throw ConfigError("type-0/I sources need a symmetric JSA");
  }
  const double total = psi.squaredNorm();
  if (!(total > 0.0)) throw DomainError("JSA has zero norm");

  const RVector& eta_s = eta.eta[0];
  const RVector& eta_i = eta.eta[m - 1];
  if (eta_s.size() != psi.rows() || eta_i.size() != psi.cols()) throw ShapeError("loss profile does not match the grid");

  // time-domain windows see the Fourier-transformed amplitude
  auto axis_for = [&](std::size_t dof) {
    const Window& w = windows.windows[dof];
    if (w.kind == Window::Kind::Range && w.domain == Domain::Time) {
      return fourier(dofs, dof).out_dofs[dof];
    }
    return dofs[dof];
  };
  auto fourier_matrix = [&](std::size_t dof) { return fourier(dofs, dof).s.at(dof, dof).to_dense(); };
  const bool time_s = windows.windows[0].kind == Window::Kind::Range && windows.windows[0].domain == Domain::Time;
  const bool time_i = windows.windows[m - 1].kind == Window::Kind::Range &&
                      windows.windows[m - 1].domain == Domain::Time;
  const CMatrix f_s = time_s ? fourier_matrix(0) : CMatrix();
  const CMatrix f_i = time_i ? fourier_matrix(m - 1) : CMatrix();
  const RVector mask_s = window_mask(windows.windows[0], axis_for(0));
  const RVector mask_i = window_mask(windows.windows[m - 1], axis_for(m - 1));

  // loss and the detector basis on the watched arm only; the other arm is traced out
  auto signal_side = [&](const CMatrix& a) -> CMatrix {
    CMatrix b = eta_s.cast<cd>().asDiagonal() * a;
    return time_s ? CMatrix(f_s * b) : b;
  };
  auto idler_side = [&](const CMatrix& a) -> CMatrix {
    CMatrix b = a * eta_i.cast<cd>().asDiagonal();
    return time_i ? CMatrix(b * f_i.transpose()) : b;
  };
  const std::vector<double> wi(mask_i.data(), mask_i.data() + mask_i.size());
  auto windowed = [&](const CMatrix& a, bool use_s, bool use_i) {
    CompensatedSum sum;
    const auto cols = static_cast<std::size_t>(a.cols());
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
      const double ms = use_s ? mask_s[r] : 1.0;
      if (ms == 0.0) continue;
      const std::span<const cd> row(a.data() + r * a.cols(), cols);
      sum.add(ms * kernels::weighted_norm2(row, use_i ? std::span<const double>(wi) : std::span<const double>()));
    }
    return sum.value();
  };
  const CMatrix lossy_s = signal_side(psi);
  const CMatrix lossy_i = idler_side(psi);
  const CMatrix lossy_si = idler_side(lossy_s);
  CompensatedSum ps, pi, psi_c;
  ps.add(windowed(lossy_s, true, false));
  pi.add(windowed(lossy_i, false, true));
  psi_c.add(windowed(lossy_si, true, true));
  PoissonParams out;
  out.p_s = ps.value() / total;
  out.p_i = pi.value() / total;
  out.p_si = psi_c.value() / total;
  out.mu = gain * gain / (process == ProcessType::Type0I ? 2.0 : 4.0);
  return out;
}

PowerSeries poisson_exponent(const std::vector<BlockOperator>& d_ops, const BlockOperator& z) {
  const std::size_t d = d_ops.size();
  if (d == 0) throw ShapeError("need at least one detector operator");
  const std::vector<std::size_t> cut(d, 2);
  PowerSeries e(cut);
  const BlockOperator z2 = z * z;
  std::vector<BlockOperator> dz;
  for (const auto& op : d_ops) dz.push_back(op * z);
  for (std::size_t a = 0; a < d; ++a) {
    Monomial k(d, 0);
    k[a] = 1;
    e[k] += -0.5 * trace_product(d_ops[a], z2).real();
    for (std::size_t b = a; b < d; ++b) {
      Monomial kk = k;
      ++kk[b];
      const double tr = trace_product(dz[a], dz[b]).real();
      e[kk] += (a == b ? 0.25 : 0.5) * tr;
    }
  }
  return e;
}

PowerSeries hermite_exponent(const std::vector<BlockOperator>& d_ops, const BlockOperator& z) {
  const std::size_t d = d_ops.size();
  if (d == 0) throw ShapeError("need at least one detector operator");
  const Monomial caps(d, 4);
  std::vector<BlockOperator> letters;  // -D_d Z
  for (const auto& op : d_ops) letters.push_back((op * z).scaled(-1.0));
  // A = (1 - D) Z and A^2 by monomial
  MatPoly a1;
  a1.emplace(Monomial(d, 0), z);
  for (std::size_t e = 0; e < d; ++e) {
    Monomial k(d, 0);
    k[e] = 1;
    a1.emplace(k, letters[e]);
  }
  const MatPoly a2 = multiply_letters(a1, &z, letters, caps, 4);

  const BlockOperator z2 = z * z;
  const double tr_z2 = z2.trace().real();
  const double tr_z4 = trace_product(z2, z2).real();

  PowerSeries t4(std::vector<std::size_t>(d, 4));
  PowerSeries t2(t4.cutoffs());
  PowerSeries t2z(t4.cutoffs());
  for (const auto& [k, c] : a2) {
    t2[k] += c.trace().real();
    t2z[k] += trace_product(z2, c).real();
    for (const auto& [k2, c2] : a2) {
      Monomial kk(d);
      for (std::size_t e = 0; e < d; ++e) kk[e] = k[e] + k2[e];
      if (within(kk, caps, 4)) t4[kk] += trace_product(c, c2).real();
    }
  }
  const PowerSeries one = PowerSeries::constant(t4.cutoffs(), 1.0);
  PowerSeries e = (one * tr_z4 - t4) * (-0.125);
  e -= (one * tr_z2 - t2 - one * (2.0 / 3.0 * tr_z4) + t2z * (2.0 / 3.0)) * 0.25;
  e.at_flat(0) = 0.0;  // exactly zero at w = 0
  return e;
}

PoissonParams poisson_params_from_exponent(const PowerSeries& e, double mu, ProcessType process) {
  if (!(mu > 0.0)) throw DomainError("Poisson mean must be positive");
  PoissonParams p;
  p.mu = mu;
  if (e.variables() == 1) {
    if (process != ProcessType::Type0I) throw ShapeError("type-II pair parameters need two detectors");
    p.p_s = p.p_i = -e[{1}] / (2.0 * mu);
    p.p_si = e[{2}] / mu;
  } else if (e.variables() == 2) {
    p.p_s = -e[{1, 0}] / mu;
    p.p_i = -e[{0, 1}] / mu;
    p.p_si = e[{1, 1}] / mu;
  } else {
    throw ShapeError("pair parameters need one or two detectors");
  }
  return p;
}

double PhotonStatistics::at(const std::vector<std::size_t>& n) const {
  if (n.size() != cutoffs.size()) throw ShapeError("wrong number of photon numbers");
  std::size_t idx = 0;
  for (std::size_t d = 0; d < n.size(); ++d) {
    if (n[d] > cutoffs[d]) throw ShapeError("photon number beyond the cutoff");
    idx = idx * (cutoffs[d] + 1) + n[d];
  }
  return probabilities[idx];
}

void PhotonStatistics::write_csv(std::ostream& os, int precision) const {
  csv::Writer w(os, precision);
  std::vector<std::string> head;
  for (std::size_t d = 0; d < cutoffs.size(); ++d) head.push_back("n" + std::to_string(d + 1));
  head.push_back("probability");
  w.header(head);
  std::vector<std::size_t> n(cutoffs.size(), 0);
  for (double p : probabilities) {
    std::vector<std::string> row;
    for (std::size_t v : n) row.push_back(std::to_string(v));
    row.push_back(csv::format_number(p, precision));
    w.row(row);
    for (std::size_t d = n.size(); d-- > 0;) {
      if (++n[d] <= cutoffs[d]) break;
      n[d] = 0;
    }
  }
}

PhotonStatistics pnd_from_log_series(const PowerSeries& log_g_u) {
  const PowerSeries g = log_g_u.exp();
  PhotonStatistics st;
  st.cutoffs = log_g_u.cutoffs();
  st.probabilities = g.coefficients();
  CompensatedSum sum;
  for (double& p : st.probabilities) {
    st.most_negative = std::min(st.most_negative, p);
    if (p < 0.0) p = 0.0;
    sum.add(p);
  }
  st.normalization_deficit = 1.0 - sum.value();
  return st;
}

PhotonStatistics pnd(const GeneratingFunctionSpec& gf, const std::vector<std::size_t>& n_max) {
  if (n_max.size() != gf.detector_count) throw ShapeError("need one cutoff per detector");
  check_series_size(n_max);
  return std::visit(
      [&](const auto& r) -> PhotonStatistics {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, ExactProductGf>) {
          if (gf.detector_count != expected_detectors(r.spectrum.process)) {
            throw ShapeError("exact product: detector count does not match the process");
          }
          return pnd_from_log_series(exact_product_log_series(r, n_max));
        } else if constexpr (std::is_same_v<T, LogSeriesGf>) {
          const PowerSeries e = log_series_exponent(r.traces);
          if (e.variables() != n_max.size()) throw ShapeError("trace polynomials do not match the detectors");
          return from_exponent_w(e, n_max);
        } else if constexpr (std::is_same_v<T, PoissonGf>) {
          r.params.validate();
          return from_exponent_w(poisson_exponent_w(r.params, gf.detector_count), n_max);
        } else {
          r.params.validate();
          return from_exponent_w(hermite_exponent_w(r.params, gf.detector_count), n_max);
        }
      },
      gf.representation);
}

double log_det_exact(const BlockOperator& k) {
  const CMatrix m = dense_plus_identity(k);
  Eigen::PartialPivLU<CMatrix> lu(m);
  const CMatrix& f = lu.matrixLU();
  cd log_det = 0.0;
  for (Eigen::Index i = 0; i < f.rows(); ++i) {
    if (f(i, i) == cd{}) throw DomainError("det(1 + K) vanishes");
    log_det += std::log(f(i, i));
  }
  if (lu.permutationP().determinant() < 0) log_det += cd{0.0, M_PI};
  // the determinant is real and positive for a physical covariance
  const double phase = std::remainder(log_det.imag(), 2.0 * M_PI);
  if (std::abs(phase) > 1e-6) throw DomainError("det(1 + K) is not positive");
  return log_det.real();
}

PhotonStatistics pnd_exact_operator(const std::vector<BlockOperator>& d_ops, const BlockOperator& gamma,
                                    const std::vector<std::size_t>& n_max) {
  const std::size_t d = d_ops.size();
  if (d == 0 || n_max.size() != d) throw ShapeError("need one cutoff per detector operator");
  check_series_size(n_max);
  std::vector<BlockOperator> k_ops;
  for (const auto& op : d_ops) k_ops.push_back(op * gamma);
  BlockOperator k_tot = k_ops.front();
  for (std::size_t e = 1; e < d; ++e) k_tot = k_tot + k_ops[e];
  const double log_det = log_det_exact(k_tot);
  const CMatrix a = dense_plus_identity(k_tot);
  Eigen::PartialPivLU<CMatrix> lu(a);
  // M_d = (1 + K)^-1 K_d
  std::vector<BlockOperator> m_ops;
  for (const auto& k : k_ops) {
    const CMatrix m = lu.solve(k.to_dense());
    m_ops.push_back(BlockOperator::from_dense(m, k.row_dims(), k.col_dims()));
  }
  const std::size_t order = std::accumulate(n_max.begin(), n_max.end(), std::size_t{0});
  PowerSeries e = PowerSeries::constant(n_max, -0.5 * log_det);
  if (order > 0) {
    const auto traces = trace_polynomials(m_ops, static_cast<int>(order), n_max);
    for (std::size_t n = 1; n <= traces.size(); ++n) e += traces[n - 1] * (0.5 / static_cast<double>(n));
  }
  return pnd_from_log_series(e);
}

double quadratic_vacuum(const SchmidtSpectrum& spectrum, double gain, double eta, ProcessType process) {
  return quadratic_vacuum(spectrum, gain, eta, eta, process);
}

double quadratic_vacuum(const SchmidtSpectrum& spectrum, double gain, double eta_s, double eta_i,
                        ProcessType process) {
  for (double e : {eta_s, eta_i}) {
    if (!(e >= 0.0 && e <= 1.0)) throw ConfigError("transmittivity must lie in [0, 1]");
  }
  const SqueezingSpectrum sq = SqueezingSpectrum::from_schmidt(spectrum, gain, process);
  // disentangled one-pair amplitudes tanh(sigma_j / 2)
  CompensatedSum s2;
  CompensatedSum s4;
  for (double s : sq.sigmas) {
    const double t = std::tanh(s / 2.0);
    s2.add(t * t);
    s4.add(t * t * t * t);
  }
  const double sum2 = s2.value();
  const double sum4 = s4.value();
  double w1 = 0.0;
  double w2 = 0.0;
  double f = 0.0;
  if (process == ProcessType::TypeII) {
    w1 = sum2;
    w2 = (sum4 + sum2 * sum2) / 2.0;
    f = (1.0 - eta_s * eta_s) * (1.0 - eta_i * eta_i);
  } else {
    // one pair: t^2/2; two pairs in one mode: 3t^4/8; in two modes: t_j^2 t_k^2/4
    w1 = sum2 / 2.0;
    w2 = 3.0 * sum4 / 8.0 + (sum2 * sum2 - sum4) / 8.0;
    const double l = 1.0 - eta_s * eta_s;
    f = l * l;
  }
  return (1.0 + f * w1 + f * f * w2) / (1.0 + w1 + w2);
}

double vacuum_probability(const VacuumQuery& q, Method method) {
  const double es2 = q.eta_s * q.eta_s;
  const double ei2 = q.eta_i * q.eta_i;
  auto need_schmidt = [&]() -> const SchmidtSpectrum& {
    if (!q.schmidt) throw ConfigError(to_string(method) + " vacuum probability needs a Schmidt spectrum");
    return *q.schmidt;
  };
  auto poisson = [&]() {
    if (q.poisson) return *q.poisson;
    need_schmidt();
    PoissonParams p;
    p.mu = q.gain * q.gain / (q.process == ProcessType::Type0I ? 2.0 : 4.0);
    p.p_s = es2;
    p.p_i = q.process == ProcessType::Type0I ? es2 : ei2;
    p.p_si = p.p_s * p.p_i;
    return p;
  };
  switch (method) {
    case Method::Exact: {
      if (q.operand) return std::exp(-0.5 * log_det_exact(*q.operand));
      const auto sq = SqueezingSpectrum::from_schmidt(need_schmidt(), q.gain, q.process);
      const double y0 = q.process == ProcessType::Type0I ? (1.0 - es2) * (1.0 - es2) : (1.0 - es2) * (1.0 - ei2);
      return std::exp(log_gf_product(sq.sigmas, q.process, y0));
    }
    case Method::LogSeries: {
      if (!q.operand) throw ConfigError("log-series vacuum probability needs a determinant operand");
      return std::exp(-0.5 * log_det_series(*q.operand, q.order).value);
    }
    case Method::Poisson: {
      const PoissonParams p = poisson();
      p.validate();
      return std::exp(-p.mu * p.p_union());
    }
    case Method::Linear: {
      const PoissonParams p = poisson();
      p.validate();
      return 1.0 - p.mu * p.p_union();
    }
    case Method::Hermite: {
      HermiteParams h;
      if (q.hermite) {
        h = *q.hermite;
      } else {
        const auto& s = need_schmidt();
        h = hermite_params(q.gain, schmidt_number(s), q.process, es2,
                           q.process == ProcessType::Type0I ? es2 : ei2);
      }
      return gf_hermite(h.mu, h.eps2, h.eta_s2, h.eta_i2, 1.0, 1.0);
    }
    case Method::Quadratic:
      return quadratic_vacuum(need_schmidt(), q.gain, q.eta_s, q.eta_i, q.process);
  }
  throw ConfigError("unknown method");
}

}  // namespace biphoton
