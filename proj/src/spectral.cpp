#include "biphoton/spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <string>

#include <Eigen/SVD>

#include "biphoton/csv.hpp"
#include "biphoton/errors.hpp"

namespace biphoton {

namespace {

constexpr double kCoverageTolerance = 1e-8;
constexpr double kFloorRatio = 1e-16;

FrequencyGrid trapezoid_from_points(std::vector<double> pts) {
  FrequencyGrid g;
  const std::size_t n = pts.size();
  g.weights.assign(n, 0.0);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double h = pts[k + 1] - pts[k];
    g.weights[k] += h / 2;
    g.weights[k + 1] += h / 2;
  }
  g.points = std::move(pts);
  return g;
}

double upper_tail(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

}  // namespace

FrequencyGrid FrequencyGrid::uniform(double lo, double hi, std::size_t n) {
  if (n < 2 || !(hi > lo)) throw ConfigError("grid needs at least two points and hi > lo");
  std::vector<double> pts(n);
  const double h = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t k = 0; k < n; ++k) pts[k] = lo + h * static_cast<double>(k);
  pts.back() = hi;
  FrequencyGrid g;
  g.points = std::move(pts);
  g.weights.assign(n, h);
  g.weights.front() = g.weights.back() = h / 2;
  return g;
}

FrequencyGrid FrequencyGrid::uniform_equal_weights(double lo, double hi, std::size_t n) {
  FrequencyGrid g = uniform(lo, hi, n);
  std::fill(g.weights.begin(), g.weights.end(), g.spacing());
  return g;
}

double FrequencyGrid::spacing() const {
  if (points.size() < 2) return 0.0;
  return (points.back() - points.front()) / static_cast<double>(points.size() - 1);
}

bool FrequencyGrid::is_uniform(double rel_tol) const {
  const double h = spacing();
  for (std::size_t k = 0; k + 1 < points.size(); ++k) {
    if (std::abs(points[k + 1] - points[k] - h) > rel_tol * std::abs(h)) return false;
  }
  return points.size() >= 2;
}

RVector FrequencyGrid::sqrt_weights() const {
  RVector s(static_cast<Eigen::Index>(weights.size()));
  for (std::size_t k = 0; k < weights.size(); ++k) s[static_cast<Eigen::Index>(k)] = std::sqrt(weights[k]);
  return s;
}

void FrequencyGrid::validate() const {
  if (points.size() < 2) throw ConfigError("grid needs at least two points");
  if (weights.size() != points.size()) throw ConfigError("grid weights and points differ in length");
  for (std::size_t k = 0; k + 1 < points.size(); ++k) {
    if (!(points[k + 1] > points[k])) throw ConfigError("grid points must increase strictly");
  }
  for (double w : weights) {
    if (!(w > 0.0)) throw ConfigError("grid weights must be positive");
  }
}

double GaussianJsaModel::marginal_std() const {
  return std::sqrt((delta_plus * delta_plus + delta_minus * delta_minus) / 2.0);
}

void GaussianJsaModel::validate() const {
  if (!(delta_plus > 0.0) || !(delta_minus > 0.0) || !std::isfinite(delta_plus) ||
      !std::isfinite(delta_minus)) {
    throw ConfigError("Gaussian JSA widths must be positive and finite");
  }
}

CMatrix DiscretizedJsa::symmetrized() const {
  const RVector ss = grid_signal.sqrt_weights();
  const RVector si = grid_idler.sqrt_weights();
  return ss.cast<cd>().asDiagonal() * values * si.cast<cd>().asDiagonal();
}

double DiscretizedJsa::norm2() const { return symmetrized().squaredNorm(); }

std::vector<double> SchmidtSpectrum::lambdas() const {
  std::vector<double> l(coefficients.size());
  std::transform(coefficients.begin(), coefficients.end(), l.begin(), [](double c) { return c * c; });
  return l;
}

std::pair<FrequencyGrid, FrequencyGrid> default_gaussian_grids(const GaussianJsaModel& model,
                                                               std::size_t points,
                                                               double extent_sigma) {
  model.validate();
  // At least +-5 widths along both rotated axes, and enough marginal widths that
  // the coverage check passes.
  const double half = std::max(extent_sigma * model.marginal_std(),
                               5.0 * (model.delta_plus + model.delta_minus) / std::sqrt(2.0));
  return {FrequencyGrid::uniform(model.center_signal - half, model.center_signal + half, points),
          FrequencyGrid::uniform(model.center_idler - half, model.center_idler + half, points)};
}

std::size_t default_gaussian_points(const GaussianJsaModel& model, double extent_sigma) {
  const double half = std::max(extent_sigma * model.marginal_std(),
                               5.0 * (model.delta_plus + model.delta_minus) / std::sqrt(2.0));
  const double h = std::min(model.delta_plus, model.delta_minus) / 2.0;
  return static_cast<std::size_t>(std::ceil(2.0 * half / h)) + 1;
}

double gaussian_mass_outside(const GaussianJsaModel& model, const FrequencyGrid& gs,
                             const FrequencyGrid& gi) {
  const double s = model.marginal_std();
  auto outside = [s](const FrequencyGrid& g, double c) {
    return upper_tail((g.points.back() - c) / s) + upper_tail((c - g.points.front()) / s);
  };
  return std::min(1.0, outside(gs, model.center_signal) + outside(gi, model.center_idler));
}

DiscretizedJsa build_gaussian_jsa(const GaussianJsaModel& model, const FrequencyGrid& grid_s,
                                  const FrequencyGrid& grid_i) {
  model.validate();
  grid_s.validate();
  grid_i.validate();
  const double lost = gaussian_mass_outside(model, grid_s, grid_i);
  if (lost > kCoverageTolerance) {
    throw CoverageError("grid misses " + csv::format_number(lost, 3) +
                        " of the Gaussian JSD mass (limit 1e-8); widen the grid");
  }
  DiscretizedJsa jsa{grid_s, grid_i, CMatrix(grid_s.size(), grid_i.size())};
  const double a = 1.0 / (4.0 * model.delta_plus * model.delta_plus);
  const double b = 1.0 / (4.0 * model.delta_minus * model.delta_minus);
  for (std::size_t m = 0; m < grid_s.size(); ++m) {
    const double ws = grid_s.points[m] - model.center_signal;
    for (std::size_t n = 0; n < grid_i.size(); ++n) {
      const double wi = grid_i.points[n] - model.center_idler;
      const double p = (ws + wi) / std::sqrt(2.0);
      const double q = (ws - wi) / std::sqrt(2.0);
      jsa.values(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) =
          std::exp(-a * p * p - b * q * q);
    }
  }
  jsa.values /= std::sqrt(jsa.norm2());
  return jsa;
}

SchmidtSpectrum analytic_gaussian_schmidt(double aspect_ratio, std::size_t j_max) {
  if (!(aspect_ratio > 0.0) || !std::isfinite(aspect_ratio)) {
    throw DomainError("aspect ratio must be positive and finite");
  }
  if (j_max < 1) throw DomainError("j_max must be at least 1");
  const double zeta = (aspect_ratio - 1.0) / (aspect_ratio + 1.0);
  const double z2 = zeta * zeta;
  SchmidtSpectrum s;
  s.coefficients.resize(j_max);
  double lam = 1.0 - z2;
  for (std::size_t j = 0; j < j_max; ++j) {
    s.coefficients[j] = std::sqrt(lam);
    lam *= z2;
  }
  s.truncation_tail = std::pow(z2, static_cast<double>(j_max));
  return s;
}

double analytic_gaussian_schmidt_number(double aspect_ratio) {
  const double zeta = (aspect_ratio - 1.0) / (aspect_ratio + 1.0);
  return (1.0 + zeta * zeta) / (1.0 - zeta * zeta);
}

SchmidtSpectrum schmidt_decompose(const DiscretizedJsa& jsa, std::optional<std::size_t> rank) {
  const CMatrix sym = jsa.symmetrized();
  const RVector ss = jsa.grid_signal.sqrt_weights();
  const RVector si = jsa.grid_idler.sqrt_weights();
  RVector sv;
  CMatrix u;
  CMatrix v;
  if (sym.imag().cwiseAbs().maxCoeff() == 0.0) {
    Eigen::MatrixXd re = sym.real();
    Eigen::BDCSVD<Eigen::MatrixXd> svd(re, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) throw DomainError("SVD did not converge");
    sv = svd.singularValues();
    u = svd.matrixU().cast<cd>();
    v = svd.matrixV().cast<cd>();
  } else {
    Eigen::MatrixXcd m = sym;
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) throw DomainError("SVD did not converge");
    sv = svd.singularValues();
    u = svd.matrixU();
    v = svd.matrixV();
  }
  const double total = sv.squaredNorm();
  std::size_t keep = 0;
  if (sv.size() > 0) {
    const double floor = kFloorRatio * sv[0] * sv[0];
    while (keep < static_cast<std::size_t>(sv.size()) && sv[static_cast<Eigen::Index>(keep)] *
                                                                 sv[static_cast<Eigen::Index>(keep)] >=
                                                             floor &&
           sv[static_cast<Eigen::Index>(keep)] > 0.0) {
      ++keep;
    }
  }
  if (rank) keep = std::min(keep, *rank);
  SchmidtSpectrum s;
  s.coefficients.resize(keep);
  double kept = 0.0;
  for (std::size_t j = 0; j < keep; ++j) {
    s.coefficients[j] = sv[static_cast<Eigen::Index>(j)];
    kept += s.coefficients[j] * s.coefficients[j];
  }
  s.truncation_tail = std::max(0.0, total - kept);
  const auto k = static_cast<Eigen::Index>(keep);
  s.modes_signal = ss.cwiseInverse().cast<cd>().asDiagonal() * u.leftCols(k);
  s.modes_idler = si.cwiseInverse().cast<cd>().asDiagonal() * v.leftCols(k);
  return s;
}

std::pair<std::vector<double>, std::vector<double>> marginals(const DiscretizedJsa& jsa) {
  const auto ns = jsa.grid_signal.size();
  const auto ni = jsa.grid_idler.size();
  std::vector<double> ps(ns, 0.0);
  std::vector<double> pi(ni, 0.0);
  for (std::size_t m = 0; m < ns; ++m) {
    for (std::size_t n = 0; n < ni; ++n) {
      const double d = std::norm(jsa.values(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)));
      ps[m] += jsa.grid_idler.weights[n] * d;
      pi[n] += jsa.grid_signal.weights[m] * d;
    }
  }
  return {ps, pi};
}

double schmidt_number(const SchmidtSpectrum& spectrum) {
  double s = 0.0;
  double c = 0.0;  // Neumaier compensation
  for (double x : spectrum.coefficients) {
    const double v = x * x * x * x;
    const double t = s + v;
    c += std::abs(s) >= std::abs(v) ? (s - t) + v : (v - t) + s;
    s = t;
  }
  s += c;
  if (!(s > 0.0)) throw DomainError("Schmidt number of an all-zero spectrum");
  return 1.0 / s;
}

void write_jsa_csv(std::ostream& os, const DiscretizedJsa& jsa) {
  csv::Writer w(os);
  w.header({"omega_s", "omega_i", "re_psi", "im_psi"});
  for (std::size_t m = 0; m < jsa.grid_signal.size(); ++m) {
    for (std::size_t n = 0; n < jsa.grid_idler.size(); ++n) {
      const cd v = jsa.values(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
      w.row(std::vector<double>{jsa.grid_signal.points[m], jsa.grid_idler.points[n], v.real(), v.imag()});
    }
  }
}

DiscretizedJsa read_jsa_csv(std::istream& is) {
  auto rows = csv::parse(is);
  if (rows.empty()) throw ConfigError("JSA csv is empty");
  const std::vector<std::string> expect{"omega_s", "omega_i", "re_psi", "im_psi"};
  if (rows.front() != expect) throw ConfigError("JSA csv header must be omega_s,omega_i,re_psi,im_psi");
  std::map<double, std::size_t> s_index;
  std::map<double, std::size_t> i_index;
  std::vector<std::array<double, 4>> data;
  data.reserve(rows.size() - 1);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != 4) throw ConfigError("JSA csv row " + std::to_string(r + 1) + " needs 4 fields");
    std::array<double, 4> v{};
    for (int k = 0; k < 4; ++k) v[static_cast<std::size_t>(k)] = csv::to_double(rows[r][static_cast<std::size_t>(k)]);
    s_index.emplace(v[0], 0);
    i_index.emplace(v[1], 0);
    data.push_back(v);
  }
  std::vector<double> sp;
  std::vector<double> ip;
  for (auto& [x, idx] : s_index) {
    idx = sp.size();
    sp.push_back(x);
  }
  for (auto& [x, idx] : i_index) {
    idx = ip.size();
    ip.push_back(x);
  }
  if (sp.size() < 2 || ip.size() < 2) throw ConfigError("JSA csv needs at least two points per axis");
  if (data.size() != sp.size() * ip.size()) throw ConfigError("JSA csv is not rectangular");
  DiscretizedJsa jsa{trapezoid_from_points(sp), trapezoid_from_points(ip), CMatrix(sp.size(), ip.size())};
  Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic> seen =
      Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>::Zero(static_cast<Eigen::Index>(sp.size()),
                                                               static_cast<Eigen::Index>(ip.size()));
  for (const auto& v : data) {
    const auto m = static_cast<Eigen::Index>(s_index.at(v[0]));
    const auto n = static_cast<Eigen::Index>(i_index.at(v[1]));
    if (seen(m, n)++) throw ConfigError("JSA csv repeats a grid point");
    jsa.values(m, n) = cd{v[2], v[3]};
  }
  const double nrm = jsa.norm2();
  if (!(nrm > 0.0)) throw DomainError("JSA csv holds an all-zero amplitude");
  jsa.values /= std::sqrt(nrm);
  return jsa;
}

}  // namespace biphoton
