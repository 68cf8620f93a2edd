#include "biphoton/oracle.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "biphoton/errors.hpp"

namespace biphoton::oracle {

namespace {

void check_dimension(Eigen::Index n) {
  if (static_cast<std::size_t>(n) > kMaxDimension) {
    throw DomainError("oracle dimension " + std::to_string(n) + " exceeds the cap of " +
                      std::to_string(kMaxDimension));
  }
}

RVector flattened_weights(const std::vector<DofAxis>& dofs) {
  std::vector<double> w;
  for (int rep = 0; rep < 2; ++rep) {
    for (const auto& d : dofs) w.insert(w.end(), d.grid.weights.begin(), d.grid.weights.end());
  }
  return Eigen::Map<const RVector>(w.data(), static_cast<Eigen::Index>(w.size()));
}

}  // namespace

DenseState dense_covariance_exp(const GeneratorZ& z) {
  const Eigen::MatrixXcd m = z.op.to_dense();
  check_dimension(m.rows());
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff())) {
    throw DomainError("generator is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  if (es.info() != Eigen::Success) throw DomainError("eigendecomposition failed");
  Eigen::VectorXd f(es.eigenvalues().size());
  for (Eigen::Index k = 0; k < f.size(); ++k) f[k] = std::expm1(2.0 * es.eigenvalues()[k]) / 2.0;
  DenseState s;
  s.matrix = es.eigenvectors() * f.cast<cd>().asDiagonal() * es.eigenvectors().adjoint();
  s.weights = flattened_weights(z.dofs);
  return s;
}

double dense_log_det(const CMatrix& k) {
  if (k.rows() != k.cols()) throw ShapeError("determinant needs a square matrix");
  check_dimension(k.rows());
  const Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(k.rows(), k.cols()) + Eigen::MatrixXcd(k);
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(a);
  if (!lu.isInvertible()) throw DomainError("1 + K is singular");
  double log_abs = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) log_abs += std::log(std::abs(lu.matrixLU()(i, i)));
  return log_abs;
}

double dense_log_det(const DenseState& s) { return dense_log_det(s.matrix); }

std::vector<double> dense_projection_eigs(const DenseState& s, const std::vector<std::size_t>& mask) {
  if (mask.empty()) return {};
  const auto n = static_cast<Eigen::Index>(mask.size());
  Eigen::MatrixXcd sub(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto r = mask[static_cast<std::size_t>(i)];
      const auto c = mask[static_cast<std::size_t>(j)];
      if (r >= static_cast<std::size_t>(s.matrix.rows()) || c >= static_cast<std::size_t>(s.matrix.cols())) {
        throw ShapeError("mask index outside the state");
      }
      sub(i, j) = s.matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sub, Eigen::EigenvaluesOnly);
  std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + n);
  std::sort(ev.begin(), ev.end());
  return ev;
}

std::vector<double> tmsv_statistics(double sigma, double eta, std::size_t n_max) {
  if (!(sigma >= 0.0)) throw DomainError("sigma must be >= 0");
  if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("eta must lie in [0, 1]");
  const double t2 = std::pow(std::tanh(sigma / 2.0), 2);
  const double p0 = 1.0 - t2;
  const double e2 = eta * eta;
  // number of generated pairs needed for 1e-20 of the mass
  std::size_t n_src = n_max;
  if (t2 > 0.0) {
    n_src = std::max(n_max, static_cast<std::size_t>(std::ceil(std::log(1e-20) / std::log(t2))) + 1);
  }
  const std::size_t dim = n_max + 1;
  std::vector<double> out(dim * dim, 0.0);
  for (std::size_t n = 0; n <= n_src; ++n) {
    const double pn = p0 * std::pow(t2, static_cast<double>(n));
    if (pn == 0.0) break;
    // binomial thinning of both arms
    std::vector<double> binom(std::min(n, n_max) + 1);
    for (std::size_t a = 0; a < binom.size(); ++a) {
      const double lc = std::lgamma(n + 1.0) - std::lgamma(a + 1.0) - std::lgamma(n - a + 1.0);
      const double la = a == 0 ? 0.0 : a * std::log(e2);
      const double lb = n - a == 0 ? 0.0 : (n - a) * std::log1p(-e2);
      binom[a] = std::exp(lc + la + lb);
    }
    for (std::size_t a = 0; a < binom.size(); ++a) {
      for (std::size_t b = 0; b < binom.size(); ++b) out[a * dim + b] += pn * binom[a] * binom[b];
    }
  }
  return out;
}

}  // namespace biphoton::oracle
