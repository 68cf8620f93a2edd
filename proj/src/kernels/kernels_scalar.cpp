#include "biphoton/kernels.hpp"

#include <algorithm>

namespace biphoton::kernels::scalar {

namespace {
constexpr std::size_t kPanel = 64;
}

void cgemm(std::size_t m, std::size_t n, std::size_t k, const cd* a, const cd* b, cd* c) {
  std::fill(c, c + m * n, cd{});
  // Interleaved re/im arithmetic; std::complex operator* carries NaN recovery
  // branches that the compiler cannot vectorize.
  auto* cr = reinterpret_cast<double*>(c);
  const auto* br = reinterpret_cast<const double*>(b);
  for (std::size_t p0 = 0; p0 < k; p0 += kPanel) {
    const std::size_t p1 = std::min(k, p0 + kPanel);
    for (std::size_t i = 0; i < m; ++i) {
      double* crow = cr + 2 * i * n;
      for (std::size_t p = p0; p < p1; ++p) {
        const double are = a[i * k + p].real();
        const double aim = a[i * k + p].imag();
        const double* brow = br + 2 * p * n;
        for (std::size_t j = 0; j < n; ++j) {
          const double bre = brow[2 * j];
          const double bim = brow[2 * j + 1];
          crow[2 * j] += are * bre - aim * bim;
          crow[2 * j + 1] += are * bim + aim * bre;
        }
      }
    }
  }
}

cd dotu(std::span<const cd> x, std::span<const cd> y) {
  double re = 0.0;
  double im = 0.0;
  const std::size_t n = std::min(x.size(), y.size());
  for (std::size_t i = 0; i < n; ++i) {
    re += x[i].real() * y[i].real() - x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() + x[i].imag() * y[i].real();
  }
  return {re, im};
}

double weighted_norm2(std::span<const cd> x, std::span<const double> w) {
  double acc = 0.0;
  if (w.empty()) {
    for (const cd& v : x) acc += v.real() * v.real() + v.imag() * v.imag();
    return acc;
  }
  const std::size_t n = std::min(x.size(), w.size());
  for (std::size_t i = 0; i < n; ++i) {
    acc += w[i] * (x[i].real() * x[i].real() + x[i].imag() * x[i].imag());
  }
  return acc;
}

}  // namespace biphoton::kernels::scalar
