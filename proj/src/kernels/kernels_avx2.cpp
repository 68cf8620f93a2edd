#include "biphoton/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>
#endif

#include <algorithm>

namespace biphoton::kernels::avx2 {

#if defined(__AVX2__) && defined(__FMA__)

namespace {

constexpr std::size_t kPanel = 64;

// (a_re + i a_im) * [b0, b1] for two packed complex values in b.
inline __m256d cmul_bcast(__m256d are, __m256d aim, __m256d b) {
  const __m256d bsw = _mm256_permute_pd(b, 0b0101);
  return _mm256_fmaddsub_pd(are, b, _mm256_mul_pd(aim, bsw));
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

void cgemm(std::size_t m, std::size_t n, std::size_t k, const cd* a, const cd* b, cd* c) {
  std::fill(c, c + m * n, cd{});
  auto* cr = reinterpret_cast<double*>(c);
  const auto* br = reinterpret_cast<const double*>(b);
  const std::size_t n2 = n & ~std::size_t{3};  // columns handled four at a time
  for (std::size_t p0 = 0; p0 < k; p0 += kPanel) {
    const std::size_t p1 = std::min(k, p0 + kPanel);
    for (std::size_t i = 0; i < m; ++i) {
      double* crow = cr + 2 * i * n;
      std::size_t p = p0;
      // two rows of B per pass halves the C load/store traffic
      for (; p + 1 < p1; p += 2) {
        const __m256d are0 = _mm256_set1_pd(a[i * k + p].real());
        const __m256d aim0 = _mm256_set1_pd(a[i * k + p].imag());
        const __m256d are1 = _mm256_set1_pd(a[i * k + p + 1].real());
        const __m256d aim1 = _mm256_set1_pd(a[i * k + p + 1].imag());
        const double* b0 = br + 2 * p * n;
        const double* b1 = b0 + 2 * n;
        std::size_t j = 0;
        for (; j < n2; j += 4) {
          __m256d c0 = _mm256_loadu_pd(crow + 2 * j);
          __m256d c1 = _mm256_loadu_pd(crow + 2 * j + 4);
          c0 = _mm256_add_pd(c0, cmul_bcast(are0, aim0, _mm256_loadu_pd(b0 + 2 * j)));
          c1 = _mm256_add_pd(c1, cmul_bcast(are0, aim0, _mm256_loadu_pd(b0 + 2 * j + 4)));
          c0 = _mm256_add_pd(c0, cmul_bcast(are1, aim1, _mm256_loadu_pd(b1 + 2 * j)));
          c1 = _mm256_add_pd(c1, cmul_bcast(are1, aim1, _mm256_loadu_pd(b1 + 2 * j + 4)));
          _mm256_storeu_pd(crow + 2 * j, c0);
          _mm256_storeu_pd(crow + 2 * j + 4, c1);
        }
        for (; j < n; ++j) {
          const cd x = a[i * k + p] * cd{b0[2 * j], b0[2 * j + 1]} +
                       a[i * k + p + 1] * cd{b1[2 * j], b1[2 * j + 1]};
          crow[2 * j] += x.real();
          crow[2 * j + 1] += x.imag();
        }
      }
      for (; p < p1; ++p) {
        const __m256d are = _mm256_set1_pd(a[i * k + p].real());
        const __m256d aim = _mm256_set1_pd(a[i * k + p].imag());
        const double* b0 = br + 2 * p * n;
        std::size_t j = 0;
        for (; j < n2; j += 4) {
          __m256d c0 = _mm256_loadu_pd(crow + 2 * j);
          __m256d c1 = _mm256_loadu_pd(crow + 2 * j + 4);
          c0 = _mm256_add_pd(c0, cmul_bcast(are, aim, _mm256_loadu_pd(b0 + 2 * j)));
          c1 = _mm256_add_pd(c1, cmul_bcast(are, aim, _mm256_loadu_pd(b0 + 2 * j + 4)));
          _mm256_storeu_pd(crow + 2 * j, c0);
          _mm256_storeu_pd(crow + 2 * j + 4, c1);
        }
        for (; j < n; ++j) {
          const cd x = a[i * k + p] * cd{b0[2 * j], b0[2 * j + 1]};
          crow[2 * j] += x.real();
          crow[2 * j + 1] += x.imag();
        }
      }
    }
  }
}

cd dotu(std::span<const cd> x, std::span<const cd> y) {
  const std::size_t n = std::min(x.size(), y.size());
  const auto* xr = reinterpret_cast<const double*>(x.data());
  const auto* yr = reinterpret_cast<const double*>(y.data());
  // acc_rr holds x_re*y_re | x_im*y_im lanes, acc_ri holds x_re*y_im | x_im*y_re
  __m256d acc_rr = _mm256_setzero_pd();
  __m256d acc_ri = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xr + 2 * i);
    const __m256d yv = _mm256_loadu_pd(yr + 2 * i);
    acc_rr = _mm256_fmadd_pd(xv, yv, acc_rr);
    acc_ri = _mm256_fmadd_pd(xv, _mm256_permute_pd(yv, 0b0101), acc_ri);
  }
  alignas(32) double rr[4];
  alignas(32) double ri[4];
  _mm256_store_pd(rr, acc_rr);
  _mm256_store_pd(ri, acc_ri);
  double re = (rr[0] - rr[1]) + (rr[2] - rr[3]);
  double im = (ri[0] + ri[1]) + (ri[2] + ri[3]);
  for (; i < n; ++i) {
    re += x[i].real() * y[i].real() - x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() + x[i].imag() * y[i].real();
  }
  return {re, im};
}

double weighted_norm2(std::span<const cd> x, std::span<const double> w) {
  const auto* xr = reinterpret_cast<const double*>(x.data());
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  if (w.empty()) {
    const std::size_t n = x.size();
    for (; i + 2 <= n; i += 2) {
      const __m256d v = _mm256_loadu_pd(xr + 2 * i);
      acc = _mm256_fmadd_pd(v, v, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
    return s;
  }
  const std::size_t n = std::min(x.size(), w.size());
  for (; i + 2 <= n; i += 2) {
    const __m256d v = _mm256_loadu_pd(xr + 2 * i);
    // weights duplicated per re/im lane: (w0, w0, w1, w1)
    const __m128d wp = _mm_loadu_pd(w.data() + i);
    const __m256d wv = _mm256_permute4x64_pd(_mm256_castpd128_pd256(wp), 0b01010000);
    acc = _mm256_fmadd_pd(_mm256_mul_pd(v, v), wv, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += w[i] * (x[i].real() * x[i].real() + x[i].imag() * x[i].imag());
  return s;
}

#else

void cgemm(std::size_t m, std::size_t n, std::size_t k, const cd* a, const cd* b, cd* c) {
  scalar::cgemm(m, n, k, a, b, c);
}
cd dotu(std::span<const cd> x, std::span<const cd> y) { return scalar::dotu(x, y); }
double weighted_norm2(std::span<const cd> x, std::span<const double> w) {
  return scalar::weighted_norm2(x, w);
}

#endif

}  // namespace biphoton::kernels::avx2
