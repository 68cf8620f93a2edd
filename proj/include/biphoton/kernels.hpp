#pragma once

// Data-parallel inner loops shared by the block algebra and the quadrature sums.
//
// Every kernel has a portable scalar reference implementation and, on x86-64, an
// AVX2/FMA variant. The variant is picked once at runtime from CPUID; the
// environment variable BIPHOTON_SIM_ISA=scalar|avx2 overrides the choice.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace biphoton::kernels {

using cd = std::complex<double>;

enum class Isa { Scalar, Avx2 };

/// C = A * B for row-major complex matrices; A is m x k, B is k x n, C is m x n.
/// C must not alias A or B.
void cgemm(std::size_t m, std::size_t n, std::size_t k, const cd* a, const cd* b, cd* c);

/// Unconjugated dot product sum_i x_i y_i.
cd dotu(std::span<const cd> x, std::span<const cd> y);

/// sum_i w_i |x_i|^2. An empty weight span means unit weights.
double weighted_norm2(std::span<const cd> x, std::span<const double> w);

Isa active_isa();
bool isa_available(Isa isa);
/// Pins the dispatch target. Not synchronized; call before spawning workers.
void force_isa(Isa isa);
std::string_view isa_name(Isa isa);

namespace scalar {
void cgemm(std::size_t m, std::size_t n, std::size_t k, const cd* a, const cd* b, cd* c);
cd dotu(std::span<const cd> x, std::span<const cd> y);
double weighted_norm2(std::span<const cd> x, std::span<const double> w);
}  // namespace scalar

namespace avx2 {
// Present on every platform; on non-x86 builds these forward to the scalar code.
void cgemm(std::size_t m, std::size_t n, std::size_t k, const cd* a, const cd* b, cd* c);
cd dotu(std::span<const cd> x, std::span<const cd> y);
double weighted_norm2(std::span<const cd> x, std::span<const double> w);
}  // namespace avx2

}  // namespace biphoton::kernels
