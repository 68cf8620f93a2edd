#include "biphoton/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace biphoton::kernels {

namespace {

bool cpu_has_avx2() {
#if (defined(__x86_64__) || defined(__i386__)) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa detect() {
  const bool avx = cpu_has_avx2();
  if (const char* env = std::getenv("BIPHOTON_SIM_ISA")) {
    if (std::strcmp(env, "scalar") == 0) return Isa::Scalar;
    if (std::strcmp(env, "avx2") == 0 && avx) return Isa::Avx2;
  }
  return avx ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

Isa active_isa() { return current().load(std::memory_order_relaxed); }

bool isa_available(Isa isa) { return isa == Isa::Scalar || cpu_has_avx2(); }

void force_isa(Isa isa) {
  current().store(isa_available(isa) ? isa : Isa::Scalar, std::memory_order_relaxed);
}

std::string_view isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

void cgemm(std::size_t m, std::size_t n, std::size_t k, const cd* a, const cd* b, cd* c) {
  if (active_isa() == Isa::Avx2) {
    avx2::cgemm(m, n, k, a, b, c);
  } else {
    scalar::cgemm(m, n, k, a, b, c);
  }
}

cd dotu(std::span<const cd> x, std::span<const cd> y) {
  return active_isa() == Isa::Avx2 ? avx2::dotu(x, y) : scalar::dotu(x, y);
}

double weighted_norm2(std::span<const cd> x, std::span<const double> w) {
  return active_isa() == Isa::Avx2 ? avx2::weighted_norm2(x, w) : scalar::weighted_norm2(x, w);
}

}  // namespace biphoton::kernels
