#include <atomic>
#include <cstdlib>
#include <stdexcept>

#include "prao/kernels/kernels.hpp"

namespace prao::kernels {

namespace {

Isa detect() {
  if (const char* env = std::getenv("PRAO_FORCE_SCALAR"); env != nullptr && env[0] == '1') {
    return Isa::Scalar;
  }
  return avx2_available() ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
  if (isa == Isa::Avx2 && !avx2_available()) throw std::runtime_error("AVX2 not supported on this CPU");
  current().store(isa, std::memory_order_relaxed);
}

const char* isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

void elementwise_min(const double* a, const double* b, double* out, std::size_t n) {
  if (active_isa() == Isa::Avx2) return avx2::elementwise_min(a, b, out, n);
  scalar::elementwise_min(a, b, out, n);
}

void elementwise_max(const double* a, const double* b, double* out, std::size_t n) {
  if (active_isa() == Isa::Avx2) return avx2::elementwise_max(a, b, out, n);
  scalar::elementwise_max(a, b, out, n);
}

double pivot_pair_cost(const double* a, const double* b, std::size_t n, std::size_t d) {
  if (active_isa() == Isa::Avx2) return avx2::pivot_pair_cost(a, b, n, d);
  return scalar::pivot_pair_cost(a, b, n, d);
}

double max_slot_violation(const double* vu, const double* pu, const double* vv, const double* pv,
                          std::size_t n, double eps) {
  if (active_isa() == Isa::Avx2) return avx2::max_slot_violation(vu, pu, vv, pv, n, eps);
  return scalar::max_slot_violation(vu, pu, vv, pv, n, eps);
}

double min_slot_ub(const double* vu, const double* pu, const double* vv, const double* pv,
                   std::size_t n, double eps) {
  if (active_isa() == Isa::Avx2) return avx2::min_slot_ub(vu, pu, vv, pv, n, eps);
  return scalar::min_slot_ub(vu, pu, vv, pv, n, eps);
}

}  // namespace prao::kernels
