#pragma once

#include <cstddef>

// Data-parallel inner loops. Every function exists as a scalar reference and
// an AVX2 variant; the top-level names dispatch at runtime. Both variants
// produce bit-identical results (same operation order, no FMA contraction).
namespace prao::kernels {

enum class Isa { Scalar, Avx2 };

bool avx2_available();
Isa active_isa();
// Pin the implementation (tests). Forcing Avx2 on a CPU without it throws.
void force_isa(Isa isa);
const char* isa_name(Isa isa);

void elementwise_min(const double* a, const double* b, double* out, std::size_t n);
void elementwise_max(const double* a, const double* b, double* out, std::size_t n);

/// Sum over p of max_k |a[k*n + p] - b[k*n + p]|, k < d. Partial sums are kept
/// in four lanes (p mod 4) and reduced as (l0 + l1) + (l2 + l3).
double pivot_pair_cost(const double* a, const double* b, std::size_t n, std::size_t d);

/// Max over slots of the pessimistic violation probability of an edge whose
/// endpoint forecasts are (vu, pu) and (vv, pv). Returns 0 for n == 0.
double max_slot_violation(const double* vu, const double* pu, const double* vv, const double* pv,
                          std::size_t n, double eps);

/// Min over slots of the edge-level upper bound on Pr{value <= eps}.
/// Returns 1 for n == 0.
double min_slot_ub(const double* vu, const double* pu, const double* vv, const double* pv,
                   std::size_t n, double eps);

namespace scalar {
void elementwise_min(const double* a, const double* b, double* out, std::size_t n);
void elementwise_max(const double* a, const double* b, double* out, std::size_t n);
double pivot_pair_cost(const double* a, const double* b, std::size_t n, std::size_t d);
double max_slot_violation(const double* vu, const double* pu, const double* vv, const double* pv,
                          std::size_t n, double eps);
double min_slot_ub(const double* vu, const double* pu, const double* vv, const double* pv,
                   std::size_t n, double eps);
}  // namespace scalar

namespace avx2 {
void elementwise_min(const double* a, const double* b, double* out, std::size_t n);
void elementwise_max(const double* a, const double* b, double* out, std::size_t n);
double pivot_pair_cost(const double* a, const double* b, std::size_t n, std::size_t d);
double max_slot_violation(const double* vu, const double* pu, const double* vv, const double* pv,
                          std::size_t n, double eps);
double min_slot_ub(const double* vu, const double* pu, const double* vv, const double* pv,
                   std::size_t n, double eps);
}  // namespace avx2

}  // namespace prao::kernels
