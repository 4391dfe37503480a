#include <immintrin.h>

#include <cmath>

#include "prao/kernels/kernels.hpp"

namespace prao::kernels::avx2 {

namespace {

inline __m256d vabs(__m256d x) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x); }

inline double hmax(__m256d v, double init) {
  alignas(32) double t[4];
  _mm256_store_pd(t, v);
  double m = init;
  for (double x : t) m = x > m ? x : m;
  return m;
}

inline double hmin(__m256d v, double init) {
  alignas(32) double t[4];
  _mm256_store_pd(t, v);
  double m = init;
  for (double x : t) m = x < m ? x : m;
  return m;
}

}  // namespace

void elementwise_min(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    // _mm256_min_pd(x, y) yields x < y ? x : y, matching the scalar form.
    _mm256_storeu_pd(out + i, _mm256_min_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  for (; i < n; ++i) out[i] = a[i] < b[i] ? a[i] : b[i];
}

void elementwise_max(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_max_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  for (; i < n; ++i) out[i] = a[i] > b[i] ? a[i] : b[i];
}

double pivot_pair_cost(const double* a, const double* b, std::size_t n, std::size_t d) {
  if (d == 0) return 0.0;
  __m256d acc = _mm256_setzero_pd();
  std::size_t p = 0;
  for (; p + 4 <= n; p += 4) {
    __m256d m = vabs(_mm256_sub_pd(_mm256_loadu_pd(a + p), _mm256_loadu_pd(b + p)));
    for (std::size_t k = 1; k < d; ++k) {
      const __m256d x =
          vabs(_mm256_sub_pd(_mm256_loadu_pd(a + k * n + p), _mm256_loadu_pd(b + k * n + p)));
      // max_pd(x, m) = x > m ? x : m
      m = _mm256_max_pd(x, m);
    }
    acc = _mm256_add_pd(acc, m);
  }
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  for (; p < n; ++p) {
    double m = std::fabs(a[p] - b[p]);
    for (std::size_t k = 1; k < d; ++k) {
      const double x = std::fabs(a[k * n + p] - b[k * n + p]);
      m = x > m ? x : m;
    }
    lane[p & 3] += m;
  }
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double max_slot_violation(const double* vu, const double* pu, const double* vv, const double* pv,
                          std::size_t n, double eps) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d e = _mm256_set1_pd(eps);
  __m256d best = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xu = _mm256_loadu_pd(vu + i);
    const __m256d xv = _mm256_loadu_pd(vv + i);
    const __m256d cu = _mm256_loadu_pd(pu + i);
    const __m256d cv = _mm256_loadu_pd(pv + i);
    const __m256d qu = _mm256_sub_pd(one, cu);
    const __m256d qv = _mm256_sub_pd(one, cv);
    const __m256d worst = _mm256_max_pd(xu, xv);
    const __m256d a = _mm256_and_pd(_mm256_cmp_pd(worst, e, _CMP_GT_OQ), _mm256_mul_pd(cu, cv));
    const __m256d b = _mm256_and_pd(_mm256_cmp_pd(xv, e, _CMP_GT_OQ), _mm256_mul_pd(qu, cv));
    const __m256d c = _mm256_and_pd(_mm256_cmp_pd(xu, e, _CMP_GT_OQ), _mm256_mul_pd(cu, qv));
    const __m256d s = _mm256_add_pd(_mm256_add_pd(a, _mm256_add_pd(b, c)), _mm256_mul_pd(qu, qv));
    best = _mm256_max_pd(s, best);
  }
  double m = hmax(best, 0.0);
  if (i < n) {
    const double tail = scalar::max_slot_violation(vu + i, pu + i, vv + i, pv + i, n - i, eps);
    m = tail > m ? tail : m;
  }
  return m;
}

double min_slot_ub(const double* vu, const double* pu, const double* vv, const double* pv,
                   std::size_t n, double eps) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d e = _mm256_set1_pd(eps);
  __m256d best = one;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xu = _mm256_loadu_pd(vu + i);
    const __m256d xv = _mm256_loadu_pd(vv + i);
    const __m256d cu = _mm256_loadu_pd(pu + i);
    const __m256d cv = _mm256_loadu_pd(pv + i);
    const __m256d qu = _mm256_sub_pd(one, cu);
    const __m256d qv = _mm256_sub_pd(one, cv);
    const __m256d u_ok = _mm256_cmp_pd(xu, e, _CMP_LE_OQ);
    const __m256d v_ok = _mm256_cmp_pd(xv, e, _CMP_LE_OQ);
    const __m256d only_u = _mm256_sub_pd(one, _mm256_mul_pd(cv, qu));
    const __m256d only_v = _mm256_sub_pd(one, _mm256_mul_pd(cu, qv));
    const __m256d neither = _mm256_mul_pd(qu, qv);
    // u_ok ? (v_ok ? 1 : only_u) : (v_ok ? only_v : neither)
    const __m256d if_u = _mm256_blendv_pd(only_u, one, v_ok);
    const __m256d if_not_u = _mm256_blendv_pd(neither, only_v, v_ok);
    const __m256d ub = _mm256_blendv_pd(if_not_u, if_u, u_ok);
    best = _mm256_min_pd(ub, best);
  }
  double m = hmin(best, 1.0);
  if (i < n) {
    const double tail = scalar::min_slot_ub(vu + i, pu + i, vv + i, pv + i, n - i, eps);
    m = tail < m ? tail : m;
  }
  return m;
}

}  // namespace prao::kernels::avx2
