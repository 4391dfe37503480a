#include <cmath>

#include "prao/kernels/kernels.hpp"

namespace prao::kernels::scalar {

void elementwise_min(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] < b[i] ? a[i] : b[i];
}

void elementwise_max(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] > b[i] ? a[i] : b[i];
}

double pivot_pair_cost(const double* a, const double* b, std::size_t n, std::size_t d) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  if (d == 0) return 0.0;
  for (std::size_t p = 0; p < n; ++p) {
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
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double qu = 1.0 - pu[i];
    const double qv = 1.0 - pv[i];
    const double worst = vu[i] > vv[i] ? vu[i] : vv[i];
    const double a = worst > eps ? pu[i] * pv[i] : 0.0;
    const double b = vv[i] > eps ? qu * pv[i] : 0.0;
    const double c = vu[i] > eps ? pu[i] * qv : 0.0;
    const double s = (a + (b + c)) + qu * qv;
    best = s > best ? s : best;
  }
  return best;
}

double min_slot_ub(const double* vu, const double* pu, const double* vv, const double* pv,
                   std::size_t n, double eps) {
  double best = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double qu = 1.0 - pu[i];
    const double qv = 1.0 - pv[i];
    const bool u_ok = vu[i] <= eps;
    const bool v_ok = vv[i] <= eps;
    double ub;
    if (u_ok && v_ok) {
      ub = 1.0;
    } else if (u_ok) {
      ub = 1.0 - pv[i] * qu;
    } else if (v_ok) {
      ub = 1.0 - pu[i] * qv;
    } else {
      ub = qu * qv;
    }
    best = ub < best ? ub : best;
  }
  return best;
}

}  // namespace prao::kernels::scalar
