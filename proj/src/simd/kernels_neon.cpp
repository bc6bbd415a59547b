#include "pixflow/simd/kernels.hpp"

#if defined(__aarch64__) && defined(__ARM_NEON)

#include <arm_neon.h>

#include <algorithm>
#include <cmath>

namespace pixflow::simd {
namespace {

inline float64x2_t pair(double lo, double hi) {
  return vsetq_lane_f64(hi, vdupq_n_f64(lo), 1);
}

double dot(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double s = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void xpby(const double* x, double beta, double* y, std::size_t n) {
  const float64x2_t vb = vdupq_n_f64(beta);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(x + i), vb, vld1q_f64(y + i)));
  for (; i < n; ++i) y[i] = x[i] + beta * y[i];
}

void multiply(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

double max_abs(const double* a, std::size_t n) {
  float64x2_t m = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) m = vmaxq_f64(m, vabsq_f64(vld1q_f64(a + i)));
  double r = vmaxvq_f64(m);
  for (; i < n; ++i) r = std::max(r, std::abs(a[i]));
  return r;
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
  float64x2_t m = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) m = vmaxq_f64(m, vabdq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  double r = vmaxvq_f64(m);
  for (; i < n; ++i) r = std::max(r, std::abs(a[i] - b[i]));
  return r;
}

double sum_sq_diff(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    acc = vfmaq_f64(acc, d, d);
  }
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

void laplacian_apply(const LaplacianView& lap, const double* x, double* y) {
  for (std::size_t i = 0; i < lap.rows; ++i) {
    std::uint32_t k = lap.row_ptr[i];
    const std::uint32_t end = lap.row_ptr[i + 1];
    float64x2_t acc = vdupq_n_f64(0.0);
    for (; k + 2 <= end; k += 2) {
      acc = vfmaq_f64(acc, vld1q_f64(lap.val + k), pair(x[lap.col[k]], x[lap.col[k + 1]]));
    }
    double s = vaddvq_f64(acc);
    for (; k < end; ++k) s += lap.val[k] * x[lap.col[k]];
    y[i] = lap.diag[i] * x[i] - s;
  }
}

void edge_gradient(const std::int32_t* head, const std::int32_t* tail, const double* scale,
                   const double* u, double* out, std::size_t m) {
  std::size_t e = 0;
  for (; e + 2 <= m; e += 2) {
    const float64x2_t diff = vsubq_f64(pair(u[head[e]], u[head[e + 1]]), pair(u[tail[e]], u[tail[e + 1]]));
    vst1q_f64(out + e, vmulq_f64(vld1q_f64(scale + e), diff));
  }
  for (; e < m; ++e) out[e] = scale[e] * (u[head[e]] - u[tail[e]]);
}

void conductivity_step(double* mu, const double* flux, std::size_t m, double dt, double beta,
                       double floor) {
  const float64x2_t vdt = vdupq_n_f64(dt);
  const float64x2_t vfloor = vdupq_n_f64(floor);
  const float64x2_t zero = vdupq_n_f64(0.0);
  std::size_t e = 0;
  for (; e + 2 <= m; e += 2) {
    const float64x2_t f = vabsq_f64(vld1q_f64(flux + e));
    float64x2_t p;
    if (beta == 1.0) {
      p = f;
    } else if (beta == 2.0) {
      p = vmulq_f64(f, f);
    } else if (beta == 1.5) {
      p = vmulq_f64(f, vsqrtq_f64(f));
    } else {
      p = pair(std::pow(vgetq_lane_f64(f, 0), beta), std::pow(vgetq_lane_f64(f, 1), beta));
    }
    const float64x2_t cur = vld1q_f64(mu + e);
    const float64x2_t next = vfmaq_f64(cur, vdt, vsubq_f64(p, cur));
    const uint64x2_t dead = vorrq_u64(vcltq_f64(next, vfloor), vcleq_f64(cur, zero));
    vst1q_f64(mu + e, vbslq_f64(dead, zero, next));
  }
  for (; e < m; ++e) {
    const double next = mu[e] + dt * (std::pow(std::abs(flux[e]), beta) - mu[e]);
    mu[e] = (mu[e] <= 0.0 || next < floor) ? 0.0 : next;
  }
}

constexpr KernelTable kTable{
    Backend::Neon,   dot,           axpy, xpby, multiply, max_abs, max_abs_diff, sum_sq_diff,
    laplacian_apply, edge_gradient, conductivity_step,
};

}  // namespace

const KernelTable* neon_kernels() noexcept { return &kTable; }

}  // namespace pixflow::simd

#else

namespace pixflow::simd {
const KernelTable* neon_kernels() noexcept { return nullptr; }
}  // namespace pixflow::simd

#endif
