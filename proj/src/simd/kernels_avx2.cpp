// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include "pixflow/simd/kernels.hpp"

#if defined(PIXFLOW_HAVE_AVX2)

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace pixflow::simd {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

inline double hmax(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_max_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_max_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

inline __m256d vabs(__m256d v) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v); }

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void xpby(const double* x, double beta, double* y, std::size_t n) {
  const __m256d vb = _mm256_set1_pd(beta);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(vb, _mm256_loadu_pd(y + i), _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) y[i] = x[i] + beta * y[i];
}

void multiply(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

double max_abs(const double* a, std::size_t n) {
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) m = _mm256_max_pd(m, vabs(_mm256_loadu_pd(a + i)));
  double r = hmax(m);
  for (; i < n; ++i) r = std::max(r, std::abs(a[i]));
  return r;
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    m = _mm256_max_pd(m, vabs(_mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i))));
  }
  double r = hmax(m);
  for (; i < n; ++i) r = std::max(r, std::abs(a[i] - b[i]));
  return r;
}

double sum_sq_diff(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double s = hsum(acc);
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
    __m256d acc = _mm256_setzero_pd();
    for (; k + 4 <= end; k += 4) {
      const __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(lap.col + k));
      const __m256d xv = _mm256_i32gather_pd(x, idx, 8);
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(lap.val + k), xv, acc);
    }
    double s = hsum(acc);
    for (; k < end; ++k) s += lap.val[k] * x[lap.col[k]];
    y[i] = lap.diag[i] * x[i] - s;
  }
}

void edge_gradient(const std::int32_t* head, const std::int32_t* tail, const double* scale,
                   const double* u, double* out, std::size_t m) {
  std::size_t e = 0;
  for (; e + 4 <= m; e += 4) {
    const __m128i ih = _mm_loadu_si128(reinterpret_cast<const __m128i*>(head + e));
    const __m128i it = _mm_loadu_si128(reinterpret_cast<const __m128i*>(tail + e));
    const __m256d diff = _mm256_sub_pd(_mm256_i32gather_pd(u, ih, 8), _mm256_i32gather_pd(u, it, 8));
    _mm256_storeu_pd(out + e, _mm256_mul_pd(_mm256_loadu_pd(scale + e), diff));
  }
  for (; e < m; ++e) out[e] = scale[e] * (u[head[e]] - u[tail[e]]);
}

template <int Mode>
void conductivity_step_impl(double* mu, const double* flux, std::size_t m, double dt, double beta,
                            double floor) {
  const __m256d vdt = _mm256_set1_pd(dt);
  const __m256d vfloor = _mm256_set1_pd(floor);
  std::size_t e = 0;
  for (; e + 4 <= m; e += 4) {
    const __m256d f = vabs(_mm256_loadu_pd(flux + e));
    __m256d p;
    if constexpr (Mode == 1) {
      p = f;
    } else if constexpr (Mode == 2) {
      p = _mm256_mul_pd(f, f);
    } else if constexpr (Mode == 3) {
      p = _mm256_mul_pd(f, _mm256_sqrt_pd(f));
    } else {
      alignas(32) double lanes[4];
      _mm256_store_pd(lanes, f);
      for (double& l : lanes) l = std::pow(l, beta);
      p = _mm256_load_pd(lanes);
    }
    const __m256d cur = _mm256_loadu_pd(mu + e);
    const __m256d next = _mm256_fmadd_pd(vdt, _mm256_sub_pd(p, cur), cur);
    const __m256d dead = _mm256_or_pd(_mm256_cmp_pd(next, vfloor, _CMP_LT_OQ),
                                      _mm256_cmp_pd(cur, _mm256_setzero_pd(), _CMP_LE_OQ));
    _mm256_storeu_pd(mu + e, _mm256_andnot_pd(dead, next));
  }
  for (; e < m; ++e) {
    const double next = mu[e] + dt * (std::pow(std::abs(flux[e]), beta) - mu[e]);
    mu[e] = (mu[e] <= 0.0 || next < floor) ? 0.0 : next;
  }
}

void conductivity_step(double* mu, const double* flux, std::size_t m, double dt, double beta,
                       double floor) {
  if (beta == 1.0) {
    conductivity_step_impl<1>(mu, flux, m, dt, beta, floor);
  } else if (beta == 2.0) {
    conductivity_step_impl<2>(mu, flux, m, dt, beta, floor);
  } else if (beta == 1.5) {
    conductivity_step_impl<3>(mu, flux, m, dt, beta, floor);
  } else {
    conductivity_step_impl<0>(mu, flux, m, dt, beta, floor);
  }
}

constexpr KernelTable kTable{
    Backend::Avx2,   dot,           axpy, xpby, multiply, max_abs, max_abs_diff, sum_sq_diff,
    laplacian_apply, edge_gradient, conductivity_step,
};

}  // namespace

const KernelTable* avx2_kernels() noexcept { return &kTable; }

}  // namespace pixflow::simd

#else

namespace pixflow::simd {
const KernelTable* avx2_kernels() noexcept { return nullptr; }
}  // namespace pixflow::simd

#endif
