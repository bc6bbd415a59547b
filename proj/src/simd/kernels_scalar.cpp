#include <algorithm>
#include <cmath>

#include "pixflow/simd/kernels.hpp"

namespace pixflow::simd {
namespace {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void xpby(const double* x, double beta, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + beta * y[i];
}

void multiply(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

double max_abs(const double* a, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(a[i]));
  return m;
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double sum_sq_diff(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

void laplacian_apply(const LaplacianView& lap, const double* x, double* y) {
  for (std::size_t i = 0; i < lap.rows; ++i) {
    double acc = 0.0;
    for (std::uint32_t k = lap.row_ptr[i]; k < lap.row_ptr[i + 1]; ++k) {
      acc += lap.val[k] * x[lap.col[k]];
    }
    y[i] = lap.diag[i] * x[i] - acc;
  }
}

void edge_gradient(const std::int32_t* head, const std::int32_t* tail, const double* scale,
                   const double* u, double* out, std::size_t m) {
  for (std::size_t e = 0; e < m; ++e) out[e] = scale[e] * (u[head[e]] - u[tail[e]]);
}

void conductivity_step(double* mu, const double* flux, std::size_t m, double dt, double beta,
                       double floor) {
  for (std::size_t e = 0; e < m; ++e) {
    const double next = mu[e] + dt * (std::pow(std::abs(flux[e]), beta) - mu[e]);
    mu[e] = (mu[e] <= 0.0 || next < floor) ? 0.0 : next;
  }
}

constexpr KernelTable kTable{
    Backend::Scalar, dot,     axpy, xpby, multiply, max_abs, max_abs_diff, sum_sq_diff,
    laplacian_apply, edge_gradient, conductivity_step,
};

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kTable; }

}  // namespace pixflow::simd
