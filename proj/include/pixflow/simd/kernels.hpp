#pragma once

// Data-parallel inner loops of the solver and the metrics. Every kernel has a
// scalar reference implementation; vector variants are selected at runtime
// from the host CPU and must agree with the reference to rounding.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

namespace pixflow::simd {

enum class Backend { Scalar, Avx2, Neon };

std::string_view to_string(Backend backend) noexcept;
std::optional<Backend> parse_backend(std::string_view name) noexcept;

/// CSR weighted graph Laplacian: y_i = diag_i * x_i - sum_k val_k * x[col_k].
struct LaplacianView {
  std::size_t rows = 0;
  const std::uint32_t* row_ptr = nullptr;  // rows + 1 entries
  const std::int32_t* col = nullptr;
  const double* val = nullptr;  // off-diagonal conductances, >= 0
  const double* diag = nullptr;
};

struct KernelTable {
  Backend backend;
  double (*dot)(const double* a, const double* b, std::size_t n);
  /// y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  /// y = x + beta * y
  void (*xpby)(const double* x, double beta, double* y, std::size_t n);
  /// out = a .* b
  void (*multiply)(const double* a, const double* b, double* out, std::size_t n);
  double (*max_abs)(const double* a, std::size_t n);
  double (*max_abs_diff)(const double* a, const double* b, std::size_t n);
  double (*sum_sq_diff)(const double* a, const double* b, std::size_t n);
  void (*laplacian_apply)(const LaplacianView& lap, const double* x, double* y);
  /// out_e = scale_e * (u[head_e] - u[tail_e])
  void (*edge_gradient)(const std::int32_t* head, const std::int32_t* tail, const double* scale,
                        const double* u, double* out, std::size_t m);
  /// mu <- mu + dt * (|flux|^beta - mu); values below floor become exactly 0.
  void (*conductivity_step)(double* mu, const double* flux, std::size_t m, double dt,
                            double beta, double floor);
};

const KernelTable& scalar_kernels() noexcept;
/// nullptr when the variant was not compiled in.
const KernelTable* avx2_kernels() noexcept;
const KernelTable* neon_kernels() noexcept;

[[nodiscard]] bool backend_available(Backend backend) noexcept;

/// Best available backend unless overridden by PIXFLOW_SIMD or set_backend.
[[nodiscard]] Backend active_backend() noexcept;
void set_backend(Backend backend);
[[nodiscard]] const KernelTable& kernels() noexcept;
[[nodiscard]] const KernelTable& kernels(Backend backend);

}  // namespace pixflow::simd
