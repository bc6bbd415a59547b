#include <atomic>
#include <cstdlib>
#include <string>

#include "pixflow/error.hpp"
#include "pixflow/simd/kernels.hpp"

namespace pixflow::simd {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend detect() noexcept {
  if (const char* env = std::getenv("PIXFLOW_SIMD")) {
    if (auto b = parse_backend(env); b && backend_available(*b)) return *b;
  }
  if (backend_available(Backend::Avx2)) return Backend::Avx2;
  if (backend_available(Backend::Neon)) return Backend::Neon;
  return Backend::Scalar;
}

std::atomic<const KernelTable*>& active_table() noexcept {
  static std::atomic<const KernelTable*> table{&kernels(detect())};
  return table;
}

}  // namespace

std::string_view to_string(Backend backend) noexcept {
  switch (backend) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
    case Backend::Neon: return "neon";
  }
  return "scalar";
}

std::optional<Backend> parse_backend(std::string_view name) noexcept {
  if (name == "scalar") return Backend::Scalar;
  if (name == "avx2") return Backend::Avx2;
  if (name == "neon") return Backend::Neon;
  return std::nullopt;
}

bool backend_available(Backend backend) noexcept {
  switch (backend) {
    case Backend::Scalar: return true;
    case Backend::Avx2: return avx2_kernels() != nullptr && cpu_has_avx2();
    case Backend::Neon: return neon_kernels() != nullptr;
  }
  return false;
}

const KernelTable& kernels(Backend backend) {
  if (!backend_available(backend)) {
    throw Error(ErrorCode::InvalidConfig,
                "SIMD backend '" + std::string(to_string(backend)) + "' is not available on this host");
  }
  switch (backend) {
    case Backend::Avx2: return *avx2_kernels();
    case Backend::Neon: return *neon_kernels();
    case Backend::Scalar: break;
  }
  return scalar_kernels();
}

Backend active_backend() noexcept { return active_table().load()->backend; }

void set_backend(Backend backend) { active_table().store(&kernels(backend)); }

const KernelTable& kernels() noexcept { return *active_table().load(); }

}  // namespace pixflow::simd
