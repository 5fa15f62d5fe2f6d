#include <cstdlib>
#include <string>

#include "curvlab/simd/kernels.hpp"

namespace curvlab::simd {

namespace detail {
bool cpu_has_avx2() { return __builtin_cpu_supports("avx2") != 0; }
}  // namespace detail

const KernelTable& scalar_kernels() {
  static const KernelTable t{"scalar", detail::em_paths_scalar, detail::lb_apply_scalar};
  return t;
}

const KernelTable* avx2_kernels() {
  static const KernelTable t{"avx2", detail::em_paths_avx2, detail::lb_apply_avx2};
  static const bool ok = detail::cpu_has_avx2();
  return ok ? &t : nullptr;
}

const KernelTable& active_kernels() {
  static const KernelTable* chosen = [] {
    const char* env = std::getenv("CURVLAB_SIMD");
    const std::string want = env ? env : "";
    if (want == "scalar") return &scalar_kernels();
    const KernelTable* vec = avx2_kernels();
    if (vec) return vec;  // covers both "avx2" and the default preference
    return &scalar_kernels();
  }();
  return *chosen;
}

}  // namespace curvlab::simd
