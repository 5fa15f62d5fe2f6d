// Launched once per CURVLAB_SIMD setting by the test driver; the kernel
// choice is cached process-wide, so each value needs a fresh process.
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#include "curvlab/simd/kernels.hpp"

int main() {
  const char* env = std::getenv("CURVLAB_SIMD");
  std::string expected;
  if (env && std::strcmp(env, "scalar") == 0) {
    expected = "scalar";
  } else {
    expected = curvlab::simd::detail::cpu_has_avx2() ? "avx2" : "scalar";
  }
  const std::string active = curvlab::simd::active_kernels().name;
  if (active != expected) {
    std::fprintf(stderr, "active kernel set '%s', expected '%s' (CURVLAB_SIMD=%s)\n",
                 active.c_str(), expected.c_str(), env ? env : "<unset>");
    return 1;
  }
  std::printf("active kernel set: %s\n", active.c_str());
  return 0;
}
