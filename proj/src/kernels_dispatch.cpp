#include <cstdlib>
#include <string_view>

#include "framekit/kernels.hpp"

namespace framekit::kernels {

#if defined(FRAMEKIT_HAVE_AVX2)
const KernelTable& avx2_table_unchecked();
#endif

bool cpu_supports_avx2_fma() {
#if defined(FRAMEKIT_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported;
#else
  return false;
#endif
}

const KernelTable* avx2_table() {
#if defined(FRAMEKIT_HAVE_AVX2)
  if (cpu_supports_avx2_fma()) return &avx2_table_unchecked();
#endif
  return nullptr;
}

const KernelTable& active() {
  static const KernelTable& chosen = []() -> const KernelTable& {
    if (const char* forced = std::getenv("FRAMEKIT_KERNELS");
        forced != nullptr && std::string_view(forced) == "scalar") {
      return scalar_table();
    }
    if (const KernelTable* simd = avx2_table()) return *simd;
    return scalar_table();
  }();
  return chosen;
}

}  // namespace framekit::kernels
