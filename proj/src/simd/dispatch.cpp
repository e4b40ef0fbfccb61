#include <cstdlib>
#include <string_view>

#include "closure/simd/kernels.hpp"

namespace closure::simd {

#if defined(CLOSURE_HAVE_AVX2)
const KernelTable& avx2_table() noexcept;
#endif

const KernelTable* avx2_kernels() noexcept {
#if defined(CLOSURE_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active_kernels() noexcept {
  static const KernelTable& table = [] () -> const KernelTable& {
    const char* env = std::getenv("CLOSURE_LAB_SIMD");
    const std::string_view choice = env ? env : "";
    if (choice == "scalar") return scalar_kernels();
    if (const KernelTable* fast = avx2_kernels()) return *fast;
    return scalar_kernels();
  }();
  return table;
}

}  // namespace closure::simd
