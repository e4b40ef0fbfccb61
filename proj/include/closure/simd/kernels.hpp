#pragma once

#include <cstddef>
#include <string_view>

namespace closure::simd {

/// Data-parallel inner loops shared by the stencil and tensor code.
///
/// Every variant performs the same floating-point operations in the same
/// order as the scalar reference, so results are bitwise identical.
struct KernelTable {
  const char* name;

  /// dst[k] = Σ_m w[m] * src[m][k] for m < count (count ≤ 4), evaluated left to right.
  void (*combine)(double* dst, const double* const* src, const double* w, int count, std::size_t len);

  /// out[k] = a(k) : b(k) for packed symmetric planes a[0..5], b[0..5].
  void (*sym3_contract)(const double* const* a, const double* const* b, double* out, std::size_t len);

  /// inv[0..5](k) = g(k)^{-1}; det[k] = det g(k). Entries with det == 0 produce inf/nan.
  void (*sym3_inverse)(const double* const* g, double* const* inv, double* det, std::size_t len);
};

const KernelTable& scalar_kernels() noexcept;

/// Null when the binary was built without AVX2 support or the CPU lacks it.
const KernelTable* avx2_kernels() noexcept;

/// The table used by the library. Chosen once: the CLOSURE_LAB_SIMD
/// environment variable ("scalar" or "avx2") overrides CPU detection.
const KernelTable& active_kernels() noexcept;

}  // namespace closure::simd
