// Compiled with -mavx2. Only reached after a runtime CPU check.
#include "closure/simd/kernels.hpp"

#if defined(__AVX2__)
#include <immintrin.h>

namespace closure::simd {

namespace {

void combine_avx2(double* dst, const double* const* src, const double* w, int count, std::size_t len) {
  std::size_t k = 0;
  __m256d wv[4];
  for (int m = 0; m < count; ++m) wv[m] = _mm256_set1_pd(w[m]);
  for (; k + 4 <= len; k += 4) {
    __m256d acc = _mm256_mul_pd(wv[0], _mm256_loadu_pd(src[0] + k));
    for (int m = 1; m < count; ++m)
      acc = _mm256_add_pd(acc, _mm256_mul_pd(wv[m], _mm256_loadu_pd(src[m] + k)));
    _mm256_storeu_pd(dst + k, acc);
  }
  for (; k < len; ++k) {
    double acc = w[0] * src[0][k];
    for (int m = 1; m < count; ++m) acc = acc + w[m] * src[m][k];
    dst[k] = acc;
  }
}

void contract_avx2(const double* const* a, const double* const* b, double* out, std::size_t len) {
  std::size_t k = 0;
  const __m256d two = _mm256_set1_pd(2.0);
  for (; k + 4 <= len; k += 4) {
    auto prod = [&](int s) { return _mm256_mul_pd(_mm256_loadu_pd(a[s] + k), _mm256_loadu_pd(b[s] + k)); };
    const __m256d diag = _mm256_add_pd(_mm256_add_pd(prod(0), prod(3)), prod(5));
    const __m256d off = _mm256_add_pd(_mm256_add_pd(prod(1), prod(2)), prod(4));
    _mm256_storeu_pd(out + k, _mm256_add_pd(diag, _mm256_mul_pd(two, off)));
  }
  for (; k < len; ++k) {
    const double diag = (a[0][k] * b[0][k] + a[3][k] * b[3][k]) + a[5][k] * b[5][k];
    const double off = (a[1][k] * b[1][k] + a[2][k] * b[2][k]) + a[4][k] * b[4][k];
    out[k] = diag + 2.0 * off;
  }
}

void inverse_avx2(const double* const* g, double* const* inv, double* det, std::size_t len) {
  std::size_t k = 0;
  for (; k + 4 <= len; k += 4) {
    const __m256d g0 = _mm256_loadu_pd(g[0] + k), g1 = _mm256_loadu_pd(g[1] + k),
                  g2 = _mm256_loadu_pd(g[2] + k), g3 = _mm256_loadu_pd(g[3] + k),
                  g4 = _mm256_loadu_pd(g[4] + k), g5 = _mm256_loadu_pd(g[5] + k);
    auto cof = [](__m256d a, __m256d b, __m256d c, __m256d d) {
      return _mm256_sub_pd(_mm256_mul_pd(a, b), _mm256_mul_pd(c, d));
    };
    const __m256d c00 = cof(g3, g5, g4, g4);
    const __m256d c01 = cof(g2, g4, g1, g5);
    const __m256d c02 = cof(g1, g4, g2, g3);
    const __m256d c11 = cof(g0, g5, g2, g2);
    const __m256d c12 = cof(g1, g2, g0, g4);
    const __m256d c22 = cof(g0, g3, g1, g1);
    const __m256d d = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(g0, c00), _mm256_mul_pd(g1, c01)),
                                    _mm256_mul_pd(g2, c02));
    _mm256_storeu_pd(det + k, d);
    _mm256_storeu_pd(inv[0] + k, _mm256_div_pd(c00, d));
    _mm256_storeu_pd(inv[1] + k, _mm256_div_pd(c01, d));
    _mm256_storeu_pd(inv[2] + k, _mm256_div_pd(c02, d));
    _mm256_storeu_pd(inv[3] + k, _mm256_div_pd(c11, d));
    _mm256_storeu_pd(inv[4] + k, _mm256_div_pd(c12, d));
    _mm256_storeu_pd(inv[5] + k, _mm256_div_pd(c22, d));
  }
  if (k < len) {
    const double* tail_g[6];
    double* tail_inv[6];
    for (int s = 0; s < 6; ++s) {
      tail_g[s] = g[s] + k;
      tail_inv[s] = inv[s] + k;
    }
    scalar_kernels().sym3_inverse(tail_g, tail_inv, det + k, len - k);
  }
}

}  // namespace

const KernelTable& avx2_table() noexcept {
  static const KernelTable table{"avx2", &combine_avx2, &contract_avx2, &inverse_avx2};
  return table;
}

}  // namespace closure::simd

#endif
