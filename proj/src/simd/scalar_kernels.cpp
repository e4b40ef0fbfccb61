#include "closure/simd/kernels.hpp"

namespace closure::simd {

namespace {

void combine_scalar(double* dst, const double* const* src, const double* w, int count, std::size_t len) {
  for (std::size_t k = 0; k < len; ++k) {
    double acc = w[0] * src[0][k];
    for (int m = 1; m < count; ++m) acc = acc + w[m] * src[m][k];
    dst[k] = acc;
  }
}

void contract_scalar(const double* const* a, const double* const* b, double* out, std::size_t len) {
  for (std::size_t k = 0; k < len; ++k) {
    const double diag = (a[0][k] * b[0][k] + a[3][k] * b[3][k]) + a[5][k] * b[5][k];
    const double off = (a[1][k] * b[1][k] + a[2][k] * b[2][k]) + a[4][k] * b[4][k];
    out[k] = diag + 2.0 * off;
  }
}

void inverse_scalar(const double* const* g, double* const* inv, double* det, std::size_t len) {
  for (std::size_t k = 0; k < len; ++k) {
    const double g0 = g[0][k], g1 = g[1][k], g2 = g[2][k], g3 = g[3][k], g4 = g[4][k], g5 = g[5][k];
    const double c00 = g3 * g5 - g4 * g4;
    const double c01 = g2 * g4 - g1 * g5;
    const double c02 = g1 * g4 - g2 * g3;
    const double c11 = g0 * g5 - g2 * g2;
    const double c12 = g1 * g2 - g0 * g4;
    const double c22 = g0 * g3 - g1 * g1;
    const double d = (g0 * c00 + g1 * c01) + g2 * c02;
    det[k] = d;
    inv[0][k] = c00 / d;
    inv[1][k] = c01 / d;
    inv[2][k] = c02 / d;
    inv[3][k] = c11 / d;
    inv[4][k] = c12 / d;
    inv[5][k] = c22 / d;
  }
}

}  // namespace

const KernelTable& scalar_kernels() noexcept {
  static const KernelTable table{"scalar", &combine_scalar, &contract_scalar, &inverse_scalar};
  return table;
}

}  // namespace closure::simd
