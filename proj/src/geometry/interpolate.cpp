#include "closure/geometry/interpolate.hpp"

#include <cmath>

#include "closure/error.hpp"

namespace closure {

TricubicInterpolator::TricubicInterpolator(const GridChart& chart) : chart_(chart) { chart_.validate(4); }

bool TricubicInterpolator::contains(const Vec3& x, double margin) const noexcept {
  for (int a = 0; a < 3; ++a) {
    if (chart_.periodic[a]) continue;
    const double s = (x[a] - chart_.origin[a]) / chart_.spacing[a];
    if (!(s >= margin && s <= static_cast<double>(chart_.dims[a] - 1) - margin)) return false;
  }
  return true;
}

TricubicInterpolator::Taps TricubicInterpolator::taps(const Vec3& x) const {
  if (!contains(x)) throw Error(ErrorKind::Precondition, "interpolation point outside the chart");
  std::array<std::array<std::size_t, 4>, 3> idx;
  std::array<std::array<double, 4>, 3> w;
  for (int a = 0; a < 3; ++a) {
    const double s = (x[a] - chart_.origin[a]) / chart_.spacing[a];
    const long n = static_cast<long>(chart_.dims[a]);
    long base = static_cast<long>(std::floor(s)) - 1;
    if (!chart_.periodic[a]) base = std::clamp(base, 0L, n - 4);
    const double f = s - static_cast<double>(base);  // position relative to node `base`
    for (int m = 0; m < 4; ++m) {
      double l = 1.0;
      for (int r = 0; r < 4; ++r)
        if (r != m) l *= (f - r) / static_cast<double>(m - r);
      w[a][m] = l;
      const long node = base + m;
      idx[a][m] = static_cast<std::size_t>(((node % n) + n) % n);
    }
  }
  Taps t;
  int m = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k, ++m) {
        t.index[m] = chart_.index(idx[0][i], idx[1][j], idx[2][k]);
        t.weight[m] = w[0][i] * w[1][j] * w[2][k];
      }
  return t;
}

}  // namespace closure
