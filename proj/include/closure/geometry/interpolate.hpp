#pragma once

#include <array>
#include <span>

#include "closure/field/grid.hpp"

namespace closure {

/// Tensor-product cubic Lagrange interpolation on a grid chart (4 nodes per axis).
/// Periodic axes wrap; non-periodic axes shift the stencil inward at the edges.
class TricubicInterpolator {
 public:
  struct Taps {
    std::array<std::size_t, 64> index{};
    std::array<double, 64> weight{};
  };

  explicit TricubicInterpolator(const GridChart& chart);

  /// True when x lies inside the chart with at least `margin` cells to spare
  /// on every non-periodic axis.
  bool contains(const Vec3& x, double margin = 0.0) const noexcept;

  /// Stencil for coordinate x; requires contains(x).
  Taps taps(const Vec3& x) const;

  static double apply(const Taps& taps, std::span<const double> plane) noexcept {
    double acc = 0.0;
    for (int m = 0; m < 64; ++m) acc += taps.weight[m] * plane[taps.index[m]];
    return acc;
  }

 private:
  GridChart chart_;
};

}  // namespace closure
