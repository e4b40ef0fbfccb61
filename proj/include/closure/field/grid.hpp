#pragma once

#include <array>
#include <cstddef>
#include <string>

#include "closure/field/sym3.hpp"

namespace closure {

/// Structured grid chart. Points are stored row-major with the z axis fastest.
struct GridChart {
  std::array<std::size_t, 3> dims{};
  Vec3 spacing{};
  std::array<bool, 3> periodic{};
  Vec3 origin{};

  /// Periodic box with period L_a and n_a points per axis (spacing L_a / n_a).
  static GridChart periodic_box(const Vec3& periods, const std::array<std::size_t, 3>& dims);
  /// Closed non-periodic patch [lo, hi]^3 with n points per axis, endpoints included.
  static GridChart patch(const Vec3& lo, const Vec3& hi, const std::array<std::size_t, 3>& dims);

  std::size_t size() const noexcept { return dims[0] * dims[1] * dims[2]; }
  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const noexcept {
    return (i * dims[1] + j) * dims[2] + k;
  }
  std::array<std::size_t, 3> multi_index(std::size_t p) const noexcept {
    return {p / (dims[1] * dims[2]), (p / dims[2]) % dims[1], p % dims[2]};
  }
  Vec3 coordinate(std::size_t p) const noexcept;
  double min_spacing() const noexcept;
  /// Coordinate period per axis (only meaningful on periodic axes).
  Vec3 periods() const noexcept;

  /// Throws on non-positive spacing or dims below `min_points` on any axis.
  void validate(std::size_t min_points = 1) const;

  friend bool operator==(const GridChart&, const GridChart&) = default;
};

/// "(i, j, k)" label used in error messages.
std::string point_label(const GridChart& chart, std::size_t p);

}  // namespace closure
