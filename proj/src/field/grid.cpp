#include "closure/field/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "closure/error.hpp"

namespace closure {

GridChart GridChart::periodic_box(const Vec3& periods, const std::array<std::size_t, 3>& dims) {
  GridChart chart;
  chart.dims = dims;
  for (int a = 0; a < 3; ++a) {
    chart.spacing[a] = periods[a] / static_cast<double>(dims[a]);
    chart.periodic[a] = true;
  }
  chart.validate();
  return chart;
}

GridChart GridChart::patch(const Vec3& lo, const Vec3& hi, const std::array<std::size_t, 3>& dims) {
  GridChart chart;
  chart.dims = dims;
  chart.origin = lo;
  for (int a = 0; a < 3; ++a) {
    if (dims[a] < 2) throw Error(ErrorKind::Precondition, "patch needs at least two points per axis");
    chart.spacing[a] = (hi[a] - lo[a]) / static_cast<double>(dims[a] - 1);
    chart.periodic[a] = false;
  }
  chart.validate();
  return chart;
}

Vec3 GridChart::coordinate(std::size_t p) const noexcept {
  const auto idx = multi_index(p);
  return {origin[0] + spacing[0] * static_cast<double>(idx[0]),
          origin[1] + spacing[1] * static_cast<double>(idx[1]),
          origin[2] + spacing[2] * static_cast<double>(idx[2])};
}

double GridChart::min_spacing() const noexcept { return std::min({spacing[0], spacing[1], spacing[2]}); }

Vec3 GridChart::periods() const noexcept {
  return {spacing[0] * static_cast<double>(dims[0]), spacing[1] * static_cast<double>(dims[1]),
          spacing[2] * static_cast<double>(dims[2])};
}

void GridChart::validate(std::size_t min_points) const {
  for (int a = 0; a < 3; ++a) {
    if (!(spacing[a] > 0.0) || !std::isfinite(spacing[a]))
      throw Error(ErrorKind::Precondition, "grid spacing must be positive on axis " + std::to_string(a));
    if (dims[a] < std::max<std::size_t>(min_points, 1))
      throw Error(ErrorKind::Resolution, "axis " + std::to_string(a) + " has " + std::to_string(dims[a]) +
                                             " points, need at least " + std::to_string(min_points));
  }
}

std::string point_label(const GridChart& chart, std::size_t p) {
  const auto idx = chart.multi_index(p);
  return "(" + std::to_string(idx[0]) + ", " + std::to_string(idx[1]) + ", " + std::to_string(idx[2]) + ")";
}

}  // namespace closure
