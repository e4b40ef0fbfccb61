#include "closure/field/stencil.hpp"

#include <string>
#include <vector>

#include "closure/error.hpp"
#include "closure/simd/kernels.hpp"

namespace closure {

namespace {

enum class Derivative { First, Second };

struct Taps {
  std::array<std::size_t, 4> index{};
  std::array<double, 4> weight{};
  int count = 0;
};

Taps taps_at(std::size_t i, std::size_t n, bool periodic, Derivative d, double h) {
  Taps t;
  const bool interior = i > 0 && i + 1 < n;
  if (d == Derivative::First) {
    const double c = 1.0 / (2.0 * h);
    if (interior || periodic) {
      t.index = {(i + n - 1) % n, (i + 1) % n};
      t.weight = {-c, c};
      t.count = 2;
    } else if (i == 0) {
      t.index = {0, 1, 2};
      t.weight = {-3.0 * c, 4.0 * c, -c};
      t.count = 3;
    } else {
      t.index = {n - 3, n - 2, n - 1};
      t.weight = {c, -4.0 * c, 3.0 * c};
      t.count = 3;
    }
  } else {
    const double c = 1.0 / (h * h);
    if (interior || periodic) {
      t.index = {(i + n - 1) % n, i, (i + 1) % n};
      t.weight = {c, -2.0 * c, c};
      t.count = 3;
    } else if (i == 0) {
      t.index = {0, 1, 2, 3};
      t.weight = {2.0 * c, -5.0 * c, 4.0 * c, -c};
      t.count = 4;
    } else {
      t.index = {n - 4, n - 3, n - 2, n - 1};
      t.weight = {-c, 4.0 * c, -5.0 * c, 2.0 * c};
      t.count = 4;
    }
  }
  return t;
}

std::vector<double> apply_axis(std::span<const double> in, const GridChart& chart, int axis, Derivative d) {
  if (axis < 0 || axis > 2) throw Error(ErrorKind::Precondition, "axis must be 0, 1 or 2");
  chart.validate(4);
  const auto& kern = simd::active_kernels();
  const std::size_t n = chart.dims[axis];
  std::size_t stride = 1;
  for (int a = axis + 1; a < 3; ++a) stride *= chart.dims[a];
  std::size_t outer = 1;
  for (int a = 0; a < axis; ++a) outer *= chart.dims[a];
  const double h = chart.spacing[axis];
  const bool periodic = chart.periodic[axis];

  std::vector<double> out(in.size());
  const double* src[4];

  if (stride > 1) {
    for (std::size_t o = 0; o < outer; ++o) {
      const std::size_t block = o * n * stride;
      for (std::size_t i = 0; i < n; ++i) {
        const Taps t = taps_at(i, n, periodic, d, h);
        for (int m = 0; m < t.count; ++m) src[m] = in.data() + block + t.index[m] * stride;
        kern.combine(out.data() + block + i * stride, src, t.weight.data(), t.count, stride);
      }
    }
    return out;
  }

  // Contiguous axis: vectorize the interior of each line, patch the two ends.
  const Taps interior = taps_at(1, n, periodic, d, h);
  for (std::size_t o = 0; o < outer; ++o) {
    const double* line = in.data() + o * n;
    double* dst = out.data() + o * n;
    for (int m = 0; m < interior.count; ++m) src[m] = line + interior.index[m];
    kern.combine(dst + 1, src, interior.weight.data(), interior.count, n - 2);
    for (std::size_t i : {std::size_t{0}, n - 1}) {
      const Taps t = taps_at(i, n, periodic, d, h);
      for (int m = 0; m < t.count; ++m) src[m] = line + t.index[m];
      kern.combine(dst + i, src, t.weight.data(), t.count, 1);
    }
  }
  return out;
}

}  // namespace

ScalarField partial(const ScalarField& f, int axis) {
  return ScalarField(f.chart(), apply_axis(f.values(), f.chart(), axis, Derivative::First));
}

ScalarField second_partial(const ScalarField& f, int axis) {
  return ScalarField(f.chart(), apply_axis(f.values(), f.chart(), axis, Derivative::Second));
}

ScalarField mixed_partial(const ScalarField& f, int a, int b) {
  if (a == b) return second_partial(f, a);
  return partial(partial(f, b), a);
}

std::array<ScalarField, 3> gradient(const ScalarField& f) { return {partial(f, 0), partial(f, 1), partial(f, 2)}; }

SymTensorField partial(const SymTensorField& s, int axis) {
  SymTensorField::Planes planes;
  for (int c = 0; c < 6; ++c) planes[c] = apply_axis(s.plane(c), s.chart(), axis, Derivative::First);
  return SymTensorField(s.chart(), std::move(planes));
}

}  // namespace closure
