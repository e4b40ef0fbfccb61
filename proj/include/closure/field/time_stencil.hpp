#pragma once

#include <array>
#include <cmath>
#include <utility>

#include "closure/error.hpp"
#include "closure/field/field.hpp"

namespace closure {

/// Three uniformly spaced time samples (t-, t0, t+) of the same quantity.
template <class T>
struct TimeStencil {
  std::array<double, 3> times{};
  std::array<T, 3> values{};

  double step() const noexcept { return times[1] - times[0]; }
  double center() const noexcept { return times[1]; }
};

/// Throws ErrorKind::Precondition if the stencil is not strictly increasing and uniform.
void require_uniform(const std::array<double, 3>& times);

/// Central first and second time derivatives at the middle sample.
std::pair<double, double> fd_time(const TimeStencil<double>& stencil);
std::pair<ScalarField, ScalarField> fd_time(const TimeStencil<ScalarField>& stencil);
std::pair<SymTensorField, SymTensorField> fd_time(const TimeStencil<SymTensorField>& stencil);

}  // namespace closure
