#pragma once

#include <array>

#include "closure/field/field.hpp"

namespace closure {

/// Second-order central differences in space. Non-periodic axes fall back to
/// second-order one-sided stencils on their two boundary layers, which needs
/// at least four points on the axis.

ScalarField partial(const ScalarField& f, int axis);
ScalarField second_partial(const ScalarField& f, int axis);
/// ∂_a∂_b f; pure second derivatives when a == b, composed first differences otherwise.
ScalarField mixed_partial(const ScalarField& f, int a, int b);

std::array<ScalarField, 3> gradient(const ScalarField& f);

/// Derivative of every component of a tensor field along one axis.
SymTensorField partial(const SymTensorField& s, int axis);

}  // namespace closure
