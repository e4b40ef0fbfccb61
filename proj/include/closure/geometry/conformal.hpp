#pragma once

#include <string>

#include "closure/geometry/slice.hpp"

namespace closure {

struct ConformalCheckOptions {
  Vec3 seed{};
  Vec3 direction{1.0, 0.0, 0.0};
  /// Target g̃-length of the geodesic segment.
  double length = 1.0;
};

struct ConformalCheckResult {
  /// max |R̃₁₁ − u^{−2k}{R₁₁ − k(n−2)(ln u)_ss − kΔu/u + k|∇u|²/u²}| along the segment.
  double residual = 0.0;
  std::size_t samples = 0;
  double length = 0.0;
  bool truncated = false;
  std::string warning;
};

/// Integrates a unit-speed geodesic of g̃ = u^{2k} g (RK4, coordinate step
/// about h_min/4), evaluates R̃₁₁ from a direct finite-difference Ricci of g̃,
/// and compares it with the conformal-change identity built from g and u.
/// n = 3. Leaving the well-resolved interior of a non-periodic chart stops
/// the segment early and sets `truncated`.
ConformalCheckResult conformal_ricci_check(const SliceGeometry& geom, const ScalarField& u, double k,
                                           const ConformalCheckOptions& options = {});

}  // namespace closure
