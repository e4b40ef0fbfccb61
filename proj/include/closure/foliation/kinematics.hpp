#pragma once

#include <span>
#include <string>

#include "closure/field/field.hpp"
#include "closure/field/time_stencil.hpp"

namespace closure {

/// Lapse, spatial metric and their time derivatives at one leaf t = t0.
struct FoliationSnapshot {
  double t0 = 0.0;
  ScalarField N;
  ScalarField dtN;
  SymTensorField g;
  SymTensorField dtg;
  SymTensorField dttg;

  const GridChart& chart() const noexcept { return g.chart(); }

  /// Shared chart, N > 0 (LapsePositivity), g positive definite (DegenerateMetric).
  void validate() const;
};

/// Builds a snapshot by central differences over three leaves.
FoliationSnapshot snapshot_from_stencil(const TimeStencil<ScalarField>& N, const TimeStencil<SymTensorField>& g);

struct KinematicBundle {
  SymTensorField h;      // −∂ₜg / (2N)
  ScalarField H;         // g^{ij} h_ij
  SymTensorField dth;    // −(∂²ₜₜg + 2 ∂ₜN h) / (2N)
  ScalarField normSqH;   // |h|² = h_ij h^ij
  SymTensorField hRing;  // h − (H/3) g
  ScalarField dtH;       // N (2|h|² − g^{ij}∂²ₜₜg_ij/(2N²) − ∂ₜN H/N²)
};

KinematicBundle kinematics(const FoliationSnapshot& snap);

struct DirectionBudget {
  /// Fibonacci-sphere directions per point, doubled when `refine` is set.
  std::size_t sphere = 64;
  bool refine = false;
  /// Samples with h(V,V)² < eps_h · g(V,V) · max|h|² are skipped.
  double eps_h = 1e-10;
  /// Relative tolerance for a skipped sample's L to count as positive.
  double tolerance = 1e-9;
};

struct DecelerationResult {
  /// inf over samples of 1 − L/W; −∞ when a skipped sample has L > 0.
  double q = 0.0;
  std::size_t samples = 0;
  std::size_t skipped = 0;
  std::size_t worst_point = 0;
  Vec3 worst_direction{};
  std::string diagnostic;
};

/// Directions per point: eigenvectors of ĥ and of the acceleration form, a
/// Fibonacci sphere, and when ĥ is indefinite a sample of its null cone; the
/// best sample at each point is then polished by a pattern search on the sphere.
/// Deceleration parameter as the best constant in
/// ∂²ₜₜg(V,V) + 2h(V,V)∂ₜN ≤ 2N²(1 − q) h(V,V)²/g(V,V).
/// Throws UndefinedParameter when h vanishes on the whole slice.
DecelerationResult deceleration_parameter(const FoliationSnapshot& snap, const KinematicBundle& kin,
                                          const DirectionBudget& budget = {});

/// √(inf H²) over the slice.
double hubble_parameter(const KinematicBundle& kin);

struct EnergyDecelerationResult {
  bool holds = false;
  /// Largest g-orthonormal eigenvalue of ∂²ₜₜg + 2(∂ₜN)h over the slice.
  double worst_eigenvalue = 0.0;
  std::size_t worst_point = 0;
  double tolerance = 0.0;
};

/// ∂²ₜₜg + 2h∂ₜN ≤ 0 as quadratic forms, up to `relative_tolerance`·scale.
EnergyDecelerationResult energy_deceleration_check(const FoliationSnapshot& snap, const KinematicBundle& kin,
                                                   double relative_tolerance = 1e-9);

struct CurveConcavityResult {
  double length = 0.0;
  double dL = 0.0;   // proper-time derivative ∂̄ₜL
  double ddL = 0.0;  // ∂̄²ₜₜL
  /// L·∂̄²ₜₜL + q (∂̄ₜL)², nonpositive when q is admissible.
  double residual = 0.0;
  double tolerance = 0.0;
  bool holds = false;
};

/// Length of a polyline under the metric at each leaf (Gauss–Legendre per
/// segment, tricubic metric interpolation), differentiated in t and divided by
/// the length-weighted mean lapse along the curve at t0.
CurveConcavityResult curve_concavity_check(const TimeStencil<SymTensorField>& g, const ScalarField& N,
                                           std::span<const Vec3> curve, double q,
                                           double relative_tolerance = 1e-8);

/// Max |∂ₜH(direct) − ∂ₜH(formula)| at t0, where the direct value differences
/// H across three snapshots. Second order in the time step.
double mean_curvature_rate_discrepancy(const TimeStencil<FoliationSnapshot>& snaps);

}  // namespace closure
