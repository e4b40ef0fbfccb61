#pragma once

#include <optional>
#include <string>
#include <vector>

#include "closure/bm/engine.hpp"
#include "closure/foliation/kinematics.hpp"
#include "closure/matter/flrw.hpp"
#include "closure/matter/stress_energy.hpp"

namespace closure {

enum class TheoremTag { Thm13, Thm14, Cor15, Generic };
const char* to_string(TheoremTag t) noexcept;

/// Margins are in the condition's own units (q − ½, Λ − 𝒫, ℋ², ...); a
/// condition holds when its margin is positive, or nonnegative for
/// non-strict conditions, up to `tolerance`.
struct ConditionResult {
  std::string name;
  bool holds = false;
  double margin = 0.0;
  double tolerance = 0.0;
};

struct ClosureReport {
  TheoremTag theorem = TheoremTag::Generic;
  std::vector<ConditionResult> conditions;
  Verdict verdict = Verdict::Inconclusive;
  std::optional<double> diameterBoundClosedForm;
  std::optional<double> diameterBoundOptimized;
  std::optional<double> oracleDiameter;
  /// Conformal exponent behind the reported bound.
  std::optional<double> k;
  std::optional<double> A, B;
  std::optional<BMCertificate> certificate;
  std::vector<std::string> annotations;

  bool all_hold() const noexcept;
  /// Smallest reported bound, if any.
  std::optional<double> tightest_bound() const noexcept;
};

/// (π/ℋ)√(8(10q+4)/(3(2q−1)(2q+1))) for q > ½, ℋ > 0.
double theorem13_bound(double q, double hubble);
/// A = 8/3, B = (2q−1)(2q+1)/(10q+4)·ℋ².
ABConstants theorem13_constants(double q, double hubble);

/// The conformal-exponent window ((√43−3)/6, 1+√3).
double theorem14_k_min() noexcept;
double theorem14_k_max() noexcept;
/// (6π/ℋ)√((3+2k−k²)(4+3k)/((2+2k−k²)(18k²+18k−17))) inside the window.
double theorem14_bound(double k, double hubble);
/// A = 2(3+2k−k²)/(2+2k−k²), B = (18k²+18k−17)/(18(4+3k))·ℋ².
ABConstants theorem14_constants(double k, double hubble);

/// Leaf parameters consumed by the theorem checks.
struct LeafParameters {
  double q = 0.0;
  double hubble = 0.0;    // ℋ = √(inf H²)
  double pressure = 0.0;  // 𝒫
  double Lambda = 0.0;
};

/// a) q > ½, b) 𝒫 ≤ Λ, c) ℋ² > 0. When closed, the closed-form bound is
/// checked against π√(A/B) and against the Bonnet–Myers engine at k = 1.
ClosureReport theorem13_verdict(const LeafParameters& params, double tolerance = 1e-9);

/// a) energy-decelerating leaf, b) min over the leaf of
/// λ_min(𝒯_ij) − k𝒯_νν − (1+k)/2·𝒯 ≥ 0 for some k in the window (1024
/// interior samples), c) ℋ² > 0. Reports the admissible k with the smallest bound.
ClosureReport theorem14_verdict(const FoliationSnapshot& snap, const KinematicBundle& kin,
                                const StressEnergyDecomposition& decomp, double hubble, double tolerance = 1e-9);

/// Perfect-fluid route into theorem13_verdict with p = 𝒫. Throws Precondition
/// with the deviation when the fluid test fails. `omega` enables the
/// equation-of-state note.
ClosureReport corollary15_verdict(const StressEnergyDecomposition& decomp, const SymTensorField& g, double q,
                                  double hubble, std::optional<double> omega = std::nullopt,
                                  double tolerance = 1e-9);

/// Q_ij = ∂ₜh_ij/N + 2h_il h^l_j − Hh_ij + 𝒯_ij − ½𝒯 g_ij.
SymTensorField generic_Q(const FoliationSnapshot& snap, const KinematicBundle& kin,
                         const StressEnergyDecomposition& decomp);
/// V = ∂ₜH/N − |h|² − 𝒯_νν − ½𝒯.
ScalarField generic_V(const FoliationSnapshot& snap, const KinematicBundle& kin,
                      const StressEnergyDecomposition& decomp);

/// Bonnet–Myers hypothesis with u = N, n = 3, α = 1, β = γ = 0.
BMHypothesis generic_hypothesis(const SliceGeometry& leaf, const FoliationSnapshot& snap, const KinematicBundle& kin,
                                const StressEnergyDecomposition& decomp, const SymTensorField& ricci,
                                double tolerance = 1e-9, double absolute_tolerance = 0.0);

/// Verifies (Ric) and (u), which hold with equality for recovered data, then
/// optimizes k. Closed iff some admissible k has λ(k) > 0.
ClosureReport generic_verdict(const SliceGeometry& leaf, const FoliationSnapshot& snap, const KinematicBundle& kin,
                              const StressEnergyDecomposition& decomp, const SymTensorField& ricci,
                              double tolerance = 1e-9, double absolute_tolerance = 0.0);

/// Everything derived from one leaf that the verdicts consume.
struct LeafAnalysis {
  FoliationSnapshot snap;
  KinematicBundle kin;
  SymTensorField ricci;
  SymTensorField hessN;
  ScalarField lapN;
  StressEnergyDecomposition decomp;
  /// Empty when h vanishes on the whole leaf; `qError` then holds the reason.
  std::optional<DecelerationResult> q;
  std::string qError;
  double hubble = 0.0;
  double pressure = 0.0;
  double Lambda = 0.0;

  /// Throws UndefinedParameter when q is undefined.
  LeafParameters parameters() const;
};

/// Closed-form Ricci for tagged leaves, central differences otherwise; N ≡ const
/// gives exactly vanishing ∇²N and ΔN.
LeafAnalysis analyze_leaf(const SliceGeometry& leaf, FoliationSnapshot snap, double Lambda,
                          const DirectionBudget& budget = {});

/// Sets oracleDiameter; throws InvariantViolation when a closed report's bound
/// is below it.
void attach_oracle(ClosureReport& report, double oracle_diameter, double tolerance = 1e-9);

}  // namespace closure
