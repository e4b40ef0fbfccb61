#pragma once

#include <array>

#include "closure/field/field.hpp"
#include "closure/foliation/kinematics.hpp"

namespace closure {

/// Total stress-energy 𝒯 on a leaf, split into normal and spatial parts, with
/// the matter quantities ρ = 𝒯_νν − Λ and p_i = (orthonormal eigenvalue of 𝒯_ij) + Λ.
/// Units have 8πG/c⁴ = 1.
struct StressEnergyDecomposition {
  ScalarField Tnn;
  SymTensorField Tspatial;
  ScalarField trTotal;  // g^{ij}𝒯_ij − 𝒯_νν
  double Lambda = 0.0;
  ScalarField rho;
  std::array<ScalarField, 3> pressures;  // ascending at every point
};

/// Solves the leafwise Gauss–Codazzi system
///   R_ij = ∇²_ij N/N + ∂ₜh_ij/N + 2 h_il h^l_j − H h_ij + 𝒯_ij − ½𝒯 g_ij
///   −ΔN  = (∂ₜH/N − |h|² − 𝒯_νν − ½𝒯) N
/// for 𝒯. With X = 𝒯_ij − ½𝒯 g_ij and Y = 𝒯_νν + ½𝒯, the unknowns
/// S = g^{ij}𝒯_ij and 𝒯_νν satisfy
///   tr X = −½ S + 3/2 𝒯_νν,   Y = ½ S + ½ 𝒯_νν   (determinant −1).
StressEnergyDecomposition recover_stress_energy(const FoliationSnapshot& snap, const KinematicBundle& kin,
                                                const SymTensorField& ricci, const SymTensorField& hessN,
                                                const ScalarField& lapN, double Lambda);

/// Fills ρ, p_i and the trace from given 𝒯_νν and 𝒯_ij.
StressEnergyDecomposition decompose(const ScalarField& Tnn, const SymTensorField& Tspatial, const SymTensorField& g,
                                    double Lambda);

/// max over i and over the leaf of p_i.
double pressure_parameter(const StressEnergyDecomposition& decomp);

struct PerfectFluidResult {
  bool isPerfectFluid = false;
  /// Spatially constant pressure when isPerfectFluid.
  double p = 0.0;
  /// max ‖𝒯_ij − (S/3) g_ij‖_g / scale.
  double anisotropy = 0.0;
  /// (max − min) of the isotropic pressure over the leaf / scale.
  double variation = 0.0;
  double deviation = 0.0;  // max(anisotropy, variation)
};

PerfectFluidResult perfect_fluid_check(const StressEnergyDecomposition& decomp, const SymTensorField& g,
                                       double tolerance = 1e-8);

}  // namespace closure
