#pragma once

#include <array>
#include <optional>

#include "closure/geometry/slice.hpp"

namespace closure {

/// Γ^k_ij stored as three symmetric fields, upper[k](i, j) = Γ^k_ij.
struct ChristoffelField {
  std::array<SymTensorField, 3> upper;

  const GridChart& chart() const noexcept { return upper[0].chart(); }
  double at(int k, int i, int j, std::size_t p) const noexcept { return upper[k].plane(sym_slot(i, j))[p]; }
};

/// Γ^k_ij = ½ g^{kl}(∂_i g_jl + ∂_j g_il − ∂_l g_ij) from central differences.
ChristoffelField christoffel(const SliceGeometry& geom);

/// Ricci tensor from central differences of g (first and second), with Γ
/// supplied or recomputed. Needs at least 5 points per axis.
SymTensorField ricci(const SliceGeometry& geom);
SymTensorField ricci(const SliceGeometry& geom, const ChristoffelField& gamma);

/// Closed-form Ricci of a tagged model: 2K g in three dimensions. Empty when untagged.
std::optional<SymTensorField> analytic_ricci(const SliceGeometry& geom);

/// ∇²_ij f = ∂_i∂_j f − Γ^k_ij ∂_k f.
SymTensorField hessian(const ScalarField& f, const SliceGeometry& geom);
SymTensorField hessian(const ScalarField& f, const ChristoffelField& gamma);

/// Δf = g^{ij} ∇²_ij f.
ScalarField laplacian(const ScalarField& f, const SliceGeometry& geom);
ScalarField laplacian(const ScalarField& f, const SliceGeometry& geom, const ChristoffelField& gamma);

/// |∇f|² = g^{ij} ∂_i f ∂_j f.
ScalarField gradient_norm_sq(const ScalarField& f, const SliceGeometry& geom);

}  // namespace closure
