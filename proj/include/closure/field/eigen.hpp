#pragma once

#include "closure/field/sym3.hpp"

namespace closure {

/// Eigen-decomposition of a symmetric 3x3 matrix.
///
/// Values are ascending; column `i` of `vectors` is the unit eigenvector of
/// `values[i]`, with its first nonzero component made positive.
struct SymEigen {
  Vec3 values{};
  Mat3 vectors{};

  Vec3 vector(int i) const noexcept { return {vectors[0][i], vectors[1][i], vectors[2][i]}; }
};

/// Cyclic Jacobi rotations until the off-diagonal mass drops below 1e-13
/// relative to the matrix norm. Throws ErrorKind::InputDomain on non-finite input.
SymEigen eig_sym3(const Sym3& s);

/// Eigenvalues of S measured in a g-orthonormal frame (generalized problem S v = λ g v).
/// Eigenvectors are returned in coordinates and are g-unit.
SymEigen eig_orthonormal(const Sym3& s, const Sym3& g);

}  // namespace closure
