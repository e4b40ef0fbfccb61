#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace closure {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

/// Storage slot of component (i, j) in the packed order 11,12,13,22,23,33.
constexpr int sym_slot(int i, int j) noexcept {
  constexpr int table[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
  return table[i][j];
}

/// Symmetric 3x3 matrix stored as its six independent components.
struct Sym3 {
  std::array<double, 6> c{};

  static constexpr Sym3 identity() noexcept { return Sym3{{1, 0, 0, 1, 0, 1}}; }
  static constexpr Sym3 diagonal(double a, double b, double d) noexcept {
    return Sym3{{a, 0, 0, b, 0, d}};
  }
  static Sym3 from_matrix(const Mat3& m) noexcept;

  constexpr double operator()(int i, int j) const noexcept { return c[sym_slot(i, j)]; }
  constexpr double& operator()(int i, int j) noexcept { return c[sym_slot(i, j)]; }

  double trace() const noexcept { return c[0] + c[3] + c[5]; }
  double determinant() const noexcept;
  Mat3 to_matrix() const noexcept;

  Sym3& operator+=(const Sym3& o) noexcept {
    for (int s = 0; s < 6; ++s) c[s] += o.c[s];
    return *this;
  }
  Sym3& operator-=(const Sym3& o) noexcept {
    for (int s = 0; s < 6; ++s) c[s] -= o.c[s];
    return *this;
  }
  Sym3& operator*=(double a) noexcept {
    for (auto& v : c) v *= a;
    return *this;
  }
  friend Sym3 operator+(Sym3 a, const Sym3& b) noexcept { return a += b; }
  friend Sym3 operator-(Sym3 a, const Sym3& b) noexcept { return a -= b; }
  friend Sym3 operator*(double s, Sym3 a) noexcept { return a *= s; }
  friend bool operator==(const Sym3&, const Sym3&) = default;
};

/// Quadratic form S(v, w).
double bilinear(const Sym3& s, const Vec3& v, const Vec3& w) noexcept;
inline double quadratic(const Sym3& s, const Vec3& v) noexcept { return bilinear(s, v, v); }

/// Frobenius norm squared of a symmetric matrix in the given (Euclidean) frame.
double frobenius_sq(const Sym3& s) noexcept;

/// Inverse via cofactors; caller guarantees nonzero determinant.
Sym3 inverse(const Sym3& s) noexcept;

/// (S·g^{-1}·S)_{ij} = S_{il} g^{lm} S_{mj}.
Sym3 raised_square(const Sym3& s, const Sym3& g_inv) noexcept;

/// g^{ik} g^{jl} S_ij T_kl.
double full_contraction(const Sym3& s, const Sym3& t, const Sym3& g_inv) noexcept;

/// g^{ij} S_ij.
double contract(const Sym3& g_inv, const Sym3& s) noexcept;

/// True when every leading principal minor is positive.
bool is_positive_definite(const Sym3& s) noexcept;

/// Lower-triangular Cholesky factor L with S = L Lᵀ. Requires positive definiteness.
Mat3 cholesky(const Sym3& s) noexcept;

/// Express S in the orthonormal frame of g: L⁻¹ S L⁻ᵀ where g = L Lᵀ.
Sym3 to_orthonormal_frame(const Sym3& s, const Mat3& chol_g) noexcept;

/// Solves Lᵀ v = e, mapping an orthonormal-frame vector to coordinates.
Vec3 frame_to_coordinates(const Mat3& chol_g, const Vec3& e) noexcept;

Mat3 multiply(const Mat3& a, const Mat3& b) noexcept;
Mat3 transpose(const Mat3& a) noexcept;

inline double dot(const Vec3& a, const Vec3& b) noexcept {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline double norm(const Vec3& a) noexcept { return std::sqrt(dot(a, a)); }

}  // namespace closure
