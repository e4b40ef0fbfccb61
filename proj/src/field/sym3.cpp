#include "closure/field/sym3.hpp"

namespace closure {

Sym3 Sym3::from_matrix(const Mat3& m) noexcept {
  Sym3 s;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) s(i, j) = 0.5 * (m[i][j] + m[j][i]);
  return s;
}

double Sym3::determinant() const noexcept {
  const auto& g = c;
  return g[0] * (g[3] * g[5] - g[4] * g[4]) - g[1] * (g[1] * g[5] - g[4] * g[2]) +
         g[2] * (g[1] * g[4] - g[3] * g[2]);
}

Mat3 Sym3::to_matrix() const noexcept {
  Mat3 m{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[i][j] = (*this)(i, j);
  return m;
}

double bilinear(const Sym3& s, const Vec3& v, const Vec3& w) noexcept {
  double acc = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) acc += s(i, j) * v[i] * w[j];
  return acc;
}

double frobenius_sq(const Sym3& s) noexcept {
  const auto& c = s.c;
  return c[0] * c[0] + c[3] * c[3] + c[5] * c[5] + 2.0 * (c[1] * c[1] + c[2] * c[2] + c[4] * c[4]);
}

Sym3 inverse(const Sym3& s) noexcept {
  const auto& g = s.c;
  const double c00 = g[3] * g[5] - g[4] * g[4];
  const double c01 = g[2] * g[4] - g[1] * g[5];
  const double c02 = g[1] * g[4] - g[2] * g[3];
  const double c11 = g[0] * g[5] - g[2] * g[2];
  const double c12 = g[1] * g[2] - g[0] * g[4];
  const double c22 = g[0] * g[3] - g[1] * g[1];
  const double det = g[0] * c00 + g[1] * c01 + g[2] * c02;
  return Sym3{{c00 / det, c01 / det, c02 / det, c11 / det, c12 / det, c22 / det}};
}

Sym3 raised_square(const Sym3& s, const Sym3& g_inv) noexcept {
  Sym3 out;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      double acc = 0.0;
      for (int l = 0; l < 3; ++l)
        for (int m = 0; m < 3; ++m) acc += s(i, l) * g_inv(l, m) * s(m, j);
      out(i, j) = acc;
    }
  return out;
}

double full_contraction(const Sym3& s, const Sym3& t, const Sym3& g_inv) noexcept {
  double acc = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) acc += g_inv(i, k) * g_inv(j, l) * s(i, j) * t(k, l);
  return acc;
}

double contract(const Sym3& g_inv, const Sym3& s) noexcept {
  const auto& a = g_inv.c;
  const auto& b = s.c;
  return a[0] * b[0] + a[3] * b[3] + a[5] * b[5] + 2.0 * (a[1] * b[1] + a[2] * b[2] + a[4] * b[4]);
}

bool is_positive_definite(const Sym3& s) noexcept {
  const double m1 = s(0, 0);
  const double m2 = s(0, 0) * s(1, 1) - s(0, 1) * s(0, 1);
  const double m3 = s.determinant();
  return m1 > 0.0 && m2 > 0.0 && m3 > 0.0 && std::isfinite(m3);
}

Mat3 cholesky(const Sym3& s) noexcept {
  Mat3 l{};
  l[0][0] = std::sqrt(s(0, 0));
  l[1][0] = s(1, 0) / l[0][0];
  l[2][0] = s(2, 0) / l[0][0];
  l[1][1] = std::sqrt(s(1, 1) - l[1][0] * l[1][0]);
  l[2][1] = (s(2, 1) - l[2][0] * l[1][0]) / l[1][1];
  l[2][2] = std::sqrt(s(2, 2) - l[2][0] * l[2][0] - l[2][1] * l[2][1]);
  return l;
}

namespace {

Mat3 lower_inverse(const Mat3& l) noexcept {
  Mat3 inv{};
  inv[0][0] = 1.0 / l[0][0];
  inv[1][1] = 1.0 / l[1][1];
  inv[2][2] = 1.0 / l[2][2];
  inv[1][0] = -l[1][0] * inv[0][0] / l[1][1];
  inv[2][1] = -l[2][1] * inv[1][1] / l[2][2];
  inv[2][0] = -(l[2][0] * inv[0][0] + l[2][1] * inv[1][0]) / l[2][2];
  return inv;
}

}  // namespace

Sym3 to_orthonormal_frame(const Sym3& s, const Mat3& chol_g) noexcept {
  const Mat3 li = lower_inverse(chol_g);
  Sym3 out;
  for (int a = 0; a < 3; ++a)
    for (int b = a; b < 3; ++b) {
      double acc = 0.0;
      for (int i = 0; i <= a; ++i)
        for (int j = 0; j <= b; ++j) acc += li[a][i] * s(i, j) * li[b][j];
      out(a, b) = acc;
    }
  return out;
}

Vec3 frame_to_coordinates(const Mat3& chol_g, const Vec3& e) noexcept {
  // Back substitution for the upper-triangular Lᵀ.
  Vec3 v{};
  v[2] = e[2] / chol_g[2][2];
  v[1] = (e[1] - chol_g[2][1] * v[2]) / chol_g[1][1];
  v[0] = (e[0] - chol_g[1][0] * v[1] - chol_g[2][0] * v[2]) / chol_g[0][0];
  return v;
}

Mat3 multiply(const Mat3& a, const Mat3& b) noexcept {
  Mat3 m{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) m[i][j] += a[i][k] * b[k][j];
  return m;
}

Mat3 transpose(const Mat3& a) noexcept {
  Mat3 t{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t[i][j] = a[j][i];
  return t;
}

}  // namespace closure
