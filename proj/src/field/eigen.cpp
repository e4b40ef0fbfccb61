#include "closure/field/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "closure/error.hpp"

namespace closure {

namespace {

constexpr double kJacobiTolerance = 1e-13;
constexpr int kMaxSweeps = 64;

double off_diagonal_sq(const Mat3& a) noexcept {
  return 2.0 * (a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2]);
}

void rotate(Mat3& a, Mat3& v, int p, int q) noexcept {
  const double apq = a[p][q];
  if (apq == 0.0) return;
  const double theta = (a[q][q] - a[p][p]) / (2.0 * apq);
  const double t = std::copysign(1.0, theta) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;

  for (int k = 0; k < 3; ++k) {
    const double akp = a[k][p];
    const double akq = a[k][q];
    a[k][p] = c * akp - s * akq;
    a[k][q] = s * akp + c * akq;
  }
  for (int k = 0; k < 3; ++k) {
    const double apk = a[p][k];
    const double aqk = a[q][k];
    a[p][k] = c * apk - s * aqk;
    a[q][k] = s * apk + c * aqk;
  }
  a[p][q] = a[q][p] = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double vkp = v[k][p];
    const double vkq = v[k][q];
    v[k][p] = c * vkp - s * vkq;
    v[k][q] = s * vkp + c * vkq;
  }
}

}  // namespace

SymEigen eig_sym3(const Sym3& s) {
  for (double x : s.c)
    if (!std::isfinite(x)) throw Error(ErrorKind::InputDomain, "eig_sym3: non-finite matrix entry");

  Mat3 a = s.to_matrix();
  Mat3 v{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  const double scale = std::sqrt(frobenius_sq(s));
  if (scale > 0.0) {
    const double target = kJacobiTolerance * scale * kJacobiTolerance * scale;
    for (int sweep = 0; sweep < kMaxSweeps && off_diagonal_sq(a) > target; ++sweep) {
      rotate(a, v, 0, 1);
      rotate(a, v, 0, 2);
      rotate(a, v, 1, 2);
    }
  }

  std::array<int, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return a[x][x] < a[y][y]; });

  SymEigen out;
  for (int col = 0; col < 3; ++col) {
    const int src = order[col];
    out.values[col] = a[src][src];
    Vec3 e{v[0][src], v[1][src], v[2][src]};
    const double len = norm(e);
    for (auto& x : e) x /= len;
    const auto lead = std::find_if(e.begin(), e.end(), [](double x) { return x != 0.0; });
    if (lead != e.end() && *lead < 0.0)
      for (auto& x : e) x = -x;
    for (int r = 0; r < 3; ++r) out.vectors[r][col] = e[r];
  }
  return out;
}

SymEigen eig_orthonormal(const Sym3& s, const Sym3& g) {
  const Mat3 l = cholesky(g);
  SymEigen frame = eig_sym3(to_orthonormal_frame(s, l));
  SymEigen out;
  out.values = frame.values;
  for (int col = 0; col < 3; ++col) {
    const Vec3 coords = frame_to_coordinates(l, frame.vector(col));
    for (int r = 0; r < 3; ++r) out.vectors[r][col] = coords[r];
  }
  return out;
}

}  // namespace closure
