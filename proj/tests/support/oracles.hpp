#pragma once
// Independent reference computations used only by tests.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "closure/field/sym3.hpp"

namespace closure::testing {

inline Sym3 random_sym(std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Sym3 s;
  for (auto& c : s.c) c = u(rng);
  return s;
}

/// Random symmetric positive-definite matrix: A Aᵀ + shift·I.
inline Sym3 random_spd(std::mt19937_64& rng, double shift = 0.5) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Mat3 a{};
  for (auto& row : a)
    for (auto& x : row) x = u(rng);
  Sym3 s;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      double acc = 0.0;
      for (int k = 0; k < 3; ++k) acc += a[i][k] * a[j][k];
      s(i, j) = acc + (i == j ? shift : 0.0);
    }
  return s;
}

/// det(S − λI) expanded directly from the entries.
inline double char_poly(const Sym3& s, double lambda) {
  Sym3 m = s;
  m(0, 0) -= lambda;
  m(1, 1) -= lambda;
  m(2, 2) -= lambda;
  return m.determinant();
}

/// Roots of det(S − λI) by bisection on the monotone pieces between the
/// critical points of the cubic. Assumes distinct roots.
inline std::array<double, 3> char_poly_roots(const Sym3& s) {
  // p(λ) = −λ³ + c2 λ² − c1 λ + c0; critical points solve p'(λ) = 0.
  const double c2 = s.trace();
  const double c1 = s(0, 0) * s(1, 1) + s(0, 0) * s(2, 2) + s(1, 1) * s(2, 2) - s(0, 1) * s(0, 1) -
                    s(0, 2) * s(0, 2) - s(1, 2) * s(1, 2);
  const double disc = std::max(0.0, 4.0 * c2 * c2 - 12.0 * c1);
  const double crit_lo = (2.0 * c2 - std::sqrt(disc)) / 6.0;
  const double crit_hi = (2.0 * c2 + std::sqrt(disc)) / 6.0;
  double bound = 0.0;
  for (double x : s.c) bound += std::fabs(x);
  bound = 2.0 * bound + 1.0;

  auto bisect = [&](double lo, double hi) {
    double flo = char_poly(s, lo);
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fm = char_poly(s, mid);
      if ((fm < 0) == (flo < 0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  };
  return {bisect(-bound, crit_lo), bisect(crit_lo, crit_hi), bisect(crit_hi, bound)};
}

/// Log-log slope between successive (h, error) pairs.
inline double observed_order(double h_coarse, double e_coarse, double h_fine, double e_fine) {
  return std::log(e_coarse / e_fine) / std::log(h_coarse / h_fine);
}

/// Least-squares slope of log(error) against log(h) over all resolutions.
inline double fitted_order(const std::vector<double>& h, const std::vector<double>& err) {
  const double n = static_cast<double>(h.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double x = std::log(h[i]), y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace closure::testing
