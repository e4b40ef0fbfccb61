#include "closure/foliation/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "closure/error.hpp"
#include "closure/field/eigen.hpp"
#include "closure/geometry/interpolate.hpp"

namespace closure {

void FoliationSnapshot::validate() const {
  const GridChart& c = chart();
  require_same_chart(N.chart(), c, "lapse");
  require_same_chart(dtN.chart(), c, "lapse rate");
  require_same_chart(dtg.chart(), c, "metric rate");
  require_same_chart(dttg.chart(), c, "metric acceleration");
  for (std::size_t p = 0; p < N.size(); ++p)
    if (!(N[p] > 0.0))
      throw Error(ErrorKind::LapsePositivity, "lapse is not positive at grid point " + point_label(c, p));
  require_positive_definite(g, "spatial metric");
}

FoliationSnapshot snapshot_from_stencil(const TimeStencil<ScalarField>& N, const TimeStencil<SymTensorField>& g) {
  if (N.times != g.times) throw Error(ErrorKind::Precondition, "lapse and metric stencils use different times");
  auto [dtN, dttN] = fd_time(N);
  auto [dtg, dttg] = fd_time(g);
  (void)dttN;
  FoliationSnapshot snap{N.center(), N.values[1], std::move(dtN), g.values[1], std::move(dtg), std::move(dttg)};
  snap.validate();
  return snap;
}

KinematicBundle kinematics(const FoliationSnapshot& snap) {
  snap.validate();
  const GridChart& chart = snap.chart();
  const SymTensorField g_inv = inverse_metric(snap.g);

  KinematicBundle kin;
  kin.h = map_points_sym(chart, [&](std::size_t p) { return (-0.5 / snap.N[p]) * snap.dtg.at(p); });
  kin.H = metric_trace(kin.h, snap.g);
  kin.dth = map_points_sym(chart, [&](std::size_t p) {
    return (-0.5 / snap.N[p]) * (snap.dttg.at(p) + (2.0 * snap.dtN[p]) * kin.h.at(p));
  });
  kin.normSqH = map_points(chart, [&](std::size_t p) {
    const Sym3 h = kin.h.at(p);
    return full_contraction(h, h, g_inv.at(p));
  });
  kin.hRing = map_points_sym(chart, [&](std::size_t p) { return kin.h.at(p) - (kin.H[p] / 3.0) * snap.g.at(p); });
  kin.dtH = map_points(chart, [&](std::size_t p) {
    const double n = snap.N[p];
    const double tr_dttg = contract(g_inv.at(p), snap.dttg.at(p));
    return n * (2.0 * kin.normSqH[p] - tr_dttg / (2.0 * n * n) - snap.dtN[p] * kin.H[p] / (n * n));
  });
  return kin;
}

namespace {

std::vector<Vec3> fibonacci_sphere(std::size_t count) {
  std::vector<Vec3> dirs(count);
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (std::size_t i = 0; i < count; ++i) {
    const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(count);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * static_cast<double>(i);
    dirs[i] = {r * std::cos(phi), r * std::sin(phi), z};
  }
  return dirs;
}

// Directions with ĥ(e, e) = 0 when ĥ is indefinite (eigenvalues l0 < 0 < l2).
// In the eigenbasis, with middle component y, the cone and the unit sphere fix
// x² = (l2(1 − y²) + l1 y²)/(l2 − l0) and z² = 1 − y² − x².
void null_cone(const SymEigen& e, std::size_t count, std::vector<Vec3>& out) {
  const double l0 = e.values[0], l1 = e.values[1], l2 = e.values[2];
  out.clear();
  if (!(l0 < 0.0 && l2 > 0.0)) return;
  for (std::size_t i = 0; i < count; ++i) {
    const double y = -1.0 + 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(count);
    const double x2 = (l2 * (1.0 - y * y) + l1 * y * y) / (l2 - l0);
    const double z2 = 1.0 - y * y - x2;
    if (x2 < 0.0 || z2 < 0.0) continue;
    const double x = std::sqrt(x2), z = std::sqrt(z2);
    for (const double sx : {1.0, -1.0})
      for (const double sz : {1.0, -1.0}) {
        Vec3 v{};
        for (int r = 0; r < 3; ++r) v[r] = sx * x * e.vectors[r][0] + y * e.vectors[r][1] + sz * z * e.vectors[r][2];
        out.push_back(v);
      }
  }
}

}  // namespace

DecelerationResult deceleration_parameter(const FoliationSnapshot& snap, const KinematicBundle& kin,
                                          const DirectionBudget& budget) {
  const GridChart& chart = snap.chart();
  double h_sq_max = 0.0;
  for (double v : kin.normSqH.values()) h_sq_max = std::max(h_sq_max, v);
  if (!(h_sq_max > 0.0))
    throw Error(ErrorKind::UndefinedParameter, "deceleration parameter undefined: h vanishes on the whole slice");

  const std::vector<Vec3> sphere = fibonacci_sphere(budget.refine ? 2 * budget.sphere : budget.sphere);
  const double w_floor = budget.eps_h * h_sq_max;

  // Frame quantities per point; L scale fixes the skipped-sample tolerance.
  std::vector<Sym3> h_hat(chart.size()), l_hat(chart.size());
  double l_scale = 0.0;
  for (std::size_t p = 0; p < chart.size(); ++p) {
    const Mat3 chol = cholesky(snap.g.at(p));
    const double n = snap.N[p];
    h_hat[p] = to_orthonormal_frame(kin.h.at(p), chol);
    l_hat[p] = (1.0 / (2.0 * n * n)) *
               to_orthonormal_frame(snap.dttg.at(p) + (2.0 * snap.dtN[p]) * kin.h.at(p), chol);
    l_scale = std::max(l_scale, std::sqrt(frobenius_sq(l_hat[p])));
  }
  const double l_tol = budget.tolerance * std::max(l_scale, std::sqrt(h_sq_max));

  DecelerationResult out;
  out.q = std::numeric_limits<double>::infinity();
  bool unbounded = false;
  std::vector<Vec3> cone;
  for (std::size_t p = 0; p < chart.size(); ++p) {
    const SymEigen eh = eig_sym3(h_hat[p]);
    const SymEigen el = eig_sym3(l_hat[p]);
    // 1 − L/W, or NaN for a skipped sample.
    auto ratio = [&](const Vec3& e) {
      const double hv = quadratic(h_hat[p], e) / dot(e, e);
      const double W = hv * hv;
      if (W < w_floor) return std::numeric_limits<double>::quiet_NaN();
      return 1.0 - quadratic(l_hat[p], e) / dot(e, e) / W;
    };
    double best = std::numeric_limits<double>::infinity();
    Vec3 best_dir{};
    auto visit = [&](const Vec3& e) {
      ++out.samples;
      const double value = ratio(e);
      if (std::isnan(value)) {
        ++out.skipped;
        if (quadratic(l_hat[p], e) > l_tol && !unbounded) {
          unbounded = true;
          out.worst_point = p;
          out.worst_direction = e;
          out.diagnostic = "direction with h(V,V) = 0 and positive acceleration at grid point " +
                           point_label(chart, p);
        }
        return;
      }
      if (value < best) {
        best = value;
        best_dir = e;
      }
    };
    for (int i = 0; i < 3; ++i) visit(eh.vector(i));
    for (int i = 0; i < 3; ++i) visit(el.vector(i));
    for (const Vec3& e : sphere) visit(e);
    null_cone(eh, sphere.size(), cone);
    for (const Vec3& e : cone) visit(e);
    if (unbounded) break;
    if (!std::isfinite(best)) continue;

    // Pattern search on the sphere from the best sample; every accepted
    // direction is itself a sample, so the result stays an infimum over samples.
    for (double step = 0.1; step > 1e-9; step *= 0.5) {
      bool improved = true;
      while (improved) {
        improved = false;
        // Tangent basis at best_dir.
        const Vec3 ref = std::fabs(best_dir[0]) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
        Vec3 t1 = {best_dir[1] * ref[2] - best_dir[2] * ref[1], best_dir[2] * ref[0] - best_dir[0] * ref[2],
                   best_dir[0] * ref[1] - best_dir[1] * ref[0]};
        const double n1 = norm(t1);
        for (auto& c : t1) c /= n1;
        const Vec3 t2 = {best_dir[1] * t1[2] - best_dir[2] * t1[1], best_dir[2] * t1[0] - best_dir[0] * t1[2],
                         best_dir[0] * t1[1] - best_dir[1] * t1[0]};
        for (const Vec3& t : {t1, t2})
          for (const double sign : {1.0, -1.0}) {
            Vec3 e;
            for (int r = 0; r < 3; ++r) e[r] = best_dir[r] + sign * step * t[r];
            const double ne = norm(e);
            for (auto& c : e) c /= ne;
            const double value = ratio(e);
            ++out.samples;
            if (!std::isnan(value) && value < best) {
              best = value;
              best_dir = e;
              improved = true;
            }
          }
      }
    }
    if (best < out.q) {
      out.q = best;
      out.worst_point = p;
      out.worst_direction = best_dir;
    }
  }
  if (unbounded) out.q = -std::numeric_limits<double>::infinity();
  return out;
}

double hubble_parameter(const KinematicBundle& kin) {
  double inf_sq = std::numeric_limits<double>::infinity();
  for (double v : kin.H.values()) inf_sq = std::min(inf_sq, v * v);
  return std::sqrt(inf_sq);
}

EnergyDecelerationResult energy_deceleration_check(const FoliationSnapshot& snap, const KinematicBundle& kin,
                                                   double relative_tolerance) {
  const GridChart& chart = snap.chart();
  EnergyDecelerationResult out;
  out.worst_eigenvalue = -std::numeric_limits<double>::infinity();
  double scale = 0.0;
  for (std::size_t p = 0; p < chart.size(); ++p) {
    const Sym3 m = snap.dttg.at(p) + (2.0 * snap.dtN[p]) * kin.h.at(p);
    const SymEigen e = eig_orthonormal(m, snap.g.at(p));
    scale = std::max({scale, std::fabs(e.values[0]), std::fabs(e.values[2])});
    if (e.values[2] > out.worst_eigenvalue) {
      out.worst_eigenvalue = e.values[2];
      out.worst_point = p;
    }
  }
  out.tolerance = relative_tolerance * std::max(1.0, scale);
  out.holds = out.worst_eigenvalue <= out.tolerance;
  return out;
}

namespace {

// 5-point Gauss–Legendre on [0, 1].
constexpr double kGaussX[5] = {0.04691007703066800, 0.23076534494715845, 0.5, 0.76923465505284155,
                               0.95308992296933200};
constexpr double kGaussW[5] = {0.11846344252809454, 0.23931433524968324, 0.28444444444444444,
                               0.23931433524968324, 0.11846344252809454};

Sym3 interp_metric(const TricubicInterpolator& interp, const SymTensorField& g, const Vec3& x) {
  const auto t = interp.taps(x);
  Sym3 out;
  for (int s = 0; s < 6; ++s) out.c[s] = TricubicInterpolator::apply(t, g.plane(s));
  return out;
}

}  // namespace

CurveConcavityResult curve_concavity_check(const TimeStencil<SymTensorField>& g, const ScalarField& N,
                                           std::span<const Vec3> curve, double q, double relative_tolerance) {
  require_uniform(g.times);
  if (curve.size() < 2) throw Error(ErrorKind::Precondition, "curve needs at least two vertices");
  const GridChart& chart = g.values[1].chart();
  for (const auto& gi : g.values) require_same_chart(gi.chart(), chart, "curve metric");
  require_same_chart(N.chart(), chart, "curve lapse");
  const TricubicInterpolator interp(chart);
  for (const Vec3& v : curve)
    if (!interp.contains(v)) throw Error(ErrorKind::Precondition, "curve vertex lies outside the chart");

  std::array<double, 3> lengths{};
  double lapse_integral = 0.0;
  for (int leaf = 0; leaf < 3; ++leaf)
    for (std::size_t s = 0; s + 1 < curve.size(); ++s) {
      Vec3 d;
      for (int a = 0; a < 3; ++a) d[a] = curve[s + 1][a] - curve[s][a];
      for (int m = 0; m < 5; ++m) {
        Vec3 x;
        for (int a = 0; a < 3; ++a) x[a] = curve[s][a] + kGaussX[m] * d[a];
        const double speed = std::sqrt(quadratic(interp_metric(interp, g.values[leaf], x), d));
        lengths[leaf] += kGaussW[m] * speed;
        if (leaf == 1) lapse_integral += kGaussW[m] * speed * TricubicInterpolator::apply(interp.taps(x), N.values());
      }
    }
  if (!(lengths[1] > 0.0)) throw Error(ErrorKind::Precondition, "curve has zero length");

  const double lapse = lapse_integral / lengths[1];
  const auto [dL, ddL] = fd_time(TimeStencil<double>{g.times, lengths});
  CurveConcavityResult out;
  out.length = lengths[1];
  out.dL = dL / lapse;
  out.ddL = ddL / (lapse * lapse);
  out.residual = out.length * out.ddL + q * out.dL * out.dL;
  out.tolerance = relative_tolerance * std::max({1.0, std::fabs(out.length * out.ddL), out.dL * out.dL});
  out.holds = out.residual <= out.tolerance;
  return out;
}

double mean_curvature_rate_discrepancy(const TimeStencil<FoliationSnapshot>& snaps) {
  std::array<ScalarField, 3> H;
  std::array<double, 3> times = snaps.times;
  KinematicBundle center;
  for (int i = 0; i < 3; ++i) {
    KinematicBundle kin = kinematics(snaps.values[i]);
    H[i] = kin.H;
    if (i == 1) center = std::move(kin);
  }
  const auto [direct, second] = fd_time(TimeStencil<ScalarField>{times, H});
  (void)second;
  double worst = 0.0;
  for (std::size_t p = 0; p < direct.size(); ++p) worst = std::max(worst, std::fabs(direct[p] - center.dtH[p]));
  return worst;
}

}  // namespace closure
