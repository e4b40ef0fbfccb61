#include "closure/geometry/conformal.hpp"

#include <cmath>

#include "closure/error.hpp"
#include "closure/field/stencil.hpp"
#include "closure/geometry/curvature.hpp"
#include "closure/geometry/interpolate.hpp"

namespace closure {

namespace {

constexpr int kDim = 3;

Sym3 interp_sym(const TricubicInterpolator::Taps& t, const SymTensorField& f) {
  Sym3 out;
  for (int s = 0; s < 6; ++s) out.c[s] = TricubicInterpolator::apply(t, f.plane(s));
  return out;
}

struct GeodesicField {
  const TricubicInterpolator& interp;
  const ChristoffelField& gamma;

  // d(x, v)/ds̃ = (v, −Γ̃(v, v)).
  Vec3 acceleration(const TricubicInterpolator::Taps& t, const Vec3& v) const {
    Vec3 a{};
    for (int k = 0; k < 3; ++k) a[k] = -quadratic(interp_sym(t, gamma.upper[k]), v);
    return a;
  }
  Vec3 acceleration(const Vec3& x, const Vec3& v) const { return acceleration(interp.taps(x), v); }
};

Vec3 axpy(const Vec3& x, double a, const Vec3& y) { return {x[0] + a * y[0], x[1] + a * y[1], x[2] + a * y[2]}; }

}  // namespace

ConformalCheckResult conformal_ricci_check(const SliceGeometry& geom, const ScalarField& u, double k,
                                           const ConformalCheckOptions& options) {
  const GridChart& chart = geom.chart();
  require_same_chart(u.chart(), chart, "conformal_ricci_check");
  if (u.min() <= 0.0) throw Error(ErrorKind::Positivity, "conformal factor u must be positive");
  if (!(options.length > 0.0)) throw Error(ErrorKind::Precondition, "geodesic length must be positive");
  chart.validate(5);

  const SymTensorField& g = geom.metric();
  const SliceGeometry tilde(
      map_points_sym(chart, [&](std::size_t p) { return std::pow(u[p], 2.0 * k) * g.at(p); }));
  const ChristoffelField gamma = christoffel(geom);
  const ChristoffelField gamma_t = christoffel(tilde);
  const SymTensorField ric = ricci(geom, gamma);
  const SymTensorField ric_t = ricci(tilde, gamma_t);

  const ScalarField ln_u = map_points(chart, [&](std::size_t p) { return std::log(u[p]); });
  const auto d_ln_u = gradient(ln_u);
  SymTensorField::Planes dd_planes;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      const ScalarField dd = mixed_partial(ln_u, i, j);
      dd_planes[sym_slot(i, j)].assign(dd.values().begin(), dd.values().end());
    }
  const SymTensorField dd_ln_u(chart, std::move(dd_planes));
  const std::array<SymTensorField, 3> dg = {partial(g, 0), partial(g, 1), partial(g, 2)};

  // −kΔu/u + k|∇u|²/u² on the grid.
  const ScalarField lap_u = laplacian(u, geom, gamma);
  const ScalarField grad_u_sq = gradient_norm_sq(u, geom);
  const ScalarField tail =
      map_points(chart, [&](std::size_t p) { return k * (-lap_u[p] / u[p] + grad_u_sq[p] / (u[p] * u[p])); });

  const TricubicInterpolator interp(chart);
  const GeodesicField field{interp, gamma_t};
  constexpr double kMargin = 2.0;

  ConformalCheckResult result;
  if (!interp.contains(options.seed, kMargin))
    throw Error(ErrorKind::Precondition, "geodesic seed lies outside the well-resolved region");

  Vec3 x = options.seed;
  Vec3 v = options.direction;
  {
    const double speed = std::sqrt(quadratic(interp_sym(interp.taps(x), tilde.metric()), v));
    if (!(speed > 0.0)) throw Error(ErrorKind::Precondition, "geodesic direction must be nonzero");
    for (auto& c : v) c /= speed;
  }
  const double ds = 0.25 * chart.min_spacing() / norm(v);
  const auto steps = static_cast<std::size_t>(std::ceil(options.length / ds));

  auto evaluate = [&](const Vec3& xp, const Vec3& vp) {
    const auto t = interp.taps(xp);
    const Sym3 gp = interp_sym(t, g);
    const Sym3 gt = interp_sym(t, tilde.metric());
    const Vec3 a = field.acceleration(t, vp);

    const double lhs = quadratic(interp_sym(t, ric_t), vp) / quadratic(gt, vp);

    // Reparametrize by g-arclength s: w = dx/ds, acc = d²x/ds².
    const double sigma = std::sqrt(quadratic(gp, vp));
    double cubic = 0.0;
    for (int l = 0; l < 3; ++l) cubic += vp[l] * quadratic(interp_sym(t, dg[l]), vp);
    const double dsigma = (cubic + 2.0 * bilinear(gp, vp, a)) / (2.0 * sigma);
    Vec3 w, acc;
    for (int i = 0; i < 3; ++i) {
      w[i] = vp[i] / sigma;
      acc[i] = (a[i] / sigma - vp[i] * dsigma / (sigma * sigma)) / sigma;
    }
    const Vec3 grad = {TricubicInterpolator::apply(t, d_ln_u[0].values()),
                       TricubicInterpolator::apply(t, d_ln_u[1].values()),
                       TricubicInterpolator::apply(t, d_ln_u[2].values())};
    const double ln_u_ss = quadratic(interp_sym(t, dd_ln_u), w) + dot(grad, acc);

    const double up = TricubicInterpolator::apply(t, u.values());
    const double r11 = quadratic(interp_sym(t, ric), vp) / quadratic(gp, vp);
    const double rhs = std::pow(up, -2.0 * k) *
                       (r11 - k * (kDim - 2) * ln_u_ss + TricubicInterpolator::apply(t, tail.values()));
    result.residual = std::max(result.residual, std::fabs(lhs - rhs));
    ++result.samples;
  };

  // Classical RK4 on (x, v); false when any stage leaves the resolved region.
  auto advance = [&](Vec3& xn, Vec3& vn) {
    const Vec3 a1 = field.acceleration(x, v);
    const Vec3 x2 = axpy(x, 0.5 * ds, v), v2 = axpy(v, 0.5 * ds, a1);
    if (!interp.contains(x2, kMargin)) return false;
    const Vec3 a2 = field.acceleration(x2, v2);
    const Vec3 x3 = axpy(x, 0.5 * ds, v2), v3 = axpy(v, 0.5 * ds, a2);
    if (!interp.contains(x3, kMargin)) return false;
    const Vec3 a3 = field.acceleration(x3, v3);
    const Vec3 x4 = axpy(x, ds, v3), v4 = axpy(v, ds, a3);
    if (!interp.contains(x4, kMargin)) return false;
    const Vec3 a4 = field.acceleration(x4, v4);
    for (int i = 0; i < 3; ++i) {
      xn[i] = x[i] + ds / 6.0 * (v[i] + 2.0 * v2[i] + 2.0 * v3[i] + v4[i]);
      vn[i] = v[i] + ds / 6.0 * (a1[i] + 2.0 * a2[i] + 2.0 * a3[i] + a4[i]);
    }
    return interp.contains(xn, kMargin);
  };

  evaluate(x, v);
  for (std::size_t step = 0; step < steps; ++step) {
    Vec3 xn, vn;
    if (!advance(xn, vn)) {
      result.truncated = true;
      result.warning = "geodesic left the well-resolved region after g-tilde length " +
                       std::to_string(result.length) + "; segment truncated";
      break;
    }
    x = xn;
    v = vn;
    result.length += ds;
    evaluate(x, v);
  }
  return result;
}

}  // namespace closure
