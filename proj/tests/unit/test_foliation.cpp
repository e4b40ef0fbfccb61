#include <cmath>
#include <random>

#include "closure/error.hpp"
#include "closure/field/eigen.hpp"
#include "closure/foliation/kinematics.hpp"
#include "doctest.h"
#include "support/models.hpp"
#include "support/oracles.hpp"

using namespace closure;
using namespace closure::testing;

namespace {

FoliationSnapshot flat_flrw(const FLRWModel& m, double t0 = 0.0, std::size_t n = 4) {
  return flrw_snapshot(m, t0, model_slice(0.0, n));
}

FoliationSnapshot static_snapshot(std::size_t n = 4) {
  const GridChart chart = GridChart::periodic_box({1, 1, 1}, {n, n, n});
  return FoliationSnapshot{0.0,
                           ScalarField::constant(chart, 1.0),
                           ScalarField::constant(chart, 0.0),
                           SymTensorField::constant(chart, Sym3::identity()),
                           SymTensorField::constant(chart, Sym3{}),
                           SymTensorField::constant(chart, Sym3{})};
}

// Anisotropic foliation with space- and time-dependent lapse and metric.
struct AnalyticFoliation {
  static double N(double t, const Vec3& x) { return 1.0 + 0.3 * std::sin(x[0]) + 0.1 * t * t; }
  static double dN(double t, const Vec3&) { return 0.2 * t; }
  static Sym3 g(double t, const Vec3& x) {
    return Sym3{{std::exp(t) + 0.1 * std::cos(x[1]), 0.2 * t * t, 0.05 * std::sin(t),
                 1.0 + t + 0.5 * t * t, 0.1 * t, 2.0 + 1.5 * t + std::sin(t) * std::sin(x[2])}};
  }
  static Sym3 dg(double t, const Vec3& x) {
    return Sym3{{std::exp(t), 0.4 * t, 0.05 * std::cos(t), 1.0 + t, 0.1, 1.5 + std::cos(t) * std::sin(x[2])}};
  }
  static Sym3 ddg(double t, const Vec3& x) {
    return Sym3{{std::exp(t), 0.4, -0.05 * std::sin(t), 1.0, 0.0, -std::sin(t) * std::sin(x[2])}};
  }
  static FoliationSnapshot at(double t, const GridChart& chart) {
    return FoliationSnapshot{t,
                             ScalarField::sample(chart, [t](const Vec3& x) { return N(t, x); }),
                             ScalarField::sample(chart, [t](const Vec3& x) { return dN(t, x); }),
                             SymTensorField::sample(chart, [t](const Vec3& x) { return g(t, x); }),
                             SymTensorField::sample(chart, [t](const Vec3& x) { return dg(t, x); }),
                             SymTensorField::sample(chart, [t](const Vec3& x) { return ddg(t, x); })};
  }
};

GridChart small_chart() { return GridChart::periodic_box({2 * M_PI, 2 * M_PI, 2 * M_PI}, {5, 5, 5}); }

}  // namespace

TEST_CASE("kinematics of the FLRW moment a = 1, a' = 1, a'' = -1") {
  const FoliationSnapshot snap = flat_flrw(dust_model(0.0));
  const KinematicBundle kin = kinematics(snap);
  for (std::size_t p = 0; p < snap.chart().size(); ++p) {
    CHECK(kin.h.at(p) == -1.0 * Sym3::identity());
    CHECK(kin.H[p] == -3.0);
    CHECK(kin.normSqH[p] == doctest::Approx(3.0));
    CHECK(kin.dth.at(p) == Sym3{});
    CHECK(kin.dtH[p] == doctest::Approx(6.0));
  }
  CHECK(hubble_parameter(kin) == 3.0);
  // ℋ = −H/3 in the scale-factor convention gives the rate a'/a = 1.
  CHECK(-kin.H[0] / 3.0 == 1.0);
}

TEST_CASE("static slices have no extrinsic curvature") {
  const FoliationSnapshot snap = static_snapshot();
  const KinematicBundle kin = kinematics(snap);
  for (std::size_t p = 0; p < snap.chart().size(); ++p) {
    CHECK(kin.h.at(p) == Sym3{});
    CHECK(kin.H[p] == 0.0);
  }
  CHECK(hubble_parameter(kin) == 0.0);
  try {
    deceleration_parameter(snap, kin);
    FAIL("expected undefined parameter");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UndefinedParameter);
  }
}

TEST_CASE("kinematics rejects nonpositive lapse") {
  FoliationSnapshot snap = static_snapshot();
  std::vector<double> n(snap.chart().size(), 1.0);
  n[7] = 0.0;
  snap.N = ScalarField(snap.chart(), n);
  try {
    kinematics(snap);
    FAIL("expected lapse error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::LapsePositivity);
  }
}

TEST_CASE("hubble parameter is the square root of inf H^2") {
  const GridChart chart = GridChart::periodic_box({1, 1, 1}, {4, 4, 4});
  KinematicBundle kin;
  kin.H = ScalarField::sample(chart, [](const Vec3& x) { return x[0] < 0.5 ? -3.0 : -4.0; });
  CHECK(hubble_parameter(kin) == 3.0);
}

TEST_CASE("deceleration parameter on FLRW examples") {
  CHECK(deceleration_parameter(flat_flrw(dust_model(0.0)), kinematics(flat_flrw(dust_model(0.0)))).q ==
        doctest::Approx(1.0).epsilon(1e-14));

  const FoliationSnapshot ds = flat_flrw(cosh_model(), 1.0);
  const double expected = -std::pow(std::cosh(1.0) / std::sinh(1.0), 2);
  CHECK(deceleration_parameter(ds, kinematics(ds)).q == doctest::Approx(expected).epsilon(1e-12));

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> pos(0.3, 3.0), any(-3.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double a = pos(rng), da = any(rng), dda = any(rng);
    if (std::fabs(da) < 0.05) continue;
    for (double K : {-1.0, 0.0, 1.0}) {
      const SliceGeometry unit = model_slice(K, 4, 0.4);
      const FoliationSnapshot snap = flrw_snapshot(quadratic_model(a, da, dda, K), 0.0, unit);
      const double q = deceleration_parameter(snap, kinematics(snap)).q;
      REQUIRE(q == doctest::Approx(-a * dda / (da * da)).epsilon(1e-8));
    }
  }
}

TEST_CASE("deceleration parameter is 1 when the acceleration term vanishes") {
  const GridChart chart = small_chart();
  FoliationSnapshot snap = AnalyticFoliation::at(0.7, chart);
  const KinematicBundle kin0 = kinematics(snap);
  // ∂²ₜₜg = −2 ∂ₜN h makes L ≡ 0.
  snap.dttg = map_points_sym(chart, [&](std::size_t p) { return (-2.0 * snap.dtN[p]) * kin0.h.at(p); });
  const auto r = deceleration_parameter(snap, kinematics(snap));
  CHECK(r.q == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("deceleration parameter never exceeds a dense-direction oracle and matches it closely") {
  const GridChart chart = small_chart();
  const FoliationSnapshot snap = AnalyticFoliation::at(0.4, chart);
  const KinematicBundle kin = kinematics(snap);
  const double q = deceleration_parameter(snap, kin).q;
  const double q_refined = deceleration_parameter(snap, kin, DirectionBudget{64, true}).q;
  CHECK(q_refined <= q + 1e-9);

  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss;
  double oracle = INFINITY;
  for (std::size_t p = 0; p < chart.size(); ++p) {
    const Sym3 g = snap.g.at(p), h = kin.h.at(p);
    const Sym3 m = snap.dttg.at(p) + (2.0 * snap.dtN[p]) * h;
    for (int s = 0; s < 4000; ++s) {
      const Vec3 v = {gauss(rng), gauss(rng), gauss(rng)};
      const double gv = quadratic(g, v), hv = quadratic(h, v);
      const double W = hv * hv / gv;
      if (W < 1e-8) continue;
      const double L = quadratic(m, v) / (2 * snap.N[p] * snap.N[p]);
      oracle = std::min(oracle, 1.0 - (L / gv) / (W / gv));
    }
  }
  MESSAGE("sampled q " << q << ", refined " << q_refined << ", random-direction oracle " << oracle);
  CHECK(std::isfinite(q));
  CHECK(q <= oracle + 1e-9);
  CHECK(q == doctest::Approx(oracle).epsilon(1e-2));
}

TEST_CASE("indefinite h with positive acceleration on its null cone gives -infinity") {
  const GridChart chart = GridChart::periodic_box({1, 1, 1}, {4, 4, 4});
  FoliationSnapshot snap = static_snapshot();
  snap.dtg = SymTensorField::constant(chart, Sym3::diagonal(-2, 2, -1));  // h = diag(1, −1, ½)
  snap.dttg = SymTensorField::constant(chart, Sym3::identity());
  CHECK(deceleration_parameter(snap, kinematics(snap)).q == -INFINITY);
  // Negative acceleration keeps the parameter finite.
  snap.dttg = SymTensorField::constant(chart, -1.0 * Sym3::identity());
  CHECK(std::isfinite(deceleration_parameter(snap, kinematics(snap)).q));
}

TEST_CASE("deceleration parameter is -infinity on degenerate positive directions") {
  const GridChart chart = GridChart::periodic_box({1, 1, 1}, {4, 4, 4});
  FoliationSnapshot snap = static_snapshot();
  snap.dtg = SymTensorField::constant(chart, Sym3::diagonal(-2, 0, 0));   // h = diag(1, 0, 0)
  snap.dttg = SymTensorField::constant(chart, Sym3::diagonal(0, 1, 0));   // L > 0 along e₂
  const auto r = deceleration_parameter(snap, kinematics(snap));
  CHECK(std::isinf(r.q));
  CHECK(r.q < 0);
  CHECK(r.skipped > 0);
  CHECK_FALSE(r.diagnostic.empty());

  snap.dttg = SymTensorField::constant(chart, Sym3::diagonal(0, -1, 0));  // only negative L there
  CHECK(std::isfinite(deceleration_parameter(snap, kinematics(snap)).q));
}

TEST_CASE("energy-deceleration check on FLRW with N = 1") {
  struct Case {
    double dda, worst;
    bool holds;
  };
  for (const Case c : {Case{-2.0, -2.0, true}, Case{-1.0, 0.0, true}, Case{0.0, 2.0, false}}) {
    const FoliationSnapshot snap = flat_flrw(quadratic_model(1.0, 1.0, c.dda));
    const auto r = energy_deceleration_check(snap, kinematics(snap));
    CHECK(r.holds == c.holds);
    CHECK(r.worst_eigenvalue == doctest::Approx(c.worst).epsilon(1e-14));
  }
  // Holds iff q ≥ 1, on random FLRW moments.
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> pos(0.5, 2.0), qd(0.0, 2.0);
  for (int trial = 0; trial < 500; ++trial) {
    const double a = pos(rng), da = pos(rng), q = qd(rng);
    if (std::fabs(q - 1.0) < 1e-6) continue;
    const double dda = -q * da * da / a;
    const FoliationSnapshot snap = flat_flrw(quadratic_model(a, da, dda));
    REQUIRE(energy_deceleration_check(snap, kinematics(snap)).holds == (q >= 1.0));
  }
}

TEST_CASE("traceless part and time-derivative identities") {
  const GridChart chart = small_chart();
  const FoliationSnapshot snap = AnalyticFoliation::at(0.3, chart);
  const KinematicBundle kin = kinematics(snap);
  const ScalarField tr = metric_trace(kin.hRing, snap.g);
  for (double v : tr.values()) CHECK(std::fabs(v) <= 1e-10);
  for (std::size_t p = 0; p < chart.size(); ++p) {
    const double n = snap.N[p];
    for (int i = 0; i < 3; ++i) {
      const double lhs = kin.dth.at(p)(i, i) / n;
      const double rhs = -snap.dttg.at(p)(i, i) / (2 * n * n) - snap.dtN[p] * kin.h.at(p)(i, i) / (n * n);
      CHECK(std::fabs(lhs - rhs) <= 1e-12 * std::max(1.0, std::fabs(lhs)));
    }
  }
}

TEST_CASE("mean-curvature rate: direct difference agrees with the formula at second order") {
  const GridChart chart = small_chart();
  std::vector<double> errs;
  for (double dt : {0.02, 0.01, 0.005}) {
    const double t0 = 0.3;
    TimeStencil<FoliationSnapshot> s{{t0 - dt, t0, t0 + dt},
                                     {AnalyticFoliation::at(t0 - dt, chart), AnalyticFoliation::at(t0, chart),
                                      AnalyticFoliation::at(t0 + dt, chart)}};
    errs.push_back(mean_curvature_rate_discrepancy(s));
  }
  CHECK(observed_order(0.02, errs[0], 0.01, errs[1]) == doctest::Approx(2.0).epsilon(0.05));
  CHECK(observed_order(0.01, errs[1], 0.005, errs[2]) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("snapshot_from_stencil reproduces exact derivatives for quadratic time dependence") {
  const FLRWModel m = quadratic_model(1.0, 0.5, -0.25);
  const SliceGeometry unit = model_slice(0.0, 4);
  const double dt = 1e-3;
  TimeStencil<ScalarField> N{{-dt, 0, dt}, {}};
  TimeStencil<SymTensorField> g{{-dt, 0, dt}, {}};
  for (int i = 0; i < 3; ++i) {
    const FoliationSnapshot s = flrw_snapshot(m, g.times[i], unit);
    N.values[i] = s.N;
    g.values[i] = s.g;
  }
  const FoliationSnapshot fd = snapshot_from_stencil(N, g);
  const FoliationSnapshot exact = flrw_snapshot(m, 0.0, unit);
  // a² is quartic in t, so the second difference carries an O(Δ²) term.
  CHECK(fd.dtg.at(0)(0, 0) == doctest::Approx(exact.dtg.at(0)(0, 0)).epsilon(1e-6));
  CHECK(fd.dttg.at(0)(0, 0) == doctest::Approx(exact.dttg.at(0)(0, 0)).epsilon(1e-5));
}

namespace {

TimeStencil<SymTensorField> metric_stencil(const FLRWModel& m, double t0, double dt, const SliceGeometry& unit) {
  TimeStencil<SymTensorField> g{{t0 - dt, t0, t0 + dt}, {}};
  for (int i = 0; i < 3; ++i) g.values[i] = flrw_snapshot(m, g.times[i], unit).g;
  return g;
}

}  // namespace

TEST_CASE("curve concavity inequality") {
  const SliceGeometry unit = model_slice(0.0, 6, 0.5, 2.0);
  const std::vector<Vec3> curve = {{0.1, 0.2, 0.3}, {0.9, 0.4, 0.5}, {1.2, 1.1, 0.2}};
  const ScalarField N = ScalarField::constant(unit.chart(), 1.0);

  // Static foliation.
  const auto stat = curve_concavity_check(metric_stencil(quadratic_model(1, 0, 0), 0.0, 0.01, unit), N, curve, 0.0);
  CHECK(stat.dL == 0.0);
  CHECK(stat.ddL == 0.0);
  CHECK(stat.residual == 0.0);

  // a(t) = t near t = 1: q = 0, L ∝ a so ∂²L = 0.
  FLRWModel linear;
  linear.a = [](double t) { return t; };
  linear.da = [](double) { return 1.0; };
  linear.dda = [](double) { return 0.0; };
  const auto lin = curve_concavity_check(metric_stencil(linear, 1.0, 0.01, unit), N, curve, 0.0);
  CHECK(std::fabs(lin.residual) <= lin.tolerance);
  CHECK(lin.holds);

  // Dust moment with q = 1: equality L·L'' = −(L')².
  const auto dust = curve_concavity_check(metric_stencil(dust_model(0.0), 0.0, 0.01, unit), N, curve, 1.0);
  CHECK(dust.holds);
  CHECK(dust.residual <= dust.tolerance);
  // A larger q breaks the inequality.
  CHECK_FALSE(curve_concavity_check(metric_stencil(dust_model(0.0), 0.0, 0.01, unit), N, curve, 1.5).holds);

  const std::vector<Vec3> point = {{0.1, 0.1, 0.1}, {0.1, 0.1, 0.1}};
  CHECK_THROWS_AS(curve_concavity_check(metric_stencil(dust_model(0.0), 0.0, 0.01, unit), N, point, 1.0), Error);
}
