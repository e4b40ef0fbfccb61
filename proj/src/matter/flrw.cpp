#include "closure/matter/flrw.hpp"

#include <cmath>

#include "closure/error.hpp"

namespace closure {

const char* to_string(Verdict v) noexcept { return v == Verdict::Closed ? "closed" : "inconclusive"; }

FLRWAnalytics flrw_analytics(const FLRWModel& model, double t0) {
  FLRWAnalytics out;
  out.a = model.a(t0);
  out.da = model.da(t0);
  out.dda = model.dda(t0);
  if (!(out.a > 0.0)) throw Error(ErrorKind::InputDomain, "scale factor must be positive at t0");
  const double a2 = out.a * out.a;
  out.hubbleRate = out.da / out.a;
  out.hubble = 3.0 * std::fabs(out.hubbleRate);
  out.Tnn = 3.0 * (out.hubbleRate * out.hubbleRate + model.K / a2);
  out.Tii = -2.0 * out.dda / out.a - out.hubbleRate * out.hubbleRate - model.K / a2;
  out.Lambda = model.Lambda(t0);
  out.p = out.Tii + out.Lambda;
  out.rho = out.Tnn - out.Lambda;
  if (out.da != 0.0) out.q = -out.a * out.dda / (out.da * out.da);
  const bool closed = out.q && *out.q > 0.5 && out.p <= out.Lambda && out.hubble * out.hubble > 0.0;
  out.flrw2Verdict = closed ? Verdict::Closed : Verdict::Inconclusive;
  return out;
}

double flrw_q_formula(const FLRWModel& model, double t0) {
  const FLRWAnalytics f = flrw_analytics(model, t0);
  const double rate_sq = f.hubbleRate * f.hubbleRate;
  if (!(rate_sq > 0.0))
    throw Error(ErrorKind::UndefinedParameter, "q undefined: Hubble rate vanishes at t0");
  const double a2 = f.a * f.a;
  return 0.5 + (a2 * f.Tii + model.K) / (2.0 * a2 * rate_sq);
}

SliceGeometry model_slice(double K, std::size_t n, double half_width, double torus_side) {
  if (K > 0.0) return SliceGeometry::round_sphere_patch(1.0 / std::sqrt(K), half_width, {n, n, n});
  if (K < 0.0) return SliceGeometry::hyperbolic_patch(K, half_width, {n, n, n});
  return SliceGeometry::flat_torus({torus_side, torus_side, torus_side}, {n, n, n});
}

FoliationSnapshot flrw_snapshot(const FLRWModel& model, double t0, const SliceGeometry& unit_slice) {
  const double a = model.a(t0), da = model.da(t0), dda = model.dda(t0);
  if (!(a > 0.0)) throw Error(ErrorKind::InputDomain, "scale factor must be positive at t0");
  const SymTensorField& gK = unit_slice.metric();
  const GridChart& chart = unit_slice.chart();
  auto scaled = [&](double c) { return map_points_sym(chart, [&](std::size_t p) { return c * gK.at(p); }); };
  FoliationSnapshot snap{t0,
                         ScalarField::constant(chart, 1.0),
                         ScalarField::constant(chart, 0.0),
                         scaled(a * a),
                         scaled(2.0 * a * da),
                         scaled(2.0 * (da * da + a * dda))};
  snap.validate();
  return snap;
}

SliceGeometry flrw_leaf(const FLRWModel& model, double t0, const SliceGeometry& unit_slice) {
  const double a = model.a(t0);
  if (!(a > 0.0)) throw Error(ErrorKind::InputDomain, "scale factor must be positive at t0");
  const SymTensorField& gK = unit_slice.metric();
  SymTensorField g = map_points_sym(unit_slice.chart(), [&](std::size_t p) { return (a * a) * gK.at(p); });
  if (!unit_slice.tag()) return SliceGeometry(std::move(g));
  AnalyticTag tag = *unit_slice.tag();
  if (auto* t = std::get_if<FlatTorus>(&tag))
    for (auto& L : t->lengths) L *= a;
  else if (auto* s = std::get_if<RoundSphere>(&tag))
    s->radius *= a;
  else
    std::get<HyperbolicModel>(tag).curvature /= a * a;
  return SliceGeometry(std::move(g), tag);
}

}  // namespace closure
