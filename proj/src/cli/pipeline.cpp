#include "closure/cli/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "closure/cli/tabulated.hpp"
#include "closure/field/eigen.hpp"
#include "closure/field/time_stencil.hpp"
#include "closure/geometry/conformal.hpp"
#include "closure/geometry/curvature.hpp"
#include "closure/geometry/diameter.hpp"

namespace closure {

namespace {

using Var = Expression::Var;

template <class F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.kind(), std::string("stage '") + name + "': " + e.message());
  }
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

double max_abs_diff(const SymTensorField& a, const SymTensorField& b) {
  double m = 0.0;
  for (int s = 0; s < 6; ++s) m = std::max(m, max_abs_diff(a.plane(s), b.plane(s)));
  return m;
}

double max_abs(const SymTensorField& a) {
  double m = 0.0;
  for (int s = 0; s < 6; ++s)
    for (double v : a.plane(s)) m = std::max(m, std::fabs(v));
  return m;
}

double max_abs(const ScalarField& a) {
  double m = 0.0;
  for (double v : a.values()) m = std::max(m, std::fabs(v));
  return m;
}

FLRWModel flrw_model(const FlrwSpec& f) {
  const Expression a = f.a;
  const Expression da = a.derivative(Var::T);
  const Expression dda = da.derivative(Var::T);
  FLRWModel m;
  m.a = [a](double t) { return a.eval({t}); };
  m.da = [da](double t) { return da.eval({t}); };
  m.dda = [dda](double t) { return dda.eval({t}); };
  m.K = f.K;
  const Expression L = f.Lambda;
  m.Lambda = [L](double t) { return L.eval({t}); };
  if (f.omega) {
    const Expression w = *f.omega;
    m.omega = [w](double t) { return w.eval({t}); };
  }
  return m;
}

Bindings at(double t, const Vec3& x) { return {t, x[0], x[1], x[2]}; }

ScalarField sample_scalar(const Expression& e, const GridChart& chart, double t) {
  return map_points(chart, [&](std::size_t p) { return e.eval(at(t, chart.coordinate(p))); });
}

SymTensorField sample_tensor(const std::array<Expression, 6>& e, const GridChart& chart, double t) {
  return map_points_sym(chart, [&](std::size_t p) {
    const Bindings b = at(t, chart.coordinate(p));
    Sym3 s;
    for (int c = 0; c < 6; ++c) s.c[c] = e[c].eval(b);
    return s;
  });
}

std::array<Expression, 6> derivative(const std::array<Expression, 6>& e) {
  std::array<Expression, 6> out;
  for (int c = 0; c < 6; ++c) out[c] = e[c].derivative(Var::T);
  return out;
}

// Central differences at Δ and Δ/2 against the exact derivatives: a
// consistency diagnostic for the time sampling.
Json richardson(const std::function<double(double)>& f, double t, double d1, double d2, double dt) {
  Json j = Json::array();
  for (double h : {dt, dt / 2}) {
    const double first = (f(t + h) - f(t - h)) / (2 * h);
    const double second = (f(t + h) - 2 * f(t) + f(t - h)) / (h * h);
    j.push_back({{"step", h}, {"firstDerivativeError", std::fabs(first - d1)},
                 {"secondDerivativeError", std::fabs(second - d2)}});
  }
  return j;
}

GridChart subsampled(const GridChart& c) {
  GridChart out = c;
  for (int a = 0; a < 3; ++a) {
    if (c.periodic[a]) {
      if (c.dims[a] % 2 != 0)
        throw Error(ErrorKind::Resolution, "truncation estimate needs an even periodic resolution");
      out.dims[a] = c.dims[a] / 2;
    } else {
      out.dims[a] = (c.dims[a] + 1) / 2;
    }
    out.spacing[a] = 2.0 * c.spacing[a];
  }
  if (std::min({out.dims[0], out.dims[1], out.dims[2]}) < 5)
    throw Error(ErrorKind::Resolution, "truncation estimate needs at least 9 points per axis");
  return out;
}

std::size_t fine_index(const GridChart& fine, const GridChart& coarse, std::size_t p) {
  const auto m = coarse.multi_index(p);
  return fine.index(2 * m[0], 2 * m[1], 2 * m[2]);
}

// Richardson estimate of the O(h²) error in the finite-difference terms of the
// Bonnet–Myers inequalities: |f_h − f_2h| / 3 at shared points.
double fd_truncation_estimate(const SliceGeometry& geom, const ScalarField& u) {
  const GridChart& fine = geom.chart();
  const GridChart coarse = subsampled(fine);
  const auto pick = [&](std::span<const double> v) {
    std::vector<double> out(coarse.size());
    for (std::size_t p = 0; p < out.size(); ++p) out[p] = v[fine_index(fine, coarse, p)];
    return out;
  };
  SymTensorField::Planes planes;
  for (int s = 0; s < 6; ++s) planes[s] = pick(geom.metric().plane(s));
  const SliceGeometry cgeom{SymTensorField(coarse, planes)};
  const ScalarField cu(coarse, pick(u.values()));

  double est = 0.0;
  const auto compare = [&](std::span<const double> f, std::span<const double> c) {
    for (std::size_t p = 0; p < coarse.size(); ++p)
      est = std::max(est, std::fabs(f[fine_index(fine, coarse, p)] - c[p]) / 3.0);
  };
  const auto compare_tensor = [&](const SymTensorField& f, const SymTensorField& c) {
    for (int s = 0; s < 6; ++s) compare(f.plane(s), c.plane(s));
  };
  if (!geom.tag()) compare_tensor(ricci(geom), ricci(cgeom));
  compare_tensor(hessian(u, geom), hessian(cu, cgeom));
  compare(laplacian(u, geom).values(), laplacian(cu, cgeom).values());
  compare(gradient_norm_sq(u, geom).values(), gradient_norm_sq(cu, cgeom).values());
  return est;
}

SymTensorField leaf_ricci(const SliceGeometry& geom) {
  if (auto exact = analytic_ricci(geom)) return *exact;
  return ricci(geom);
}

std::optional<double> oracle_diameter(const SliceGeometry& geom, std::size_t sources, Json& note) {
  try {
    const DiameterEstimate d = diameter_oracle(geom, sources);
    note = {{"diameter", d.diameter}, {"analytic", d.analytic}, {"sources", d.sources}};
    return d.diameter;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::UnsupportedTopology) throw;
    note = {{"unavailable", e.what()}};
    return std::nullopt;
  }
}

DirectionBudget budget_for(const PipelineOptions& o) {
  DirectionBudget b;
  b.sphere = std::size_t{64} << o.refine;
  b.refine = o.refine > 0;
  return b;
}

std::string profile_of(const SpacetimeSpec& spec, const PipelineOptions& o) {
  return o.toleranceProfile.value_or(spec.analysis.toleranceProfile);
}

Json spec_json(const SpacetimeSpec& spec, const PipelineOptions& o) {
  return Json{{"name", spec.name},
              {"kind", to_string(spec.kind)},
              {"t0", spec.analysis.t0},
              {"timeStep", spec.analysis.timeStep},
              {"resolution", spec.analysis.resolution},
              {"toleranceProfile", profile_of(spec, o)},
              {"refine", o.refine}};
}

Json parameters_json(const LeafAnalysis& a) {
  Json j;
  j["t0"] = a.snap.t0;
  if (a.q) {
    j["q"] = json_number(a.q->q);
    j["qSamples"] = a.q->samples;
    j["qSkipped"] = a.q->skipped;
    if (!a.q->diagnostic.empty()) j["qDiagnostic"] = a.q->diagnostic;
  } else {
    j["q"] = nullptr;
    j["qDiagnostic"] = a.qError;
  }
  j["hubble"] = json_number(a.hubble);
  j["pressureParameter"] = json_number(a.pressure);
  j["Lambda"] = json_number(a.Lambda);
  j["rhoMin"] = json_number(a.decomp.rho.min());
  j["rhoMax"] = json_number(a.decomp.rho.max());
  return j;
}

ClosureReport failed_route(TheoremTag tag, const Error& e) {
  ClosureReport r;
  r.theorem = tag;
  r.conditions.push_back({"route preconditions", false, std::nan(""), 0.0});
  r.annotations.emplace_back(e.what());
  return r;
}

bool recoverable(ErrorKind k) { return k == ErrorKind::Precondition || k == ErrorKind::UndefinedParameter; }

struct Context {
  const SpacetimeSpec& spec;
  const PipelineOptions& opt;
  double abs_tol = 0.0;
};

std::vector<ClosureReport> verdicts(const Context& ctx, const LeafData& leaf, const LeafAnalysis& a,
                                    const std::string& which, std::optional<double> oracle) {
  const bool all = which == "all";
  std::vector<ClosureReport> out;
  const auto route = [&](TheoremTag tag, const std::function<ClosureReport()>& f) {
    try {
      out.push_back(f());
    } catch (const Error& e) {
      if (!all || !recoverable(e.kind())) throw;
      out.push_back(failed_route(tag, e));
    }
  };
  if (all || which == "13") route(TheoremTag::Thm13, [&] { return theorem13_verdict(a.parameters()); });
  if (all || which == "14")
    route(TheoremTag::Thm14, [&] { return theorem14_verdict(a.snap, a.kin, a.decomp, a.hubble); });
  if (all || which == "15")
    route(TheoremTag::Cor15, [&] {
      const LeafParameters p = a.parameters();
      return corollary15_verdict(a.decomp, a.snap.g, p.q, p.hubble, leaf.omega);
    });
  if (all || which == "generic")
    route(TheoremTag::Generic, [&] {
      return generic_verdict(leaf.geom, a.snap, a.kin, a.decomp, a.ricci, 1e-9, ctx.abs_tol);
    });
  if (oracle)
    for (auto& r : out) attach_oracle(r, *oracle);
  return out;
}

double fd_tolerance(const Context& ctx, const SliceGeometry& geom, const ScalarField& u, Json& diag) {
  if (profile_of(ctx.spec, ctx.opt) != "fd") return 0.0;
  const double est = fd_truncation_estimate(geom, u);
  diag["truncationEstimate"] = est;
  diag["absoluteTolerance"] = 10.0 * est;
  return 10.0 * est;
}

PipelineResult run_verdict(const Context& ctx) {
  const SpacetimeSpec& spec = ctx.spec;
  const std::size_t n = spec.analysis.resolution;
  const LeafData leaf = stage("leaf", [&] { return build_leaf(spec, spec.analysis.t0, n); });
  const LeafAnalysis a = stage("analysis", [&] {
    return analyze_leaf(leaf.geom, leaf.snap, leaf.Lambda, budget_for(ctx.opt));
  });
  Json diag;
  diag["timeDerivatives"] = leaf.timeDiagnostics;
  Context c = ctx;
  c.abs_tol = stage("tolerance", [&] { return fd_tolerance(ctx, leaf.geom, a.snap.N, diag); });
  Json oracle_note;
  const auto oracle = stage("oracle", [&] {
    return oracle_diameter(leaf.geom, spec.analysis.oracleSources << ctx.opt.refine, oracle_note);
  });
  diag["oracle"] = oracle_note;
  const auto reports = stage("verdict", [&] { return verdicts(c, leaf, a, ctx.opt.theorem, oracle); });

  PipelineResult res;
  res.report["parameters"] = parameters_json(a);
  Json rs = Json::array();
  for (const auto& r : reports) rs.push_back(to_json(r));
  res.report["reports"] = rs;
  res.report["diagnostics"] = diag;
  return res;
}

PipelineResult run_parameters(const Context& ctx) {
  const SpacetimeSpec& spec = ctx.spec;
  std::vector<double> times;
  if (spec.analysis.tRange) {
    const auto [lo, hi] = *spec.analysis.tRange;
    const std::size_t m = spec.analysis.tSamples;
    for (std::size_t i = 0; i < m; ++i) times.push_back(m == 1 ? lo : lo + (hi - lo) * i / (m - 1.0));
  } else {
    times.push_back(spec.analysis.t0);
  }
  PipelineResult res;
  Json series = Json::array();
  std::ostringstream csv;
  csv << "t,q,hubble,pressureParam,thm13,thm14,cor15,generic\n";
  const auto cell = [](double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
  };
  for (double t : times) {
    const LeafData leaf = stage("leaf", [&] { return build_leaf(spec, t, spec.analysis.resolution); });
    const LeafAnalysis a = stage("analysis", [&] {
      return analyze_leaf(leaf.geom, leaf.snap, leaf.Lambda, budget_for(ctx.opt));
    });
    Context c = ctx;
    Json unused;
    c.abs_tol = stage("tolerance", [&] { return fd_tolerance(ctx, leaf.geom, a.snap.N, unused); });
    const auto reports = stage("verdict", [&] { return verdicts(c, leaf, a, "all", std::nullopt); });
    Json row = parameters_json(a);
    Json flags;
    for (const auto& r : reports) flags[to_string(r.theorem)] = r.verdict == Verdict::Closed;
    row["closed"] = flags;
    series.push_back(row);
    csv << cell(t) << ',' << (a.q ? cell(a.q->q) : "") << ',' << cell(a.hubble) << ',' << cell(a.pressure);
    for (const auto& r : reports) csv << ',' << (r.verdict == Verdict::Closed ? 1 : 0);
    csv << '\n';
  }
  res.report["series"] = series;
  res.csv = csv.str();
  return res;
}

PipelineResult run_diameter(const Context& ctx) {
  const SpacetimeSpec& spec = ctx.spec;
  const LeafData leaf = stage("leaf", [&] { return build_leaf(spec, spec.analysis.t0, spec.analysis.resolution); });
  const DiameterEstimate d =
      stage("oracle", [&] { return diameter_oracle(leaf.geom, spec.analysis.oracleSources << ctx.opt.refine); });
  PipelineResult res;
  Json ecc = Json::array();
  for (double e : d.eccentricities) ecc.push_back(json_number(e));
  res.report["diameter"] = {{"value", d.diameter}, {"analytic", d.analytic}, {"sources", d.sources},
                            {"eccentricities", ecc}};
  return res;
}

PipelineResult run_bm_check(const Context& ctx) {
  const SpacetimeSpec& spec = ctx.spec;
  if (!spec.bm) throw Error(ErrorKind::Schema, "bm: section required by bm-check is missing");
  const BMCheckSpec& b = *spec.bm;
  const double t0 = spec.analysis.t0;
  const LeafData leaf = stage("leaf", [&] { return build_leaf(spec, t0, spec.analysis.resolution); });
  const GridChart& chart = leaf.geom.chart();
  Json diag;
  BMHypothesis hyp = stage("hypothesis", [&] {
    return BMHypothesis{.n = b.n,
                        .alpha = b.alpha,
                        .beta = b.beta,
                        .gamma = b.gamma,
                        .geom = leaf.geom,
                        .u = sample_scalar(b.u, chart, t0),
                        .V = sample_scalar(b.V, chart, t0),
                        .Q = sample_tensor(b.Q, chart, t0),
                        .ric = leaf_ricci(leaf.geom)};
  });
  hyp.absolute_tolerance = stage("tolerance", [&] { return fd_tolerance(ctx, leaf.geom, hyp.u, diag); });
  const InequalityResult ric = stage("ric-check", [&] { return check_ric_inequality(hyp); });
  const InequalityResult sup = stage("supersolution-check", [&] { return check_supersolution(hyp); });

  PipelineResult res;
  const auto check_json = [&](const InequalityResult& r) {
    return Json{{"holds", r.holds}, {"minResidual", json_number(r.min_residual)},
                {"worstPoint", point_label(chart, r.worst_point)}, {"tolerance", json_number(r.tolerance)}};
  };
  res.report["checks"] = {{"ric", check_json(ric)}, {"supersolution", check_json(sup)}};
  res.report["feasibleKInterval"] = to_json(feasible_k_interval(b.n, b.alpha, b.beta, b.gamma));
  if (!ric.holds || !sup.holds) {
    res.report["certificate"] = nullptr;
    res.report["diagnostics"] = diag;
    res.exitCode = 3;
    return res;
  }
  const OptimizeResult opt = stage("optimize", [&] { return optimize_k(hyp); });
  if (opt.feasible) {
    res.report["certificate"] = to_json(opt.certificate);
  } else {
    res.report["certificate"] = nullptr;
    res.report["infeasible"] = opt.reason;
  }
  res.report["diagnostics"] = diag;
  return res;
}

Json suite(const std::string& name, const std::string& module, const std::string& status, Json metrics) {
  return Json{{"name", name}, {"module", module}, {"status", status}, {"metrics", std::move(metrics)}};
}

PipelineResult run_identities(const Context& ctx) {
  const SpacetimeSpec& spec = ctx.spec;
  const double t0 = spec.analysis.t0;
  const std::size_t n = spec.analysis.resolution;
  const LeafData leaf = stage("leaf", [&] { return build_leaf(spec, t0, n); });
  const LeafAnalysis a = stage("analysis", [&] {
    return analyze_leaf(leaf.geom, leaf.snap, leaf.Lambda, budget_for(ctx.opt));
  });
  Json suites = Json::array();
  std::vector<std::string> failures;
  const auto record = [&](Json s) {
    if (s["status"] == "fail") failures.push_back(s["module"].get<std::string>() + ": " + s["name"].get<std::string>());
    suites.push_back(std::move(s));
  };

  // Gauss–Codazzi: recovered 𝒯 must reproduce Ric and ΔN exactly.
  stage("gauss-codazzi", [&] {
    const SymTensorField Q = generic_Q(a.snap, a.kin, a.decomp);
    const ScalarField V = generic_V(a.snap, a.kin, a.decomp);
    double ric_res = 0.0, lap_res = 0.0, scale = 1.0;
    for (std::size_t p = 0; p < a.snap.chart().size(); ++p) {
      const Sym3 g = a.snap.g.at(p);
      const Sym3 r = a.ricci.at(p) - (1.0 / a.snap.N[p]) * a.hessN.at(p) - Q.at(p);
      const SymEigen e = eig_orthonormal(r, g);
      ric_res = std::max({ric_res, std::fabs(e.values[0]), std::fabs(e.values[2])});
      lap_res = std::max(lap_res, std::fabs(-a.lapN[p] - V[p] * a.snap.N[p]));
      const SymEigen er = eig_orthonormal(a.ricci.at(p), g);
      scale = std::max({scale, std::fabs(er.values[0]), std::fabs(er.values[2]), std::fabs(a.decomp.Tnn[p])});
    }
    const double tol = 1e-9 * scale;
    Json m{{"ricResidual", ric_res}, {"lapseResidual", lap_res}, {"tolerance", tol}};
    bool ok = ric_res <= tol && lap_res <= tol;
    if (spec.flrw) {
      const FLRWAnalytics ex = flrw_analytics(flrw_model(*spec.flrw), t0);
      const double tnn_err = max_abs_diff(a.decomp.Tnn.values(), std::vector<double>(a.decomp.Tnn.size(), ex.Tnn));
      double p_err = 0.0;
      for (const auto& pf : a.decomp.pressures)
        p_err = std::max(p_err, max_abs_diff(pf.values(), std::vector<double>(pf.size(), ex.p)));
      const double tol_ex = 1e-8 * std::max({1.0, std::fabs(ex.Tnn), std::fabs(ex.p)});
      m["TnnError"] = tnn_err;
      m["pressureError"] = p_err;
      m["closedFormTolerance"] = tol_ex;
      ok = ok && tnn_err <= tol_ex && p_err <= tol_ex;
    }
    record(suite("Gauss-Codazzi round trip", "einstein-matter", ok ? "pass" : "fail", m));
    return 0;
  });

  // Conformal Ricci identity along geodesics, at n and 2n.
  stage("conformal-identity", [&] {
    const auto residual = [&](const SliceGeometry& g) {
      const ScalarField u = sample_scalar(spec.identities.u, g.chart(), t0);
      return conformal_ricci_check(g, u, spec.identities.k, {});
    };
    const ConformalCheckResult coarse = residual(leaf.geom);
    Json m{{"k", spec.identities.k}, {"residual", coarse.residual}, {"samples", coarse.samples}};
    if (spec.tabulated) {
      record(suite("conformal Ricci identity", "riemannian-ops", "skipped", m));
      return 0;
    }
    const LeafData fine = build_leaf(spec, t0, 2 * n);
    const ConformalCheckResult f = residual(fine.geom);
    m["fineResidual"] = f.residual;
    const bool ok = f.residual <= 1e-10 || f.residual <= 0.5 * coarse.residual;
    m["observedOrder"] = coarse.residual > 0 && f.residual > 0 ? Json(std::log2(coarse.residual / f.residual)) : Json(nullptr);
    record(suite("conformal Ricci identity", "riemannian-ops", ok ? "pass" : "fail", m));
    return 0;
  });

  // Time-derivative identities across t0 ± Δ.
  stage("kinematics", [&] {
    if (spec.tabulated) {
      record(suite("mean curvature rate", "foliation-kinematics", "skipped", Json::object()));
      record(suite("second fundamental form rate", "foliation-kinematics", "skipped", Json::object()));
      return 0;
    }
    const double dt = spec.analysis.timeStep;
    TimeStencil<FoliationSnapshot> snaps;
    snaps.times = {t0 - dt, t0, t0 + dt};
    for (int i = 0; i < 3; ++i) snaps.values[i] = build_leaf(spec, snaps.times[i], n).snap;
    const double Ht = mean_curvature_rate_discrepancy(snaps);
    const double Ht_tol = 1e-6 * std::max(1.0, max_abs(a.kin.dtH));
    record(suite("mean curvature rate", "foliation-kinematics", Ht <= Ht_tol ? "pass" : "fail",
                 {{"discrepancy", Ht}, {"tolerance", Ht_tol}}));

    const KinematicBundle km = kinematics(snaps.values[0]);
    const KinematicBundle kp = kinematics(snaps.values[2]);
    double err = 0.0;
    for (int s = 0; s < 6; ++s) {
      const auto hm = km.h.plane(s), hp = kp.h.plane(s), dth = a.kin.dth.plane(s);
      for (std::size_t p = 0; p < hm.size(); ++p) err = std::max(err, std::fabs((hp[p] - hm[p]) / (2 * dt) - dth[p]));
    }
    const double ht_tol = 1e-6 * std::max(1.0, max_abs(a.kin.dth));
    record(suite("second fundamental form rate", "foliation-kinematics", err <= ht_tol ? "pass" : "fail",
                 {{"discrepancy", err}, {"tolerance", ht_tol}}));
    return 0;
  });

  PipelineResult res;
  res.report["suites"] = suites;
  res.report["failures"] = failures;
  res.exitCode = failures.empty() ? 0 : 4;
  return res;
}

}  // namespace

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Schema:
    case ErrorKind::Syntax:
    case ErrorKind::UnknownIdentifier:
    case ErrorKind::EvaluationDomain:
    case ErrorKind::Shape:
    case ErrorKind::Io:
    case ErrorKind::Resolution:
    case ErrorKind::InputDomain: return 2;
    case ErrorKind::InvariantViolation: return 4;
    default: return 3;
  }
}

LeafData build_leaf(const SpacetimeSpec& spec, double t, std::size_t n) {
  const double dt = spec.analysis.timeStep;
  if (spec.flrw) {
    const FLRWModel m = flrw_model(*spec.flrw);
    const SliceGeometry unit = model_slice(m.K, n, spec.analysis.halfWidth, spec.analysis.torusSide);
    LeafData leaf{flrw_leaf(m, t, unit), flrw_snapshot(m, t, unit), m.Lambda(t), std::nullopt, Json::object()};
    if (m.omega) leaf.omega = (*m.omega)(t);
    leaf.timeDiagnostics = {{"scaleFactor", richardson(m.a, t, m.da(t), m.dda(t), dt)}};
    return leaf;
  }
  if (spec.analytic) {
    const AnalyticFoliationSpec& f = *spec.analytic;
    const GridChart chart = f.chart.chart(n);
    const Expression dN = f.N.derivative(Var::T);
    const auto dg = derivative(f.g);
    const auto ddg = derivative(dg);
    FoliationSnapshot snap{t,
                           sample_scalar(f.N, chart, t),
                           sample_scalar(dN, chart, t),
                           sample_tensor(f.g, chart, t),
                           sample_tensor(dg, chart, t),
                           sample_tensor(ddg, chart, t)};
    snap.validate();
    Json diag = Json::array();
    for (double h : {dt, dt / 2}) {
      const SymTensorField gm = sample_tensor(f.g, chart, t - h), gp = sample_tensor(f.g, chart, t + h);
      const auto [d1, d2] = fd_time(TimeStencil<SymTensorField>{{t - h, t, t + h}, {gm, snap.g, gp}});
      diag.push_back({{"step", h}, {"firstDerivativeError", max_abs_diff(d1, snap.dtg)},
                      {"secondDerivativeError", max_abs_diff(d2, snap.dttg)}});
    }
    SliceGeometry geom(snap.g);
    return LeafData{std::move(geom), std::move(snap), f.Lambda.eval({t}), std::nullopt, {{"metric", diag}}};
  }
  const TabulatedFoliationSpec& f = *spec.tabulated;
  if (std::fabs(t - f.times[1]) > 1e-12 * std::max(1.0, std::fabs(t)))
    throw Error(ErrorKind::Schema, "tabulated.times: only the stored middle leaf can be analyzed");
  const GridChart chart = f.chart.chart(n);
  TimeStencil<ScalarField> N;
  TimeStencil<SymTensorField> g;
  N.times = g.times = f.times;
  for (int i = 0; i < 3; ++i) {
    N.values[i] = read_scalar_field(f.N[i], chart);
    g.values[i] = read_tensor_field(f.g[i], chart);
    for (const auto& path : {f.N[i], f.g[i]}) {
      const double stored = read_field_time(path);
      if (std::fabs(stored - f.times[i]) > 1e-12 * std::max(1.0, std::fabs(f.times[i])))
        throw Error(ErrorKind::Shape, path.string() + ": sidecar time disagrees with tabulated.times");
    }
  }
  FoliationSnapshot snap = snapshot_from_stencil(N, g);
  SliceGeometry geom(snap.g);
  return LeafData{std::move(geom), std::move(snap), f.Lambda, std::nullopt, Json::object()};
}

PipelineResult run_pipeline(const SpacetimeSpec& spec, const PipelineOptions& options) {
  const Context ctx{spec, options};
  if (options.refine < 0 || options.refine > 6) throw Error(ErrorKind::InputDomain, "--refine must lie in [0, 6]");
  const std::string& th = options.theorem;
  if (th != "13" && th != "14" && th != "15" && th != "generic" && th != "all")
    throw Error(ErrorKind::InputDomain, "--theorem must be 13, 14, 15, generic or all");
  if (options.toleranceProfile && *options.toleranceProfile != "analytic" && *options.toleranceProfile != "fd")
    throw Error(ErrorKind::InputDomain, "--tolerance-profile must be analytic or fd");

  PipelineResult body;
  if (options.command == "verdict") {
    body = run_verdict(ctx);
  } else if (options.command == "parameters") {
    body = run_parameters(ctx);
  } else if (options.command == "diameter") {
    body = run_diameter(ctx);
  } else if (options.command == "bm-check") {
    body = run_bm_check(ctx);
  } else if (options.command == "identities") {
    body = run_identities(ctx);
  } else {
    throw Error(ErrorKind::InputDomain, "unknown command '" + options.command + "'");
  }

  PipelineResult res;
  res.report["schemaVersion"] = kReportSchemaVersion;
  res.report["tool"] = "closure-lab";
  res.report["command"] = options.command;
  if (options.command == "verdict") res.report["theorem"] = options.theorem;
  res.report["spec"] = spec_json(spec, options);
  for (auto& [k, v] : body.report.items()) res.report[k] = v;
  res.csv = std::move(body.csv);
  res.exitCode = body.exitCode;
  return res;
}

}  // namespace closure
