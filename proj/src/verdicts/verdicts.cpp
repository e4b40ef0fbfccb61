#include "closure/verdicts/verdicts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "closure/error.hpp"
#include "closure/field/eigen.hpp"
#include "closure/geometry/curvature.hpp"
#include "closure/parallel.hpp"

namespace closure {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kWindowSamples = 1024;
constexpr double kFormTolerance = 1e-12;

const char* kCompact = "M^3 is compact (stated implication)";
const char* kFiniteFundamental = "finite fundamental group (stated implication, not computed)";
const char* kSphereQuotient = "diffeomorphic to a quotient of S^3 (stated implication via uniformization, not computed)";

ConditionResult strict_condition(std::string name, double margin, double tol) {
  return {std::move(name), margin > tol, margin, tol};
}

ConditionResult weak_condition(std::string name, double margin, double tol) {
  return {std::move(name), margin >= -tol, margin, tol};
}

void require_agreement(double a, double b, const char* what) {
  if (!(std::fabs(a - b) <= kFormTolerance * std::max(1.0, std::fabs(b))))
    throw Error(ErrorKind::InvariantViolation,
                std::string(what) + ": " + std::to_string(a) + " vs " + std::to_string(b));
}

void add_closed_annotations(ClosureReport& r) {
  r.annotations.emplace_back(kCompact);
  r.annotations.emplace_back(kFiniteFundamental);
  r.annotations.emplace_back(kSphereQuotient);
}

}  // namespace

const char* to_string(TheoremTag t) noexcept {
  switch (t) {
    case TheoremTag::Thm13: return "thm13";
    case TheoremTag::Thm14: return "thm14";
    case TheoremTag::Cor15: return "cor15";
    case TheoremTag::Generic: return "generic";
  }
  return "unknown";
}

bool ClosureReport::all_hold() const noexcept {
  return !conditions.empty() &&
         std::all_of(conditions.begin(), conditions.end(), [](const ConditionResult& c) { return c.holds; });
}

std::optional<double> ClosureReport::tightest_bound() const noexcept {
  std::optional<double> out;
  for (const auto& b : {diameterBoundClosedForm, diameterBoundOptimized})
    if (b && (!out || *b < *out)) out = b;
  return out;
}

double theorem13_bound(double q, double hubble) {
  if (!(q > 0.5) || !(hubble > 0.0))
    throw Error(ErrorKind::DivisionDomain, "closed form needs q > 1/2 and positive Hubble parameter");
  return kPi / hubble * std::sqrt(8.0 * (10.0 * q + 4.0) / (3.0 * (2.0 * q - 1.0) * (2.0 * q + 1.0)));
}

ABConstants theorem13_constants(double q, double hubble) {
  if (!(q > 0.5) || !(hubble > 0.0))
    throw Error(ErrorKind::DivisionDomain, "constants need q > 1/2 and positive Hubble parameter");
  return {8.0 / 3.0, (2.0 * q - 1.0) * (2.0 * q + 1.0) / (10.0 * q + 4.0) * hubble * hubble};
}

double theorem14_k_min() noexcept { return (std::sqrt(43.0) - 3.0) / 6.0; }
double theorem14_k_max() noexcept { return 1.0 + std::sqrt(3.0); }

double theorem14_bound(double k, double hubble) {
  if (!(k > theorem14_k_min() && k < theorem14_k_max()) || !(hubble > 0.0))
    throw Error(ErrorKind::DivisionDomain, "k = " + std::to_string(k) + " outside the admissible window");
  const double num = (3.0 + 2.0 * k - k * k) * (4.0 + 3.0 * k);
  const double den = (2.0 + 2.0 * k - k * k) * (18.0 * k * k + 18.0 * k - 17.0);
  return 6.0 * kPi / hubble * std::sqrt(num / den);
}

ABConstants theorem14_constants(double k, double hubble) {
  if (!(k > theorem14_k_min() && k < theorem14_k_max()) || !(hubble > 0.0))
    throw Error(ErrorKind::DivisionDomain, "k = " + std::to_string(k) + " outside the admissible window");
  return {2.0 * (3.0 + 2.0 * k - k * k) / (2.0 + 2.0 * k - k * k),
          (18.0 * k * k + 18.0 * k - 17.0) / (18.0 * (4.0 + 3.0 * k)) * hubble * hubble};
}

ClosureReport theorem13_verdict(const LeafParameters& p, double tolerance) {
  ClosureReport r;
  r.theorem = TheoremTag::Thm13;
  r.conditions.push_back(strict_condition("q > 1/2", p.q - 0.5, tolerance * std::max(1.0, std::fabs(p.q))));
  r.conditions.push_back(weak_condition("P <= Lambda", p.Lambda - p.pressure,
                                        tolerance * std::max({1.0, std::fabs(p.Lambda), std::fabs(p.pressure)})));
  r.conditions.push_back(strict_condition("H^2 > 0", p.hubble * p.hubble, tolerance * tolerance));
  if (!r.all_hold()) return r;

  r.verdict = Verdict::Closed;
  const double closed = theorem13_bound(p.q, p.hubble);
  const ABConstants ab = theorem13_constants(p.q, p.hubble);
  require_agreement(kPi * std::sqrt(ab.A / ab.B), closed, "pi*sqrt(A/B) against the q-bound");
  // The proof's constants are the engine's at n = 3, α = 1, β = γ = 0, k = 1.
  require_agreement(diameter_bound(3, 1.0, 0.0, 0.0, 1.0, ab.B / 2.0), closed, "engine bound at k = 1");
  r.diameterBoundClosedForm = closed;
  r.k = 1.0;
  r.A = ab.A;
  r.B = ab.B;
  add_closed_annotations(r);
  return r;
}

ClosureReport theorem14_verdict(const FoliationSnapshot& snap, const KinematicBundle& kin,
                                const StressEnergyDecomposition& decomp, double hubble, double tolerance) {
  ClosureReport r;
  r.theorem = TheoremTag::Thm14;

  const EnergyDecelerationResult ed = energy_deceleration_check(snap, kin, tolerance);
  r.conditions.push_back({"energy-decelerating leaf", ed.holds, -ed.worst_eigenvalue, ed.tolerance});

  // min over the leaf of λ_min(𝒯_ij) − k𝒯_νν − (1+k)/2·𝒯 is concave piecewise linear in k.
  const std::size_t count = snap.chart().size();
  std::vector<double> lam(count);
  double scale = 0.0;
  for (std::size_t p = 0; p < count; ++p) {
    lam[p] = eig_orthonormal(decomp.Tspatial.at(p), snap.g.at(p)).values[0];
    scale = std::max({scale, std::fabs(lam[p]), std::fabs(decomp.Tnn[p]), std::fabs(decomp.trTotal[p])});
  }
  const auto margin_at = [&](double k) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < count; ++p)
      m = std::min(m, lam[p] - k * decomp.Tnn[p] - 0.5 * (1.0 + k) * decomp.trTotal[p]);
    return m;
  };
  const double tol_b = tolerance * std::max(1.0, scale);

  const double lo = theorem14_k_min(), hi = theorem14_k_max();
  std::vector<double> ks(kWindowSamples), margins(kWindowSamples);
  for (int i = 0; i < kWindowSamples; ++i) ks[i] = lo + (hi - lo) * (i + 0.5) / kWindowSamples;
  parallel_for(kWindowSamples, [&](std::size_t i) { margins[i] = margin_at(ks[i]); });

  const bool c_holds = hubble * hubble > tolerance * tolerance;
  int chosen = -1;
  double best_bound = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kWindowSamples; ++i) {
    if (margins[i] < -tol_b) continue;
    const double b = c_holds ? theorem14_bound(ks[i], hubble) : 0.0;
    if (chosen < 0 || b < best_bound) {
      chosen = i;
      best_bound = b;
    }
  }
  if (chosen >= 0) {
    r.conditions.push_back({"T_ii - k T_nn - (1+k)/2 tr T >= 0 for some admissible k", true, margins[chosen], tol_b});
  } else {
    const auto it = std::max_element(margins.begin(), margins.end());
    r.conditions.push_back({"T_ii - k T_nn - (1+k)/2 tr T >= 0 for some admissible k", false, *it, tol_b});
  }
  r.conditions.push_back(strict_condition("H^2 > 0", hubble * hubble, tolerance * tolerance));
  r.annotations.emplace_back("T_ii taken as the smallest g-orthonormal eigenvalue of the spatial stress (frame-free reading)");
  if (!r.all_hold()) return r;

  const double k = ks[chosen];
  r.verdict = Verdict::Closed;
  const ABConstants ab = theorem14_constants(k, hubble);
  require_agreement(kPi * std::sqrt(ab.A / ab.B), best_bound, "pi*sqrt(A/B) against the k-bound");
  require_agreement(ab_constants(3, 1.0, 0.0, 0.0, k, ab.B / 2.0).A, ab.A, "engine A at the chosen k");
  r.diameterBoundClosedForm = best_bound;
  r.k = k;
  r.A = ab.A;
  r.B = ab.B;
  add_closed_annotations(r);
  return r;
}

ClosureReport corollary15_verdict(const StressEnergyDecomposition& decomp, const SymTensorField& g, double q,
                                  double hubble, std::optional<double> omega, double tolerance) {
  const PerfectFluidResult fluid = perfect_fluid_check(decomp, g);
  if (!fluid.isPerfectFluid)
    throw Error(ErrorKind::Precondition, "not a perfect fluid: anisotropy " + std::to_string(fluid.anisotropy) +
                                             ", pressure variation " + std::to_string(fluid.variation));
  ClosureReport r = theorem13_verdict({q, hubble, fluid.p, decomp.Lambda}, tolerance);
  r.theorem = TheoremTag::Cor15;
  r.conditions.insert(r.conditions.begin(), {"perfect fluid", true, -fluid.deviation, 1e-8});
  r.annotations.insert(r.annotations.begin(), "perfect-fluid route: p = P is constant on the leaf");
  if (omega) {
    const bool eos = *omega <= 0.0 && decomp.Lambda >= 0.0;
    r.annotations.push_back("equation of state p = omega*rho with omega = " + std::to_string(*omega) +
                            (eos ? ": omega <= 0 and Lambda >= 0 imply p <= Lambda"
                                 : ": omega <= 0 and Lambda >= 0 not both satisfied, p <= Lambda checked directly"));
  }
  return r;
}

SymTensorField generic_Q(const FoliationSnapshot& snap, const KinematicBundle& kin,
                         const StressEnergyDecomposition& decomp) {
  const SymTensorField g_inv = inverse_metric(snap.g);
  return map_points_sym(snap.chart(), [&](std::size_t p) {
    const Sym3 h = kin.h.at(p);
    const Sym3 g = snap.g.at(p);
    return (1.0 / snap.N[p]) * kin.dth.at(p) + 2.0 * raised_square(h, g_inv.at(p)) - kin.H[p] * h +
           decomp.Tspatial.at(p) - (0.5 * decomp.trTotal[p]) * g;
  });
}

ScalarField generic_V(const FoliationSnapshot& snap, const KinematicBundle& kin,
                      const StressEnergyDecomposition& decomp) {
  return map_points(snap.chart(), [&](std::size_t p) {
    return kin.dtH[p] / snap.N[p] - kin.normSqH[p] - decomp.Tnn[p] - 0.5 * decomp.trTotal[p];
  });
}

BMHypothesis generic_hypothesis(const SliceGeometry& leaf, const FoliationSnapshot& snap, const KinematicBundle& kin,
                                const StressEnergyDecomposition& decomp, const SymTensorField& ricci,
                                double tolerance, double absolute_tolerance) {
  require_same_chart(leaf.chart(), snap.chart(), "leaf");
  return BMHypothesis{.n = 3,
                      .alpha = 1.0,
                      .beta = 0.0,
                      .gamma = 0.0,
                      .geom = leaf,
                      .u = snap.N,
                      .V = generic_V(snap, kin, decomp),
                      .Q = generic_Q(snap, kin, decomp),
                      .ric = ricci,
                      .tolerance = tolerance,
                      .absolute_tolerance = absolute_tolerance};
}

ClosureReport generic_verdict(const SliceGeometry& leaf, const FoliationSnapshot& snap, const KinematicBundle& kin,
                              const StressEnergyDecomposition& decomp, const SymTensorField& ricci,
                              double tolerance, double absolute_tolerance) {
  ClosureReport r;
  r.theorem = TheoremTag::Generic;
  const BMHypothesis hyp = generic_hypothesis(leaf, snap, kin, decomp, ricci, tolerance, absolute_tolerance);
  const InequalityResult ric = check_ric_inequality(hyp);
  const InequalityResult sup = check_supersolution(hyp);
  r.conditions.push_back({"Ric >= Hess N / N + Q", ric.holds, ric.min_residual, ric.tolerance});
  r.conditions.push_back({"-Lap N >= V N", sup.holds, sup.min_residual, sup.tolerance});
  if (!r.all_hold()) return r;

  const OptimizeResult opt = optimize_k(hyp);
  if (!opt.feasible) {
    // Best λ reachable over the admissible interval, as the failure margin.
    const LambdaFunction lambda(hyp);
    const KInterval& iv = opt.feasibleKInterval;
    double best = -std::numeric_limits<double>::infinity();
    if (!iv.empty)
      for (int i = 1; i < 256; ++i) best = std::max(best, lambda(iv.lo + iv.width() * i / 256.0));
    r.conditions.push_back({"lambda(k) > 0 for some admissible k", false, best, 0.0});
    r.annotations.push_back(opt.reason);
    return r;
  }
  const BMCertificate& c = opt.certificate;
  r.conditions.push_back({"lambda(k) > 0 for some admissible k", true, c.lambda, 0.0});
  r.verdict = Verdict::Closed;
  r.diameterBoundOptimized = c.diameterBound;
  r.k = c.k;
  r.A = c.A;
  r.B = c.B;
  r.certificate = c;
  r.annotations.emplace_back(kCompact);
  for (const auto& a : c.annotations) r.annotations.push_back(a);
  r.annotations.emplace_back(kSphereQuotient);
  return r;
}

LeafParameters LeafAnalysis::parameters() const {
  if (!q) throw Error(ErrorKind::UndefinedParameter, qError);
  return {q->q, hubble, pressure, Lambda};
}

LeafAnalysis analyze_leaf(const SliceGeometry& leaf, FoliationSnapshot snap, double Lambda,
                          const DirectionBudget& budget) {
  snap.validate();
  require_same_chart(leaf.chart(), snap.chart(), "leaf");
  const GridChart& chart = leaf.chart();
  LeafAnalysis out;
  out.snap = std::move(snap);
  out.kin = kinematics(out.snap);

  std::optional<ChristoffelField> gamma;
  if (auto exact = analytic_ricci(leaf)) {
    out.ricci = std::move(*exact);
  } else {
    gamma = christoffel(leaf);
    out.ricci = ricci(leaf, *gamma);
  }
  if (out.snap.N.min() == out.snap.N.max()) {
    out.hessN = SymTensorField::constant(chart, Sym3{});
    out.lapN = ScalarField::constant(chart, 0.0);
  } else {
    if (!gamma) gamma = christoffel(leaf);
    out.hessN = hessian(out.snap.N, *gamma);
    out.lapN = laplacian(out.snap.N, leaf, *gamma);
  }
  out.decomp = recover_stress_energy(out.snap, out.kin, out.ricci, out.hessN, out.lapN, Lambda);
  try {
    out.q = deceleration_parameter(out.snap, out.kin, budget);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::UndefinedParameter) throw;
    out.qError = e.message();
  }
  out.hubble = hubble_parameter(out.kin);
  out.pressure = pressure_parameter(out.decomp);
  out.Lambda = Lambda;
  return out;
}

void attach_oracle(ClosureReport& report, double oracle_diameter, double tolerance) {
  report.oracleDiameter = oracle_diameter;
  if (report.verdict != Verdict::Closed) return;
  for (const auto& b : {report.diameterBoundClosedForm, report.diameterBoundOptimized}) {
    if (b && oracle_diameter > *b * (1.0 + tolerance))
      throw Error(ErrorKind::InvariantViolation, "oracle diameter " + std::to_string(oracle_diameter) +
                                                     " exceeds the certified bound " + std::to_string(*b));
  }
}

}  // namespace closure
