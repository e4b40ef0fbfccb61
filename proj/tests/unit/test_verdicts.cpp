#include <cmath>
#include <numbers>
#include <random>

#include "closure/error.hpp"
#include "closure/geometry/diameter.hpp"
#include "closure/verdicts/verdicts.hpp"
#include "doctest.h"
#include "support/models.hpp"

using namespace closure;
using namespace closure::testing;
using std::numbers::pi;

namespace {

// Direct transcriptions of the two closed-form diameter bounds.
double ref13(double q, double H) { return pi / H * std::sqrt(8.0 * (10 * q + 4) / (3.0 * (2 * q - 1) * (2 * q + 1))); }
double ref14(double k, double H) {
  return 6 * pi / H *
         std::sqrt((3 + 2 * k - k * k) * (4 + 3 * k) / ((2 + 2 * k - k * k) * (18 * k * k + 18 * k - 17)));
}

struct Leaf {
  SliceGeometry geom;
  LeafAnalysis analysis;
};

Leaf analyze_model(const FLRWModel& m, double t0, std::size_t n = 8) {
  const SliceGeometry unit = model_slice(m.K, n);
  SliceGeometry leaf = flrw_leaf(m, t0, unit);
  LeafAnalysis a = analyze_leaf(leaf, flrw_snapshot(m, t0, unit), m.Lambda(t0));
  return {std::move(leaf), std::move(a)};
}

}  // namespace

TEST_CASE("thm13 threshold examples") {
  ClosureReport r = theorem13_verdict({1.0, 1.0, 0.0, 0.0});
  CHECK(r.verdict == Verdict::Closed);
  REQUIRE(r.diameterBoundClosedForm);
  CHECK(*r.diameterBoundClosedForm == doctest::Approx(pi * std::sqrt(112.0 / 9.0)).epsilon(1e-14));
  CHECK(*r.A == doctest::Approx(8.0 / 3.0));
  CHECK(r.conditions[0].margin == doctest::Approx(0.5));

  r = theorem13_verdict({0.4, 1.0, 0.0, 0.0});
  CHECK(r.verdict == Verdict::Inconclusive);
  CHECK_FALSE(r.conditions[0].holds);
  CHECK(r.conditions[0].margin == doctest::Approx(-0.1));
  CHECK_FALSE(r.diameterBoundClosedForm);

  r = theorem13_verdict({1.0, 1.0, 0.2, 0.1});
  CHECK(r.verdict == Verdict::Inconclusive);
  CHECK(r.conditions[1].margin == doctest::Approx(-0.1));

  r = theorem13_verdict({1.0, 0.0, 0.0, 0.0});
  CHECK(r.verdict == Verdict::Inconclusive);
  CHECK_FALSE(r.conditions[2].holds);
}

TEST_CASE("thm13 closed form equals pi sqrt(A/B) on random input") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> uq(0.5, 10.0), uh(0.01, 20.0);
  for (int i = 0; i < 10000; ++i) {
    double q = uq(rng);
    if (q == 0.5) continue;
    const double H = uh(rng);
    const double b = theorem13_bound(q, H);
    const ABConstants ab = theorem13_constants(q, H);
    CHECK(std::fabs(b - ref13(q, H)) <= 1e-12 * b);
    CHECK(std::fabs(pi * std::sqrt(ab.A / ab.B) - b) <= 1e-12 * b);
  }
}

TEST_CASE("thm13 bound decreases strictly in q") {
  for (double H : {0.5, 1.0, 3.0}) {
    double prev = theorem13_bound(0.5 + 1e-6, H);
    for (int i = 1; i <= 2000; ++i) {
      const double q = 0.5 + 1e-6 + 10.0 * i / 2000.0;
      const double b = theorem13_bound(q, H);
      CHECK(b < prev);
      prev = b;
    }
  }
}

TEST_CASE("thm14 window and constants") {
  const double k0 = theorem14_k_min();
  CHECK(k0 == doctest::Approx((std::sqrt(43.0) - 3.0) / 6.0).epsilon(1e-15));
  CHECK(std::fabs(18 * k0 * k0 + 18 * k0 - 17) <= 1e-12);
  CHECK(k0 == doctest::Approx(0.5929).epsilon(1e-4));
  CHECK(theorem14_bound(1.0, 1.0) == doctest::Approx(6 * pi * std::sqrt(28.0 / 57.0)).epsilon(1e-14));

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uk(k0, theorem14_k_max()), uh(0.05, 10.0);
  for (int i = 0; i < 10000; ++i) {
    const double k = uk(rng), H = uh(rng);
    if (!(k > k0 && k < theorem14_k_max())) continue;
    const double b = theorem14_bound(k, H);
    const ABConstants ab = theorem14_constants(k, H);
    CHECK(std::fabs(b - ref14(k, H)) <= 1e-12 * b);
    CHECK(std::fabs(pi * std::sqrt(ab.A / ab.B) - b) <= 1e-12 * b);
    CHECK(std::fabs(ab_constants(3, 1.0, 0.0, 0.0, k, 1.0).A - ab.A) <= 1e-12 * ab.A);
  }
  CHECK_THROWS_AS(theorem14_bound(0.5, 1.0), Error);
}

TEST_CASE("closed dust moment: every route closes and contains the unit sphere") {
  const Leaf leaf = analyze_model(dust_model(), 0.0);
  const LeafAnalysis& a = leaf.analysis;
  REQUIRE(a.q);
  CHECK(a.q->q == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(a.hubble == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(std::fabs(a.pressure) <= 1e-12);

  const double oracle = analytic_diameter(*leaf.geom.tag());
  CHECK(oracle == doctest::Approx(pi).epsilon(1e-12));

  ClosureReport r13 = theorem13_verdict(a.parameters());
  CHECK(r13.verdict == Verdict::Closed);
  CHECK(*r13.diameterBoundClosedForm == doctest::Approx(pi / 3 * std::sqrt(112.0 / 9.0)).epsilon(1e-10));

  ClosureReport r14 = theorem14_verdict(a.snap, a.kin, a.decomp, a.hubble);
  CHECK(r14.verdict == Verdict::Closed);
  // q = 1 sits exactly on the energy-deceleration boundary.
  CHECK(std::fabs(r14.conditions[0].margin) <= 1e-12);
  // Dust needs k ≤ 1; the best sample sits just below it.
  CHECK(*r14.k <= 1.0);
  CHECK(*r14.k > 0.99);

  ClosureReport r15 = corollary15_verdict(a.decomp, a.snap.g, a.q->q, a.hubble, 0.0);
  CHECK(r15.verdict == Verdict::Closed);
  CHECK(r15.theorem == TheoremTag::Cor15);

  ClosureReport rg = generic_verdict(leaf.geom, a.snap, a.kin, a.decomp, a.ricci);
  CHECK(rg.verdict == Verdict::Closed);
  REQUIRE(rg.diameterBoundOptimized);
  CHECK(*rg.diameterBoundOptimized == doctest::Approx(2 * pi / std::sqrt(3.0)).epsilon(1e-8));
  CHECK(*rg.k == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(*rg.diameterBoundOptimized <= *r13.diameterBoundClosedForm);
  CHECK(*rg.diameterBoundOptimized <= *r14.diameterBoundClosedForm);

  for (ClosureReport* r : {&r13, &r14, &r15, &rg}) {
    CHECK_NOTHROW(attach_oracle(*r, oracle));
    CHECK(*r->oracleDiameter <= *r->tightest_bound());
  }
}

TEST_CASE("generic optimized bound dominates the fixed-k thm14 bound") {
  const Leaf leaf = analyze_model(dust_model(), 0.0);
  const LeafAnalysis& a = leaf.analysis;
  const ClosureReport rg = generic_verdict(leaf.geom, a.snap, a.kin, a.decomp, a.ricci);
  REQUIRE(rg.diameterBoundOptimized);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> uk(theorem14_k_min(), 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double k = uk(rng);
    if (k <= theorem14_k_min()) continue;
    CHECK(*rg.diameterBoundOptimized <= theorem14_bound(k, a.hubble));
  }
}

TEST_CASE("oracle above a certified bound is an invariant violation") {
  ClosureReport r = theorem13_verdict({1.0, 1.0, 0.0, 0.0});
  try {
    attach_oracle(r, 100.0);
    FAIL("expected invariant violation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvariantViolation);
  }
}

TEST_CASE("cor15 equations of state") {
  // Radiation: a'' = −(a'² + K) gives p = ρ/3.
  Leaf rad = analyze_model(quadratic_model(1.0, 1.0, -2.0, 1.0), 0.0);
  const auto& ra = rad.analysis;
  CHECK(ra.pressure == doctest::Approx(2.0).epsilon(1e-10));
  ClosureReport r = corollary15_verdict(ra.decomp, ra.snap.g, ra.q->q, ra.hubble, 1.0 / 3.0);
  CHECK(r.verdict == Verdict::Inconclusive);
  CHECK_FALSE(r.conditions[2].holds);

  // Vacuum energy: a'' = a'² + K gives p = −ρ < 0 = Λ.
  Leaf vac = analyze_model(quadratic_model(1.0, 1.0, 2.0, 1.0), 0.0);
  const auto& va = vac.analysis;
  CHECK(va.pressure == doctest::Approx(-6.0).epsilon(1e-10));
  r = corollary15_verdict(va.decomp, va.snap.g, va.q->q, va.hubble, -1.0);
  CHECK(r.conditions[2].holds);
  CHECK(r.verdict == Verdict::Inconclusive);  // q = −2

  const GridChart chart = va.snap.chart();
  const auto aniso = decompose(ScalarField::constant(chart, 1.0),
                               SymTensorField::constant(chart, Sym3::diagonal(1.0, 2.0, 3.0)),
                               SymTensorField::constant(chart, Sym3::identity()), 0.0);
  try {
    (void)corollary15_verdict(aniso, SymTensorField::constant(chart, Sym3::identity()), 1.0, 1.0);
    FAIL("expected precondition error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Precondition);
    CHECK(std::string(e.what()).find("anisotropy") != std::string::npos);
  }
}

TEST_CASE("static flat vacuum: q undefined, generic route infeasible") {
  const SliceGeometry flat = model_slice(0.0, 6);
  const GridChart& chart = flat.chart();
  FoliationSnapshot snap{0.0,
                         ScalarField::constant(chart, 1.0),
                         ScalarField::constant(chart, 0.0),
                         flat.metric(),
                         SymTensorField::constant(chart, Sym3{}),
                         SymTensorField::constant(chart, Sym3{})};
  const LeafAnalysis a = analyze_leaf(flat, snap, 0.0);
  CHECK_FALSE(a.q);
  try {
    (void)a.parameters();
    FAIL("expected undefined parameter");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UndefinedParameter);
  }
  const ClosureReport rg = generic_verdict(flat, a.snap, a.kin, a.decomp, a.ricci);
  CHECK(rg.verdict == Verdict::Inconclusive);
  CHECK(rg.conditions.back().margin <= 0.0);
}

TEST_CASE("flat de Sitter moment is inconclusive on every route") {
  const FLRWModel m = [] {
    FLRWModel e;
    e.a = [](double t) { return std::exp(t); };
    e.da = e.a;
    e.dda = e.a;
    e.K = 0.0;
    e.Lambda = [](double) { return 3.0; };
    return e;
  }();
  const Leaf ds = analyze_model(m, 0.3);
  const LeafAnalysis& a = ds.analysis;
  CHECK(a.q->q == doctest::Approx(-1.0).epsilon(1e-9));
  const ClosureReport r13 = theorem13_verdict(a.parameters());
  CHECK(r13.verdict == Verdict::Inconclusive);
  CHECK(r13.conditions[0].margin < 0.0);
  const ClosureReport rg = generic_verdict(ds.geom, a.snap, a.kin, a.decomp, a.ricci);
  CHECK(rg.verdict == Verdict::Inconclusive);
}

TEST_CASE("thm13 on sampled leaves agrees with the FLRW closed-form verdict") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> ua(0.5, 2.0), ud(-2.0, 2.0), udd(-3.0, 3.0), ul(-1.0, 2.0);
  int tested = 0, closed = 0;
  while (tested < 150) {
    const double a0 = ua(rng), a1 = ud(rng), a2 = udd(rng), L = ul(rng);
    const double K = static_cast<double>(static_cast<int>(rng() % 3) - 1);
    if (std::fabs(a1) < 0.05) continue;
    const FLRWModel m = quadratic_model(a0, a1, a2, K, L);
    const FLRWAnalytics exact = flrw_analytics(m, 0.0);
    if (std::fabs(*exact.q - 0.5) < 1e-6 || std::fabs(exact.p - L) < 1e-6) continue;
    const Leaf leaf = analyze_model(m, 0.0, 6);
    const ClosureReport r = theorem13_verdict(leaf.analysis.parameters());
    CHECK(r.verdict == exact.flrw2Verdict);
    if (r.verdict == Verdict::Closed) {
      ++closed;
      CHECK(K > 0.0);
    }
    ++tested;
  }
  CHECK(closed > 5);
}
