#pragma once

#include <functional>
#include <optional>
#include <string>

#include "closure/foliation/kinematics.hpp"
#include "closure/geometry/slice.hpp"

namespace closure {

using TimeFunction = std::function<double(double)>;

/// γ = −dt² + a(t)² g^K with g^K of constant curvature K.
struct FLRWModel {
  TimeFunction a, da, dda;
  double K = 0.0;
  TimeFunction Lambda = [](double) { return 0.0; };
  std::optional<TimeFunction> omega;
};

enum class Verdict { Closed, Inconclusive };
const char* to_string(Verdict v) noexcept;

struct FLRWAnalytics {
  double a = 0.0, da = 0.0, dda = 0.0;
  double hubbleRate = 0.0;  // a'/a
  double hubble = 0.0;      // √(inf H²) = 3|a'/a|
  std::optional<double> q;  // −a a''/a'², empty when a' = 0
  double Tnn = 0.0;         // 3(a'²/a² + K/a²)
  double Tii = 0.0;         // −2a''/a − a'²/a² − K/a², orthonormal frame
  double Lambda = 0.0;
  double p = 0.0;
  double rho = 0.0;
  Verdict flrw2Verdict = Verdict::Inconclusive;
};

/// Closed forms of the Friedmann system at t0.
FLRWAnalytics flrw_analytics(const FLRWModel& model, double t0);

/// q from ½ + (a²𝒯_ii + K)/(2a²ℋ²) with ℋ = a'/a. Throws UndefinedParameter when a' = 0.
double flrw_q_formula(const FLRWModel& model, double t0);

/// Unit-scale slice g^K on a chart: K > 0 stereographic patch of radius 1/√K,
/// K = 0 flat torus of the given side, K < 0 Poincaré-ball patch.
SliceGeometry model_slice(double K, std::size_t n, double half_width = 0.5, double torus_side = 1.0);

/// Snapshot with N ≡ 1 and exact time derivatives of a(t)² g^K at t0.
FoliationSnapshot flrw_snapshot(const FLRWModel& model, double t0, const SliceGeometry& unit_slice);

/// The leaf metric a(t0)² g^K with its rescaled analytic tag.
SliceGeometry flrw_leaf(const FLRWModel& model, double t0, const SliceGeometry& unit_slice);

}  // namespace closure
