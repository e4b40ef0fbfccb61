#pragma once
// Analytic models shared by tests.

#include <cmath>

#include "closure/matter/flrw.hpp"

namespace closure::testing {

/// a = 1 + t − t²/2: at t = 0, a = 1, a' = 1, a'' = −1 (closed dust moment for K = 1).
inline FLRWModel dust_model(double K = 1.0, double Lambda = 0.0) {
  FLRWModel m;
  m.a = [](double t) { return 1.0 + t - 0.5 * t * t; };
  m.da = [](double t) { return 1.0 - t; };
  m.dda = [](double) { return -1.0; };
  m.K = K;
  m.Lambda = [Lambda](double) { return Lambda; };
  return m;
}

/// Quadratic scale factor with prescribed a, a', a'' at t = 0.
inline FLRWModel quadratic_model(double a0, double a1, double a2, double K = 0.0, double Lambda = 0.0) {
  FLRWModel m;
  m.a = [=](double t) { return a0 + a1 * t + 0.5 * a2 * t * t; };
  m.da = [=](double t) { return a1 + a2 * t; };
  m.dda = [=](double) { return a2; };
  m.K = K;
  m.Lambda = [Lambda](double) { return Lambda; };
  return m;
}

inline FLRWModel cosh_model(double K = 1.0, double Lambda = 3.0) {
  FLRWModel m;
  m.a = [](double t) { return std::cosh(t); };
  m.da = [](double t) { return std::sinh(t); };
  m.dda = [](double t) { return std::cosh(t); };
  m.K = K;
  m.Lambda = [Lambda](double) { return Lambda; };
  return m;
}

}  // namespace closure::testing
