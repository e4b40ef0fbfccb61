#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>

#include "closure/cli/config.hpp"
#include "closure/cli/expression.hpp"
#include "closure/field/grid.hpp"

namespace closure {

enum class SpecKind { Flrw, AnalyticFoliation, TabulatedFoliation };
const char* to_string(SpecKind k) noexcept;

/// Periodic box of the given periods, or closed patch [lo, hi].
struct ChartSpec {
  bool periodic = true;
  Vec3 periods{};
  Vec3 lo{}, hi{};

  GridChart chart(std::size_t n) const;
};

/// γ = −dt² + a(t)² g^K.
struct FlrwSpec {
  Expression a;
  double K = 0.0;
  Expression Lambda;  // of t
  std::optional<Expression> omega;
};

/// γ = −N² dt² + g_ij dx^i dx^j with components 11, 12, 13, 22, 23, 33.
struct AnalyticFoliationSpec {
  Expression N;
  std::array<Expression, 6> g;
  Expression Lambda;
  ChartSpec chart;
};

/// Three leaves stored as binary fields; paths resolved against the spec directory.
struct TabulatedFoliationSpec {
  std::array<std::filesystem::path, 3> N;
  std::array<std::filesystem::path, 3> g;
  std::array<double, 3> times{};
  double Lambda = 0.0;
  ChartSpec chart;
};

struct AnalysisSpec {
  double t0 = 0.0;
  double timeStep = 0.0;  // defaults to 1e-4·max(1, |t0|)
  std::size_t resolution = 16;
  double halfWidth = 0.5;  // patch half-width for curved FLRW slices
  double torusSide = 1.0;  // torus side for flat FLRW slices
  std::string toleranceProfile = "analytic";
  std::size_t oracleSources = 16;
  std::optional<std::array<double, 2>> tRange;
  std::size_t tSamples = 11;
};

/// Raw Bonnet–Myers inputs on the leaf at t0.
struct BMCheckSpec {
  int n = 3;
  double alpha = 0.0, beta = 0.0, gamma = 0.0;
  Expression u, V;
  std::array<Expression, 6> Q;
};

/// Inputs of the conformal Ricci identity suite.
struct IdentitySpec {
  Expression u;  // defaults to 2 + sin(x)
  double k = 1.0;
};

struct SpacetimeSpec {
  SpecKind kind = SpecKind::Flrw;
  std::optional<FlrwSpec> flrw;
  std::optional<AnalyticFoliationSpec> analytic;
  std::optional<TabulatedFoliationSpec> tabulated;
  AnalysisSpec analysis;
  std::optional<BMCheckSpec> bm;
  IdentitySpec identities;
  std::string name;  // file stem, used in reports
};

/// Validates a parsed configuration. Schema errors list every offending field
/// path ("analysis.t0: missing"); expression errors keep their kind and are
/// prefixed with the field path.
SpacetimeSpec spec_from_config(const Config& cfg, const std::filesystem::path& base_dir = {});
/// Reads and validates a spec file (Io when unreadable).
SpacetimeSpec load_spec(const std::filesystem::path& path);

}  // namespace closure
