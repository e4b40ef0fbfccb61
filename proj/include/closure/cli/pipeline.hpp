#pragma once

#include <optional>
#include <string>

#include "closure/cli/report.hpp"
#include "closure/cli/spec.hpp"
#include "closure/error.hpp"
#include "closure/geometry/slice.hpp"

namespace closure {

struct PipelineOptions {
  /// parameters | verdict | diameter | bm-check | identities
  std::string command;
  /// 13 | 14 | 15 | generic | all (verdict only)
  std::string theorem = "all";
  /// Doubles the q direction sample and the diameter sources `refine` times.
  int refine = 0;
  /// Overrides the spec's analysis.tolerance_profile.
  std::optional<std::string> toleranceProfile;
};

struct PipelineResult {
  Json report;
  std::string csv;  // parameters command only
  int exitCode = 0;
};

/// Exit status for an error escaping the pipeline: 2 spec/input, 3 hypothesis
/// or precondition failure, 4 internal invariant violation.
int exit_code_for(ErrorKind kind) noexcept;

/// One leaf of the spec at time t on an n³ grid, with exact time derivatives
/// for flrw and analytic kinds.
struct LeafData {
  SliceGeometry geom;
  FoliationSnapshot snap;
  double Lambda = 0.0;
  std::optional<double> omega;
  Json timeDiagnostics;
};

LeafData build_leaf(const SpacetimeSpec& spec, double t, std::size_t n);

/// Errors are rethrown with the failing stage prefixed, keeping their kind.
PipelineResult run_pipeline(const SpacetimeSpec& spec, const PipelineOptions& options);

}  // namespace closure
