#pragma once

#include <vector>

#include "closure/geometry/slice.hpp"

namespace closure {

struct DiameterEstimate {
  double diameter = 0.0;
  /// Graph eccentricity of each source (empty for analytic results).
  std::vector<double> eccentricities;
  std::vector<std::size_t> sources;
  bool analytic = false;
};

/// Closed-form diameter of a tagged model: ½√(L₁²+L₂²+L₃²) for the flat torus,
/// πR for the round sphere. The hyperbolic model is unbounded.
double analytic_diameter(const AnalyticTag& tag);

/// Tagged geometries return the analytic value. Otherwise runs graph_diameter.
DiameterEstimate diameter_oracle(const SliceGeometry& geom, std::size_t sources = 16);

/// Shortest paths on the 26-neighbour graph of a fully periodic chart. Edge
/// length is √(ḡ(Δ, Δ)) with ḡ the mean of the endpoint metrics. Sources are
/// the first `sources` points of the Halton (2, 3, 5) sequence snapped to the
/// grid; the result is the largest eccentricity. Per-source runs execute in
/// parallel and reduce by max.
DiameterEstimate graph_diameter(const SliceGeometry& geom, std::size_t sources = 16);

}  // namespace closure
