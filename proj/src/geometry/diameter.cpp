#include "closure/geometry/diameter.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <queue>

#include "closure/error.hpp"
#include "closure/parallel.hpp"

namespace closure {

namespace {

double halton(std::size_t index, std::size_t base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= static_cast<double>(base);
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

struct Offset {
  int d[3];
};

// One representative of each ± pair of the 26 neighbours.
std::array<Offset, 13> half_stencil() {
  std::array<Offset, 13> out{};
  int n = 0;
  for (int a = -1; a <= 1; ++a)
    for (int b = -1; b <= 1; ++b)
      for (int c = -1; c <= 1; ++c) {
        const bool positive = a > 0 || (a == 0 && (b > 0 || (b == 0 && c > 0)));
        if (positive) out[n++] = Offset{{a, b, c}};
      }
  return out;
}

class Graph {
 public:
  explicit Graph(const SliceGeometry& geom) : chart_(geom.chart()), offsets_(half_stencil()) {
    const SymTensorField& g = geom.metric();
    quad_.resize(chart_.size() * offsets_.size());
    for (std::size_t p = 0; p < chart_.size(); ++p) {
      const Sym3 gp = g.at(p);
      for (std::size_t e = 0; e < offsets_.size(); ++e) {
        const Vec3 delta = {offsets_[e].d[0] * chart_.spacing[0], offsets_[e].d[1] * chart_.spacing[1],
                            offsets_[e].d[2] * chart_.spacing[2]};
        quad_[p * offsets_.size() + e] = quadratic(gp, delta);
      }
    }
  }

  double eccentricity(std::size_t source) const {
    const std::size_t n = chart_.size();
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    using Item = std::pair<double, std::uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[source] = 0.0;
    heap.emplace(0.0, static_cast<std::uint32_t>(source));
    const long dims[3] = {static_cast<long>(chart_.dims[0]), static_cast<long>(chart_.dims[1]),
                          static_cast<long>(chart_.dims[2])};
    const std::size_t E = offsets_.size();
    double farthest = 0.0;
    while (!heap.empty()) {
      const auto [d, p] = heap.top();
      heap.pop();
      if (d > dist[p]) continue;
      farthest = d;
      const auto idx = chart_.multi_index(p);
      for (std::size_t e = 0; e < E; ++e)
        for (int sign : {1, -1}) {
          long q3[3];
          for (int a = 0; a < 3; ++a) {
            q3[a] = (static_cast<long>(idx[a]) + sign * offsets_[e].d[a]) % dims[a];
            if (q3[a] < 0) q3[a] += dims[a];
          }
          const std::size_t q = chart_.index(q3[0], q3[1], q3[2]);
          const double w = std::sqrt(0.5 * (quad_[p * E + e] + quad_[q * E + e]));
          const double nd = d + w;
          if (nd < dist[q]) {
            dist[q] = nd;
            heap.emplace(nd, static_cast<std::uint32_t>(q));
          }
        }
    }
    return farthest;
  }

 private:
  GridChart chart_;
  std::array<Offset, 13> offsets_;
  std::vector<double> quad_;  // g_p(Δ_e, Δ_e) per point and half-stencil offset
};

}  // namespace

double analytic_diameter(const AnalyticTag& tag) {
  if (const auto* t = std::get_if<FlatTorus>(&tag)) return 0.5 * norm(t->lengths);
  if (const auto* s = std::get_if<RoundSphere>(&tag)) return std::numbers::pi * s->radius;
  throw Error(ErrorKind::UnsupportedTopology,
              "hyperbolic model has no finite diameter without a specified compact quotient");
}

DiameterEstimate diameter_oracle(const SliceGeometry& geom, std::size_t sources) {
  if (geom.tag()) {
    DiameterEstimate out;
    out.diameter = analytic_diameter(*geom.tag());
    out.analytic = true;
    return out;
  }
  return graph_diameter(geom, sources);
}

DiameterEstimate graph_diameter(const SliceGeometry& geom, std::size_t sources) {
  const GridChart& chart = geom.chart();
  for (int a = 0; a < 3; ++a)
    if (!chart.periodic[a])
      throw Error(ErrorKind::UnsupportedTopology, "graph diameter needs a fully periodic chart");
  if (sources == 0) throw Error(ErrorKind::Precondition, "diameter oracle needs at least one source");
  if (chart.size() > std::numeric_limits<std::uint32_t>::max())
    throw Error(ErrorKind::Resolution, "grid too large for the distance graph");

  const Graph graph(geom);
  DiameterEstimate out;
  out.sources.resize(sources);
  for (std::size_t s = 0; s < sources; ++s) {
    std::size_t idx[3];
    const double h[3] = {halton(s + 1, 2), halton(s + 1, 3), halton(s + 1, 5)};
    for (int a = 0; a < 3; ++a)
      idx[a] = std::min(chart.dims[a] - 1, static_cast<std::size_t>(h[a] * static_cast<double>(chart.dims[a])));
    out.sources[s] = chart.index(idx[0], idx[1], idx[2]);
  }
  out.eccentricities.resize(sources);
  parallel_for(sources, [&](std::size_t s) { out.eccentricities[s] = graph.eccentricity(out.sources[s]); });
  out.diameter = *std::max_element(out.eccentricities.begin(), out.eccentricities.end());
  return out;
}

}  // namespace closure
