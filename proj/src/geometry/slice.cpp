#include "closure/geometry/slice.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "closure/error.hpp"

namespace closure {

namespace {

constexpr double kTagTolerance = 1e-8;

void check_tag(const SymTensorField& g, const AnalyticTag& tag) {
  const GridChart& chart = g.chart();
  if (std::holds_alternative<FlatTorus>(tag)) {
    for (int a = 0; a < 3; ++a)
      if (!chart.periodic[a]) throw Error(ErrorKind::Precondition, "flat-torus tag needs a fully periodic chart");
  }
  if (const auto* s = std::get_if<RoundSphere>(&tag); s && !(s->radius > 0.0))
    throw Error(ErrorKind::InputDomain, "round-sphere radius must be positive");
  if (const auto* h = std::get_if<HyperbolicModel>(&tag); h && !(h->curvature < 0.0))
    throw Error(ErrorKind::InputDomain, "hyperbolic-model curvature must be negative");

  // Every point when small, otherwise a fixed stride capped near 8192 samples.
  const std::size_t stride = std::max<std::size_t>(1, chart.size() / 8192);
  for (std::size_t p = 0; p < chart.size(); p += stride) {
    const Sym3 ref = canonical_metric(tag, chart, chart.coordinate(p));
    const Sym3 got = g.at(p);
    double scale = 1.0;
    for (double c : ref.c) scale = std::max(scale, std::fabs(c));
    for (int s = 0; s < 6; ++s)
      if (std::fabs(got.c[s] - ref.c[s]) > kTagTolerance * scale)
        throw Error(ErrorKind::Precondition, std::string("metric disagrees with ") + tag_name(tag) +
                                                 " tag at grid point " + point_label(chart, p));
  }
}

}  // namespace

SliceGeometry::SliceGeometry(SymTensorField g) : g_(std::move(g)) { require_positive_definite(g_, "slice metric"); }

SliceGeometry::SliceGeometry(SymTensorField g, AnalyticTag tag) : g_(std::move(g)), tag_(tag) {
  require_positive_definite(g_, "slice metric");
  check_tag(g_, *tag_);
}

SliceGeometry SliceGeometry::flat_torus(const Vec3& lengths, const std::array<std::size_t, 3>& dims) {
  const GridChart chart = GridChart::periodic_box(lengths, dims);
  return SliceGeometry(SymTensorField::constant(chart, Sym3::identity()), FlatTorus{lengths});
}

SliceGeometry SliceGeometry::round_sphere_patch(double radius, double half_width,
                                                const std::array<std::size_t, 3>& dims) {
  const GridChart chart = GridChart::patch({-half_width, -half_width, -half_width},
                                           {half_width, half_width, half_width}, dims);
  const AnalyticTag tag = RoundSphere{radius};
  return SliceGeometry(SymTensorField::sample(chart, [&](const Vec3& x) { return canonical_metric(tag, chart, x); }),
                       tag);
}

SliceGeometry SliceGeometry::hyperbolic_patch(double curvature, double half_width,
                                              const std::array<std::size_t, 3>& dims) {
  if (!(half_width > 0.0) || 3.0 * half_width * half_width >= 1.0)
    throw Error(ErrorKind::Precondition, "hyperbolic patch must lie inside the unit ball");
  const GridChart chart = GridChart::patch({-half_width, -half_width, -half_width},
                                           {half_width, half_width, half_width}, dims);
  const AnalyticTag tag = HyperbolicModel{curvature};
  return SliceGeometry(SymTensorField::sample(chart, [&](const Vec3& x) { return canonical_metric(tag, chart, x); }),
                       tag);
}

Sym3 canonical_metric(const AnalyticTag& tag, const GridChart& chart, const Vec3& x) {
  const double r2 = dot(x, x);
  if (const auto* t = std::get_if<FlatTorus>(&tag)) {
    const Vec3 periods = chart.periods();
    return Sym3::diagonal(std::pow(t->lengths[0] / periods[0], 2), std::pow(t->lengths[1] / periods[1], 2),
                          std::pow(t->lengths[2] / periods[2], 2));
  }
  if (const auto* s = std::get_if<RoundSphere>(&tag)) {
    const double f = 2.0 * s->radius / (1.0 + r2);
    return (f * f) * Sym3::identity();
  }
  const auto& h = std::get<HyperbolicModel>(tag);
  const double f = 2.0 / (1.0 - r2);
  return (f * f / std::fabs(h.curvature)) * Sym3::identity();
}

double model_curvature(const AnalyticTag& tag) noexcept {
  if (std::holds_alternative<FlatTorus>(tag)) return 0.0;
  if (const auto* s = std::get_if<RoundSphere>(&tag)) return 1.0 / (s->radius * s->radius);
  return std::get<HyperbolicModel>(tag).curvature;
}

const char* tag_name(const AnalyticTag& tag) noexcept {
  if (std::holds_alternative<FlatTorus>(tag)) return "flat-torus";
  if (std::holds_alternative<RoundSphere>(tag)) return "round-sphere";
  return "hyperbolic-model";
}

}  // namespace closure
