#include "closure/field/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "closure/error.hpp"
#include "closure/simd/kernels.hpp"

namespace closure {

namespace {

void require_finite(std::span<const double> values, const GridChart& chart, const char* what) {
  for (std::size_t p = 0; p < values.size(); ++p)
    if (!std::isfinite(values[p]))
      throw Error(ErrorKind::InputDomain, std::string(what) + ": non-finite value at grid point " +
                                              point_label(chart, p));
}

}  // namespace

ScalarField::ScalarField(GridChart chart, std::vector<double> values)
    : chart_(chart), values_(std::move(values)) {
  chart_.validate();
  if (values_.size() != chart_.size())
    throw Error(ErrorKind::Shape, "scalar field has " + std::to_string(values_.size()) + " values, chart has " +
                                      std::to_string(chart_.size()) + " points");
  require_finite(values_, chart_, "scalar field");
}

ScalarField ScalarField::constant(const GridChart& chart, double value) {
  return ScalarField(chart, std::vector<double>(chart.size(), value));
}

ScalarField ScalarField::sample(const GridChart& chart, const std::function<double(const Vec3&)>& f) {
  std::vector<double> v(chart.size());
  for (std::size_t p = 0; p < v.size(); ++p) v[p] = f(chart.coordinate(p));
  return ScalarField(chart, std::move(v));
}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

SymTensorField::SymTensorField(GridChart chart, Planes planes) : chart_(chart), planes_(std::move(planes)) {
  chart_.validate();
  for (const auto& plane : planes_) {
    if (plane.size() != chart_.size())
      throw Error(ErrorKind::Shape, "tensor component has " + std::to_string(plane.size()) +
                                        " values, chart has " + std::to_string(chart_.size()) + " points");
    require_finite(plane, chart_, "tensor field");
  }
}

SymTensorField SymTensorField::constant(const GridChart& chart, const Sym3& value) {
  Planes planes;
  for (int s = 0; s < 6; ++s) planes[s].assign(chart.size(), value.c[s]);
  return SymTensorField(chart, std::move(planes));
}

SymTensorField SymTensorField::sample(const GridChart& chart, const std::function<Sym3(const Vec3&)>& f) {
  return map_points_sym(chart, [&](std::size_t p) { return f(chart.coordinate(p)); });
}

SymTensorField SymTensorField::from_points(const GridChart& chart, std::span<const Sym3> points) {
  if (points.size() != chart.size()) throw Error(ErrorKind::Shape, "point count does not match chart");
  Planes planes;
  for (int s = 0; s < 6; ++s) {
    planes[s].resize(points.size());
    for (std::size_t p = 0; p < points.size(); ++p) planes[s][p] = points[p].c[s];
  }
  return SymTensorField(chart, std::move(planes));
}

ScalarField map_points(const GridChart& chart, const std::function<double(std::size_t)>& f) {
  std::vector<double> v(chart.size());
  for (std::size_t p = 0; p < v.size(); ++p) v[p] = f(p);
  return ScalarField(chart, std::move(v));
}

SymTensorField map_points_sym(const GridChart& chart, const std::function<Sym3(std::size_t)>& f) {
  SymTensorField::Planes planes;
  for (auto& plane : planes) plane.resize(chart.size());
  for (std::size_t p = 0; p < chart.size(); ++p) {
    const Sym3 s = f(p);
    for (int c = 0; c < 6; ++c) planes[c][p] = s.c[c];
  }
  return SymTensorField(chart, std::move(planes));
}

void require_same_chart(const GridChart& a, const GridChart& b, const char* what) {
  if (!(a == b)) throw Error(ErrorKind::Precondition, std::string(what) + ": fields live on different charts");
}

void require_positive_definite(const SymTensorField& g, const char* what) {
  for (std::size_t p = 0; p < g.size(); ++p)
    if (!is_positive_definite(g.at(p)))
      throw Error(ErrorKind::DegenerateMetric, std::string(what) + ": metric not positive definite at grid point " +
                                                   point_label(g.chart(), p));
}

SymTensorField inverse_metric(const SymTensorField& g) {
  require_positive_definite(g, "inverse_metric");
  const std::size_t n = g.size();
  SymTensorField::Planes inv;
  for (auto& plane : inv) plane.resize(n);
  std::vector<double> det(n);
  const double* src[6];
  double* dst[6];
  for (int s = 0; s < 6; ++s) {
    src[s] = g.plane(s).data();
    dst[s] = inv[s].data();
  }
  simd::active_kernels().sym3_inverse(src, dst, det.data(), n);
  return SymTensorField(g.chart(), std::move(inv));
}

ScalarField metric_trace(const SymTensorField& s, const SymTensorField& g) {
  require_same_chart(s.chart(), g.chart(), "metric_trace");
  const SymTensorField inv = inverse_metric(g);
  std::vector<double> out(g.size());
  const double* a[6];
  const double* b[6];
  for (int c = 0; c < 6; ++c) {
    a[c] = inv.plane(c).data();
    b[c] = s.plane(c).data();
  }
  simd::active_kernels().sym3_contract(a, b, out.data(), out.size());
  return ScalarField(g.chart(), std::move(out));
}

}  // namespace closure
