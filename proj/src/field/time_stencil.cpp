#include "closure/field/time_stencil.hpp"

#include <algorithm>
#include <string>

namespace closure {

void require_uniform(const std::array<double, 3>& times) {
  const double back = times[1] - times[0];
  const double fwd = times[2] - times[1];
  const double scale = std::max({std::fabs(times[0]), std::fabs(times[2]), fwd, back});
  if (!(back > 0.0) || !(fwd > 0.0) || std::fabs(fwd - back) > 1e-12 * scale)
    throw Error(ErrorKind::Precondition, "time stencil must be strictly increasing and uniform (got steps " +
                                             std::to_string(back) + ", " + std::to_string(fwd) + ")");
}

namespace {

void fd_planes(std::span<const double> m, std::span<const double> c, std::span<const double> p, double dt,
               std::vector<double>& first, std::vector<double>& second) {
  const double inv2 = 1.0 / (2.0 * dt);
  const double inv_sq = 1.0 / (dt * dt);
  first.resize(c.size());
  second.resize(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) {
    first[k] = (p[k] - m[k]) * inv2;
    second[k] = ((p[k] - c[k]) - (c[k] - m[k])) * inv_sq;
  }
}

}  // namespace

std::pair<double, double> fd_time(const TimeStencil<double>& st) {
  require_uniform(st.times);
  const double dt = st.step();
  const auto& v = st.values;
  return {(v[2] - v[0]) / (2.0 * dt), ((v[2] - v[1]) - (v[1] - v[0])) / (dt * dt)};
}

std::pair<ScalarField, ScalarField> fd_time(const TimeStencil<ScalarField>& st) {
  require_uniform(st.times);
  const auto& v = st.values;
  require_same_chart(v[0].chart(), v[1].chart(), "fd_time");
  require_same_chart(v[1].chart(), v[2].chart(), "fd_time");
  std::vector<double> first, second;
  fd_planes(v[0].values(), v[1].values(), v[2].values(), st.step(), first, second);
  return {ScalarField(v[1].chart(), std::move(first)), ScalarField(v[1].chart(), std::move(second))};
}

std::pair<SymTensorField, SymTensorField> fd_time(const TimeStencil<SymTensorField>& st) {
  require_uniform(st.times);
  const auto& v = st.values;
  require_same_chart(v[0].chart(), v[1].chart(), "fd_time");
  require_same_chart(v[1].chart(), v[2].chart(), "fd_time");
  SymTensorField::Planes first, second;
  for (int s = 0; s < 6; ++s) fd_planes(v[0].plane(s), v[1].plane(s), v[2].plane(s), st.step(), first[s], second[s]);
  return {SymTensorField(v[1].chart(), std::move(first)), SymTensorField(v[1].chart(), std::move(second))};
}

}  // namespace closure
