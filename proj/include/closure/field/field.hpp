#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "closure/field/grid.hpp"
#include "closure/field/sym3.hpp"

namespace closure {

/// Real samples on a grid chart. Immutable once constructed.
class ScalarField {
 public:
  ScalarField() = default;
  /// Validates value count and finiteness.
  ScalarField(GridChart chart, std::vector<double> values);

  static ScalarField constant(const GridChart& chart, double value);
  static ScalarField sample(const GridChart& chart, const std::function<double(const Vec3&)>& f);

  const GridChart& chart() const noexcept { return chart_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t p) const noexcept { return values_[p]; }
  std::size_t size() const noexcept { return values_.size(); }

  double min() const;
  double max() const;

 private:
  GridChart chart_{};
  std::vector<double> values_;
};

/// Symmetric 2-tensor samples, stored as six component planes (11,12,13,22,23,33).
class SymTensorField {
 public:
  using Planes = std::array<std::vector<double>, 6>;

  SymTensorField() = default;
  SymTensorField(GridChart chart, Planes planes);

  static SymTensorField constant(const GridChart& chart, const Sym3& value);
  static SymTensorField sample(const GridChart& chart, const std::function<Sym3(const Vec3&)>& f);
  static SymTensorField from_points(const GridChart& chart, std::span<const Sym3> points);

  const GridChart& chart() const noexcept { return chart_; }
  std::span<const double> plane(int slot) const noexcept { return planes_[slot]; }
  const Planes& planes() const noexcept { return planes_; }
  std::size_t size() const noexcept { return chart_.size(); }

  Sym3 at(std::size_t p) const noexcept {
    return Sym3{{planes_[0][p], planes_[1][p], planes_[2][p], planes_[3][p], planes_[4][p], planes_[5][p]}};
  }

 private:
  GridChart chart_{};
  Planes planes_{};
};

/// Builds a scalar field point by point.
ScalarField map_points(const GridChart& chart, const std::function<double(std::size_t)>& f);
/// Builds a tensor field point by point.
SymTensorField map_points_sym(const GridChart& chart, const std::function<Sym3(std::size_t)>& f);

/// Throws ErrorKind::Precondition unless the charts agree.
void require_same_chart(const GridChart& a, const GridChart& b, const char* what);

/// Pointwise g^{ij} S_ij. Throws ErrorKind::DegenerateMetric naming the first
/// point where g is not positive definite.
ScalarField metric_trace(const SymTensorField& s, const SymTensorField& g);

/// Pointwise inverse metric; same positive-definiteness check as metric_trace.
SymTensorField inverse_metric(const SymTensorField& g);

/// Throws ErrorKind::DegenerateMetric if g fails positive definiteness anywhere.
void require_positive_definite(const SymTensorField& g, const char* what);

}  // namespace closure
