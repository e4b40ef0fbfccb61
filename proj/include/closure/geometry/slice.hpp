#pragma once

#include <optional>
#include <variant>

#include "closure/field/field.hpp"

namespace closure {

/// Rectangular flat torus with side lengths L₁, L₂, L₃.
struct FlatTorus {
  Vec3 lengths{};
};
/// Round 3-sphere; charted stereographically, g = R²·4/(1+|x|²)² δ.
struct RoundSphere {
  double radius = 1.0;
};
/// Constant curvature K < 0; charted as a Poincaré ball, g = (1/|K|)·4/(1−|x|²)² δ.
struct HyperbolicModel {
  double curvature = -1.0;
};

using AnalyticTag = std::variant<FlatTorus, RoundSphere, HyperbolicModel>;

/// Riemannian 3-slice sampled on a chart, optionally tagged with a
/// constant-curvature model whose chart metric it must match to 1e-8.
class SliceGeometry {
 public:
  /// Gridded geometry; g must be positive definite everywhere.
  explicit SliceGeometry(SymTensorField g);
  /// Tagged geometry; g is compared with the canonical chart metric of the tag.
  SliceGeometry(SymTensorField g, AnalyticTag tag);

  /// Periodic box of side L_a with g = δ, tagged as a flat torus.
  static SliceGeometry flat_torus(const Vec3& lengths, const std::array<std::size_t, 3>& dims);
  /// Stereographic patch [−w, w]³ of the round sphere of the given radius.
  static SliceGeometry round_sphere_patch(double radius, double half_width, const std::array<std::size_t, 3>& dims);
  /// Poincaré-ball patch [−w, w]³ (w < 1/√3) of the hyperbolic model with curvature K < 0.
  static SliceGeometry hyperbolic_patch(double curvature, double half_width,
                                        const std::array<std::size_t, 3>& dims);

  const GridChart& chart() const noexcept { return g_.chart(); }
  const SymTensorField& metric() const noexcept { return g_; }
  const std::optional<AnalyticTag>& tag() const noexcept { return tag_; }

 private:
  SymTensorField g_;
  std::optional<AnalyticTag> tag_;
};

/// Chart metric of a tagged model at coordinate x. For the flat torus the
/// chart's periods are rescaled to the tag's side lengths.
Sym3 canonical_metric(const AnalyticTag& tag, const GridChart& chart, const Vec3& x);

/// Sectional curvature of the model (0, 1/R², or K).
double model_curvature(const AnalyticTag& tag) noexcept;

const char* tag_name(const AnalyticTag& tag) noexcept;

}  // namespace closure
