#include "closure/geometry/curvature.hpp"

#include "closure/error.hpp"
#include "closure/field/stencil.hpp"

namespace closure {

ChristoffelField christoffel(const SliceGeometry& geom) {
  const SymTensorField& g = geom.metric();
  const GridChart& chart = g.chart();
  const SymTensorField g_inv = inverse_metric(g);
  const std::array<SymTensorField, 3> dg = {partial(g, 0), partial(g, 1), partial(g, 2)};

  std::array<SymTensorField::Planes, 3> out;
  for (auto& planes : out)
    for (auto& plane : planes) plane.resize(chart.size());

  for (std::size_t p = 0; p < chart.size(); ++p) {
    const Sym3 gi = g_inv.at(p);
    const std::array<Sym3, 3> d = {dg[0].at(p), dg[1].at(p), dg[2].at(p)};
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) {
        // Lowered symbols Γ_lij.
        Vec3 low;
        for (int l = 0; l < 3; ++l) low[l] = 0.5 * (d[i](j, l) + d[j](i, l) - d[l](i, j));
        for (int k = 0; k < 3; ++k)
          out[k][sym_slot(i, j)][p] = gi(k, 0) * low[0] + gi(k, 1) * low[1] + gi(k, 2) * low[2];
      }
  }
  return ChristoffelField{{SymTensorField(chart, std::move(out[0])), SymTensorField(chart, std::move(out[1])),
                           SymTensorField(chart, std::move(out[2]))}};
}

SymTensorField ricci(const SliceGeometry& geom) {
  geom.chart().validate(5);
  return ricci(geom, christoffel(geom));
}

SymTensorField ricci(const SliceGeometry& geom, const ChristoffelField& gamma) {
  const GridChart& chart = geom.chart();
  chart.validate(5);
  require_same_chart(chart, gamma.chart(), "ricci");
  const SymTensorField& g = geom.metric();
  const SymTensorField g_inv = inverse_metric(g);
  const std::array<SymTensorField, 3> dg = {partial(g, 0), partial(g, 1), partial(g, 2)};

  // ∂Γ comes from the chain rule on ∂g and ∂∂g rather than from differencing
  // Γ itself: differencing an already differenced field is first order on the
  // one-sided boundary layers of a patch.
  std::array<std::array<std::vector<double>, 6>, 6> d2;  // d2[component][pair] = ∂_m∂_n g_ij
  for (int s = 0; s < 6; ++s) {
    const ScalarField comp(chart, std::vector<double>(g.plane(s).begin(), g.plane(s).end()));
    for (int m = 0; m < 3; ++m)
      for (int n = m; n < 3; ++n) {
        const ScalarField dd = mixed_partial(comp, m, n);
        d2[s][sym_slot(m, n)].assign(dd.values().begin(), dd.values().end());
      }
  }

  SymTensorField::Planes out;
  for (auto& plane : out) plane.resize(chart.size());
  for (std::size_t p = 0; p < chart.size(); ++p) {
    const Sym3 gi = g_inv.at(p);
    double G[3][3][3];
    for (int k = 0; k < 3; ++k)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) G[k][i][j] = gamma.at(k, i, j, p);
    auto D2 = [&](int i, int j, int m, int n) { return d2[sym_slot(i, j)][sym_slot(m, n)][p]; };
    auto D1 = [&](int m, int i, int j) { return dg[m].plane(sym_slot(i, j))[p]; };

    // dG[m][k][i][j] = ∂_m Γ^k_ij = g^{kl}(∂_m Γ_lij − ∂_m g_la Γ^a_ij).
    double dG[3][3][3][3];
    for (int m = 0; m < 3; ++m)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          double low[3];
          for (int l = 0; l < 3; ++l) {
            double v = 0.5 * (D2(j, l, i, m) + D2(i, l, j, m) - D2(i, j, l, m));
            for (int a = 0; a < 3; ++a) v -= D1(m, l, a) * G[a][i][j];
            low[l] = v;
          }
          for (int k = 0; k < 3; ++k) dG[m][k][i][j] = gi(k, 0) * low[0] + gi(k, 1) * low[1] + gi(k, 2) * low[2];
        }

    double c[3];
    for (int l = 0; l < 3; ++l) c[l] = G[0][0][l] + G[1][1][l] + G[2][2][l];
    // R_ij = ∂_kΓ^k_ij − ∂_jΓ^k_ik + c_l Γ^l_ij − Γ^k_jl Γ^l_ik, symmetrized.
    double R[3][3];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double r = 0.0;
        for (int k = 0; k < 3; ++k) r += dG[k][k][i][j] - dG[j][k][i][k];
        for (int l = 0; l < 3; ++l) r += c[l] * G[l][i][j];
        for (int k = 0; k < 3; ++k)
          for (int l = 0; l < 3; ++l) r -= G[k][j][l] * G[l][i][k];
        R[i][j] = r;
      }
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) out[sym_slot(i, j)][p] = 0.5 * (R[i][j] + R[j][i]);
  }
  return SymTensorField(chart, std::move(out));
}

std::optional<SymTensorField> analytic_ricci(const SliceGeometry& geom) {
  if (!geom.tag()) return std::nullopt;
  const double factor = 2.0 * model_curvature(*geom.tag());
  const SymTensorField& g = geom.metric();
  return map_points_sym(g.chart(), [&](std::size_t p) { return factor * g.at(p); });
}

SymTensorField hessian(const ScalarField& f, const SliceGeometry& geom) {
  require_same_chart(f.chart(), geom.chart(), "hessian");
  return hessian(f, christoffel(geom));
}

SymTensorField hessian(const ScalarField& f, const ChristoffelField& gamma) {
  const GridChart& chart = f.chart();
  require_same_chart(chart, gamma.chart(), "hessian");
  const auto df = gradient(f);
  SymTensorField::Planes out;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      const ScalarField dd = mixed_partial(f, i, j);
      auto& plane = out[sym_slot(i, j)];
      plane.resize(chart.size());
      for (std::size_t p = 0; p < chart.size(); ++p)
        plane[p] = dd[p] - (gamma.at(0, i, j, p) * df[0][p] + gamma.at(1, i, j, p) * df[1][p] +
                            gamma.at(2, i, j, p) * df[2][p]);
    }
  return SymTensorField(chart, std::move(out));
}

ScalarField laplacian(const ScalarField& f, const SliceGeometry& geom) {
  return laplacian(f, geom, christoffel(geom));
}

ScalarField laplacian(const ScalarField& f, const SliceGeometry& geom, const ChristoffelField& gamma) {
  return metric_trace(hessian(f, gamma), geom.metric());
}

ScalarField gradient_norm_sq(const ScalarField& f, const SliceGeometry& geom) {
  require_same_chart(f.chart(), geom.chart(), "gradient_norm_sq");
  const auto df = gradient(f);
  const SymTensorField g_inv = inverse_metric(geom.metric());
  return map_points(f.chart(), [&](std::size_t p) {
    const Vec3 v = {df[0][p], df[1][p], df[2][p]};
    return quadratic(g_inv.at(p), v);
  });
}

}  // namespace closure
