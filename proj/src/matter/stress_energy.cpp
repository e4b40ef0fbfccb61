#include "closure/matter/stress_energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "closure/error.hpp"
#include "closure/field/eigen.hpp"

namespace closure {

namespace {

// Rows (tr X, Y) against unknowns (S, 𝒯_νν).
constexpr double kA = -0.5, kB = 1.5, kC = 0.5, kD = 0.5;
constexpr double kDet = kA * kD - kB * kC;

}  // namespace

StressEnergyDecomposition recover_stress_energy(const FoliationSnapshot& snap, const KinematicBundle& kin,
                                                const SymTensorField& ricci, const SymTensorField& hessN,
                                                const ScalarField& lapN, double Lambda) {
  const GridChart& chart = snap.chart();
  require_same_chart(ricci.chart(), chart, "ricci");
  require_same_chart(hessN.chart(), chart, "lapse hessian");
  require_same_chart(lapN.chart(), chart, "lapse laplacian");
  require_same_chart(kin.h.chart(), chart, "kinematics");
  if (std::fabs(kDet) < 1e-14) throw Error(ErrorKind::DegenerateRecovery, "singular recovery system");

  const SymTensorField g_inv = inverse_metric(snap.g);
  std::vector<double> tnn(chart.size());
  SymTensorField::Planes spatial;
  for (auto& plane : spatial) plane.resize(chart.size());

  for (std::size_t p = 0; p < chart.size(); ++p) {
    const double n = snap.N[p];
    const Sym3 g = snap.g.at(p);
    const Sym3 gi = g_inv.at(p);
    const Sym3 h = kin.h.at(p);
    const Sym3 X = ricci.at(p) - (1.0 / n) * hessN.at(p) - (1.0 / n) * kin.dth.at(p) - 2.0 * raised_square(h, gi) +
                   kin.H[p] * h;
    const double Y = kin.dtH[p] / n - kin.normSqH[p] + lapN[p] / n;
    const double trX = contract(gi, X);
    const double S = (trX * kD - kB * Y) / kDet;
    const double Tnn = (kA * Y - kC * trX) / kDet;
    const double trace_total = S - Tnn;
    tnn[p] = Tnn;
    const Sym3 T = X + (0.5 * trace_total) * g;
    for (int s = 0; s < 6; ++s) spatial[s][p] = T.c[s];
  }
  return decompose(ScalarField(chart, std::move(tnn)), SymTensorField(chart, std::move(spatial)), snap.g, Lambda);
}

StressEnergyDecomposition decompose(const ScalarField& Tnn, const SymTensorField& Tspatial, const SymTensorField& g,
                                    double Lambda) {
  const GridChart& chart = g.chart();
  require_same_chart(Tnn.chart(), chart, "normal stress-energy");
  require_same_chart(Tspatial.chart(), chart, "spatial stress-energy");
  const ScalarField S = metric_trace(Tspatial, g);

  std::array<std::vector<double>, 3> p(
      {std::vector<double>(chart.size()), std::vector<double>(chart.size()), std::vector<double>(chart.size())});
  for (std::size_t q = 0; q < chart.size(); ++q) {
    const SymEigen e = eig_orthonormal(Tspatial.at(q), g.at(q));
    for (int i = 0; i < 3; ++i) p[i][q] = e.values[i] + Lambda;
  }
  StressEnergyDecomposition d;
  d.Tnn = Tnn;
  d.Tspatial = Tspatial;
  d.trTotal = map_points(chart, [&](std::size_t q) { return S[q] - Tnn[q]; });
  d.Lambda = Lambda;
  d.rho = map_points(chart, [&](std::size_t q) { return Tnn[q] - Lambda; });
  for (int i = 0; i < 3; ++i) d.pressures[i] = ScalarField(chart, std::move(p[i]));
  return d;
}

double pressure_parameter(const StressEnergyDecomposition& decomp) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& field : decomp.pressures) best = std::max(best, field.max());
  return best;
}

PerfectFluidResult perfect_fluid_check(const StressEnergyDecomposition& decomp, const SymTensorField& g,
                                       double tolerance) {
  const GridChart& chart = g.chart();
  require_same_chart(decomp.Tspatial.chart(), chart, "perfect fluid check");
  const SymTensorField g_inv = inverse_metric(g);

  double scale = 1.0, aniso = 0.0;
  double p_min = std::numeric_limits<double>::infinity(), p_max = -p_min, p_sum = 0.0;
  for (std::size_t q = 0; q < chart.size(); ++q) {
    const Sym3 gi = g_inv.at(q);
    const Sym3 T = decomp.Tspatial.at(q);
    const double mean = contract(gi, T) / 3.0;
    const Sym3 dev = T - mean * g.at(q);
    scale = std::max(scale, std::sqrt(full_contraction(T, T, gi)));
    aniso = std::max(aniso, std::sqrt(std::max(0.0, full_contraction(dev, dev, gi))));
    const double p = mean + decomp.Lambda;
    p_min = std::min(p_min, p);
    p_max = std::max(p_max, p);
    p_sum += p;
  }
  PerfectFluidResult out;
  out.anisotropy = aniso / scale;
  out.variation = (p_max - p_min) / scale;
  out.deviation = std::max(out.anisotropy, out.variation);
  out.isPerfectFluid = out.deviation < tolerance;
  out.p = p_sum / static_cast<double>(chart.size());
  return out;
}

}  // namespace closure
