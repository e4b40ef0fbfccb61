#pragma once

#include <optional>
#include <string>
#include <vector>

#include "closure/geometry/slice.hpp"

namespace closure {

/// Inputs of the weighted Bonnet–Myers theorem on (Mⁿ, g):
///   Ric ≥ α ∇²u/u + β du⊗du/u² + Q,   −Δu ≥ V u + γ |∇u|²/u,
///   Q_ii + kV ≥ (n−1)λ,   k(γ+1−α) ≥ 0,   α+β+k(γ+1) − (n−1)k²/4 > 0.
struct BMHypothesis {
  int n = 3;
  double alpha = 0.0, beta = 0.0, gamma = 0.0;
  SliceGeometry geom;
  ScalarField u;
  ScalarField V;
  SymTensorField Q;
  SymTensorField ric;
  /// Inequality tolerance relative to max(1, magnitude of the compared terms).
  double tolerance = 1e-9;
  /// Floor on the effective tolerance, for inputs carrying discretization error.
  double absolute_tolerance = 0.0;

  /// u > 0 (Positivity) and a shared chart (Precondition).
  void validate() const;
};

struct InequalityResult {
  bool holds = false;
  double min_residual = 0.0;
  std::size_t worst_point = 0;
  double tolerance = 0.0;
};

/// Smallest g-orthonormal eigenvalue of Ric − α∇²u/u − β du⊗du/u² − Q.
InequalityResult check_ric_inequality(const BMHypothesis& hyp);
/// −Δu − Vu − γ|∇u|²/u.
InequalityResult check_supersolution(const BMHypothesis& hyp);

/// Admissible conformal exponents: the (hp2) root interval intersected with the
/// (hp1) half-line. Endpoints may be open or closed.
struct KInterval {
  bool empty = true;
  double lo = 0.0, hi = 0.0;
  bool lo_open = true, hi_open = true;

  bool contains(double k) const noexcept;
  double width() const noexcept { return hi - lo; }
};

/// α + β + k(γ+1) − (n−1)k²/4.
double hp2_value(int n, double alpha, double beta, double gamma, double k) noexcept;
/// k(γ+1−α) ≥ 0.
bool hp1_holds(double alpha, double gamma, double k) noexcept;

KInterval feasible_k_interval(int n, double alpha, double beta, double gamma);

/// min over the slice of (smallest g-orthonormal eigenvalue of Q) + kV, over (n−1).
/// Precomputes the pointwise eigenvalues so λ(k) is cheap to re-evaluate.
class LambdaFunction {
 public:
  explicit LambdaFunction(const BMHypothesis& hyp);
  double operator()(double k) const noexcept;
  std::size_t worst_point(double k) const noexcept;

 private:
  int n_;
  std::vector<double> q_min_;
  std::vector<double> v_;
};

struct LambdaResult {
  double lambda = 0.0;
  bool feasible = false;  // λ > 0
  std::size_t worst_point = 0;
};

LambdaResult lambda_from_F(const BMHypothesis& hyp, double k);

struct ABConstants {
  double A = 0.0;
  double B = 0.0;
};

/// A = n−1 + [2α − k(n−3)]² / (4(α+β+k(γ+1) − (n−1)k²/4)), B = (n−1)λ.
/// A vanishing numerator contributes nothing; k = α = β = 0 is admitted as the
/// unweighted limit. Throws DivisionDomain outside feasibility or for λ ≤ 0.
ABConstants ab_constants(int n, double alpha, double beta, double gamma, double k, double lambda);

/// π√(A/B), checked against the closed form
/// π√((1/λ)(1 + [2α − k(n−3)]² / (4(n−1)(α+β+k(γ+1) − (n−1)k²/4)))) to 1e-12.
double diameter_bound(int n, double alpha, double beta, double gamma, double k, double lambda);
double diameter_bound_closed_form(int n, double alpha, double beta, double gamma, double k, double lambda);

struct BMCertificate {
  double k = 0.0;
  double lambda = 0.0;
  double A = 0.0;
  double B = 0.0;
  double diameterBound = 0.0;
  KInterval feasibleKInterval;
  double ricResidualMin = 0.0;
  double supersolutionResidualMin = 0.0;
  /// The optimum sits at a δ-shifted open end of the interval.
  bool boundary = false;
  std::vector<std::string> annotations;
};

struct OptimizeResult {
  bool feasible = false;
  BMCertificate certificate;  // valid when feasible
  KInterval feasibleKInterval;
  std::string reason;         // set when infeasible
};

/// Minimizes π√(A/B) over admissible k with λ(k) from (F): 256-point scan of
/// [k_lo+δ, k_hi−δ] (δ = 1e-8·width on open ends) then golden-section to
/// |Δk| < 1e-10 around the best sample. Throws InvalidHypothesis naming the
/// failing condition when (Ric) or (u) does not hold.
OptimizeResult optimize_k(const BMHypothesis& hyp);

/// Theorem-level annotations attached to every certificate.
std::vector<std::string> bm_annotations(const BMHypothesis& hyp);

struct ChengResult {
  bool contradictionReachable = false;
  std::optional<double> witness_k;
};

/// Exists k ∈ (0, 4/(n−1)) with kμ > n−1, i.e. μ > (n−1)²/4. The witness is the
/// midpoint of ((n−1)/μ, 4/(n−1)).
ChengResult cheng_feasibility(int n, double mu);

}  // namespace closure
