#include "closure/bm/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "closure/error.hpp"
#include "closure/field/eigen.hpp"
#include "closure/field/stencil.hpp"
#include "closure/geometry/curvature.hpp"
#include "closure/parallel.hpp"

namespace closure {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kScanSamples = 256;
constexpr double kGoldenTol = 1e-10;

void require_dimension(int n) {
  if (n < 3) throw Error(ErrorKind::Precondition, "dimension n must be at least 3, got " + std::to_string(n));
}

double max_abs_eigen(const Sym3& s, const Sym3& g) {
  const SymEigen e = eig_orthonormal(s, g);
  return std::max(std::fabs(e.values[0]), std::fabs(e.values[2]));
}

// Squared [2α − k(n−3)] over 4·hp2, zero when the numerator vanishes.
double a_excess(int n, double alpha, double beta, double gamma, double k) {
  const double num = 2.0 * alpha - k * (n - 3);
  if (num == 0.0) return 0.0;
  return num * num / (4.0 * hp2_value(n, alpha, beta, gamma, k));
}

void require_admissible(int n, double alpha, double beta, double gamma, double k, double lambda) {
  require_dimension(n);
  if (!std::isfinite(k) || !std::isfinite(lambda))
    throw Error(ErrorKind::DivisionDomain, "k and lambda must be finite");
  if (!hp1_holds(alpha, gamma, k))
    throw Error(ErrorKind::DivisionDomain, "k = " + std::to_string(k) + " violates k(gamma+1-alpha) >= 0");
  const double hp2 = hp2_value(n, alpha, beta, gamma, k);
  // k = 0 with α = β = 0 is the unweighted theorem; no conformal factor enters.
  const bool classical = k == 0.0 && alpha == 0.0 && beta == 0.0;
  if (!(hp2 > 0.0) && !classical)
    throw Error(ErrorKind::DivisionDomain,
                "k = " + std::to_string(k) + " outside the strict quadratic condition (value " +
                    std::to_string(hp2) + ")");
  if (!(lambda > 0.0))
    throw Error(ErrorKind::DivisionDomain, "lambda must be positive, got " + std::to_string(lambda));
}

}  // namespace

void BMHypothesis::validate() const {
  require_dimension(n);
  const GridChart& c = geom.chart();
  require_same_chart(c, u.chart(), "u");
  require_same_chart(c, V.chart(), "V");
  require_same_chart(c, Q.chart(), "Q");
  require_same_chart(c, ric.chart(), "ric");
  for (std::size_t p = 0; p < u.size(); ++p) {
    if (!(u[p] > 0.0))
      throw Error(ErrorKind::Positivity, "u must be positive; u = " + std::to_string(u[p]) + " at " + point_label(c, p));
  }
}

InequalityResult check_ric_inequality(const BMHypothesis& hyp) {
  hyp.validate();
  const GridChart& c = hyp.geom.chart();
  const SymTensorField& g = hyp.geom.metric();
  const SymTensorField hess = hyp.alpha != 0.0 ? hessian(hyp.u, hyp.geom) : SymTensorField::constant(c, Sym3{});
  std::array<ScalarField, 3> du;
  if (hyp.beta != 0.0) du = gradient(hyp.u);

  InequalityResult out;
  out.min_residual = std::numeric_limits<double>::infinity();
  double scale = 0.0;
  for (std::size_t p = 0; p < c.size(); ++p) {
    const Sym3 gp = g.at(p);
    const double up = hyp.u[p];
    Sym3 hess_term = (hyp.alpha / up) * hess.at(p);
    Sym3 grad_term{};
    if (hyp.beta != 0.0) {
      for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) grad_term(i, j) = hyp.beta * du[i][p] * du[j][p] / (up * up);
    }
    const Sym3 ric = hyp.ric.at(p);
    const Sym3 q = hyp.Q.at(p);
    const Sym3 residual = ric - hess_term - grad_term - q;
    const double lo = eig_orthonormal(residual, gp).values[0];
    if (lo < out.min_residual) {
      out.min_residual = lo;
      out.worst_point = p;
    }
    scale = std::max({scale, max_abs_eigen(ric, gp), max_abs_eigen(q, gp), max_abs_eigen(hess_term, gp),
                      max_abs_eigen(grad_term, gp)});
  }
  out.tolerance = std::max(hyp.tolerance * std::max(1.0, scale), hyp.absolute_tolerance);
  out.holds = out.min_residual >= -out.tolerance;
  return out;
}

InequalityResult check_supersolution(const BMHypothesis& hyp) {
  hyp.validate();
  const GridChart& c = hyp.geom.chart();
  const ScalarField lap = laplacian(hyp.u, hyp.geom);
  const ScalarField grad_sq =
      hyp.gamma != 0.0 ? gradient_norm_sq(hyp.u, hyp.geom) : ScalarField::constant(c, 0.0);

  InequalityResult out;
  out.min_residual = std::numeric_limits<double>::infinity();
  double scale = 0.0;
  for (std::size_t p = 0; p < c.size(); ++p) {
    const double up = hyp.u[p];
    const double vu = hyp.V[p] * up;
    const double gterm = hyp.gamma * grad_sq[p] / up;
    const double r = -lap[p] - vu - gterm;
    if (r < out.min_residual) {
      out.min_residual = r;
      out.worst_point = p;
    }
    scale = std::max({scale, std::fabs(lap[p]), std::fabs(vu), std::fabs(gterm)});
  }
  out.tolerance = std::max(hyp.tolerance * std::max(1.0, scale), hyp.absolute_tolerance);
  out.holds = out.min_residual >= -out.tolerance;
  return out;
}

bool KInterval::contains(double k) const noexcept {
  if (empty) return false;
  const bool above = lo_open ? k > lo : k >= lo;
  const bool below = hi_open ? k < hi : k <= hi;
  return above && below;
}

double hp2_value(int n, double alpha, double beta, double gamma, double k) noexcept {
  return alpha + beta + k * (gamma + 1.0) - (n - 1) * k * k / 4.0;
}

bool hp1_holds(double alpha, double gamma, double k) noexcept { return k * (gamma + 1.0 - alpha) >= 0.0; }

KInterval feasible_k_interval(int n, double alpha, double beta, double gamma) {
  require_dimension(n);
  KInterval out;
  const double b = gamma + 1.0;
  const double disc = b * b + (n - 1) * (alpha + beta);
  if (!(disc > 0.0)) return out;  // the quadratic never turns positive

  // Cancellation-free roots of (n−1)/4 k² − (γ+1)k − (α+β).
  const double s = std::sqrt(disc);
  const double qq = b >= 0.0 ? b + s : b - s;
  double r1 = 2.0 * qq / (n - 1);
  double r2 = -2.0 * (alpha + beta) / qq;
  if (r1 > r2) std::swap(r1, r2);

  out.empty = false;
  out.lo = r1;
  out.hi = r2;
  const double sign = gamma + 1.0 - alpha;
  if (sign > 0.0) {
    if (r2 <= 0.0) return KInterval{};
    if (r1 < 0.0) {
      out.lo = 0.0;
      out.lo_open = false;
    }
  } else if (sign < 0.0) {
    if (r1 >= 0.0) return KInterval{};
    if (r2 > 0.0) {
      out.hi = 0.0;
      out.hi_open = false;
    }
  }
  return out;
}

LambdaFunction::LambdaFunction(const BMHypothesis& hyp) : n_(hyp.n) {
  hyp.validate();
  const std::size_t count = hyp.geom.chart().size();
  q_min_.resize(count);
  v_.assign(hyp.V.values().begin(), hyp.V.values().end());
  const SymTensorField& g = hyp.geom.metric();
  for (std::size_t p = 0; p < count; ++p) q_min_[p] = eig_orthonormal(hyp.Q.at(p), g.at(p)).values[0];
}

double LambdaFunction::operator()(double k) const noexcept {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < q_min_.size(); ++p) m = std::min(m, q_min_[p] + k * v_[p]);
  return m / (n_ - 1);
}

std::size_t LambdaFunction::worst_point(double k) const noexcept {
  std::size_t best = 0;
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < q_min_.size(); ++p) {
    const double v = q_min_[p] + k * v_[p];
    if (v < m) {
      m = v;
      best = p;
    }
  }
  return best;
}

LambdaResult lambda_from_F(const BMHypothesis& hyp, double k) {
  const LambdaFunction f(hyp);
  LambdaResult out;
  out.lambda = f(k);
  out.feasible = out.lambda > 0.0;
  out.worst_point = f.worst_point(k);
  return out;
}

ABConstants ab_constants(int n, double alpha, double beta, double gamma, double k, double lambda) {
  require_admissible(n, alpha, beta, gamma, k, lambda);
  return ABConstants{(n - 1) + a_excess(n, alpha, beta, gamma, k), (n - 1) * lambda};
}

double diameter_bound_closed_form(int n, double alpha, double beta, double gamma, double k, double lambda) {
  require_admissible(n, alpha, beta, gamma, k, lambda);
  const double num = 2.0 * alpha - k * (n - 3);
  const double frac = num == 0.0 ? 0.0 : num * num / (4.0 * (n - 1) * hp2_value(n, alpha, beta, gamma, k));
  return kPi * std::sqrt((1.0 / lambda) * (1.0 + frac));
}

double diameter_bound(int n, double alpha, double beta, double gamma, double k, double lambda) {
  const ABConstants ab = ab_constants(n, alpha, beta, gamma, k, lambda);
  const double bound = kPi * std::sqrt(ab.A / ab.B);
  const double closed = diameter_bound_closed_form(n, alpha, beta, gamma, k, lambda);
  if (std::fabs(bound - closed) > 1e-12 * std::max(1.0, closed))
    throw Error(ErrorKind::InvariantViolation, "pi*sqrt(A/B) = " + std::to_string(bound) +
                                                   " disagrees with the closed form " + std::to_string(closed));
  return bound;
}

std::vector<std::string> bm_annotations(const BMHypothesis& hyp) {
  std::vector<std::string> out{"compact with finite fundamental group (stated implication, not computed)"};
  if (hyp.V.min() >= 0.0 && hyp.gamma >= 0.0)
    out.emplace_back("rigidity: V vanishes identically under V >= 0, gamma >= 0 (stated implication, not computed)");
  return out;
}

OptimizeResult optimize_k(const BMHypothesis& hyp) {
  const InequalityResult ric = check_ric_inequality(hyp);
  const InequalityResult sup = check_supersolution(hyp);
  if (!ric.holds || !sup.holds) {
    std::string msg = "hypothesis check failed:";
    const GridChart& c = hyp.geom.chart();
    if (!ric.holds)
      msg += " (Ric) min eigenvalue " + std::to_string(ric.min_residual) + " at " + point_label(c, ric.worst_point) + ";";
    if (!sup.holds)
      msg += " (u) min residual " + std::to_string(sup.min_residual) + " at " + point_label(c, sup.worst_point) + ";";
    throw Error(ErrorKind::InvalidHypothesis, msg);
  }

  OptimizeResult out;
  out.feasibleKInterval = feasible_k_interval(hyp.n, hyp.alpha, hyp.beta, hyp.gamma);
  const KInterval& iv = out.feasibleKInterval;
  if (iv.empty) {
    out.reason = "no k satisfies both parameter conditions";
    return out;
  }

  const LambdaFunction lambda(hyp);
  const auto objective = [&](double k) {
    const double l = lambda(k);
    if (!(l > 0.0) || !iv.contains(k)) return std::numeric_limits<double>::infinity();
    const double hp2 = hp2_value(hyp.n, hyp.alpha, hyp.beta, hyp.gamma, k);
    if (!(hp2 > 0.0)) return std::numeric_limits<double>::infinity();
    const double A = (hyp.n - 1) + a_excess(hyp.n, hyp.alpha, hyp.beta, hyp.gamma, k);
    return kPi * std::sqrt(A / ((hyp.n - 1) * l));
  };

  const double delta = 1e-8 * iv.width();
  const double lo = iv.lo_open ? iv.lo + delta : iv.lo;
  const double hi = iv.hi_open ? iv.hi - delta : iv.hi;

  std::vector<double> ks(kScanSamples), fs(kScanSamples);
  for (int i = 0; i < kScanSamples; ++i)
    ks[i] = kScanSamples == 1 || hi <= lo ? lo : lo + (hi - lo) * i / (kScanSamples - 1.0);
  parallel_for(kScanSamples, [&](std::size_t i) { fs[i] = objective(ks[i]); });

  int best = 0;
  for (int i = 1; i < kScanSamples; ++i)
    if (fs[i] < fs[best]) best = i;
  if (!std::isfinite(fs[best])) {
    out.reason = "lambda(k) <= 0 throughout the admissible k interval";
    return out;
  }

  // Golden-section on the bracket around the best sample; accepted only on strict improvement.
  double a = ks[std::max(best - 1, 0)];
  double b = ks[std::min(best + 1, kScanSamples - 1)];
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = objective(x1), f2 = objective(x2);
  while (b - a > kGoldenTol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = objective(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = objective(x2);
    }
  }
  double k_opt = ks[best];
  double f_opt = fs[best];
  const double k_mid = 0.5 * (a + b);
  const double f_mid = objective(k_mid);
  if (f_mid < f_opt) {
    k_opt = k_mid;
    f_opt = f_mid;
  }

  BMCertificate& cert = out.certificate;
  cert.k = k_opt;
  cert.lambda = lambda(k_opt);
  const ABConstants ab = ab_constants(hyp.n, hyp.alpha, hyp.beta, hyp.gamma, k_opt, cert.lambda);
  cert.A = ab.A;
  cert.B = ab.B;
  cert.diameterBound = diameter_bound(hyp.n, hyp.alpha, hyp.beta, hyp.gamma, k_opt, cert.lambda);
  cert.feasibleKInterval = iv;
  cert.ricResidualMin = ric.min_residual;
  cert.supersolutionResidualMin = sup.min_residual;
  const double edge = 1e-6 * std::max(iv.width(), 1e-300);
  cert.boundary = (iv.lo_open && k_opt - lo <= edge) || (iv.hi_open && hi - k_opt <= edge);
  cert.annotations = bm_annotations(hyp);
  out.feasible = true;
  return out;
}

ChengResult cheng_feasibility(int n, double mu) {
  require_dimension(n);
  if (!(mu > 0.0)) throw Error(ErrorKind::Precondition, "mu must be positive");
  ChengResult out;
  const double cap = 4.0 / (n - 1);
  const double floor = (n - 1) / mu;
  out.contradictionReachable = mu > (n - 1) * (n - 1) / 4.0;
  if (out.contradictionReachable) {
    const double slack = cap - floor;
    double k = cap - 0.5 * slack;
    // Rounding in the midpoint can touch an end when the slack is a few ulps.
    if (!(k * mu > n - 1) || !(k < cap)) {
      out.contradictionReachable = false;
      return out;
    }
    out.witness_k = k;
  }
  return out;
}

}  // namespace closure
