#pragma once

#include "kgs/model.hpp"

namespace kgs {

/// |v|^{p}-type powers with the v = 0 guard and a fast path for p = 5.
struct Nonlinearity {
  double p = 5.0;
  bool int5 = true;
  explicit Nonlinearity(double p_) : p(p_), int5(p_ == 5.0) {}
  double abs_p(double v) const {
    double a = std::fabs(v);
    if (int5) {
      double a2 = a * a;
      return a2 * a2 * a;
    }
    return a == 0.0 ? 0.0 : std::pow(a, p);
  }
  double abs_pm2_v(double v) const {
    double a = std::fabs(v);
    if (int5) return a * a * a * v;
    return a == 0.0 ? 0.0 : std::pow(a, p - 2.0) * v;
  }
};

/// The four moments behind every ray evaluation:
///   norm_sq = a∫|∇v|² + ∫Vv²,  grad_sq = ∫|∇v|²,
///   mp = ∫P|v|^p,  mq = ∫Q|v|⁶.
struct Moments {
  double norm_sq = 0.0;
  double grad_sq = 0.0;
  double mp = 0.0;
  double mq = 0.0;
};

/// J(v) = ½‖v‖² + (b/4)(∫|∇v|²)² - (1/p)∫P|v|^p - (1/6)∫Q|v|⁶ with
/// coefficient fields V, P, Q sampled on one shared grid.
class EnergyFunctional {
 public:
  EnergyFunctional(KirchhoffParams params, Field V, Field P, Field Q);

  const KirchhoffParams& params() const { return params_; }
  const Field& V() const { return V_; }
  const Field& P() const { return P_; }
  const Field& Q() const { return Q_; }
  const GridPtr& grid() const { return V_.grid; }
  const Nonlinearity& nl() const { return nl_; }

 private:
  KirchhoffParams params_;
  Field V_, P_, Q_;
  Nonlinearity nl_;
};

Moments moments(const EnergyFunctional& F, const Field& v);

double energy_value(const KirchhoffParams& params, const Moments& m);
double energy(const EnergyFunctional& F, const Field& v);

/// g(t) = J(tv) from precomputed moments; O(1) per evaluation.
double fibering_value(const KirchhoffParams& params, const Moments& m, double t);
double fibering(const EnergyFunctional& F, const Field& v, double t);

/// g'(t) = t‖v‖² + bt³K² - t^{p-1}∫P|v|^p - t⁵∫Q|v|⁶.
double fibering_slope(const KirchhoffParams& params, const Moments& m, double t);

/// g'(t)/t³ = ‖v‖²/t² + bK² - t^{p-4}∫P|v|^p - t²∫Q|v|⁶; strictly decreasing.
double fibering_transformed(const KirchhoffParams& params, const Moments& m,
                            double t);

double nehari_residual_value(const KirchhoffParams& params, const Moments& m);
double nehari_residual(const EnergyFunctional& F, const Field& v);

/// Riesz representative of J'(v): -(a + b∫|∇v|²)Δ_h v + Vv - P|v|^{p-2}v - Q|v|⁴v
/// with Δ_h adjoint-consistent with grad_norm_sq.
Field energy_gradient(const EnergyFunctional& F, const Field& v);

/// Fused per-iteration evaluation for the solver: gradient of J, gradient
/// direction of the Nehari constraint I(v) = ⟨J'(v), v⟩, and the moments.
struct GradEval {
  Moments m;
  Field grad_j;
  Field grad_i;
};
void eval_gradient(const EnergyFunctional& F, const Field& v, GradEval& out);

struct FiberingResult {
  double t_star = 0.0;
  Field projected;
  double residual = 0.0;
};

/// Unique root of g'(t) = 0 by bracketed bisection (relative tolerance 1e-12)
/// with a Newton polish. Throws NoRootError when ∫P|v|^p = ∫Q|v|⁶ = 0.
double nehari_root(const KirchhoffParams& params, const Moments& m);
FiberingResult nehari_project(const EnergyFunctional& F, const Field& v);

/// Rayleigh quotient ∫|∇U|² / (∫U⁶)^{1/3} of U_λ(r) = λ^{1/2}(1+λ²r²)^{-1/2}
/// with the O(1/r) far-field tails reconstructed from the boundary value.
double talenti_quotient(const RadialGrid& grid, double lambda);
double sobolev_constant(const RadialGrid& grid);

}  // namespace kgs
