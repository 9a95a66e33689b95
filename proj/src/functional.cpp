#include "kgs/functional.hpp"

#include <cmath>
#include <numbers>

namespace kgs {

namespace {

void check_positive(const Field& f, const char* name) {
  for (double v : f.values)
    if (!(v > 0.0))
      throw DomainError(std::string("EnergyFunctional: ") + name +
                        " must be strictly positive everywhere");
}

}  // namespace

EnergyFunctional::EnergyFunctional(KirchhoffParams params, Field V, Field P,
                                   Field Q)
    : params_(params),
      V_(std::move(V)),
      P_(std::move(P)),
      Q_(std::move(Q)),
      nl_(params.p) {
  params_.validate();
  V_.check();
  P_.check();
  Q_.check();
  if (!V_.grid->same_as(*P_.grid) || !V_.grid->same_as(*Q_.grid))
    throw StructuralError("EnergyFunctional: coefficient fields on different grids");
  check_positive(V_, "V");
  check_positive(P_, "P");
  check_positive(Q_, "Q");
}

Moments moments(const EnergyFunctional& F, const Field& v) {
  v.check();
  if (!v.grid->same_as(*F.grid()))
    throw StructuralError("moments: field not on the functional's grid");
  const auto& nl = F.nl();
  auto w = v.grid->quad_weights();
  Kahan mv, mp, mq;
  for (std::size_t i = 0; i < v.size(); ++i) {
    double x = v.values[i];
    double x2 = x * x;
    mv.add(w[i] * F.V().values[i] * x2);
    mp.add(w[i] * F.P().values[i] * nl.abs_p(x));
    mq.add(w[i] * F.Q().values[i] * x2 * x2 * x2);
  }
  Moments m;
  m.grad_sq = grad_norm_sq(v);
  m.norm_sq = F.params().a * m.grad_sq + mv.value();
  m.mp = mp.value();
  m.mq = mq.value();
  return m;
}

double energy_value(const KirchhoffParams& params, const Moments& m) {
  return 0.5 * m.norm_sq + 0.25 * params.b * m.grad_sq * m.grad_sq -
         m.mp / params.p - m.mq / 6.0;
}

double energy(const EnergyFunctional& F, const Field& v) {
  return energy_value(F.params(), moments(F, v));
}

double fibering_value(const KirchhoffParams& params, const Moments& m,
                      double t) {
  double t2 = t * t;
  return 0.5 * t2 * m.norm_sq +
         0.25 * params.b * t2 * t2 * m.grad_sq * m.grad_sq -
         std::pow(t, params.p) * m.mp / params.p - t2 * t2 * t2 * m.mq / 6.0;
}

double fibering(const EnergyFunctional& F, const Field& v, double t) {
  if (!(t > 0.0)) throw DomainError("fibering: t must be positive");
  return fibering_value(F.params(), moments(F, v), t);
}

double fibering_slope(const KirchhoffParams& params, const Moments& m,
                      double t) {
  double t2 = t * t;
  return t * m.norm_sq + params.b * t * t2 * m.grad_sq * m.grad_sq -
         std::pow(t, params.p - 1.0) * m.mp - t * t2 * t2 * m.mq;
}

double fibering_transformed(const KirchhoffParams& params, const Moments& m,
                            double t) {
  return m.norm_sq / (t * t) + params.b * m.grad_sq * m.grad_sq -
         std::pow(t, params.p - 4.0) * m.mp - t * t * m.mq;
}

double nehari_residual_value(const KirchhoffParams& params, const Moments& m) {
  return m.norm_sq + params.b * m.grad_sq * m.grad_sq - m.mp - m.mq;
}

double nehari_residual(const EnergyFunctional& F, const Field& v) {
  return nehari_residual_value(F.params(), moments(F, v));
}

Field energy_gradient(const EnergyFunctional& F, const Field& v) {
  GradEval ev;
  eval_gradient(F, v, ev);
  return std::move(ev.grad_j);
}

void eval_gradient(const EnergyFunctional& F, const Field& v, GradEval& out) {
  v.check();
  if (!v.grid->same_as(*F.grid()))
    throw StructuralError("eval_gradient: field not on the functional's grid");
  out.m = moments(F, v);
  neg_weak_laplacian(v, out.grad_j);
  if (!out.grad_i.grid || !out.grad_i.grid->same_as(*v.grid))
    out.grad_i = Field::zeros(v.grid);
  const auto& nl = F.nl();
  const double a = F.params().a;
  const double b = F.params().b;
  const double p = F.params().p;
  const double G = out.m.grad_sq;
  const double cj = a + b * G;
  const double ci = 2.0 * (a + 2.0 * b * G);
  for (std::size_t i = 0; i < v.size(); ++i) {
    double x = v.values[i];
    double lap = out.grad_j.values[i];
    double lin = F.V().values[i] * x;
    double sub = F.P().values[i] * nl.abs_pm2_v(x);
    double x2 = x * x;
    double crit = F.Q().values[i] * x2 * x2 * x;
    out.grad_j.values[i] = cj * lap + lin - sub - crit;
    out.grad_i.values[i] = ci * lap + 2.0 * lin - p * sub - 6.0 * crit;
  }
}

double nehari_root(const KirchhoffParams& params, const Moments& m) {
  if (!(m.mp > 0.0) && !(m.mq > 0.0))
    throw NoRootError("nehari_root: both nonlinear moments vanish");
  if (!(m.norm_sq > 0.0)) throw DomainError("nehari_root: zero field");
  auto phi = [&](double t) { return fibering_transformed(params, m, t); };
  double lo = 1.0, hi = 1.0;
  while (phi(lo) <= 0.0) {
    lo *= 0.5;
    if (lo < 1e-300) throw NoRootError("nehari_root: no bracket below");
  }
  while (phi(hi) >= 0.0) {
    hi *= 2.0;
    if (hi > 1e300) throw NoRootError("nehari_root: no bracket above");
  }
  for (int it = 0; it < 200 && (hi - lo) > 1e-12 * lo; ++it) {
    double mid = 0.5 * (lo + hi);
    if (phi(mid) >= 0.0)
      lo = mid;
    else
      hi = mid;
  }
  double t = 0.5 * (lo + hi);
  // Newton polish on φ
  for (int it = 0; it < 4; ++it) {
    double f = phi(t);
    double df = -2.0 * m.norm_sq / (t * t * t) -
                (params.p - 4.0) * std::pow(t, params.p - 5.0) * m.mp -
                2.0 * t * m.mq;
    if (df == 0.0) break;
    double step = f / df;
    double tn = t - step;
    if (tn <= lo || tn >= hi || !std::isfinite(tn)) break;
    t = tn;
  }
  return t;
}

FiberingResult nehari_project(const EnergyFunctional& F, const Field& v) {
  Moments m = moments(F, v);
  double t = nehari_root(F.params(), m);
  FiberingResult res;
  res.t_star = t;
  res.projected = v;
  for (double& x : res.projected.values) x *= t;
  res.residual = fibering_slope(F.params(), m, t);
  return res;
}

double talenti_quotient(const RadialGrid& grid, double lambda) {
  if (!(lambda > 0.0)) throw DomainError("talenti_quotient: lambda must be positive");
  GridPtr g = Grid::make(grid);
  Field u = Field::zeros(g);
  const double s = std::sqrt(lambda);
  for (std::size_t i = 0; i < u.size(); ++i) {
    double r = g->radius(i);
    u.values[i] = s / std::sqrt(1.0 + lambda * lambda * r * r);
  }
  const double R = g->r_dom();
  const double uR = u.values.back();
  // U ~ A/r beyond the box with A = R·U(R); append the closed-form tails
  // ∫_R^∞ 4πr²(A/r²)² dr and ∫_R^∞ 4πr²(A/r)⁶ dr.
  const double pi4 = 4.0 * std::numbers::pi;
  double grad = grad_norm_sq(u) + pi4 * R * uR * uR;
  double u6 = 0.0;
  {
    auto w = g->quad_weights();
    Kahan acc;
    for (std::size_t i = 0; i < u.size(); ++i) {
      double x = u.values[i];
      double x2 = x * x;
      acc.add(w[i] * x2 * x2 * x2);
    }
    double uR2 = uR * uR;
    u6 = acc.value() + pi4 / 3.0 * R * R * R * uR2 * uR2 * uR2;
  }
  return grad / std::cbrt(u6);
}

double sobolev_constant(const RadialGrid& grid) {
  return talenti_quotient(grid, 1.0);
}

}  // namespace kgs
