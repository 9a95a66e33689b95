#include "kgs/groundstate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace kgs {

void ConstantCoefficients::validate() const {
  if (!(k > 0.0) || !(tau > 0.0) || !(nu > 0.0))
    throw DomainError("ConstantCoefficients: k, tau, nu must be positive");
}

namespace {

Vec3 field_max_point(const Field& v) {
  const Grid& g = *v.grid;
  if (g.kind() == GridKind::Radial) {
    // the r = 0 ghost (regularity extrapolation) competes with the nodes
    double ghost = (4.0 * v.values[0] - v.values[1]) / 3.0;
    std::size_t best = v.size();
    double hi = ghost;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (v.values[i] > hi) {
        hi = v.values[i];
        best = i;
      }
    if (best == v.size()) return {0.0, 0.0, 0.0};
    return {g.radius(best), 0.0, 0.0};
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v.values[i] > v.values[best]) best = i;
  return g.coord(best);
}

double max_abs(const Field& v) {
  double hi = 0.0;
  for (double x : v.values) hi = std::max(hi, std::fabs(x));
  return hi;
}

// weighted inner product matching integrate()
double theta_dot(const Field& a, const Field& b) {
  auto w = a.grid->quad_weights();
  Kahan acc;
  for (std::size_t i = 0; i < a.size(); ++i)
    acc.add(w[i] * a.values[i] * b.values[i]);
  return acc.value();
}

}  // namespace

/*
 * One iteration: v_{k+1} = t* · |v_k - α_k g_k|, boundary clamped to zero,
 * with t* the fibering root of the stepped field and α_k the BB1 step from
 * the previous (s, y) pair in the integrate() inner product. Convergence is
 * measured on the component of the J-gradient tangential to the Nehari
 * constraint; at a ground state the full gradient vanishes.
 */
GroundStateReport minimize_on_nehari(const EnergyFunctional& F,
                                     const Field& init,
                                     const SolveOptions& opts) {
  init.check();
  if (!(opts.tol > 0.0)) throw DomainError("minimize_on_nehari: tol must be positive");
  if (max_abs(init) == 0.0)
    throw DomainError("minimize_on_nehari: init must be nonzero");

  Field v = init;
  for (double& x : v.values) x = std::fabs(x);
  zero_boundary(v);
  {
    FiberingResult pr = nehari_project(F, v);
    v = std::move(pr.projected);
  }

  GradEval ev;
  Field g_tan = Field::zeros(v.grid);
  Field v_prev = Field::zeros(v.grid);
  Field g_prev = Field::zeros(v.grid);
  bool have_prev = false;

  const double h = v.grid->spacing();
  const int dim = v.grid->kind() == GridKind::Radial ? 1 : 3;

  std::vector<double> trace;
  trace.reserve(std::min(opts.max_iter + 1, 65536));

  double best_level = std::numeric_limits<double>::infinity();
  Field best_v;
  double init_level = 0.0;
  double init_max = 0.0;
  double alpha = 0.0;
  int it = 0;
  bool converged = false;
  double grad_sup = std::numeric_limits<double>::infinity();

  for (;; ++it) {
    eval_gradient(F, v, ev);
    double level = energy_value(F.params(), ev.m);
    if (trace.size() < trace.capacity()) trace.push_back(level);
    if (it == 0) {
      init_level = level;
      init_max = max_abs(v);
    }
    if (level < best_level) {
      best_level = level;
      best_v = v;
    }

    // tangential component: remove the constraint-gradient direction
    double di = theta_dot(ev.grad_i, ev.grad_i);
    double gi = theta_dot(ev.grad_j, ev.grad_i);
    double lam = di > 0.0 ? gi / di : 0.0;
    grad_sup = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      double t = ev.grad_j.values[i] - lam * ev.grad_i.values[i];
      g_tan.values[i] = t;
      grad_sup = std::max(grad_sup, std::fabs(t));
    }
    if (grad_sup < opts.tol) {
      converged = true;
      break;
    }
    if (it >= opts.max_iter) break;

    // grid-scale bubbling guard
    double cur_max = max_abs(v);
    if (cur_max > 10.0 * init_max && it > 100) {
      double recent = trace.size() > 100 ? trace[trace.size() - 100] : trace.front();
      if (std::fabs(recent - level) < 1e-12 * (std::fabs(level) + 1.0))
        throw NonConvergenceError(
            "minimize_on_nehari: iterate max grew 10x while energy stagnated "
            "(grid-scale bubbling)",
            trace);
    }

    if (have_prev) {
      // BB1 step on the projected iterates
      Kahan ss, sy;
      auto w = v.grid->quad_weights();
      for (std::size_t i = 0; i < v.size(); ++i) {
        double s = v.values[i] - v_prev.values[i];
        double y = ev.grad_j.values[i] - g_prev.values[i];
        ss.add(w[i] * s * s);
        sy.add(w[i] * s * y);
      }
      alpha = sy.value() > 0.0 ? ss.value() / sy.value() : 0.0;
    }
    if (alpha <= 0.0 || !std::isfinite(alpha)) {
      // inverse of a cheap Hessian-diagonal estimate
      double kap = F.params().a + F.params().b * ev.m.grad_sq;
      double vmax = 1.0;
      for (double x : F.V().values) vmax = std::max(vmax, x);
      alpha = 1.0 / (kap * 2.0 * dim / (h * h) + vmax);
    }
    alpha = std::clamp(alpha, 1e-14, 1e10);

    v_prev = v;
    g_prev = ev.grad_j;
    have_prev = true;

    for (std::size_t i = 0; i < v.size(); ++i)
      v.values[i] = std::fabs(v.values[i] - alpha * g_tan.values[i]);
    zero_boundary(v);
    if (max_abs(v) == 0.0)
      throw NonConvergenceError("minimize_on_nehari: iterate collapsed to zero",
                                trace);
    FiberingResult pr = nehari_project(F, v);
    v = std::move(pr.projected);
  }

  if (!converged && best_level > init_level + 1e-12 * (std::fabs(init_level) + 1.0))
    throw NonConvergenceError(
        "minimize_on_nehari: energy above initial after max_iter", trace);

  // report the best iterate
  Field& out = best_level <= energy(F, v) ? best_v : v;
  eval_gradient(F, out, ev);
  double di = theta_dot(ev.grad_i, ev.grad_i);
  double gi = theta_dot(ev.grad_j, ev.grad_i);
  double lam = di > 0.0 ? gi / di : 0.0;
  double gs = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i)
    gs = std::max(gs, std::fabs(ev.grad_j.values[i] - lam * ev.grad_i.values[i]));

  GroundStateReport rep;
  rep.level = energy_value(F.params(), ev.m);
  rep.nehari_residual = nehari_residual_value(F.params(), ev.m);
  rep.grad_sup = gs;
  rep.max_point = field_max_point(out);
  rep.iterations = it;
  rep.converged = converged;
  double mx = max_abs(out);
  rep.boundary_ratio = mx > 0.0 ? max_abs_boundary_layer(out) / mx : 0.0;
  rep.field = std::move(out);
  return rep;
}

EnergyFunctional constant_functional(const ConstantCoefficients& cc,
                                     const KirchhoffParams& params, GridPtr g) {
  cc.validate();
  return EnergyFunctional(params, Field::constant(g, cc.k),
                          Field::constant(g, cc.tau), Field::constant(g, cc.nu));
}

EnergyFunctional variable_functional(const KirchhoffParams& params,
                                     const PotentialTripleSpec& spec,
                                     double epsilon, GridPtr g) {
  return EnergyFunctional(params, sample_scaled(spec.V, g, epsilon),
                          sample_scaled(spec.P, g, epsilon),
                          sample_scaled(spec.Q, g, epsilon));
}

EnergyFunctional truncated_functional(const TruncationLevels& levels,
                                      const KirchhoffParams& params,
                                      const PotentialTripleSpec& spec,
                                      double epsilon, GridPtr g) {
  if (levels.c < spec.V_min || levels.c > spec.V_max)
    throw DomainError("truncation level c outside [V_min, V_max]");
  if (levels.d < spec.P_min || levels.d > spec.P_max)
    throw DomainError("truncation level d outside [P_min, P_max]");
  if (levels.e < spec.Q_min || levels.e > spec.Q_max)
    throw DomainError("truncation level e outside [Q_min, Q_max]");
  Field V = sample_scaled(spec.V, g, epsilon);
  Field P = sample_scaled(spec.P, g, epsilon);
  Field Q = sample_scaled(spec.Q, g, epsilon);
  for (double& x : V.values) x = std::max(levels.c, x);
  for (double& x : P.values) x = std::min(levels.d, x);
  for (double& x : Q.values) x = std::min(levels.e, x);
  return EnergyFunctional(params, std::move(V), std::move(P), std::move(Q));
}

namespace {

GroundStateReport multi_start(const EnergyFunctional& F,
                              const std::vector<Field>& seeds,
                              const SolveOptions& opts) {
  GroundStateReport best;
  std::vector<double> levels;
  bool have = false;
  for (const Field& seed : seeds) {
    GroundStateReport rep = minimize_on_nehari(F, seed, opts);
    levels.push_back(rep.level);
    if (!have || rep.level < best.level) {
      best = std::move(rep);
      have = true;
    }
  }
  best.start_levels = std::move(levels);
  return best;
}

}  // namespace

GroundStateReport solve_constant(const ConstantCoefficients& cc,
                                 const KirchhoffParams& params,
                                 const RadialGrid& grid,
                                 const SolveOptions& opts) {
  RadialGrid rg = grid;
  for (int attempt = 0;; ++attempt) {
    GridPtr g = Grid::make(rg);
    EnergyFunctional F = constant_functional(cc, params, g);
    std::vector<Field> seeds;
    for (double w : opts.seed_widths)
      seeds.push_back(gaussian_field(g, {0.0, 0.0, 0.0}, w));
    GroundStateReport rep = multi_start(F, seeds, opts);
    if (!opts.allow_domain_retry ||
        rep.boundary_ratio <= opts.boundary_ratio_limit ||
        attempt >= opts.max_domain_retries)
      return rep;
    rg = RadialGrid(1.5 * rg.r_dom, int(std::lround(rg.n * 1.5)));
  }
}

GroundStateReport solve_constant_cartesian(const ConstantCoefficients& cc,
                                           const KirchhoffParams& params,
                                           const CartesianGrid& grid,
                                           const SolveOptions& opts) {
  GridPtr g = Grid::make(grid);
  EnergyFunctional F = constant_functional(cc, params, g);
  std::vector<Field> seeds;
  for (double w : opts.seed_widths)
    seeds.push_back(gaussian_field(g, {0.0, 0.0, 0.0}, w));
  return multi_start(F, seeds, opts);
}

namespace {

// Seed centers for the variable problem: the admissible-set node with the
// smallest V, plus x* when it is a distinct point.
std::vector<Vec3> seed_centers(const PotentialTripleSpec& spec, GridPtr g,
                               double epsilon) {
  double tol_set =
      1e-6 * std::max({spec.V_max - spec.V_min, spec.P_max - spec.P_min,
                       spec.Q_max - spec.Q_min, 1e-30});
  ConditionReport rep = check_conditions(spec, g, tol_set);
  // the checker works in physical coordinates; build it on the physical box
  (void)rep;
  ConcentrationSets sets = admissible_sets(spec, g, tol_set);
  const auto& target = rep.pq_ok() ? sets.A_V : sets.A_P;
  Field Vf = sample_scaled(spec.V, g, 1.0);
  std::size_t best = target.front();
  for (auto i : target)
    if (Vf.values[i] < Vf.values[best]) best = i;
  Vec3 c_phys = g->coord(best);
  std::vector<Vec3> centers;
  centers.push_back({c_phys[0] / epsilon, c_phys[1] / epsilon, c_phys[2] / epsilon});
  if (dist(c_phys, spec.x_star) > 1e-12) {
    centers.push_back({spec.x_star[0] / epsilon, spec.x_star[1] / epsilon,
                       spec.x_star[2] / epsilon});
  }
  return centers;
}

}  // namespace

GroundStateReport solve_variable(const KirchhoffParams& params,
                                 const PotentialTripleSpec& spec,
                                 double epsilon, const CartesianGrid& grid,
                                 const SolveOptions& opts) {
  if (!(epsilon > 0.0)) throw DomainError("solve_variable: epsilon must be positive");
  GridPtr g = Grid::make(grid);
  // condition checking and seed selection happen on the physical box
  CartesianGrid phys(grid.half_width * epsilon, grid.m);
  GridPtr gp = Grid::make(phys);
  if (gp->half_width() < 2.0 * spec.R_cond)
    throw DomainError("solve_variable: physical box must cover 2R of the conditions");
  std::vector<Vec3> centers = seed_centers(spec, gp, epsilon);

  EnergyFunctional F = variable_functional(params, spec, epsilon, g);
  std::vector<Field> seeds;
  for (std::size_t ci = 0; ci < centers.size(); ++ci)
    for (double w : opts.seed_widths) {
      seeds.push_back(gaussian_field(g, centers[ci], w));
      if (ci > 0) break;  // secondary centers get one width
    }
  return multi_start(F, seeds, opts);
}

GroundStateReport solve_truncated(const TruncationLevels& levels,
                                  const KirchhoffParams& params,
                                  const PotentialTripleSpec& spec,
                                  double epsilon, const CartesianGrid& grid,
                                  const SolveOptions& opts) {
  if (!(epsilon > 0.0)) throw DomainError("solve_truncated: epsilon must be positive");
  GridPtr g = Grid::make(grid);
  CartesianGrid phys(grid.half_width * epsilon, grid.m);
  GridPtr gp = Grid::make(phys);
  std::vector<Vec3> centers = seed_centers(spec, gp, epsilon);
  EnergyFunctional F = truncated_functional(levels, params, spec, epsilon, g);
  std::vector<Field> seeds;
  for (std::size_t ci = 0; ci < centers.size(); ++ci)
    for (double w : opts.seed_widths) {
      seeds.push_back(gaussian_field(g, centers[ci], w));
      if (ci > 0) break;
    }
  return multi_start(F, seeds, opts);
}

CompareReport compare_levels(std::span<const ConstantCoefficients> lattice,
                             const KirchhoffParams& params,
                             const RadialGrid& grid, const SolveOptions& opts,
                             double flag_tol) {
  CompareReport rep;
  SolveOptions o = opts;
  o.allow_domain_retry = false;  // one shared grid keeps the levels comparable
  for (const auto& cc : lattice)
    rep.reports.push_back(solve_constant(cc, params, grid, o));
  for (std::size_t i = 0; i < lattice.size(); ++i)
    for (std::size_t j = 0; j < lattice.size(); ++j) {
      if (i == j) continue;
      const auto& ci = lattice[i];
      const auto& cj = lattice[j];
      // comparable with m*(i) <= m*(j): k up, tau down, nu down
      if (cj.k >= ci.k && ci.tau >= cj.tau && ci.nu >= cj.nu) {
        ComparePair pr;
        pr.lo = i;
        pr.hi = j;
        pr.level_lo = rep.reports[i].level;
        pr.level_hi = rep.reports[j].level;
        pr.strict_expected =
            (cj.k > ci.k) || (ci.tau > cj.tau) || (ci.nu > cj.nu);
        pr.ok = pr.level_lo <= pr.level_hi + flag_tol;
        if (!pr.ok) ++rep.violations;
        rep.pairs.push_back(pr);
      }
    }
  return rep;
}

}  // namespace kgs
