#include "kgs/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace kgs {

Vec3 max_point(const Field& u) {
  u.check();
  if (std::all_of(u.values.begin(), u.values.end(),
                  [](double v) { return v == 0.0; }))
    throw DomainError("max_point: zero field");
  const Grid& g = *u.grid;
  if (g.kind() == GridKind::Radial) {
    double ghost = (4.0 * u.values[0] - u.values[1]) / 3.0;
    double hi = ghost;
    std::size_t best = u.size();  // sentinel for r = 0
    for (std::size_t i = 0; i < u.size(); ++i)
      if (u.values[i] > hi) {
        hi = u.values[i];
        best = i;
      }
    if (best == u.size()) return {0.0, 0.0, 0.0};
    return {g.radius(best), 0.0, 0.0};
  }
  // linear index order is already lexicographic in (i,j,k)
  std::size_t best = 0;
  for (std::size_t i = 1; i < u.size(); ++i)
    if (u.values[i] > u.values[best]) best = i;
  return g.coord(best);
}

DecayFit decay_fit(const Field& u, const Vec3& x_eps, double r_min) {
  u.check();
  const Grid& g = *u.grid;
  const bool cart = g.kind() == GridKind::Cartesian;
  const int m = cart ? g.cart_m() : 0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t cnt = 0;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < g.size(); ++i) {
    double val = u.values[i];
    if (!(val > 1e-14)) continue;
    if (cart) {
      int k = int(i % m), j = int((i / m) % m), ii = int(i / (std::size_t(m) * m));
      // skip the boundary and the layer next to it: those values are clamped
      if (ii <= 1 || ii >= m - 2 || j <= 1 || j >= m - 2 || k <= 1 || k >= m - 2)
        continue;
    } else if (g.is_boundary(i) || i + 2 >= g.size()) {
      continue;
    }
    double r = dist(g.coord(i), x_eps);
    if (r < r_min) continue;
    double ly = std::log(val);
    xs.push_back(r);
    ys.push_back(ly);
    sx += r;
    sy += ly;
    sxx += r * r;
    sxy += r * ly;
    ++cnt;
  }
  if (cnt < 10)
    throw InsufficientDataError("decay_fit: fewer than 10 usable nodes");
  double n = double(cnt);
  double denom = n * sxx - sx * sx;
  if (denom <= 0.0) throw InsufficientDataError("decay_fit: degenerate radii");
  double slope = (n * sxy - sx * sy) / denom;
  double icept = (sy - slope * sx) / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double e = ys[i] - (icept + slope * xs[i]);
    ss += e * e;
  }
  DecayFit fit;
  fit.rate = -slope;
  fit.C = std::exp(icept);
  fit.residual = std::sqrt(ss / n);
  fit.nodes_used = cnt;
  return fit;
}

Field rescaled_profile(const Field& u, double epsilon, const Vec3& x_tilde,
                       GridPtr target) {
  u.check();
  if (u.grid->kind() != GridKind::Cartesian)
    throw StructuralError("rescaled_profile: cartesian source required");
  if (target->kind() != GridKind::Cartesian)
    throw StructuralError("rescaled_profile: cartesian target required");
  if (!(epsilon > 0.0)) throw DomainError("rescaled_profile: epsilon must be positive");
  const Grid& src = *u.grid;
  const int m = src.cart_m();
  const double h = src.spacing();
  const double L = src.half_width();
  Field out = Field::zeros(target);
  for (std::size_t t = 0; t < out.size(); ++t) {
    Vec3 x = target->coord(t);
    Vec3 p{epsilon * x[0] + x_tilde[0], epsilon * x[1] + x_tilde[1],
           epsilon * x[2] + x_tilde[2]};
    int idx[3];
    double frac[3];
    for (int d = 0; d < 3; ++d) {
      if (p[d] < -L - 1e-12 * (1.0 + L) || p[d] > L + 1e-12 * (1.0 + L))
        throw DomainError("rescaled_profile: target maps outside the source box");
      double s = (p[d] + L) / h;
      double fl = std::floor(s);
      int k = int(fl);
      double f = s - fl;
      // snap to exact nodes so node hits reproduce values bit-for-bit
      if (f < 1e-12) f = 0.0;
      if (f > 1.0 - 1e-12) {
        k += 1;
        f = 0.0;
      }
      k = std::clamp(k, 0, m - 1);
      if (k == m - 1) f = 0.0;
      idx[d] = k;
      frac[d] = f;
    }
    double acc = 0.0;
    for (int di = 0; di < 2; ++di)
      for (int dj = 0; dj < 2; ++dj)
        for (int dk = 0; dk < 2; ++dk) {
          double w = (di ? frac[0] : 1.0 - frac[0]) *
                     (dj ? frac[1] : 1.0 - frac[1]) *
                     (dk ? frac[2] : 1.0 - frac[2]);
          if (w == 0.0) continue;
          acc += w * u.values[src.index3(idx[0] + di, idx[1] + dj, idx[2] + dk)];
        }
    out.values[t] = acc;
  }
  return out;
}

double half_width(const Field& u, const Vec3& center) {
  double peak = 0.0;
  for (double v : u.values) peak = std::max(peak, v);
  if (peak <= 0.0) throw DomainError("half_width: nonpositive field");
  double best = std::numeric_limits<double>::infinity();
  const Grid& g = *u.grid;
  for (std::size_t i = 0; i < u.size(); ++i)
    if (u.values[i] < 0.5 * peak)
      best = std::min(best, dist(g.coord(i), center));
  if (!std::isfinite(best)) best = g.spacing();
  return best;
}

namespace {

double h1_distance(const Field& a, const Field& b) {
  Field d = a;
  for (std::size_t i = 0; i < d.size(); ++i) d.values[i] -= b.values[i];
  return std::sqrt(grad_norm_sq(d) + inner(d, d));
}

}  // namespace

SweepReport epsilon_sweep(const KirchhoffParams& params,
                          const PotentialTripleSpec& spec,
                          const SweepConfig& cfg, const SolveOptions& opts) {
  if (cfg.eps_list.empty()) throw DomainError("epsilon_sweep: empty eps list");
  for (std::size_t i = 1; i < cfg.eps_list.size(); ++i)
    if (!(cfg.eps_list[i] < cfg.eps_list[i - 1]))
      throw DomainError("epsilon_sweep: eps list must be strictly decreasing");

  SweepReport rep;
  CartesianGrid phys(cfg.phys_half_width, cfg.m);
  rep.phys_grid = Grid::make(phys);
  double tol_set =
      cfg.tol_set * std::max({spec.V_max - spec.V_min, spec.P_max - spec.P_min,
                              spec.Q_max - spec.Q_min, 1e-30});
  ConditionReport cond = check_conditions(spec, rep.phys_grid, tol_set);
  if (cfg.use_vq_branch ? !cond.vq_ok() : !cond.pq_ok())
    throw DomainError("epsilon_sweep: required potential conditions fail");
  ConcentrationSets sets = admissible_sets(spec, rep.phys_grid, tol_set);
  rep.target_set = cfg.use_vq_branch ? sets.A_P : sets.A_V;

  struct Solved {
    double eps;
    GroundStateReport gs;
  };
  std::vector<Solved> solved;

  for (double eps : cfg.eps_list) {
    ConcentrationRecord rec;
    rec.epsilon = eps;
    CartesianGrid resc(cfg.phys_half_width / eps, cfg.m);
    try {
      GroundStateReport gs = solve_variable(params, spec, eps, resc, opts);
      rec.solved = true;
      rec.level = gs.level;
      rec.iterations = gs.iterations;
      rec.boundary_ratio = gs.boundary_ratio;

      // u_eps(x) = v_eps(x/eps): same values, physical-box grid
      Field u(rep.phys_grid, gs.field.values);
      rec.x_eps = max_point(u);
      rec.dist_AV = sets.dist_to(rep.target_set, rec.x_eps);

      double hw_resc = half_width(gs.field, max_point(gs.field));
      DecayFit fit = decay_fit(u, rec.x_eps, 2.0 * eps * hw_resc);
      rec.rate_raw = fit.rate;
      rec.decay_c = eps * fit.rate;
      rec.decay_C = fit.C;
      rec.fit_residual = fit.residual;

      solved.push_back({eps, std::move(gs)});
    } catch (const Error& e) {
      rec.solved = false;
      rec.error = e.what();
    }
    rep.records.push_back(std::move(rec));
  }

  if (solved.empty()) return rep;

  // limit problem coefficients frozen at the smallest-epsilon maximum point
  rep.x0 = max_point(Field(rep.phys_grid, solved.back().gs.field.values));
  rep.limit_cc = ConstantCoefficients{spec.V(rep.x0), spec.P(rep.x0),
                                      spec.Q(rep.x0)};

  for (auto& s : solved) {
    // rescaled profile on the solve's own grid; the grid-aligned maximum
    // makes the interpolation exact at every node
    CartesianGrid resc(cfg.phys_half_width / s.eps, cfg.m);
    GridPtr g = s.gs.field.grid;
    Field u(rep.phys_grid, s.gs.field.values);
    Vec3 x_t = max_point(u);
    double margin = std::max({std::fabs(x_t[0]), std::fabs(x_t[1]),
                              std::fabs(x_t[2])});
    GridPtr target = g;
    if (margin > 0.0) {
      int trim = int(std::ceil(margin / (s.eps * g->spacing())));
      int mt = cfg.m - 2 * trim;
      if (mt < 9) continue;  // profile too far off-center to compare
      target = Grid::make(CartesianGrid(0.5 * (mt - 1) * g->spacing(), mt));
    }
    Field prof = rescaled_profile(u, s.eps, x_t, target);
    GroundStateReport lim = solve_constant_cartesian(
        rep.limit_cc, params,
        CartesianGrid(target->half_width(), target->cart_m()), opts);
    double d = h1_distance(prof, lim.field);
    for (auto& rec : rep.records)
      if (rec.epsilon == s.eps) rec.profile_dist = d;
  }
  return rep;
}

std::string sweep_csv(const SweepReport& rep) {
  std::ostringstream os;
  os << "epsilon,x1,x2,x3,dist_AV,decay_C,decay_c,profile_dist,level,iterations\n";
  for (const auto& r : rep.records) {
    os << format_double(r.epsilon) << "," << format_double(r.x_eps[0]) << ","
       << format_double(r.x_eps[1]) << "," << format_double(r.x_eps[2]) << ","
       << format_double(r.dist_AV) << "," << format_double(r.decay_C) << ","
       << format_double(r.decay_c) << "," << format_double(r.profile_dist)
       << "," << format_double(r.level) << "," << r.iterations << "\n";
  }
  return os.str();
}

}  // namespace kgs
