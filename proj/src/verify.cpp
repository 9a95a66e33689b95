#include "kgs/verify.hpp"

#include <cmath>
#include <sstream>

#include "kgs/thresholds.hpp"

namespace kgs {

namespace {

// splitmix64: tiny, seedable, deterministic across platforms
std::uint64_t next_u64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double uniform(std::uint64_t& state, double lo, double hi) {
  double u = double(next_u64(state) >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

void fail(SuiteResult& r, const std::string& msg) {
  ++r.violations;
  if (r.messages.size() < 20) r.messages.push_back(msg);
}

}  // namespace

Field random_radial_profile(GridPtr g, std::uint64_t& state) {
  Field f = Field::zeros(g);
  int bumps = 2 + int(next_u64(state) % 4);
  double R = g->r_dom();
  for (int b = 0; b < bumps; ++b) {
    double amp = uniform(state, 0.2, 1.5);
    double c = uniform(state, 0.0, R / 3.0);
    double w = uniform(state, 0.4, 1.5);
    for (std::size_t i = 0; i < f.size(); ++i) {
      double r = g->radius(i);
      f.values[i] += amp * std::exp(-(r - c) * (r - c) / (2.0 * w * w));
    }
  }
  // smooth taper to the Dirichlet boundary
  for (std::size_t i = 0; i < f.size(); ++i) {
    double s = g->radius(i) / R;
    f.values[i] *= (1.0 - s * s) * (1.0 - s * s);
  }
  zero_boundary(f);
  return f;
}

Field random_cartesian_profile(GridPtr g, std::uint64_t& state) {
  Field f = Field::zeros(g);
  int bumps = 2 + int(next_u64(state) % 3);
  double L = g->half_width();
  for (int b = 0; b < bumps; ++b) {
    double amp = uniform(state, 0.2, 1.2);
    Vec3 c{uniform(state, -L / 3, L / 3), uniform(state, -L / 3, L / 3),
           uniform(state, -L / 3, L / 3)};
    double w = uniform(state, 0.4, 1.2);
    Field bump = gaussian_field(g, c, w, amp);
    for (std::size_t i = 0; i < f.size(); ++i) f.values[i] += bump.values[i];
  }
  for (std::size_t i = 0; i < f.size(); ++i) {
    Vec3 x = g->coord(i);
    double s = dot(x, x) / (L * L);
    f.values[i] *= std::max(0.0, 1.0 - s / 3.0);
  }
  zero_boundary(f);
  return f;
}

double brute_force_fibering_max(const KirchhoffParams& params,
                                const Moments& m, double t_hi) {
  auto g = [&](double t) { return fibering_value(params, m, t); };
  // coarse scan
  const int N = 20000;
  double best_t = t_hi / N, best_g = g(best_t);
  for (int i = 2; i <= N; ++i) {
    double t = t_hi * double(i) / N;
    double v = g(t);
    if (v > best_g) {
      best_g = v;
      best_t = t;
    }
  }
  // golden-section refine around the best sample
  double lo = std::max(best_t - 2.0 * t_hi / N, 1e-12);
  double hi = best_t + 2.0 * t_hi / N;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - gr * (hi - lo);
  double d = lo + gr * (hi - lo);
  double gc = g(c), gd = g(d);
  for (int it = 0; it < 200 && (hi - lo) > 1e-13 * hi; ++it) {
    if (gc > gd) {
      hi = d;
      d = c;
      gd = gc;
      c = hi - gr * (hi - lo);
      gc = g(c);
    } else {
      lo = c;
      c = d;
      gc = gd;
      d = lo + gr * (hi - lo);
      gd = g(d);
    }
  }
  return 0.5 * (lo + hi);
}

SuiteResult fibering_suite(std::uint64_t seed, int profiles) {
  SuiteResult res;
  res.name = "fibering";
  std::uint64_t state = seed * 2 + 1;
  GridPtr g = Grid::make(RadialGrid(12.0, 1200));
  for (int pr = 0; pr < profiles; ++pr) {
    KirchhoffParams params{uniform(state, 0.5, 2.0), uniform(state, 0.5, 2.0),
                           uniform(state, 4.3, 5.7)};
    EnergyFunctional F(params, Field::constant(g, uniform(state, 0.5, 2.0)),
                       Field::constant(g, uniform(state, 0.5, 2.0)),
                       Field::constant(g, uniform(state, 0.5, 2.0)));
    Field v = random_radial_profile(g, state);
    Moments m = moments(F, v);
    double t_star = nehari_root(params, m);
    ++res.checks;

    // single sign change of the transformed residual over a geometric grid
    int flips = 0;
    double prev = 0.0;
    bool have_prev = false;
    const int NG = 10000;
    for (int i = 0; i < NG; ++i) {
      double t = t_star * std::pow(10.0, -6.0 + 12.0 * double(i) / (NG - 1));
      double val = fibering_transformed(params, m, t);
      if (val == 0.0) continue;
      if (have_prev && prev * val < 0.0) ++flips;
      prev = val;
      have_prev = true;
    }
    if (flips != 1) {
      fail(res, "transformed residual sign changes " + std::to_string(flips) +
                    " times (profile " + std::to_string(pr) + ")");
      continue;
    }

    double t_brute = brute_force_fibering_max(params, m, 4.0 * t_star);
    if (std::fabs(t_brute - t_star) > 1e-8 * t_star) {
      fail(res, "bisection t*=" + format_double(t_star) +
                    " vs brute-force " + format_double(t_brute));
      continue;
    }

    double g_star = fibering_value(params, m, t_star);
    bool dominated = true;
    for (int i = 1; i <= 200; ++i) {
      double t = 4.0 * t_star * double(i) / 200.0;
      if (fibering_value(params, m, t) > g_star + 1e-12 * std::fabs(g_star)) {
        dominated = false;
        break;
      }
    }
    if (!dominated) fail(res, "g(t*) fails to dominate sampled rays");
  }
  return res;
}

SuiteResult gradient_suite(std::uint64_t seed, int pairs) {
  SuiteResult res;
  res.name = "gradient";
  std::uint64_t state = seed * 2 + 1;
  GridPtr gr = Grid::make(RadialGrid(10.0, 1000));
  GridPtr gc = Grid::make(CartesianGrid(4.0, 21));
  const double step = 1e-5;
  for (int i = 0; i < pairs; ++i) {
    bool radial = i % 2 == 0;
    GridPtr g = radial ? gr : gc;
    KirchhoffParams params{uniform(state, 0.5, 2.0), uniform(state, 0.5, 2.0),
                           uniform(state, 4.3, 5.7)};
    EnergyFunctional F(params, Field::constant(g, uniform(state, 0.5, 2.0)),
                       Field::constant(g, uniform(state, 0.5, 2.0)),
                       Field::constant(g, uniform(state, 0.5, 2.0)));
    Field v = radial ? random_radial_profile(g, state)
                     : random_cartesian_profile(g, state);
    Field phi = radial ? random_radial_profile(g, state)
                       : random_cartesian_profile(g, state);
    Field grad = energy_gradient(F, v);
    double lhs = inner(grad, phi);
    Field vp = v, vm = v;
    for (std::size_t k = 0; k < v.size(); ++k) {
      vp.values[k] += step * phi.values[k];
      vm.values[k] -= step * phi.values[k];
    }
    double fd = (energy(F, vp) - energy(F, vm)) / (2.0 * step);
    ++res.checks;
    double scale = std::max(std::fabs(lhs), std::fabs(fd));
    if (scale == 0.0) continue;
    if (std::fabs(lhs - fd) / scale > 1e-6)
      fail(res, "directional derivative mismatch: <g,phi>=" +
                    format_double(lhs) + " fd=" + format_double(fd));
  }
  return res;
}

SuiteResult thresholds_suite(std::uint64_t seed, int draws) {
  SuiteResult res;
  res.name = "thresholds";
  std::uint64_t state = seed * 2 + 1;
  for (int i = 0; i < draws; ++i) {
    double a = uniform(state, 0.05, 5.0);
    double b = uniform(state, 0.05, 5.0);
    double S = uniform(state, 0.5, 8.0);
    double q = uniform(state, 0.1, 5.0);
    ++res.checks;
    TsSolution sol = solve_ts_system(a, b, S, q);
    double scale = std::max(sol.t0, sol.s0);
    if (std::fabs(sol.phi(sol.t0, sol.s0)) > 1e-12 * scale ||
        std::fabs(sol.psi(sol.t0, sol.s0)) > 1e-12 * scale) {
      fail(res, "fixed-point residuals exceed 1e-12");
      continue;
    }
    double r = threshold_consistency(a, b, S, q);
    if (r >= 1e-10)
      fail(res, "threshold identity residual " + format_double(r) +
                    " at a=" + format_double(a) + " b=" + format_double(b) +
                    " S=" + format_double(S) + " q=" + format_double(q));
  }
  return res;
}

SuiteResult mountain_suite(std::uint64_t seed, int directions) {
  SuiteResult res;
  res.name = "mountain";
  std::uint64_t state = seed * 2 + 1;
  GridPtr g = Grid::make(RadialGrid(12.0, 1200));
  for (int i = 0; i < directions; ++i) {
    KirchhoffParams params{uniform(state, 0.5, 2.0), uniform(state, 0.5, 2.0),
                           uniform(state, 4.3, 5.7)};
    EnergyFunctional F(params, Field::constant(g, uniform(state, 0.5, 2.0)),
                       Field::constant(g, uniform(state, 0.5, 2.0)),
                       Field::constant(g, uniform(state, 0.5, 2.0)));
    Field v = random_radial_profile(g, state);
    Moments m = moments(F, v);
    ++res.checks;
    bool small_pos = true;
    for (double t : {1e-4, 1e-3, 1e-2})
      if (fibering_value(params, m, t) <= 0.0) small_pos = false;
    double T = 1.0;
    int doublings = 0;
    while (fibering_value(params, m, T) >= 0.0 && doublings < 200) {
      T *= 2.0;
      ++doublings;
    }
    if (!small_pos) fail(res, "g(t) not positive for small t");
    else if (doublings >= 200) fail(res, "g stays nonnegative under doubling");
  }
  return res;
}

std::vector<SuiteResult> run_suites(const std::string& which,
                                    std::uint64_t seed) {
  std::vector<SuiteResult> out;
  auto want = [&](const char* n) { return which == "all" || which == n; };
  if (want("thresholds")) out.push_back(thresholds_suite(seed));
  if (want("fibering")) out.push_back(fibering_suite(seed));
  if (want("gradient")) out.push_back(gradient_suite(seed));
  if (want("mountain")) out.push_back(mountain_suite(seed));
  if (out.empty()) throw ParseError("verify: unknown suite '" + which + "'");
  return out;
}

}  // namespace kgs
