#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "kgs/model.hpp"
#include "test_helpers.hpp"

using namespace kgs;

namespace {
constexpr double kPi = std::numbers::pi;

Field radial_from(GridPtr g, const std::function<double(double)>& f) {
  Field out = Field::zeros(g);
  for (std::size_t i = 0; i < out.size(); ++i) out.values[i] = f(g->radius(i));
  return out;
}
}  // namespace

TEST_CASE("params validation") {
  CHECK_NOTHROW((KirchhoffParams{1.0, 1.0, 5.0}.validate()));
  CHECK_THROWS_AS((KirchhoffParams{0.0, 1.0, 5.0}.validate()), DomainError);
  CHECK_THROWS_AS((KirchhoffParams{1.0, -1.0, 5.0}.validate()), DomainError);
  CHECK_THROWS_AS((KirchhoffParams{1.0, 1.0, 4.0}.validate()), DomainError);
  CHECK_THROWS_AS((KirchhoffParams{1.0, 1.0, 6.5}.validate()), DomainError);
}

TEST_CASE("radial grid geometry") {
  RadialGrid rg(20.0, 4000);
  GridPtr g = Grid::make(rg);
  CHECK(g->size() == 4000);
  CHECK(g->spacing() * g->radial_n() == g->r_dom());
  CHECK(g->radius(0) == doctest::Approx(g->spacing()));
  CHECK(g->is_boundary(3999));
  CHECK(!g->is_boundary(0));
}

TEST_CASE("integrate: zero field") {
  CHECK(integrate(Field::zeros(Grid::make(RadialGrid(12.0, 200)))) == 0.0);
  CHECK(integrate(Field::zeros(Grid::make(CartesianGrid(1.0, 7)))) == 0.0);
}

TEST_CASE("integrate: radial gaussian hits the closed form") {
  GridPtr g = Grid::make(RadialGrid(12.0, 2400));
  Field f = radial_from(g, [](double r) { return std::exp(-r * r); });
  double exact = std::pow(kPi, 1.5);  // 4π∫r²e^{-r²} over the half line
  CHECK(integrate(f) == doctest::Approx(exact).epsilon(1e-6 / exact));
}

TEST_CASE("integrate: box volume exact") {
  GridPtr g = Grid::make(CartesianGrid(1.0, 11));
  CHECK(std::fabs(integrate(Field::constant(g, 1.0)) - 8.0) <= 1e-12);
}

TEST_CASE("integrate: exact for trilinear data") {
  GridPtr g = Grid::make(CartesianGrid(1.5, 13));
  Field f = Field::zeros(g);
  for (std::size_t i = 0; i < f.size(); ++i) {
    Vec3 x = g->coord(i);
    f.values[i] = (1.0 + 2.0 * x[0]) * (3.0 - x[1]) * (x[2] + 4.0);
  }
  double L = 1.5;
  auto lin = [L](double a, double b) {  // ∫(a + b t)dt over [-L, L]
    return 2.0 * L * a;
    (void)b;
  };
  double exact = lin(1.0, 2.0) * lin(3.0, -1.0) * lin(4.0, 1.0);
  CHECK(integrate(f) == doctest::Approx(exact).epsilon(1e-13));
}

TEST_CASE("integrate: exact for piecewise-linear weighted radial data") {
  // data whose weighted integrand 4πr²f is piecewise linear between nodes
  GridPtr g = Grid::make(RadialGrid(10.0, 50));
  Field f = Field::zeros(g);
  for (std::size_t i = 0; i < f.size(); ++i) {
    double r = g->radius(i);
    f.values[i] = (2.0 + 3.0 * r) / (4.0 * kPi * r * r);
  }
  double R = 10.0;
  double exact = 2.0 * R + 1.5 * R * R;
  CHECK(integrate(f) == doctest::Approx(exact).epsilon(1e-12));
}

TEST_CASE("integrate: mismatched sizes are structural errors") {
  GridPtr g = Grid::make(RadialGrid(5.0, 100));
  Field f = Field::zeros(g);
  f.values.pop_back();
  CHECK_THROWS_AS(integrate(f), StructuralError);
}

TEST_CASE("grad_norm_sq: zero and homogeneity") {
  GridPtr g = Grid::make(RadialGrid(8.0, 400));
  CHECK(grad_norm_sq(Field::zeros(g)) == 0.0);
  Field v = radial_from(g, [](double r) { return std::exp(-r) * (1 + r); });
  double base = grad_norm_sq(v);
  for (double alpha : {-2.0, 0.5, 3.25}) {
    Field w = v;
    for (double& x : w.values) x *= alpha;
    CHECK(grad_norm_sq(w) ==
          doctest::Approx(alpha * alpha * base).epsilon(1e-12));
  }
}

TEST_CASE("grad_norm_sq: radial profile against the truncated closed form") {
  // v = (1+r²)^{-1/2}; the oracle integrates 4πr⁴/(1+r²)³ over [0, R].
  GridPtr g = Grid::make(RadialGrid(60.0, 12000));
  Field v = radial_from(g, [](double r) { return 1.0 / std::sqrt(1 + r * r); });
  double oracle = simpson(
      [](double r) {
        double q = 1.0 + r * r;
        return 4.0 * kPi * r * r * r * r / (q * q * q);
      },
      0.0, 60.0, 400000);
  CHECK(grad_norm_sq(v) == doctest::Approx(oracle).epsilon(1e-3 / oracle));
}

TEST_CASE("grad_norm_sq: cartesian matches an independent same-stencil sum") {
  GridPtr g = Grid::make(CartesianGrid(2.0, 15));
  Field v = Field::zeros(g);
  const int m = 15;
  const double L = 2.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    Vec3 x = g->coord(i);
    v.values[i] = std::sin(kPi * x[0] / L) *
                  std::exp(-dot(x, x));
  }
  // independent summation of the same face-midpoint stencil
  double h = g->spacing();
  auto c = [m](int i) { return (i == 0 || i == m - 1) ? 0.5 : 1.0; };
  double acc = 0.0;
  for (int a = 0; a < 3; ++a)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) {
          int i2 = i + (a == 0), j2 = j + (a == 1), k2 = k + (a == 2);
          if (i2 >= m || j2 >= m || k2 >= m) continue;
          double d = (v.values[g->index3(i2, j2, k2)] -
                      v.values[g->index3(i, j, k)]) / h;
          double w = h * h * h;
          if (a == 0) w *= c(j) * c(k);
          if (a == 1) w *= c(i) * c(k);
          if (a == 2) w *= c(i) * c(j);
          acc += w * d * d;
        }
  CHECK(grad_norm_sq(v) == doctest::Approx(acc).epsilon(1e-12));
}

TEST_CASE("grad_norm_sq: O(h^2) refinement") {
  auto value = [](int n) {
    GridPtr g = Grid::make(RadialGrid(30.0, n));
    Field v = radial_from(g, [](double r) { return 1.0 / std::sqrt(1 + r * r); });
    return grad_norm_sq(v);
  };
  double exact = simpson(
      [](double r) {
        double q = 1.0 + r * r;
        return 4.0 * kPi * r * r * r * r / (q * q * q);
      },
      0.0, 30.0, 400000);
  double e1 = std::fabs(value(1500) - exact);
  double e2 = std::fabs(value(3000) - exact);
  CHECK(e1 / e2 > 3.2);
  CHECK(e1 / e2 < 4.8);
}

TEST_CASE("weighted_norm_sq: trivial and definition cases") {
  GridPtr g = Grid::make(RadialGrid(10.0, 500));
  KirchhoffParams params{1.0, 1.0, 5.0};
  Field V1 = Field::constant(g, 1.0);
  CHECK(weighted_norm_sq(Field::zeros(g), params, V1) == 0.0);
  Field v = radial_from(g, [](double r) { return std::exp(-0.5 * r * r); });
  double expect = grad_norm_sq(v) + inner(v, v);
  CHECK(weighted_norm_sq(v, params, V1) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("weighted_norm_sq: gaussian parts against oracles") {
  GridPtr g = Grid::make(RadialGrid(12.0, 2400));
  KirchhoffParams params{1.0, 1.0, 5.0};
  Field v = radial_from(g, [](double r) { return std::exp(-r * r); });
  Field V2 = Field::constant(g, 2.0);
  // mass part: spectral-accurate closed form 2·(π/2)^{3/2}
  double mass_oracle = 2.0 * std::pow(kPi / 2.0, 1.5);
  double total = weighted_norm_sq(v, params, V2);
  double grad_part = grad_norm_sq(v);
  CHECK(total - grad_part ==
        doctest::Approx(mass_oracle).epsilon(1e-10 / mass_oracle));
  // gradient part: independent same-stencil summation
  double h = g->spacing();
  int n = g->radial_n();
  double acc = 0.0;
  {
    double s0 = (v.values[1] - v.values[0]) / (3.0 * h);
    acc += 4.0 * kPi * 0.25 * h * h * h * s0 * s0;
    for (int k = 1; k < n; ++k) {
      double rm = (k + 0.5) * h;
      double s = (v.values[k] - v.values[k - 1]) / h;
      acc += 4.0 * kPi * rm * rm * h * s * s;
    }
  }
  CHECK(grad_part == doctest::Approx(acc).epsilon(1e-12));
  CHECK(weighted_norm_sq(v, params, V2) > 0.0);
  Field bad = Field::constant(g, 0.0);
  CHECK_THROWS_AS(weighted_norm_sq(v, params, bad), DomainError);
}

TEST_CASE("norm positivity for nonzero fields") {
  GridPtr g = Grid::make(CartesianGrid(2.0, 9));
  KirchhoffParams params{0.7, 1.0, 5.0};
  Field V = Field::constant(g, 0.5);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    Field v = Field::zeros(g);
    for (double& x : v.values) x = u(rng);
    CHECK(weighted_norm_sq(v, params, V) > 0.0);
  }
}

TEST_CASE("neg_weak_laplacian is adjoint-consistent with grad_norm_sq") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (GridPtr g : {Grid::make(RadialGrid(6.0, 300)),
                    Grid::make(CartesianGrid(1.5, 11))}) {
    Field v = Field::zeros(g), w = Field::zeros(g);
    for (double& x : v.values) x = u(rng);
    for (double& x : w.values) x = u(rng);
    Field lap_v = neg_weak_laplacian(v);
    Field lap_w = neg_weak_laplacian(w);
    // symmetry of the bilinear form and consistency with the quadratic form
    CHECK(inner(lap_v, w) == doctest::Approx(inner(lap_w, v)).epsilon(1e-11));
    CHECK(inner(lap_v, v) == doctest::Approx(grad_norm_sq(v)).epsilon(1e-11));
  }
}

TEST_CASE("radial interior rows match (1/r^2)(r^2 v')'") {
  GridPtr g = Grid::make(RadialGrid(8.0, 160));
  Field v = radial_from(g, [](double r) { return std::exp(-0.3 * r * r) * (1 + r); });
  Field lap = neg_weak_laplacian(v);
  double h = g->spacing();
  for (std::size_t i = 5; i + 5 < v.size(); i += 17) {
    double r = g->radius(i);
    double rp = r + 0.5 * h, rm = r - 0.5 * h;
    double compact = -(rp * rp * (v.values[i + 1] - v.values[i]) -
                       rm * rm * (v.values[i] - v.values[i - 1])) /
                     (r * r * h * h);
    CHECK(lap.values[i] == doctest::Approx(compact).epsilon(1e-10));
  }
}

TEST_CASE("cartesian interior rows match the 7-point laplacian") {
  GridPtr g = Grid::make(CartesianGrid(2.0, 13));
  Field v = Field::zeros(g);
  for (std::size_t i = 0; i < v.size(); ++i) {
    Vec3 x = g->coord(i);
    v.values[i] = std::cos(x[0]) * std::sin(0.5 * x[1]) * std::exp(-x[2] * x[2]);
  }
  Field lap = neg_weak_laplacian(v);
  double h2 = g->spacing() * g->spacing();
  for (int i = 2; i < 11; i += 3)
    for (int j = 2; j < 11; j += 3)
      for (int k = 2; k < 11; k += 3) {
        std::size_t c = g->index3(i, j, k);
        double seven =
            (6.0 * v.values[c] - v.values[g->index3(i + 1, j, k)] -
             v.values[g->index3(i - 1, j, k)] - v.values[g->index3(i, j + 1, k)] -
             v.values[g->index3(i, j - 1, k)] - v.values[g->index3(i, j, k + 1)] -
             v.values[g->index3(i, j, k - 1)]) / h2;
        CHECK(lap.values[c] == doctest::Approx(seven).epsilon(1e-10));
      }
}

TEST_CASE("KGS1 dump round-trip") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (GridPtr g : {Grid::make(RadialGrid(7.5, 64)),
                    Grid::make(CartesianGrid(1.25, 7))}) {
    Field f = Field::zeros(g);
    for (double& x : f.values) x = u(rng);
    std::stringstream ss;
    dump_field(f, ss);
    std::string text = ss.str();
    CHECK(text.substr(0, 5) == "KGS1\n");
    Field back = load_field(ss);
    REQUIRE(back.size() == f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
      CHECK(back.values[i] == f.values[i]);  // 17 digits round-trip exactly
  }
}

TEST_CASE("KGS1 header lines") {
  Field f = Field::zeros(Grid::make(RadialGrid(12.0, 16)));
  std::stringstream ss;
  dump_field(f, ss);
  std::string line;
  std::getline(ss, line);
  CHECK(line == "KGS1");
  std::getline(ss, line);
  CHECK(line == "grid radial n=16 R=12");
}

TEST_CASE("boundary helpers") {
  GridPtr g = Grid::make(CartesianGrid(1.0, 7));
  Field f = Field::constant(g, 2.0);
  zero_boundary(f);
  CHECK(min_interior(f) == 2.0);
  double boundary_sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (g->is_boundary(i)) boundary_sum += std::fabs(f.values[i]);
  CHECK(boundary_sum == 0.0);
  CHECK(max_abs_boundary_layer(f) == 2.0);
}
