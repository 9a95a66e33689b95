#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "kgs/thresholds.hpp"
#include "kgs/errors.hpp"

using namespace kgs;

TEST_CASE("unit parameters give the golden-ratio root") {
  TsSolution sol = solve_ts_system(1.0, 1.0, 1.0, 1.0);
  double w = (1.0 + std::sqrt(5.0)) / 2.0;
  CHECK(sol.t0 == doctest::Approx(w).epsilon(1e-14));
  CHECK(sol.s0 == doctest::Approx(w * w).epsilon(1e-14));
  CHECK(sol.t0 + sol.s0 == doctest::Approx(w * w * w).epsilon(1e-14));
}

TEST_CASE("fixed-point residuals vanish for random draws") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.05, 5.0);
  for (int i = 0; i < 100; ++i) {
    double a = u(rng), b = u(rng), S = u(rng), lam = u(rng);
    TsSolution sol = solve_ts_system(a, b, S, lam);
    double scale = std::max(sol.t0, sol.s0);
    CHECK(std::fabs(sol.phi(sol.t0, sol.s0)) <= 1e-12 * scale);
    CHECK(std::fabs(sol.psi(sol.t0, sol.s0)) <= 1e-12 * scale);
    CHECK(sol.t0 > 0.0);
    CHECK(sol.s0 > 0.0);
  }
}

TEST_CASE("2-D fixed-point iteration from random starts agrees") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.2, 3.0);
  TsSolution sol = solve_ts_system(1.3, 0.7, 2.1, 0.9);
  double A = 1.3 * 2.1 * std::pow(0.9, -1.0 / 3.0);
  double B = 0.7 * 2.1 * 2.1 * std::pow(0.9, -2.0 / 3.0);
  for (int start = 0; start < 20; ++start) {
    double t = u(rng), s = u(rng);
    for (int it = 0; it < 400; ++it) {
      double sum = t + s;
      t = A * std::cbrt(sum);
      s = B * std::cbrt(sum * sum);
    }
    CHECK(t == doctest::Approx(sol.t0).epsilon(1e-8));
    CHECK(s == doctest::Approx(sol.s0).epsilon(1e-8));
  }
}

TEST_CASE("lambda monotonicity: doubling lambda decreases both components") {
  double prev_t = -1.0, prev_s = -1.0;
  for (double lam : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    TsSolution sol = solve_ts_system(1.0, 1.0, 2.0, lam);
    if (prev_t > 0.0) {
      CHECK(sol.t0 < prev_t);
      CHECK(sol.s0 < prev_s);
    }
    prev_t = sol.t0;
    prev_s = sol.s0;
  }
}

TEST_CASE("dominance check") {
  TsSolution sol = solve_ts_system(1.0, 1.0, 1.0, 1.0);
  CHECK(dominance_check(sol.t0, sol.s0, sol));
  CHECK(dominance_check(2.0 * sol.t0, 2.0 * sol.s0, sol));
  CHECK(!dominance_check(0.5 * sol.t0, 0.5 * sol.s0, sol));
  CHECK_THROWS_AS(dominance_check(-1.0, 1.0, sol), DomainError);
}

TEST_CASE("critical level formula behavior") {
  double S = 5.4779;
  double prev = 1e300;
  for (double q : {0.5, 1.0, 2.0, 4.0}) {
    double c = critical_level(1.0, 1.0, S, q).c_star;
    CHECK(c > 0.0);
    CHECK(c < prev);  // strictly decreasing in q
    prev = c;
  }
  // S -> 0 drives every term to zero
  CHECK(critical_level(1.0, 1.0, 1e-6, 1.0).c_star < 1e-5);
}

TEST_CASE("threshold identity at unit parameters") {
  CHECK(threshold_consistency(1.0, 1.0, 1.0, 1.0) < 1e-10);
}

TEST_CASE("threshold identity across random draws") {
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> u(0.05, 5.0);
  for (int i = 0; i < 100; ++i)
    CHECK(threshold_consistency(u(rng), u(rng), u(rng), u(rng)) < 1e-10);
}

TEST_CASE("threshold identity survives near-degenerate b") {
  CHECK(threshold_consistency(1.0, 1e-8, 2.0, 1.0) < 1e-8);
}

TEST_CASE("non-positive inputs rejected") {
  CHECK_THROWS_AS(solve_ts_system(0.0, 1.0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(critical_level(1.0, 1.0, -2.0, 1.0), DomainError);
}
