#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "kgs/potentials.hpp"

using namespace kgs;

namespace {
GridPtr check_grid(double R_cond, int m = 41) {
  return Grid::make(CartesianGrid(2.0 * R_cond, m));
}
}  // namespace

TEST_CASE("shape parser round-trips the catalog") {
  for (const char* text :
       {"const(value=2.5)",
        "bump(center=1 0 -2, base=1, height=0.5, width=1.5)",
        "well(center=0 0 0, base=2, depth=0.5, width=0.7)",
        "rational_rise(center=0 1 0, low=1, high=3, width=2)",
        "tanh_peak(center=0 0 0, far=1, peak=2, width=1)"}) {
    Shape s = parse_shape(text);
    Shape s2 = parse_shape(s.describe());
    Vec3 probe{0.3, -0.7, 1.1};
    CHECK(s(probe) == s2(probe));
  }
  CHECK_THROWS_AS(parse_shape("spline(knots=3)"), ParseError);
  CHECK_THROWS_AS(parse_shape("bump(blah=1)"), ParseError);
  CHECK_THROWS_AS(parse_shape("well(base=1, depth=2, width=1)"), DomainError);
}

TEST_CASE("declared limits agree with sampled values") {
  PotentialTripleSpec spec = PotentialTripleSpec::preset("aligned");
  GridPtr g = check_grid(spec.R_cond, 33);
  Field Vf = sample_scaled(spec.V, g, 1.0);
  Field Pf = sample_scaled(spec.P, g, 1.0);
  double v_lo = *std::min_element(Vf.values.begin(), Vf.values.end());
  double p_hi = *std::max_element(Pf.values.begin(), Pf.values.end());
  CHECK(v_lo >= spec.V_min - 1e-6);
  CHECK(v_lo == doctest::Approx(spec.V_min).epsilon(1e-6));  // min attained at x*
  CHECK(p_hi == doctest::Approx(spec.P_max).epsilon(1e-6));
  CHECK(spec.V_inf == 2.0);
  CHECK(spec.P_inf == 1.0);
}

TEST_CASE("constant triple: PQ1 passes, PQ2 fails") {
  PotentialTripleSpec spec = PotentialTripleSpec::preset("constant");
  GridPtr g = check_grid(spec.R_cond, 21);
  ConditionReport rep = check_conditions(spec, g);
  CHECK(rep.get("PQ1").pass);           // P∩Q is the whole grid
  CHECK(rep.get("PQ1").witness_count == g->size());
  CHECK(!rep.get("PQ2").pass);          // P_max = P_inf: zero gap
  CHECK(rep.get("PQ2").gap == 0.0);
  CHECK(!rep.pq_ok());
}

TEST_CASE("aligned preset passes VQ1/VQ2 with singleton witness") {
  PotentialTripleSpec spec = PotentialTripleSpec::preset("aligned");
  GridPtr g = check_grid(spec.R_cond, 41);
  ConditionReport rep = check_conditions(spec, g, 1e-9);
  CHECK(rep.get("VQ1").pass);
  CHECK(rep.get("VQ1").witness_count == 1);  // witness set {x*}
  CHECK(rep.get("VQ2").pass);
  CHECK(rep.get("VQ2").gap == doctest::Approx(1.0));
  CHECK(rep.vq_ok());
  CHECK(rep.pq_ok());  // the aligned preset satisfies both pairs
}

TEST_CASE("competing preset passes PQ1/PQ2 and fails VQ1") {
  PotentialTripleSpec spec = PotentialTripleSpec::preset("competing");
  GridPtr g = check_grid(spec.R_cond, 57);
  ConditionReport rep = check_conditions(spec, g, 1e-9);
  CHECK(rep.get("PQ1").pass);
  CHECK(rep.get("PQ2").pass);
  CHECK(rep.get("PQ2").violations == 0);
  CHECK(!rep.get("VQ1").pass);  // V-min and Q-max sets are disjoint
  CHECK(rep.pq_ok());
  CHECK(!rep.vq_ok());
}

TEST_CASE("grid too small is a precondition error") {
  PotentialTripleSpec spec = PotentialTripleSpec::preset("aligned");
  GridPtr g = Grid::make(CartesianGrid(spec.R_cond, 21));
  CHECK_THROWS_AS(check_conditions(spec, g), DomainError);
}

TEST_CASE("admissible sets: aligned collapses to the center node") {
  PotentialTripleSpec spec = PotentialTripleSpec::preset("aligned");
  GridPtr g = check_grid(spec.R_cond, 41);  // odd m: x* = 0 is a node
  ConcentrationSets sets = admissible_sets(spec, g, 1e-9);
  REQUIRE(sets.A_V.size() == 1);
  REQUIRE(sets.A_P.size() == 1);
  CHECK(norm(g->coord(sets.A_V[0])) == 0.0);
  CHECK(norm(g->coord(sets.A_P[0])) == 0.0);
  CHECK(sets.dist_to(sets.A_V, {0.0, 0.0, 0.0}) == 0.0);
}

TEST_CASE("admissible sets: constant P,Q with a V-well reduce to the well") {
  Shape V = parse_shape("well(center=0.5 0 0, base=2, depth=1, width=0.8)");
  Shape P = parse_shape("const(value=1)");
  Shape Q = parse_shape("const(value=1)");
  // P∩Q is the whole grid; A_V keeps the V-minimizing band only
  PotentialTripleSpec spec = PotentialTripleSpec::from_shapes(
      V, P, Q, {0.5, 0.0, 0.0}, 2.0);
  GridPtr g = check_grid(spec.R_cond, 41);
  double tol = 1e-3;
  ConcentrationSets sets = admissible_sets(spec, g, tol);
  Field Vf = sample_scaled(V, g, 1.0);
  double v_lo = *std::min_element(Vf.values.begin(), Vf.values.end());
  for (std::size_t i = 0; i < g->size(); ++i) {
    bool member = std::find(sets.A_V.begin(), sets.A_V.end(), i) != sets.A_V.end();
    CHECK(member == (Vf.values[i] <= v_lo + tol));
  }
}

TEST_CASE("admissible sets: competing matches a brute-force scan") {
  PotentialTripleSpec spec = PotentialTripleSpec::preset("competing");
  GridPtr g = check_grid(spec.R_cond, 57);
  double tol = 1e-9;
  ConcentrationSets sets = admissible_sets(spec, g, tol);
  Field Vf = sample_scaled(spec.V, g, 1.0);
  Field Pf = sample_scaled(spec.P, g, 1.0);
  Field Qf = sample_scaled(spec.Q, g, 1.0);
  // brute-force reconstruction straight from the definition
  std::vector<std::size_t> pq;
  for (std::size_t i = 0; i < g->size(); ++i)
    if (Pf.values[i] >= spec.P_max - tol && Qf.values[i] >= spec.Q_max - tol)
      pq.push_back(i);
  REQUIRE(!pq.empty());
  double vstar = 1e300;
  for (auto i : pq) vstar = std::min(vstar, Vf.values[i]);
  std::vector<std::size_t> brute;
  for (std::size_t i = 0; i < g->size(); ++i) {
    bool in_pq = std::find(pq.begin(), pq.end(), i) != pq.end();
    if (in_pq ? std::fabs(Vf.values[i] - vstar) <= tol : Vf.values[i] < vstar)
      brute.push_back(i);
  }
  CHECK(sets.A_V == brute);
  CHECK(sets.A_V.size() > 1);  // the off-center V-well joins the set
}

TEST_CASE("A_V stays inside a bounded ball") {
  PotentialTripleSpec spec = PotentialTripleSpec::preset("competing");
  GridPtr g = check_grid(spec.R_cond, 57);
  ConcentrationSets sets = admissible_sets(spec, g, 1e-9);
  double radius_bound = spec.R_cond + 4.0;  // well center + bump support
  for (auto i : sets.A_V) CHECK(norm(g->coord(i)) <= radius_bound);
}

TEST_CASE("set monotonicity in the tolerance") {
  PotentialTripleSpec spec = PotentialTripleSpec::preset("competing");
  GridPtr g = check_grid(spec.R_cond, 41);
  ConcentrationSets coarse = admissible_sets(spec, g, 1e-3);
  ConcentrationSets fine = admissible_sets(spec, g, 1e-7);
  CHECK(std::includes(coarse.Pset.begin(), coarse.Pset.end(),
                      fine.Pset.begin(), fine.Pset.end()));
  CHECK(std::includes(coarse.Qset.begin(), coarse.Qset.end(),
                      fine.Qset.begin(), fine.Qset.end()));
  CHECK(std::includes(coarse.Vset.begin(), coarse.Vset.end(),
                      fine.Vset.begin(), fine.Vset.end()));
}

TEST_CASE("membership determinism") {
  PotentialTripleSpec spec = PotentialTripleSpec::preset("aligned");
  GridPtr g = check_grid(spec.R_cond, 33);
  ConcentrationSets a = admissible_sets(spec, g, 1e-8);
  ConcentrationSets b = admissible_sets(spec, g, 1e-8);
  CHECK(a.A_V == b.A_V);
  CHECK(a.Pset == b.Pset);
}
