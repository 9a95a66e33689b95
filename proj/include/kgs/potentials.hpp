#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "kgs/model.hpp"

namespace kgs {

/// Catalog of closed-form coefficient shapes. Every shape is smooth, bounded,
/// positive and has a symbolically known limit at infinity, so the declared
/// extremes below never rely on sampling.
enum class ShapeKind { Constant, Bump, Well, RationalRise, TanhPeak };

struct Shape {
  ShapeKind kind = ShapeKind::Constant;
  Vec3 center{0.0, 0.0, 0.0};
  // Constant: value
  // Bump:     base + height·exp(-|x-c|²/(2 width²))
  // Well:     base - depth·exp(-|x-c|²/(2 width²))
  // RationalRise: low + (high-low)·s²/(1+s²),  s = |x-c|/width
  // TanhPeak: far + (peak-far)·(1 - tanh(|x-c|/width))
  double value = 1.0;
  double base = 1.0;
  double height = 1.0;
  double depth = 0.5;
  double width = 1.0;
  double low = 1.0;
  double high = 2.0;
  double far = 1.0;
  double peak = 2.0;

  double operator()(const Vec3& x) const;
  double min_value() const;      // infimum over R³
  double max_value() const;      // supremum over R³
  double limit_infinity() const; // the (existing) limit at |x| → ∞
  std::string describe() const;
  void validate() const;
};

/// Parse a catalog expression, e.g. "bump(center=0 0 0, base=1, height=1, width=1)".
Shape parse_shape(const std::string& text);

/// The coefficient triple with its declared extremes and the condition data
/// (x*, R) used by the exterior comparisons.
struct PotentialTripleSpec {
  Shape V, P, Q;
  Vec3 x_star{0.0, 0.0, 0.0};
  double R_cond = 2.0;

  double V_min = 0, V_max = 0, V_inf = 0;
  double P_min = 0, P_max = 0, P_inf = 0;
  double Q_min = 0, Q_max = 0, Q_inf = 0;

  static PotentialTripleSpec from_shapes(Shape V, Shape P, Shape Q, Vec3 x_star,
                                         double R_cond);
  /// Named presets: "aligned", "competing", "constant".
  static PotentialTripleSpec preset(const std::string& name);
  void validate() const;
};

/// Sample shape(epsilon·x) on the grid nodes.
Field sample_scaled(const Shape& s, GridPtr g, double epsilon);

struct ConditionEntry {
  std::string name;  // PQ1, PQ2, VQ1, VQ2
  bool pass = false;
  std::size_t witness_count = 0;  // discrete set size backing the condition
  double gap = 0.0;               // strict-gap value (P_max-P_inf, V_inf-V_min)
  std::size_t violations = 0;     // exterior-comparison violations
  Vec3 worst{0.0, 0.0, 0.0};      // worst violating sample point
  std::string note;
};

struct ConditionReport {
  std::vector<ConditionEntry> entries;
  const ConditionEntry& get(const std::string& name) const;
  bool pq_ok() const { return get("PQ1").pass && get("PQ2").pass; }
  bool vq_ok() const { return get("VQ1").pass && get("VQ2").pass; }
};

/// Evaluate (PQ1), (PQ2), (VQ1), (VQ2) on a cartesian grid covering a ball of
/// radius at least 2·R_cond, with per-condition witnesses.
ConditionReport check_conditions(const PotentialTripleSpec& spec, GridPtr grid,
                                 double tol_set = 1e-9);

/// Discrete extremal and admissible sets (node index lists).
struct ConcentrationSets {
  GridPtr grid;
  std::vector<std::size_t> Vset, Pset, Qset;
  std::vector<std::size_t> A_V, A_P;
  double tol_set = 0.0;
  double V_xstar = 0.0;  // min over the discrete P∩Q of V
  double P_xstar = 0.0;  // max over the discrete V∩Q of P
  double dist_to(const std::vector<std::size_t>& set, const Vec3& x) const;
};

ConcentrationSets admissible_sets(const PotentialTripleSpec& spec, GridPtr grid,
                                  double tol_set);

}  // namespace kgs
