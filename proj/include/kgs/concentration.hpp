#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kgs/groundstate.hpp"

namespace kgs {

/// Grid node of largest value; exact ties resolve to the lexicographically
/// smallest index triple (smallest radius on radial grids, where the r = 0
/// regularity value also competes).
Vec3 max_point(const Field& u);

struct DecayFit {
  double C = 0.0;         // intercept exponential
  double rate = 0.0;      // slope magnitude of log u against |x - x_eps|
  double residual = 0.0;  // RMS residual in log units
  std::size_t nodes_used = 0;
};

/// Least-squares line fit of log u over nodes with |x - x_eps| >= r_min and
/// u > 1e-14, skipping the clamped layer next to the Dirichlet boundary.
/// Throws InsufficientDataError below 10 usable nodes.
DecayFit decay_fit(const Field& u, const Vec3& x_eps, double r_min);

/// u(epsilon·x + x_tilde) on the target grid by trilinear interpolation;
/// points that hit source nodes reproduce the node values exactly.
Field rescaled_profile(const Field& u, double epsilon, const Vec3& x_tilde,
                       GridPtr target);

/// Radius at which a field drops below half of its maximum.
double half_width(const Field& u, const Vec3& center);

struct ConcentrationRecord {
  double epsilon = 0.0;
  Vec3 x_eps{0.0, 0.0, 0.0};
  double dist_AV = 0.0;
  double decay_C = 0.0;
  double decay_c = 0.0;     // physical-space rate times epsilon
  double rate_raw = 0.0;    // fitted rate of u in physical coordinates
  double profile_dist = 0.0;
  double level = 0.0;
  int iterations = 0;
  double boundary_ratio = 0.0;
  double fit_residual = 0.0;
  bool solved = false;
  std::string error;
};

struct SweepConfig {
  std::vector<double> eps_list;   // strictly decreasing
  double phys_half_width = 2.5;   // physical box, fixed across the sweep
  int m = 63;                     // nodes per axis (capped policy)
  double tol_set = 1e-6;
  bool use_vq_branch = false;     // distance to A_P instead of A_V
};

struct SweepReport {
  std::vector<ConcentrationRecord> records;
  Vec3 x0{0.0, 0.0, 0.0};          // max point at the smallest solved epsilon
  ConstantCoefficients limit_cc;   // (V(x0), P(x0), Q(x0))
  std::vector<std::size_t> target_set;  // admissible nodes on the physical grid
  GridPtr phys_grid;
};

/// Per-epsilon: solve, locate the maximum of u_eps, measure the distance to
/// the admissible set, fit the decay, and compare the rescaled profile
/// against the constant-coefficient ground state at x0 computed on the same
/// grid. Solver failures are recorded and the sweep continues.
SweepReport epsilon_sweep(const KirchhoffParams& params,
                          const PotentialTripleSpec& spec,
                          const SweepConfig& cfg, const SolveOptions& opts);

/// sweep.csv encoding of a record list.
std::string sweep_csv(const SweepReport& rep);

}  // namespace kgs
