#pragma once

#include <span>
#include <vector>

#include "kgs/functional.hpp"
#include "kgs/potentials.hpp"

namespace kgs {

/// Constant-coefficient problem -(a+b∫|∇v|²)Δv + kv = τ|v|^{p-2}v + ν|v|⁴v.
struct ConstantCoefficients {
  double k = 1.0;
  double tau = 1.0;
  double nu = 1.0;
  void validate() const;
};

/// Clamp levels of the auxiliary problem: V is raised to at least c,
/// P capped at d, Q capped at e.
struct TruncationLevels {
  double c = 0.0;
  double d = 0.0;
  double e = 0.0;
};

struct SolveOptions {
  double tol = 1e-8;        // stop on tangential gradient max-norm below this
  int max_iter = 50000;
  std::vector<double> seed_widths = {1.0, 2.0};
  // domain-retry rule for the radial constant solver: enlarge R by 1.5x while
  // the solution's boundary magnitude exceeds this fraction of its max
  double boundary_ratio_limit = 1e-8;
  int max_domain_retries = 3;
  bool allow_domain_retry = true;
};

struct GroundStateReport {
  Field field;
  double level = 0.0;
  double nehari_residual = 0.0;
  double grad_sup = 0.0;  // max-norm of the Nehari-tangential gradient
  Vec3 max_point{0.0, 0.0, 0.0};
  int iterations = 0;
  bool converged = false;
  double boundary_ratio = 0.0;  // |v| on the layer next to the boundary / max
  std::vector<double> start_levels;  // one level per multi-start seed
};

/// Projected descent on the Nehari manifold: Barzilai-Borwein gradient step,
/// pointwise absolute value, reprojection through the fibering root.
GroundStateReport minimize_on_nehari(const EnergyFunctional& F,
                                     const Field& init,
                                     const SolveOptions& opts);

EnergyFunctional constant_functional(const ConstantCoefficients& cc,
                                     const KirchhoffParams& params, GridPtr g);
EnergyFunctional variable_functional(const KirchhoffParams& params,
                                     const PotentialTripleSpec& spec,
                                     double epsilon, GridPtr g);
EnergyFunctional truncated_functional(const TruncationLevels& levels,
                                      const KirchhoffParams& params,
                                      const PotentialTripleSpec& spec,
                                      double epsilon, GridPtr g);

/// Discrete m*: multi-start Gaussian seeds, domain retry per SolveOptions.
GroundStateReport solve_constant(const ConstantCoefficients& cc,
                                 const KirchhoffParams& params,
                                 const RadialGrid& grid,
                                 const SolveOptions& opts);

/// Discrete c_eps: requires the potential conditions to hold; seeds are
/// centered at the best admissible-set candidate (and at x* when distinct).
GroundStateReport solve_variable(const KirchhoffParams& params,
                                 const PotentialTripleSpec& spec,
                                 double epsilon, const CartesianGrid& grid,
                                 const SolveOptions& opts);

/// Same with clamped coefficients; levels must respect the declared ranges.
GroundStateReport solve_truncated(const TruncationLevels& levels,
                                  const KirchhoffParams& params,
                                  const PotentialTripleSpec& spec,
                                  double epsilon, const CartesianGrid& grid,
                                  const SolveOptions& opts);

/// Constant-coefficient ground state on a cartesian grid (same discrete
/// operators as the variable solves; used for level comparisons).
GroundStateReport solve_constant_cartesian(const ConstantCoefficients& cc,
                                           const KirchhoffParams& params,
                                           const CartesianGrid& grid,
                                           const SolveOptions& opts);

struct ComparePair {
  std::size_t lo = 0, hi = 0;  // indices into the lattice; m*(lo) <= m*(hi)
  double level_lo = 0.0, level_hi = 0.0;
  bool strict_expected = false;
  bool ok = false;
};

struct CompareReport {
  std::vector<GroundStateReport> reports;
  std::vector<ComparePair> pairs;
  std::size_t violations = 0;
};

/// Solve every lattice triple and check each comparable pair
/// (k ordered up, τ and ν ordered down) for level monotonicity;
/// violations beyond `flag_tol` are counted.
CompareReport compare_levels(std::span<const ConstantCoefficients> lattice,
                             const KirchhoffParams& params,
                             const RadialGrid& grid, const SolveOptions& opts,
                             double flag_tol);

}  // namespace kgs
