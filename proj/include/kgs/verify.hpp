#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kgs/functional.hpp"

namespace kgs {

struct SuiteResult {
  std::string name;
  int checks = 0;
  int violations = 0;
  std::vector<std::string> messages;
  bool ok() const { return violations == 0; }
};

/// Random smooth radial profile (sum of Gaussians, zero at the boundary).
Field random_radial_profile(GridPtr g, std::uint64_t& state);
Field random_cartesian_profile(GridPtr g, std::uint64_t& state);

/// Brute-force fibering maximizer: coarse scan then golden-section refine.
/// Never touches the root finder.
double brute_force_fibering_max(const KirchhoffParams& params,
                                const Moments& m, double t_hi);

/// Per random profile: the transformed residual changes sign exactly once on
/// a 10^4-point geometric grid over [1e-6, 1e6]·t*, the bisection root matches
/// the brute-force maximizer to 1e-8, and g(t*) dominates 200 sampled rays.
SuiteResult fibering_suite(std::uint64_t seed, int profiles = 50);

/// Central-difference directional-derivative checks of the energy gradient
/// at step 1e-5, relative tolerance 1e-6 (radial and cartesian profiles).
SuiteResult gradient_suite(std::uint64_t seed, int pairs = 50);

/// Random positive (a,b,S,q) draws: closed-form system residuals below 1e-12
/// and threshold identity residual below 1e-10.
SuiteResult thresholds_suite(std::uint64_t seed, int draws = 100);

/// Ray geometry: g > 0 for small t and g(T) < 0 for a doubled T.
SuiteResult mountain_suite(std::uint64_t seed, int directions = 20);

std::vector<SuiteResult> run_suites(const std::string& which,
                                    std::uint64_t seed);

}  // namespace kgs
