#pragma once

namespace kgs {

/// Solution of the system  Φ(t,s) = t - aSλ^{-1/3}(t+s)^{1/3} = 0,
///                         Ψ(t,s) = s - bS²λ^{-2/3}(t+s)^{2/3} = 0.
struct TsSolution {
  double t0 = 0.0;
  double s0 = 0.0;
  double lambda = 0.0;
  double S = 0.0;
  double a = 0.0;
  double b = 0.0;

  double phi(double t, double s) const;
  double psi(double t, double s) const;
};

/// Closed form via w = cbrt(t0+s0): w is the positive root of
/// w² - bS²λ^{-2/3} w - aSλ^{-1/3} = 0, then t0 = aSλ^{-1/3}·w and
/// s0 = bS²λ^{-2/3}·w².
TsSolution solve_ts_system(double a, double b, double S, double lambda);

/// True iff Φ(t,s) ≥ 0 and Ψ(t,s) ≥ 0 (then t ≥ t0 and s ≥ s0).
bool dominance_check(double t, double s, const TsSolution& sol);

struct ThresholdValues {
  double c_star = 0.0;
  double S = 0.0;
  double a = 0.0;
  double b = 0.0;
  double q = 0.0;
};

/// c* = abS³/(4q) + (b²S⁴ + 4qaS)^{3/2}/(24q²) + b³S⁶/(24q²).
ThresholdValues critical_level(double a, double b, double S, double q);

/// Relative residual |t0/3 + s0/12 - c*| / c*; the identity is exact.
double threshold_consistency(double a, double b, double S, double q);

}  // namespace kgs
