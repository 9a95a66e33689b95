#include "kgs/thresholds.hpp"

#include <cmath>

#include "kgs/errors.hpp"

namespace kgs {

namespace {
void require_positive(double v, const char* name) {
  if (!(v > 0.0)) throw DomainError(std::string("thresholds: ") + name +
                                    " must be positive");
}
}  // namespace

double TsSolution::phi(double t, double s) const {
  return t - a * S * std::pow(lambda, -1.0 / 3.0) * std::cbrt(t + s);
}

double TsSolution::psi(double t, double s) const {
  return s - b * S * S * std::pow(lambda, -2.0 / 3.0) * std::cbrt((t + s) * (t + s));
}

TsSolution solve_ts_system(double a, double b, double S, double lambda) {
  require_positive(a, "a");
  require_positive(b, "b");
  require_positive(S, "S");
  require_positive(lambda, "lambda");
  const double A = a * S * std::pow(lambda, -1.0 / 3.0);
  const double B = b * S * S * std::pow(lambda, -2.0 / 3.0);
  const double w = 0.5 * (B + std::sqrt(B * B + 4.0 * A));
  TsSolution sol;
  sol.a = a;
  sol.b = b;
  sol.S = S;
  sol.lambda = lambda;
  sol.t0 = A * w;
  sol.s0 = B * w * w;
  return sol;
}

bool dominance_check(double t, double s, const TsSolution& sol) {
  if (!(t > 0.0) || !(s > 0.0))
    throw DomainError("dominance_check: t and s must be positive");
  return sol.phi(t, s) >= 0.0 && sol.psi(t, s) >= 0.0;
}

ThresholdValues critical_level(double a, double b, double S, double q) {
  require_positive(a, "a");
  require_positive(b, "b");
  require_positive(S, "S");
  require_positive(q, "q");
  const double S3 = S * S * S;
  const double inner = b * b * S3 * S + 4.0 * q * a * S;
  ThresholdValues tv;
  tv.a = a;
  tv.b = b;
  tv.S = S;
  tv.q = q;
  tv.c_star = a * b * S3 / (4.0 * q) +
              (std::pow(inner, 1.5) + b * b * b * S3 * S3) / (24.0 * q * q);
  return tv;
}

double threshold_consistency(double a, double b, double S, double q) {
  TsSolution sol = solve_ts_system(a, b, S, q);
  double c_star = critical_level(a, b, S, q).c_star;
  double lhs = sol.t0 / 3.0 + sol.s0 / 12.0;
  return std::fabs(lhs - c_star) / c_star;
}

}  // namespace kgs
