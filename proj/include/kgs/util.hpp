#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>

namespace kgs {

using Vec3 = std::array<double, 3>;

inline Vec3 sub(const Vec3& a, const Vec3& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

inline double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

inline double dist(const Vec3& a, const Vec3& b) { return norm(sub(a, b)); }

/// Deterministic pairwise summation (fixed reduction tree).
double pairwise_sum(std::span<const double> x);

/// Compensated accumulator for fused single-pass reductions.
struct Kahan {
  double sum = 0.0;
  double c = 0.0;
  void add(double x) {
    double y = x - c;
    double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

/// Shortest round-trip decimal representation (CSV output).
std::string format_double(double v);

/// Scientific notation with 17 significant digits (field dumps).
std::string format_sci17(double v);

}  // namespace kgs
