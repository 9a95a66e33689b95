#pragma once

#include <cmath>
#include <functional>

// Dense composite Simpson rule; the independent quadrature oracle used by
// the tests. Never calls into the library's quadrature.
inline double simpson(const std::function<double(double)>& f, double a,
                      double b, int n = 200000) {
  if (n % 2 != 0) ++n;
  double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}
