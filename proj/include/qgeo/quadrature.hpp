#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace qgeo {

struct QuadratureOptions {
  double rel_tol = 1e-8;
  double abs_tol = 0.0;
  int max_intervals = 1 << 14;
  /// Evaluate new panels of a refinement round with OpenMP. The integrand must be thread-safe.
  bool parallel = false;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
  std::vector<std::string> history;
};

/// One Gauss-Kronrod 7/15 panel; `error` is |K15 − G7|.
struct Panel {
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
  double error = 0.0;
};

Panel gauss_kronrod_15(const std::function<double(double)>& f, double a, double b);

/// Adaptive GK15 over [breakpoints.front(), breakpoints.back()], starting with one
/// panel per breakpoint interval. Rounds bisect every panel whose error exceeds its
/// share of the target; sums are taken in left-to-right order so the result does not
/// depend on evaluation order. Throws QuadratureError on non-convergence.
QuadratureResult integrate(const std::function<double(double)>& f, std::span<const double> breakpoints,
                           const QuadratureOptions& options = {});

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& options = {});

}  // namespace qgeo
