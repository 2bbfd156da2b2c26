#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "qgeo/types.hpp"

namespace qgeo {

/// A curve u ∈ [0, 1] → λ in control-parameter space, with analytic tangent.
///
/// Paths carry geometry only; timing lives in Protocol. Copies share the
/// underlying immutable data.
class Path {
 public:
  using Curve = std::function<RealVector(double)>;

  /// `breakpoints` lists interior points where the tangent may jump (quadrature
  /// splits there); 0 and 1 are implied.
  Path(int dimension, Curve point, Curve tangent, std::vector<double> breakpoints = {});

  /// (1 − u) a + u b.
  static Path linear(const RealVector& start, const RealVector& end);

  /// Piecewise cubic Hermite through (knots[i], values[i]) with the given slopes.
  /// Knots must be strictly increasing from 0 to 1.
  static Path cubic_hermite(std::vector<double> knots, std::vector<RealVector> values,
                            std::vector<RealVector> slopes);

  /// Piecewise cubic through the samples, slopes from three-point finite differences.
  static Path through_points(std::vector<double> knots, std::vector<RealVector> values);

  int dimension() const { return dimension_; }
  RealVector point(double u) const { return point_(u); }
  RealVector tangent(double u) const { return tangent_(u); }
  RealVector start() const { return point_(0.0); }
  RealVector end() const { return point_(1.0); }

  /// 0, interior breakpoints, 1.
  std::vector<double> segments() const;

  /// Reparametrize by u → φ(u) with φ monotone, φ(0)=0, φ(1)=1.
  Path reparametrized(std::function<double(double)> map, std::function<double(double)> map_derivative) const;

 private:
  int dimension_;
  Curve point_;
  Curve tangent_;
  std::vector<double> breakpoints_;
};

/// Smallest distance from `path` (sampled on `samples` points) to any of `singular`.
double clearance(const Path& path, std::span<const RealVector> singular, int samples = 2001);

/// Throws DegenerateSpectrumError when the path passes within `margin` of a singular point.
void ensure_clearance(const Path& path, std::span<const RealVector> singular, double margin,
                      int samples = 2001);

}  // namespace qgeo
