#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

namespace qgeo::detail {

/// Cubic Hermite data on strictly increasing knots. V is double or an Eigen vector.
template <class V>
struct HermiteTable {
  std::vector<double> knots;
  std::vector<V> values;
  std::vector<V> slopes;

  std::size_t segment(double x) const {
    auto it = std::upper_bound(knots.begin(), knots.end(), x);
    std::size_t i = it == knots.begin() ? 0 : static_cast<std::size_t>(it - knots.begin()) - 1;
    return std::min(i, knots.size() - 2);
  }

  V value(double x) const {
    const std::size_t i = segment(x);
    const double h = knots[i + 1] - knots[i];
    const double t = (x - knots[i]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * values[i] + (t3 - 2 * t2 + t) * h * slopes[i] +
           (-2 * t3 + 3 * t2) * values[i + 1] + (t3 - t2) * h * slopes[i + 1];
  }

  V derivative(double x) const {
    const std::size_t i = segment(x);
    const double h = knots[i + 1] - knots[i];
    const double t = (x - knots[i]) / h;
    const double t2 = t * t;
    return ((6 * t2 - 6 * t) * values[i] + (-6 * t2 + 6 * t) * values[i + 1]) / h +
           (3 * t2 - 4 * t + 1) * slopes[i] + (3 * t2 - 2 * t) * slopes[i + 1];
  }
};

}  // namespace qgeo::detail
