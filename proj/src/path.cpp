#include "qgeo/path.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hermite.hpp"

namespace qgeo {

Path::Path(int dimension, Curve point, Curve tangent, std::vector<double> breakpoints)
    : dimension_(dimension),
      point_(std::move(point)),
      tangent_(std::move(tangent)),
      breakpoints_(std::move(breakpoints)) {
  if (dimension_ < 1) throw Error("Path: dimension must be positive");
  std::sort(breakpoints_.begin(), breakpoints_.end());
  std::erase_if(breakpoints_, [](double b) { return !(b > 0.0 && b < 1.0); });
  breakpoints_.erase(std::unique(breakpoints_.begin(), breakpoints_.end()), breakpoints_.end());
}

Path Path::linear(const RealVector& start, const RealVector& end) {
  if (start.size() != end.size() || start.size() == 0) {
    throw Error("Path::linear: endpoint dimensions differ");
  }
  const RealVector a = start;
  const RealVector d = end - start;
  return Path(
      static_cast<int>(a.size()), [a, d](double u) -> RealVector { return a + u * d; },
      [d](double) -> RealVector { return d; });
}

Path Path::cubic_hermite(std::vector<double> knots, std::vector<RealVector> values,
                         std::vector<RealVector> slopes) {
  if (knots.size() < 2 || values.size() != knots.size() || slopes.size() != knots.size()) {
    throw Error("Path::cubic_hermite: need matching knots/values/slopes, at least two");
  }
  if (knots.front() != 0.0 || knots.back() != 1.0) {
    throw Error("Path::cubic_hermite: knots must run from 0 to 1");
  }
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    if (!(knots[i + 1] > knots[i])) throw Error("Path::cubic_hermite: knots must be strictly increasing");
  }
  const auto dim = static_cast<int>(values.front().size());
  auto table = std::make_shared<detail::HermiteTable<RealVector>>();
  table->knots = std::move(knots);
  table->values = std::move(values);
  table->slopes = std::move(slopes);
  std::vector<double> breaks(table->knots.begin() + 1, table->knots.end() - 1);
  return Path(
      dim, [table](double u) -> RealVector { return table->value(u); },
      [table](double u) -> RealVector { return table->derivative(u); }, std::move(breaks));
}

Path Path::through_points(std::vector<double> knots, std::vector<RealVector> values) {
  const std::size_t n = knots.size();
  if (n < 2 || values.size() != n) throw Error("Path::through_points: need at least two samples");
  std::vector<RealVector> slopes(n);
  auto secant = [&](std::size_t i) -> RealVector {
    return (values[i + 1] - values[i]) / (knots[i + 1] - knots[i]);
  };
  if (n == 2) {
    slopes[0] = slopes[1] = secant(0);
  } else {
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double hl = knots[i] - knots[i - 1];
      const double hr = knots[i + 1] - knots[i];
      slopes[i] = (hr * secant(i - 1) + hl * secant(i)) / (hl + hr);
    }
    const double h0 = knots[1] - knots[0];
    const double h1 = knots[2] - knots[1];
    slopes[0] = ((2 * h0 + h1) * secant(0) - h0 * secant(1)) / (h0 + h1);
    const double ha = knots[n - 1] - knots[n - 2];
    const double hb = knots[n - 2] - knots[n - 3];
    slopes[n - 1] = ((2 * ha + hb) * secant(n - 2) - ha * secant(n - 3)) / (ha + hb);
  }
  return cubic_hermite(std::move(knots), std::move(values), std::move(slopes));
}

std::vector<double> Path::segments() const {
  std::vector<double> out;
  out.reserve(breakpoints_.size() + 2);
  out.push_back(0.0);
  out.insert(out.end(), breakpoints_.begin(), breakpoints_.end());
  out.push_back(1.0);
  return out;
}

Path Path::reparametrized(std::function<double(double)> map,
                          std::function<double(double)> map_derivative) const {
  auto point = point_;
  auto tangent = tangent_;
  return Path(
      dimension_, [point, map](double u) -> RealVector { return point(map(u)); },
      [tangent, map, map_derivative](double u) -> RealVector {
        return tangent(map(u)) * map_derivative(u);
      });
}

double clearance(const Path& path, std::span<const RealVector> singular, int samples) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const RealVector p = path.point(static_cast<double>(i) / (samples - 1));
    for (const auto& s : singular) best = std::min(best, (p - s).norm());
  }
  return best;
}

void ensure_clearance(const Path& path, std::span<const RealVector> singular, double margin, int samples) {
  for (int i = 0; i < samples; ++i) {
    const double u = static_cast<double>(i) / (samples - 1);
    const RealVector p = path.point(u);
    for (const auto& s : singular) {
      const double d = (p - s).norm();
      if (d < margin) {
        std::ostringstream msg;
        msg << "path passes within " << d << " of a singular point at u = " << u;
        throw DegenerateSpectrumError(msg.str(), 0, d);
      }
    }
  }
}

}  // namespace qgeo
