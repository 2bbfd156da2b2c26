#include "qgeo/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qgeo/types.hpp"

namespace qgeo {

namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
using Gauss = boost::math::quadrature::gauss<double, 7>;

std::string round_summary(int round, std::size_t panels, double value, double error) {
  std::ostringstream line;
  line.precision(17);
  line << "round " << round << ": panels=" << panels << " estimate=" << value << " error=" << error;
  return line.str();
}

}  // namespace

Panel gauss_kronrod_15(const std::function<double(double)>& f, double a, double b) {
  const auto& x = Kronrod::abscissa();
  const auto& wk = Kronrod::weights();
  const auto& wg = Gauss::weights();
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  const double f0 = f(center);
  double kronrod = wk[0] * f0;
  double gauss = wg[0] * f0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double dx = half * x[i];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += wk[i] * pair;
    if (i % 2 == 0) gauss += wg[i / 2] * pair;
  }
  return Panel{a, b, half * kronrod, std::abs(half * (kronrod - gauss))};
}

QuadratureResult integrate(const std::function<double(double)>& f, std::span<const double> breakpoints,
                           const QuadratureOptions& options) {
  QuadratureResult out;
  if (breakpoints.size() < 2) throw Error("integrate: need at least two breakpoints");
  if (!std::is_sorted(breakpoints.begin(), breakpoints.end())) {
    throw Error("integrate: breakpoints must be non-decreasing");
  }

  std::vector<Panel> panels;
  std::vector<std::pair<double, double>> pending;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (breakpoints[i + 1] != breakpoints[i]) pending.emplace_back(breakpoints[i], breakpoints[i + 1]);
  }
  if (pending.empty()) return out;

  for (int round = 0;; ++round) {
    std::vector<Panel> fresh(pending.size());
    const auto count = static_cast<long>(pending.size());
#pragma omp parallel for schedule(dynamic) if (options.parallel && count > 1)
    for (long i = 0; i < count; ++i) fresh[i] = gauss_kronrod_15(f, pending[i].first, pending[i].second);
    panels.insert(panels.end(), fresh.begin(), fresh.end());
    std::sort(panels.begin(), panels.end(), [](const Panel& l, const Panel& r) { return l.a < r.a; });

    double value = 0.0;
    double error = 0.0;
    for (const auto& p : panels) {
      value += p.value;
      error += p.error;
    }
    out.value = value;
    out.error = error;
    out.intervals = static_cast<int>(panels.size());
    out.history.push_back(round_summary(round, panels.size(), value, error));

    if (!std::isfinite(value) || !std::isfinite(error)) {
      throw QuadratureError("integrate: non-finite integrand or estimate", out.history);
    }
    const double target = std::max(options.abs_tol, options.rel_tol * std::abs(value));
    if (error <= target) return out;
    if (static_cast<int>(panels.size()) >= options.max_intervals) {
      std::ostringstream msg;
      msg << "integrate: no convergence after " << panels.size() << " panels (error " << error
          << ", target " << target << ")";
      throw QuadratureError(msg.str(), out.history);
    }

    const double share = target / static_cast<double>(panels.size());
    double worst = 0.0;
    for (const auto& p : panels) worst = std::max(worst, p.error);
    pending.clear();
    std::vector<Panel> kept;
    kept.reserve(panels.size());
    for (const auto& p : panels) {
      if (p.error > share || p.error == worst) {
        const double mid = 0.5 * (p.a + p.b);
        if (mid <= p.a || mid >= p.b) {
          throw QuadratureError("integrate: panel width underflow", out.history);
        }
        pending.emplace_back(p.a, mid);
        pending.emplace_back(mid, p.b);
      } else {
        kept.push_back(p);
      }
    }
    panels = std::move(kept);
  }
}

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& options) {
  const double pts[] = {a, b};
  return integrate(f, std::span<const double>(pts), options);
}

}  // namespace qgeo
