#include "qgeo/protocols.hpp"

#include <cmath>
#include <list>
#include <numbers>
#include <sstream>

#include "hermite.hpp"

namespace qgeo {

namespace {

const std::vector<double> kNoKnots;

}  // namespace

Timing Timing::identity() {
  Timing t;
  t.map_ = [](double s) { return s; };
  t.derivative_ = [](double) { return 1.0; };
  return t;
}

Timing Timing::closed_form(std::function<double(double)> map, std::function<double(double)> derivative) {
  Timing t;
  t.map_ = std::move(map);
  t.derivative_ = std::move(derivative);
  return t;
}

Timing Timing::hermite(std::vector<double> s, std::vector<double> u, std::vector<double> slopes) {
  if (s.size() < 2 || u.size() != s.size() || slopes.size() != s.size()) {
    throw Error("Timing::hermite: need matching knots, values and slopes");
  }
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    if (!(s[i + 1] > s[i]) || !(u[i + 1] > u[i])) throw Error("Timing::hermite: knots must be strictly increasing");
  }
  auto table = std::make_shared<detail::HermiteTable<double>>();
  table->knots = std::move(s);
  table->values = std::move(u);
  table->slopes = std::move(slopes);
  Timing t;
  t.map_ = [table](double x) { return table->value(x); };
  t.derivative_ = [table](double x) { return table->derivative(x); };
  t.knots_ = std::shared_ptr<const std::vector<double>>(table, &table->knots);
  return t;
}

double Timing::operator()(double s) const {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  return map_(s);
}

double Timing::derivative(double s) const { return derivative_(std::clamp(s, 0.0, 1.0)); }

const std::vector<double>& Timing::knots() const { return knots_ ? *knots_ : kNoKnots; }

// ---------------------------------------------------------------------------

Protocol linear_protocol(const RealVector& start, const RealVector& end) {
  Protocol p{Path::linear(start, end), Timing::identity(), "linear", std::nullopt};
  if ((end - start).isZero(0.0)) p.warning = "trivial protocol: start and end coincide";
  return p;
}

namespace {

struct Knot {
  double u;
  double rate;        // T̃ with respect to u
  double cumulative;  // ∫₀^u T̃
};

double segment_length(const MetricField& metric, const Path& path, double a, double b) {
  QuadratureOptions options;
  options.rel_tol = 1e-13;
  options.abs_tol = 1e-300;
  return integrate([&](double u) { return overall_rate(metric, path, u); }, a, b, options).value;
}

}  // namespace

Protocol constant_rate_reparametrize(const MetricField& metric, const Path& path,
                                     const ConstantRateOptions& options, std::string label) {
  // Initial grid: every path segment split evenly.
  const auto segments = path.segments();
  const int per_segment = std::max(1, options.initial_knots / static_cast<int>(segments.size() - 1));
  std::vector<double> us;
  for (std::size_t i = 0; i + 1 < segments.size(); ++i) {
    for (int j = 0; j < per_segment; ++j) {
      us.push_back(segments[i] + (segments[i + 1] - segments[i]) * j / per_segment);
    }
  }
  us.push_back(1.0);

  // Knots with the length of the piece to their left kept separately so splits stay local.
  std::list<Knot> knots;
  std::list<double> pieces;  // pieces[i] = length between knot i and i+1
  for (double u : us) knots.push_back(Knot{u, overall_rate(metric, path, u), 0.0});
  for (auto it = knots.begin(); std::next(it) != knots.end(); ++it) {
    pieces.push_back(segment_length(metric, path, it->u, std::next(it)->u));
  }

  auto make_table = [&](double total) {
    detail::HermiteTable<double> table;
    double cumulative = 0.0;
    auto piece = pieces.begin();
    for (auto it = knots.begin(); it != knots.end(); ++it) {
      it->cumulative = cumulative;
      table.knots.push_back(cumulative / total);
      table.values.push_back(it->u);
      if (piece != pieces.end()) cumulative += *piece++;
    }
    table.knots.back() = 1.0;
    table.values.back() = 1.0;
    table.knots.front() = 0.0;
    table.values.front() = 0.0;
    std::size_t i = 0;
    for (auto it = knots.begin(); it != knots.end(); ++it, ++i) {
      double slope = it->rate > 0.0 ? total / it->rate : std::numeric_limits<double>::quiet_NaN();
      if (!std::isfinite(slope)) {
        // Stationary point of the path: fall back to a one-sided secant.
        const std::size_t j = std::min(i, table.knots.size() - 2);
        slope = (table.values[j + 1] - table.values[j]) / (table.knots[j + 1] - table.knots[j]);
      }
      table.slopes.push_back(slope);
    }
    return table;
  };

  for (;;) {
    double total = 0.0;
    for (double p : pieces) total += p;
    if (!std::isfinite(total)) throw DivergentLengthError("constant-rate reparametrization: length is not finite");
    if (total == 0.0) {
      return Protocol{path, Timing::identity(), std::move(label), "trivial protocol: zero adiabatic length"};
    }

    const auto table = make_table(total);
    bool refined = false;
    auto knot = knots.begin();
    auto piece = pieces.begin();
    for (std::size_t i = 0; i + 1 < table.knots.size(); ++i, ++knot, ++piece) {
      const auto next = std::next(knot);
      const double ds = table.knots[i + 1] - table.knots[i];
      const double du = next->u - knot->u;
      bool split = !(ds > 0.0);
      if (!split) {
        const double secant = du / ds;
        const double alpha = table.slopes[i] / secant;
        const double beta = table.slopes[i + 1] / secant;
        split = alpha * alpha + beta * beta > 9.0;
      }
      const double u_mid = 0.5 * (knot->u + next->u);
      double left = 0.0;
      if (!split) {
        left = segment_length(metric, path, knot->u, u_mid);
        const double s_true = (knot->cumulative + left) / total;
        const double u_error = std::abs(table.value(s_true) - u_mid);
        const double rate = overall_rate(metric, path, u_mid) * table.derivative(s_true);
        split = u_error > options.tol || std::abs(rate - total) > options.tol * total;
      }
      if (split && du > 1e-13) {
        if (left == 0.0) left = segment_length(metric, path, knot->u, u_mid);
        const double right = *piece - left;
        knots.insert(next, Knot{u_mid, overall_rate(metric, path, u_mid), 0.0});
        *piece = left;
        piece = pieces.insert(std::next(piece), std::max(right, 0.0));
        ++knot;
        refined = true;
      }
    }
    if (static_cast<int>(knots.size()) > options.max_knots) {
      throw Error("constant-rate reparametrization: knot budget exhausted");
    }
    if (!refined) {
      auto final_table = make_table(total);
      return Protocol{path,
                      Timing::hermite(std::move(final_table.knots), std::move(final_table.values),
                                      std::move(final_table.slopes)),
                      std::move(label), std::nullopt};
    }
  }
}

Protocol constant_rate_reparametrize(const ParamHamiltonian& model, const Path& path, int level,
                                     const ConstantRateOptions& options) {
  return constant_rate_reparametrize(dqgt_field(model, level), path, options);
}

// ---------------------------------------------------------------------------

double lz_optimal_protocol(double lambda0, double s) {
  return -lambda0 * (1.0 - 2.0 * s) / std::sqrt(1.0 + 4.0 * lambda0 * lambda0 * s * (1.0 - s));
}

double lz_optimal_protocol_rate(double lambda0, double s) {
  const double d = 1.0 + 4.0 * lambda0 * lambda0 * s * (1.0 - s);
  return 2.0 * lambda0 * (1.0 + lambda0 * lambda0) / (d * std::sqrt(d));
}

Protocol lz_optimal_closed_form(double lambda0) {
  if (!(lambda0 > 0.0)) throw DomainError("Landau-Zener optimal protocol: λ0 must be positive");
  RealVector a(1), b(1);
  a << -lambda0;
  b << lambda0;
  auto timing = Timing::closed_form(
      [lambda0](double s) { return (lz_optimal_protocol(lambda0, s) + lambda0) / (2.0 * lambda0); },
      [lambda0](double s) { return lz_optimal_protocol_rate(lambda0, s) / (2.0 * lambda0); });
  return Protocol{Path::linear(a, b), std::move(timing), "optimal", std::nullopt};
}

Protocol ising_optimal_protocol_finite(int sites, double coupling, double lambda_start, double lambda_end,
                                       int grid) {
  auto field = ising_metric_field(sites, coupling);
  RealVector a(1), b(1);
  a << lambda_start;
  b << lambda_end;
  if (lambda_start == lambda_end) {
    auto p = linear_protocol(a, b);
    p.label = "optimal";
    return p;
  }
  ConstantRateOptions options;
  options.initial_knots = std::max(grid, 2);
  return constant_rate_reparametrize(field, Path::linear(a, b), options);
}

double ising_optimal_protocol_thermo(IsingRegion region, double s) {
  if (!std::isfinite(s)) throw DomainError("thermodynamic-limit protocol: s must be finite");
  switch (region) {
    case IsingRegion::inside:
      return s / std::sqrt(1.0 + s * s);
    case IsingRegion::above:
    case IsingRegion::below: {
      if (!(s > 1.0)) throw DomainError("thermodynamic-limit protocol: outer regions need s > 1");
      const double value = s / std::sqrt(s * s - 1.0);
      return region == IsingRegion::above ? value : -value;
    }
  }
  return 0.0;
}

Protocol ising_thermo_protocol(double lambda_start, double lambda_end) {
  check_thermodynamic_interval(lambda_start, lambda_end);
  const double mid = 0.5 * (lambda_start + lambda_end);
  const IsingRegion region = mid > 1.0 ? IsingRegion::above : (mid < -1.0 ? IsingRegion::below : IsingRegion::inside);

  // Inverse of the region's closed form: the rescaled time that reaches λ.
  auto to_s = [region](double lambda) {
    switch (region) {
      case IsingRegion::inside: return lambda / std::sqrt(1.0 - lambda * lambda);
      case IsingRegion::above: return lambda / std::sqrt(lambda * lambda - 1.0);
      case IsingRegion::below: return -lambda / std::sqrt(lambda * lambda - 1.0);
    }
    return 0.0;
  };
  auto slope = [region](double x) {
    switch (region) {
      case IsingRegion::inside: return std::pow(1.0 + x * x, -1.5);
      case IsingRegion::above: return -std::pow(x * x - 1.0, -1.5);
      case IsingRegion::below: return std::pow(x * x - 1.0, -1.5);
    }
    return 0.0;
  };

  RealVector a(1), b(1);
  a << lambda_start;
  b << lambda_end;
  if (lambda_start == lambda_end) {
    auto p = linear_protocol(a, b);
    p.label = "optimal-thermodynamic";
    return p;
  }
  const double x0 = to_s(lambda_start);
  const double x1 = to_s(lambda_end);
  const double span = lambda_end - lambda_start;
  auto timing = Timing::closed_form(
      [=](double s) { return (ising_optimal_protocol_thermo(region, x0 + s * (x1 - x0)) - lambda_start) / span; },
      [=](double s) { return slope(x0 + s * (x1 - x0)) * (x1 - x0) / span; });
  return Protocol{Path::linear(a, b), std::move(timing), "optimal-thermodynamic", std::nullopt};
}

std::pair<Path, Path> sphere_circle_paths() {
  constexpr double pi = std::numbers::pi;
  const double h = std::sqrt(2.0) / 2.0;
  Path small(
      3,
      [h](double u) -> RealVector { return Eigen::Vector3d(h * std::cos(pi * u), h * std::sin(pi * u), h); },
      [h](double u) -> RealVector {
        return Eigen::Vector3d(-h * pi * std::sin(pi * u), h * pi * std::cos(pi * u), 0.0);
      });
  Path large(
      3,
      [](double u) -> RealVector {
        const double a = pi * (1.0 - 2.0 * u) / 4.0;
        return Eigen::Vector3d(std::sin(a), 0.0, std::cos(a));
      },
      [](double u) -> RealVector {
        const double a = pi * (1.0 - 2.0 * u) / 4.0;
        return Eigen::Vector3d(-0.5 * pi * std::cos(a), 0.0, 0.5 * pi * std::sin(a));
      });
  return {std::move(small), std::move(large)};
}

}  // namespace qgeo
