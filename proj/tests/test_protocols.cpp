#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qgeo/protocols.hpp"

using namespace qgeo;

namespace {

constexpr double kPi = std::numbers::pi;

RealVector vec(std::initializer_list<double> values) {
  RealVector v(values.size());
  int i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

std::vector<double> unit_grid(int n) {
  std::vector<double> s(n);
  for (int i = 0; i < n; ++i) s[i] = static_cast<double>(i) / (n - 1);
  return s;
}

double rate_along(const MetricField& field, const Protocol& p, double s) {
  const RealVector v = p.velocity(s);
  return std::sqrt(v.dot(field(p.at(s)) * v));
}

}  // namespace

TEST(Linear, Examples) {
  const Protocol p = linear_protocol(vec({-10.0}), vec({10.0}));
  EXPECT_EQ(p.at(0.0)[0], -10.0);
  EXPECT_EQ(p.at(0.5)[0], 0.0);
  EXPECT_EQ(p.at(1.0)[0], 10.0);
  EXPECT_FALSE(p.warning.has_value());
  const Protocol q = linear_protocol(vec({1.0, 0.0, 0.0}), vec({0.0, 0.0, 1.0}));
  EXPECT_LT((q.at(0.5) - vec({0.5, 0.0, 0.5})).norm(), 1e-15);
  EXPECT_TRUE(linear_protocol(vec({2.0}), vec({2.0})).warning.has_value());
}

TEST(LandauZenerOptimal, ClosedFormValues) {
  EXPECT_NEAR(lz_optimal_protocol(10.0, 0.0), -10.0, 1e-14);
  EXPECT_NEAR(lz_optimal_protocol(10.0, 0.5), 0.0, 1e-14);
  EXPECT_NEAR(lz_optimal_protocol(10.0, 1.0), 10.0, 1e-14);
  EXPECT_NEAR(lz_optimal_protocol(10.0, 0.25), -5.0 / std::sqrt(76.0), 1e-14);
  // Derivative against a central difference.
  for (double s : {0.1, 0.4, 0.77}) {
    const double h = 1e-6;
    const double fd = (lz_optimal_protocol(10.0, s + h) - lz_optimal_protocol(10.0, s - h)) / (2 * h);
    EXPECT_NEAR(lz_optimal_protocol_rate(10.0, s), fd, 1e-6 * std::abs(fd));
  }
  EXPECT_THROW(lz_optimal_closed_form(0.0), DomainError);
}

TEST(LandauZenerOptimal, NumericalMatchesClosedForm) {
  const LandauZener lz(2.0);
  const Protocol numeric = constant_rate_reparametrize(lz, Path::linear(vec({-10.0}), vec({10.0})), 0);
  const Protocol closed = lz_optimal_closed_form(10.0);
  double worst = 0.0;
  for (double s : unit_grid(1000)) {
    worst = std::max(worst, std::abs(numeric.at(s)[0] - closed.at(s)[0]));
  }
  EXPECT_LT(worst, 1e-6);
  EXPECT_LT(std::abs(numeric.at(0.0)[0] + 10.0), 1e-12);
  EXPECT_LT(std::abs(numeric.at(1.0)[0] - 10.0), 1e-12);
}

TEST(LandauZenerOptimal, RateIsConstant) {
  const LandauZener lz(2.0);
  const auto field = dqgt_field(lz, 0);
  for (const Protocol& p : {constant_rate_reparametrize(lz, Path::linear(vec({-10.0}), vec({10.0})), 0),
                            lz_optimal_closed_form(10.0)}) {
    std::vector<double> rates;
    for (double s : unit_grid(1001)) rates.push_back(rate_along(field, p, s));
    double mean = 0.0;
    for (double r : rates) mean += r;
    mean /= rates.size();
    double var = 0.0;
    for (double r : rates) var += (r - mean) * (r - mean);
    const double stddev = std::sqrt(var / rates.size());
    EXPECT_LT(stddev / mean, 1e-4) << p.label;
    EXPECT_NEAR(mean, oracle::lz_length(2.0, 10.0), 1e-6);
  }
}

TEST(ConstantRate, PropertiesOnRandomFamilies) {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> draw(-1.0, 1.0);
  for (unsigned seed = 1; seed <= 5; ++seed) {
    const oracle::RandomLinearFamily family(3, 2, seed);
    const Path path = Path::linear(vec({draw(rng), draw(rng)}), vec({draw(rng), draw(rng)}));
    Protocol p = linear_protocol(path.start(), path.end());
    try {
      p = constant_rate_reparametrize(family, path, 0, {1e-7});
    } catch (const DegenerateSpectrumError&) {
      continue;
    }
    EXPECT_LT((p.at(0.0) - path.start()).norm(), 1e-12);
    EXPECT_LT((p.at(1.0) - path.end()).norm(), 1e-12);
    double previous = -1.0;
    for (double s : unit_grid(2001)) {
      const double u = p.timing(s);
      EXPECT_GT(u, previous);
      previous = u;
    }
    const auto field = dqgt_field(family, 0);
    const double length = adiabatic_length(family, path, 0, 1e-12);
    for (double s : unit_grid(101)) EXPECT_NEAR(rate_along(field, p, s), length, 1e-5 * length);
  }
}

TEST(ConstantRate, AlreadyConstantRatePathGivesIdentity) {
  const LandauZener lz(2.0);
  const Path line = Path::linear(vec({-10.0}), vec({10.0}));
  const Path optimal_path = line.reparametrized(
      [](double s) { return (lz_optimal_protocol(10.0, s) + 10.0) / 20.0; },
      [](double s) { return lz_optimal_protocol_rate(10.0, s) / 20.0; });
  const Protocol p = constant_rate_reparametrize(lz, optimal_path, 0);
  for (double s : unit_grid(500)) EXPECT_NEAR(p.timing(s), s, 1e-7);
}

TEST(ConstantRate, ZeroLengthIsFlagged) {
  const LandauZener lz(2.0);
  const Protocol p = constant_rate_reparametrize(lz, Path::linear(vec({1.0}), vec({1.0})), 0);
  EXPECT_TRUE(p.warning.has_value());
  EXPECT_EQ(p.timing(0.3), 0.3);
}

TEST(IsingOptimal, FourSitesClosedForm) {
  const Protocol p = ising_optimal_protocol_finite(4, 1.0, 2.0, 0.0);
  for (double s : unit_grid(400)) {
    const double x = (2.0 / std::sqrt(5.0)) * (1.0 - s);
    EXPECT_NEAR(p.at(s)[0], x / std::sqrt(1.0 - x * x), 1e-6) << s;
  }
}

TEST(IsingOptimal, SlowsDownNearCriticalPointAsSizeGrows) {
  double previous = std::numeric_limits<double>::infinity();
  for (int sites : {50, 100}) {
    const Protocol p = ising_optimal_protocol_finite(sites, 1.0, -5.0, 5.0);
    // Find the s where the protocol crosses λ = 1 and read its speed there.
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 60; ++i) {
      const double mid = 0.5 * (lo + hi);
      (p.at(mid)[0] < 1.0 ? lo : hi) = mid;
    }
    const double speed = p.velocity(lo)[0];
    EXPECT_LT(speed, 10.0);  // the linear protocol's speed
    EXPECT_LT(speed, previous);
    previous = speed;
  }
}

TEST(IsingOptimal, ThermodynamicBranches) {
  EXPECT_NEAR(ising_optimal_protocol_thermo(IsingRegion::inside, 0.0), 0.0, 1e-16);
  EXPECT_NEAR(ising_optimal_protocol_thermo(IsingRegion::inside, 1.0), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(ising_optimal_protocol_thermo(IsingRegion::above, 2.0), 2.0 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(ising_optimal_protocol_thermo(IsingRegion::below, 2.0), -2.0 / std::sqrt(3.0), 1e-15);
  EXPECT_THROW(ising_optimal_protocol_thermo(IsingRegion::above, 1.0), DomainError);
  EXPECT_THROW(ising_optimal_protocol_thermo(IsingRegion::below, 0.5), DomainError);
  for (double s = -5.0; s < 5.0; s += 0.1) {
    EXPECT_LT(std::abs(ising_optimal_protocol_thermo(IsingRegion::inside, s)), 1.0);
  }
  for (double s = 1.01; s < 20.0; s += 0.1) {
    EXPECT_GT(ising_optimal_protocol_thermo(IsingRegion::above, s), 1.0);
    EXPECT_LT(ising_optimal_protocol_thermo(IsingRegion::below, s), -1.0);
  }
}

TEST(IsingOptimal, ThermodynamicProtocolSegments) {
  // The thermodynamic-limit rate is proportional to |1 − λ²|^{-3/2}, so dλ/ds ∝ |1 − λ²|^{3/2}.
  const std::pair<double, double> spans[] = {{-0.8, 0.9}, {1.2, 6.0}, {-4.0, -1.5}, {5.0, 2.0}};
  for (const auto& [a, b] : spans) {
    const Protocol p = ising_thermo_protocol(a, b);
    EXPECT_NEAR(p.at(0.0)[0], a, 1e-12);
    EXPECT_NEAR(p.at(1.0)[0], b, 1e-12);
    const auto ratio = [&](double s) {
      const double x = p.at(s)[0];
      return p.velocity(s)[0] / std::pow(std::abs(1.0 - x * x), 1.5);
    };
    const double r0 = ratio(0.5);
    for (double s : unit_grid(50)) EXPECT_NEAR(ratio(s), r0, 1e-9 * std::abs(r0));
  }
  EXPECT_THROW(ising_thermo_protocol(0.0, 2.0), DivergentLengthError);
  EXPECT_THROW(ising_thermo_protocol(-1.0, -3.0), DivergentLengthError);
}

TEST(SpherePaths, GeometryAndLengthOrdering) {
  const auto [small, large] = sphere_circle_paths();
  for (double u : unit_grid(101)) {
    EXPECT_NEAR(small.point(u).norm(), 1.0, 1e-15);
    EXPECT_NEAR(large.point(u).norm(), 1.0, 1e-15);
    const double h = 1e-6;
    if (u > h && u < 1 - h) {
      EXPECT_LT((small.tangent(u) - (small.point(u + h) - small.point(u - h)) / (2 * h)).norm(), 1e-8);
      EXPECT_LT((large.tangent(u) - (large.point(u + h) - large.point(u - h)) / (2 * h)).norm(), 1e-8);
    }
  }
  EXPECT_LT((small.start() - vec({std::sqrt(0.5), 0, std::sqrt(0.5)})).norm(), 1e-15);
  EXPECT_LT((small.end() - vec({-std::sqrt(0.5), 0, std::sqrt(0.5)})).norm(), 1e-15);

  // Any perturbation of the great circle that stays on the unit sphere is no shorter.
  const TwoLevel two;
  const double geodesic = kPi / 4.0;
  std::mt19937 rng(37);
  std::uniform_real_distribution<double> amp(-0.4, 0.4);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = amp(rng), b = amp(rng);
    const int harmonic = 1 + trial % 3;
    auto raw = [&large, a, b, harmonic](double u) -> Eigen::Vector3d {
      const double bump = std::sin(harmonic * kPi * u);
      Eigen::Vector3d x = large.point(u);
      return x + Eigen::Vector3d(0.0, a * bump, b * bump * bump);
    };
    auto raw_tangent = [&large, a, b, harmonic](double u) -> Eigen::Vector3d {
      const double bump = std::sin(harmonic * kPi * u);
      const double dbump = harmonic * kPi * std::cos(harmonic * kPi * u);
      Eigen::Vector3d dx = large.tangent(u);
      return dx + Eigen::Vector3d(0.0, a * dbump, 2 * b * bump * dbump);
    };
    const Path bent(
        3, [raw](double u) -> RealVector { return raw(u).normalized(); },
        [raw, raw_tangent](double u) -> RealVector {
          const Eigen::Vector3d x = raw(u);
          const Eigen::Vector3d dx = raw_tangent(u);
          const double r = x.norm();
          return (dx - x * (x.dot(dx) / (r * r))) / r;
        });
    EXPECT_NEAR(bent.point(0.37).norm(), 1.0, 1e-15);
    EXPECT_GE(adiabatic_length(two, bent, 0, 1e-10), geodesic - 1e-9);
  }
}
