#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qgeo/geometry.hpp"
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

}  // namespace

TEST(Quadrature, PolynomialsAreExact) {
  const auto r = integrate([](double x) { return std::pow(x, 20) - 3 * x * x; }, -1.0, 2.0);
  EXPECT_NEAR(r.value, (std::pow(2.0, 21) + 1.0) / 21.0 - 9.0, 1e-9);
  const Panel p = gauss_kronrod_15([](double x) { return std::pow(x, 13); }, 0.0, 1.0);
  EXPECT_NEAR(p.value, 1.0 / 14.0, 1e-15);
  EXPECT_LT(p.error, 1e-15);
}

TEST(Quadrature, PeakedIntegrandAndBreakpoints) {
  const double eps = 1e-3;
  auto f = [eps](double x) { return eps / (x * x + eps * eps); };
  const auto r = integrate(f, -1.0, 1.0, {1e-10});
  EXPECT_NEAR(r.value, 2.0 * std::atan(1.0 / eps), 1e-8);
  const double breaks[] = {-1.0, 0.0, 1.0};
  const auto split = integrate([](double x) { return std::abs(x); }, breaks);
  EXPECT_NEAR(split.value, 1.0, 1e-14);
  EXPECT_EQ(split.intervals, 2);
}

TEST(Quadrature, FailureCarriesHistory) {
  QuadratureOptions options;
  options.rel_tol = 1e-12;
  options.max_intervals = 64;
  try {
    integrate([](double x) { return 1.0 / std::sqrt(std::abs(x - 0.3141)); }, 0.0, 1.0, options);
    FAIL() << "expected QuadratureError";
  } catch (const QuadratureError& e) {
    EXPECT_FALSE(e.history().empty());
  }
  EXPECT_THROW(integrate([](double) { return std::nan(""); }, 0.0, 1.0), QuadratureError);
}

TEST(Metric, LandauZenerExamples) {
  const LandauZener lz(2.0);
  EXPECT_NEAR(dqgt(lz, vec({0.0}), 0).matrix(0, 0), 1.0 / 16.0, 1e-15);
  EXPECT_NEAR(dqgt(lz, vec({0.0}), 1).matrix(0, 0), 1.0 / 16.0, 1e-15);
  for (double lambda : {-10.0, -1.0, 0.3, 4.0}) {
    const double g0 = dqgt(lz, vec({lambda}), 0).matrix(0, 0);
    const double g1 = dqgt(lz, vec({lambda}), 1).matrix(0, 0);
    EXPECT_NEAR(g0, oracle::lz_metric(2.0, lambda), 1e-14 * g0 + 1e-300);
    EXPECT_NEAR(g0, g1, 1e-14 * g0);
  }
}

TEST(Metric, TwoLevelExample) {
  const RealMatrix g = dqgt(TwoLevel(), vec({0, 0, 1}), 0).matrix;
  RealMatrix expected = RealMatrix::Zero(3, 3);
  expected(0, 0) = expected(1, 1) = 0.25;
  EXPECT_LT((g - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Metric, AgreesWithFiniteDifferenceEigenvectors) {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> draw(-2.0, 2.0);
  const oracle::RandomLinearFamily family(4, 3, 99);
  const TwoLevel two;
  const IsingModeModel mode(IsingMode{1.1, 0.8});
  for (int trial = 0; trial < 30; ++trial) {
    const RealVector x = vec({draw(rng), draw(rng), draw(rng)});
    for (int level = 0; level < 4; ++level) {
      const RealMatrix g = dqgt(family, x, level).matrix;
      const RealMatrix ref = oracle::fd_metric(family, x, level);
      EXPECT_LT((g - ref).norm() / g.norm(), 1e-6);
    }
    const RealMatrix g2 = dqgt(two, x, 0).matrix;
    EXPECT_LT((g2 - oracle::fd_metric(two, x, 0)).norm() / g2.norm(), 1e-6);
    const RealVector x1 = vec({x[0]});
    const RealMatrix gm = dqgt(mode, x1, 0).matrix;
    EXPECT_LT((gm - oracle::fd_metric(mode, x1, 0)).norm() / gm.norm(), 1e-6);
  }
}

TEST(Metric, SymmetricPositiveSemidefinite) {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> draw(-3.0, 3.0);
  const oracle::RandomLinearFamily family(5, 4, 1234);
  const TwoLevel two;
  for (int trial = 0; trial < 1000; ++trial) {
    const RealVector x = vec({draw(rng), draw(rng), draw(rng), draw(rng)});
    const RealMatrix g = dqgt(family, x, trial % 5).matrix;
    EXPECT_LT((g - g.transpose()).cwiseAbs().maxCoeff(), 1e-14 * g.norm());
    const RealVector w = Eigen::SelfAdjointEigenSolver<RealMatrix>(g).eigenvalues();
    EXPECT_GE(w.minCoeff(), -1e-10 * g.norm());
    const RealMatrix g2 = dqgt(two, x.head(3), 0).matrix;
    EXPECT_GE(Eigen::SelfAdjointEigenSolver<RealMatrix>(g2).eigenvalues().minCoeff(), -1e-10 * g2.norm());
  }
}

TEST(Metric, SphereClosedFormMatchesGeneralRoute) {
  std::mt19937 rng(29);
  std::normal_distribution<double> normal;
  const TwoLevel two;
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Vector3d field(normal(rng), normal(rng), normal(rng));
    const RealMatrix general = dqgt(two, field, 0).matrix;
    const RealMatrix closed = sphere_metric(field).matrix;
    EXPECT_LT((general - closed).cwiseAbs().maxCoeff(), 1e-10 * closed.norm());
    EXPECT_LT((closed * field).norm(), 1e-12 * closed.norm());
  }
}

TEST(Metric, SphereCoordinateForm) {
  // On the unit sphere the metric reduces to (dθ² + sin²θ dφ²) / 4.
  for (double theta : {0.3, 1.0, 2.2}) {
    for (double phi : {0.0, 1.7, 4.0}) {
      const Eigen::Vector3d r(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta));
      const Eigen::Vector3d e_theta(std::cos(theta) * std::cos(phi), std::cos(theta) * std::sin(phi), -std::sin(theta));
      const Eigen::Vector3d e_phi(-std::sin(theta) * std::sin(phi), std::sin(theta) * std::cos(phi), 0.0);
      const RealMatrix g = sphere_metric(r).matrix;
      EXPECT_NEAR(e_theta.dot(g * e_theta), 0.25, 1e-14);
      EXPECT_NEAR(e_phi.dot(g * e_phi), 0.25 * std::sin(theta) * std::sin(theta), 1e-14);
      EXPECT_NEAR(e_theta.dot(g * e_phi), 0.0, 1e-14);
    }
  }
}

TEST(Rate, Examples) {
  const LandauZener lz(2.0);
  EXPECT_EQ(overall_rate(lz, Path::linear(vec({3.0}), vec({3.0})), 0.5, 0), 0.0);
  EXPECT_NEAR(overall_rate(lz, Path::linear(vec({-10.0}), vec({10.0})), 0.5, 0), 5.0, 1e-13);
}

TEST(Length, LandauZener) {
  const LandauZener lz(2.0);
  const double length = adiabatic_length(lz, Path::linear(vec({-10.0}), vec({10.0})), 0);
  EXPECT_NEAR(length, oracle::lz_length(2.0, 10.0), 1e-9);
  EXPECT_NEAR(length, 0.4975, 1e-4);
  EXPECT_NEAR(length, oracle::simpson([](double x) { return std::sqrt(oracle::lz_metric(2.0, x)); }, -10.0, 10.0),
              1e-9);
  EXPECT_EQ(adiabatic_length(lz, Path::linear(vec({1.0}), vec({1.0})), 0), 0.0);
}

TEST(Length, SphereCircles) {
  const auto [small, large] = sphere_circle_paths();
  const TwoLevel two;
  EXPECT_NEAR(adiabatic_length(two, small, 0, 1e-12), std::sqrt(2.0) * kPi / 4.0, 1e-9);
  EXPECT_NEAR(adiabatic_length(two, large, 0, 1e-12), kPi / 4.0, 1e-9);
  EXPECT_NEAR((small.end() - large.end()).norm(), 0.0, 1e-15);
  EXPECT_NEAR((small.start() - large.start()).norm(), 0.0, 1e-15);
}

TEST(Length, InvariantUnderReparametrization) {
  const TwoLevel two;
  const Path base = Path::linear(vec({1.0, -0.5, 0.2}), vec({-0.3, 0.8, 1.4}));
  const Path warped = base.reparametrized([](double u) { return u * u * u; },
                                          [](double u) { return 3.0 * u * u; });
  const double a = adiabatic_length(two, base, 0, 1e-12);
  const double b = adiabatic_length(two, warped, 0, 1e-12);
  EXPECT_NEAR(a, b, 1e-8);

  const LandauZener lz(2.0);
  const Path line = Path::linear(vec({-10.0}), vec({10.0}));
  const Path smooth = line.reparametrized([](double u) { return u * u * (3.0 - 2.0 * u); },
                                          [](double u) { return 6.0 * u * (1.0 - u); });
  EXPECT_NEAR(adiabatic_length(lz, line, 0, 1e-12), adiabatic_length(lz, smooth, 0, 1e-12), 1e-8);
}

TEST(Length, RandomFamilyMatchesSimpson) {
  const oracle::RandomLinearFamily family(3, 2, 4242);
  const Path path = Path::linear(vec({-0.5, 0.2}), vec({0.4, -0.1}));
  const double length = adiabatic_length(family, path, 1, 1e-12);
  const double reference = oracle::simpson(
      [&](double u) {
        const RealVector v = path.tangent(u);
        return std::sqrt(v.dot(oracle::fd_metric(family, path.point(u), 1) * v));
      },
      0.0, 1.0, 2000);
  EXPECT_NEAR(length, reference, 1e-6 * reference);
}

TEST(Ising, LengthDensityExample) {
  EXPECT_NEAR(ising_length_density(4, 1.0, 0.0), 1.0 / 8.0, 1e-15);
  EXPECT_NEAR(ising_metric_field(4, 1.0)(vec({0.0}))(0, 0), 1.0 / 64.0, 1e-16);
}

TEST(Ising, FourSitesClosedForm) {
  const double expected = 1.0 / (4.0 * std::sqrt(5.0));
  EXPECT_NEAR(ising_length(4, 1.0, 2.0, 0.0), expected, 1e-12);
  EXPECT_NEAR(ising_length_mode_sum(4, 1.0, 2.0, 0.0), expected, 1e-12);
}

TEST(Ising, PerModeReductionMatchesProductSpace) {
  for (int sites : {4, 6, 8}) {
    const IsingBlockProduct chain(sites, 1.0);
    const auto field = ising_metric_field(sites, 1.0);
    for (double lambda : {-2.5, -0.7, 0.5, 0.9, 1.4, 3.0}) {
      const double product = dqgt(chain, vec({lambda}), 0).matrix(0, 0);
      const double reduced = field(vec({lambda}))(0, 0);
      EXPECT_NEAR(product, reduced, 1e-10 * reduced) << "N=" << sites << " λ=" << lambda;
    }
    const double product_length = adiabatic_length(chain, Path::linear(vec({2.0}), vec({0.5})), 0, 1e-12);
    EXPECT_NEAR(product_length, ising_length(sites, 1.0, 2.0, 0.5, 1e-12), 1e-8);
    if (sites == 4) {
      EXPECT_NEAR(product_length, ising_length_mode_sum(sites, 1.0, 2.0, 0.5, 1e-12), 1e-8);
    } else {
      EXPECT_LT(product_length, ising_length_mode_sum(sites, 1.0, 2.0, 0.5, 1e-12));
    }
  }
}

TEST(Ising, MetricAgreesWithBlockEigenvectors) {
  for (double k : {0.4, 1.5, 2.9}) {
    const IsingModeModel mode(IsingMode{k, 1.0});
    for (double lambda : {-1.5, 0.2, 1.01}) {
      const double g = dqgt(mode, vec({lambda}), 0).matrix(0, 0);
      const double q = lambda * lambda - 2 * lambda * std::cos(k) + 1;
      EXPECT_NEAR(g, std::sin(k) * std::sin(k) / (64.0 * q * q * q), 1e-12 * g);
    }
  }
}

TEST(Ising, LengthGrowsWithSize) {
  double previous = 0.0;
  for (int sites : {10, 50, 100, 500}) {
    const double length = ising_length(sites, 1.0, -5.0, 5.0);
    EXPECT_GT(length, previous);
    previous = length;
  }
}

TEST(Ising, ThermodynamicInterval) {
  EXPECT_THROW(check_thermodynamic_interval(0.5, 1.5), DivergentLengthError);
  EXPECT_THROW(check_thermodynamic_interval(-1.0, -0.5), DivergentLengthError);
  EXPECT_THROW(check_thermodynamic_interval(3.0, -3.0), DivergentLengthError);
  EXPECT_NO_THROW(check_thermodynamic_interval(-0.9, 0.9));
  EXPECT_NO_THROW(check_thermodynamic_interval(1.1, 7.0));
}
