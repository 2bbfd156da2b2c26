#include "qgeo/geometry.hpp"

#include <cmath>
#include <sstream>

namespace qgeo {

RealMatrix dqgt(const ParamHamiltonian& model, const RealVector& lambda, const EigenSystem& eig, int level) {
  const int dim = model.dimension();
  const int params = model.param_count();
  if (level < 0 || level >= dim) throw Error("dqgt: level index out of range");

  // Column `level` of V† ∂_i H V, one column per parameter.
  ComplexMatrix elements(dim, params);
  const auto n_state = eig.states.col(level);
  for (int i = 0; i < params; ++i) {
    elements.col(i) = eig.states.adjoint() * (model.derivative(lambda, i) * n_state);
  }

  RealMatrix g = RealMatrix::Zero(params, params);
  for (int l = 0; l < dim; ++l) {
    if (l == level) continue;
    const double gap = eig.energies[level] - eig.energies[l];
    const double weight = 1.0 / (gap * gap * gap * gap);
    for (int i = 0; i < params; ++i) {
      for (int j = 0; j <= i; ++j) {
        const double term = weight * std::real(elements(l, i) * std::conj(elements(l, j)));
        g(i, j) += term;
        if (i != j) g(j, i) += term;
      }
    }
  }
  return g;
}

MetricTensor dqgt(const ParamHamiltonian& model, const RealVector& lambda, int level) {
  const EigenSystem eig = eigensystem(model, lambda);
  return MetricTensor{lambda, dqgt(model, lambda, eig, level)};
}

MetricField dqgt_field(const ParamHamiltonian& model, int level) {
  return [&model, level](const RealVector& lambda) { return dqgt(model, lambda, level).matrix; };
}

MetricField ising_metric_field(int sites, double coupling) {
  auto modes = ising_modes(sites, coupling);
  return [modes = std::move(modes)](const RealVector& lambda) {
    const double x = lambda[0];
    double sum = 0.0;
    for (const auto& mode : modes) {
      const double s = std::sin(mode.k);
      const double q = x * x - 2.0 * x * std::cos(mode.k) + 1.0;
      sum += s * s / (64.0 * mode.coupling * mode.coupling * q * q * q);
    }
    RealMatrix g(1, 1);
    g(0, 0) = sum;
    return g;
  };
}

double overall_rate(const MetricField& metric, const Path& path, double u) {
  const RealVector velocity = path.tangent(u);
  if (velocity.isZero(0.0)) return 0.0;
  RealMatrix g;
  try {
    g = metric(path.point(u));
  } catch (const DegenerateSpectrumError& e) {
    std::ostringstream msg;
    msg << e.what() << " (on path at u = " << u << ")";
    throw DegenerateSpectrumError(msg.str(), e.lower_level(), e.gap());
  }
  const double q = velocity.dot(g * velocity);
  return std::sqrt(std::max(q, 0.0));
}

double overall_rate(const ParamHamiltonian& model, const Path& path, double u, int level) {
  return overall_rate(dqgt_field(model, level), path, u);
}

double adiabatic_length(const MetricField& metric, const Path& path, double tol) {
  QuadratureOptions options;
  options.rel_tol = tol;
  options.abs_tol = 1e-300;
  const auto segments = path.segments();
  return integrate([&](double u) { return overall_rate(metric, path, u); }, segments, options).value;
}

double adiabatic_length(const ParamHamiltonian& model, const Path& path, int level, double tol) {
  return adiabatic_length(dqgt_field(model, level), path, tol);
}

double ising_length_density(int sites, double coupling, double lambda) {
  const auto modes = ising_modes(sites, coupling);
  double sum = 0.0;
  for (const auto& mode : modes) {
    const double q = lambda * lambda - 2.0 * lambda * std::cos(mode.k) + 1.0;
    sum += std::sin(mode.k) / (8.0 * std::abs(mode.coupling) * q * std::sqrt(q));
  }
  return sum;
}

double ising_length_mode_sum(int sites, double coupling, double lambda_start, double lambda_end, double tol) {
  ising_modes(sites, coupling);
  QuadratureOptions options;
  options.rel_tol = tol;
  options.abs_tol = 1e-300;
  const double lo = std::min(lambda_start, lambda_end);
  const double hi = std::max(lambda_start, lambda_end);
  std::vector<double> breaks{lo};
  for (double c : {-1.0, 1.0}) {
    if (c > lo && c < hi) breaks.push_back(c);
  }
  breaks.push_back(hi);
  return integrate([&](double x) { return ising_length_density(sites, coupling, x); }, breaks, options).value;
}

double ising_length(int sites, double coupling, double lambda_start, double lambda_end, double tol) {
  const auto field = ising_metric_field(sites, coupling);
  RealVector a(1), b(1);
  a << lambda_start;
  b << lambda_end;
  const Path line = Path::linear(a, b);
  // Split at the near-critical points so the peaked integrand starts resolved.
  QuadratureOptions options;
  options.rel_tol = tol;
  options.abs_tol = 1e-300;
  std::vector<double> breaks{0.0};
  for (double c : {-1.0, 1.0}) {
    const double u = (c - lambda_start) / (lambda_end - lambda_start);
    if (u > 0.0 && u < 1.0) breaks.push_back(u);
  }
  breaks.push_back(1.0);
  std::sort(breaks.begin(), breaks.end());
  return integrate([&](double u) { return overall_rate(field, line, u); }, breaks, options).value;
}

void check_thermodynamic_interval(double lambda_start, double lambda_end) {
  const double lo = std::min(lambda_start, lambda_end);
  const double hi = std::max(lambda_start, lambda_end);
  for (double c : {-1.0, 1.0}) {
    if (lo <= c && c <= hi) {
      std::ostringstream msg;
      msg << "interval [" << lo << ", " << hi << "] reaches the critical point λ = " << c
          << "; the thermodynamic-limit length diverges there";
      throw DivergentLengthError(msg.str());
    }
  }
}

MetricTensor sphere_metric(const Eigen::Vector3d& field) {
  const double r2 = field.squaredNorm();
  if (r2 == 0.0) throw DegenerateSpectrumError("sphere metric: zero field is a degeneracy", 0, 0.0);
  const Eigen::Matrix3d g = (r2 * Eigen::Matrix3d::Identity() - field * field.transpose()) / (4.0 * r2 * r2 * r2);
  return MetricTensor{RealVector(field), RealMatrix(g)};
}

}  // namespace qgeo
