#include "qgeo/dynamics.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "qgeo/quadrature.hpp"

namespace qgeo {

namespace {

const Complex kI{0.0, 1.0};

std::vector<double> resolve_samples(const PropagateOptions& options, double tau) {
  std::vector<double> times = options.sample_times;
  if (times.empty()) {
    const int n = std::max(options.samples, 2);
    times.resize(n);
    for (int i = 0; i < n; ++i) times[i] = tau * i / (n - 1);
    times.back() = tau;
  }
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < 0.0 || times[i] > tau || (i > 0 && times[i] < times[i - 1])) {
      throw Error("propagate: sample times must be increasing and lie in [0, τ]");
    }
  }
  return times;
}

ComplexMatrix basis_at(const ParamHamiltonian& model, const RealVector& lambda, const PropagateOptions& options) {
  EigenSystem eig = eigensystem(model, lambda);
  if (options.rephase) {
    for (Eigen::Index l = 0; l < eig.states.cols(); ++l) {
      eig.states.col(l) *= options.rephase(static_cast<int>(l), lambda);
    }
  }
  return eig.states;
}

}  // namespace

Trajectory propagate(const ParamHamiltonian& model, const Protocol& protocol, double tau, int level,
                     const PropagateOptions& options) {
  if (!(tau > 0.0)) throw Error("propagate: operation time τ must be positive");
  const int dim = model.dimension();
  if (level < 0 || level >= dim) throw Error("propagate: level index out of range");

  Trajectory out;
  out.level = level;
  out.tau = tau;
  out.times = resolve_samples(options, tau);

  const ComplexMatrix initial_basis = basis_at(model, protocol.at(0.0), options);
  ComplexVector psi = initial_basis.col(level);

  auto record = [&](double t, const ComplexVector& x) {
    if (t == 0.0) {
      ComplexVector unit = ComplexVector::Zero(dim);
      unit[level] = 1.0;
      out.amplitudes.push_back(unit);
      return;
    }
    const ComplexMatrix basis = basis_at(model, protocol.at(t / tau), options);
    ComplexVector c = basis.adjoint() * x;
    out.norm_drift = std::max(out.norm_drift, std::abs(1.0 - c.squaredNorm()));
    out.amplitudes.push_back(std::move(c));
  };

  // Fourth-order Magnus step: exp(-i M) with M Hermitian built from two Gauss nodes.
  const double node = std::sqrt(3.0) / 6.0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(dim);
  auto magnus = [&](const ComplexVector& x, double t0, double h) -> ComplexVector {
    const ComplexMatrix h1 = model.evaluate(protocol.at((t0 + (0.5 - node) * h) / tau));
    const ComplexMatrix h2 = model.evaluate(protocol.at((t0 + (0.5 + node) * h) / tau));
    const ComplexMatrix comm = h1 * h2 - h2 * h1;
    ComplexMatrix m = (0.5 * h) * (h1 + h2) + (kI * (std::sqrt(3.0) / 12.0 * h * h)) * comm;
    m = 0.5 * (m + m.adjoint()).eval();
    solver.compute(m);
    const ComplexMatrix& v = solver.eigenvectors();
    ComplexVector y = v.adjoint() * x;
    for (int i = 0; i < dim; ++i) y[i] *= std::polar(1.0, -solver.eigenvalues()[i]);
    return v * y;
  };

  // Step doubling: the two half steps are kept, their difference from the full step estimates the error.
  const double abs_tol = options.tolerances.abs_tol;
  const double rel_tol = options.tolerances.rel_tol;
  const double min_step = 1e-9 * tau;
  double t = 0.0;
  double dt = std::min(1e-3 * tau, 1e-2);
  for (double target : out.times) {
    while (t < target) {
      const double remaining = target - t;
      const bool clipped = dt >= remaining;
      const double step = clipped ? remaining : dt;
      const ComplexVector full = magnus(psi, t, step);
      const ComplexVector half = magnus(magnus(psi, t, 0.5 * step), t + 0.5 * step, 0.5 * step);
      double ratio = 0.0;
      for (int i = 0; i < dim; ++i) {
        const double scale = abs_tol + rel_tol * std::max(std::abs(psi[i]), std::abs(half[i]));
        ratio = std::max(ratio, std::abs(half[i] - full[i]) / (15.0 * scale));
      }
      if (!std::isfinite(ratio) || !half.allFinite()) {
        std::ostringstream msg;
        msg << "propagate: state became non-finite at t = " << t;
        throw IntegrationError(msg.str(), t);
      }
      const double factor = ratio > 0.0 ? 0.9 * std::pow(ratio, -0.2) : 4.0;
      if (ratio <= 1.0) {
        psi = half;
        t = clipped ? target : t + step;
        if (!clipped) dt = step * std::clamp(factor, 0.2, 4.0);
      } else {
        dt = step * std::clamp(factor, 0.2, 0.9);
      }
      if (t < target && !(dt > min_step)) {
        std::ostringstream msg;
        msg << "propagate: step size underflow at t = " << t;
        throw IntegrationError(msg.str(), t);
      }
    }
    record(target, psi);
  }
  return out;
}

std::vector<double> transition_probability(const Trajectory& trajectory, int level) {
  std::vector<double> p;
  p.reserve(trajectory.amplitudes.size());
  for (const auto& c : trajectory.amplitudes) {
    double sum = 0.0;
    for (Eigen::Index l = 0; l < c.size(); ++l) {
      if (l != level) sum += std::norm(c[l]);
    }
    p.push_back(std::clamp(sum, 0.0, 1.0));
  }
  return p;
}

std::vector<double> transition_probability(const Trajectory& trajectory) {
  return transition_probability(trajectory, trajectory.level);
}

double final_transition_probability(const ParamHamiltonian& model, const Protocol& protocol, double tau,
                                    int level, const Tolerances& tolerances) {
  PropagateOptions options;
  options.tolerances = tolerances;
  options.sample_times = {tau};
  return transition_probability(propagate(model, protocol, tau, level, options)).back();
}

// ---------------------------------------------------------------------------

namespace {

double energy_integral(const ParamHamiltonian& model, const Protocol& protocol, int l, double a, double b) {
  if (b <= a) return 0.0;
  QuadratureOptions options;
  options.rel_tol = 1e-13;
  options.abs_tol = 1e-14 * (b - a);
  return integrate([&](double s) { return eigensystem(model, protocol.at(s)).energies[l]; }, a, b, options).value;
}

double overlap_phase(const ComplexMatrix& from, const ComplexMatrix& to, int l) {
  return std::arg(from.col(l).dot(to.col(l)));
}

}  // namespace

FirstOrderAnalysis::FirstOrderAnalysis(const ParamHamiltonian& model, const Protocol& protocol, int level,
                                       int grid)
    : model_(model), protocol_(protocol), level_(level) {
  const int dim = model.dimension();
  if (level < 0 || level >= dim) throw Error("first-order analysis: level index out of range");
  grid = std::max(grid, 2);
  grid_.resize(grid + 1);
  for (int j = 0; j <= grid; ++j) grid_[j] = static_cast<double>(j) / grid;

  nodes_.reserve(grid_.size());
  for (std::size_t j = 0; j < grid_.size(); ++j) {
    Node node{eigen_at(grid_[j]), RealVector::Zero(dim), RealVector::Zero(dim)};
    if (j > 0) {
      const Node& prev = nodes_.back();
      for (int l = 0; l < dim; ++l) {
        node.energy_integral[l] = prev.energy_integral[l] + energy_integral(model_, protocol_, l, grid_[j - 1], grid_[j]);
        node.berry[l] = prev.berry[l] + overlap_phase(prev.eig.states, node.eig.states, l);
      }
    }
    nodes_.push_back(std::move(node));
  }
  initial_rates_ = rates(0.0);
}

EigenSystem FirstOrderAnalysis::eigen_at(double s) const { return eigensystem(model_, protocol_.at(s)); }

std::size_t FirstOrderAnalysis::node_index(double s) const {
  const double scaled = std::clamp(s, 0.0, 1.0) * (grid_.size() - 1);
  return std::min(static_cast<std::size_t>(scaled), grid_.size() - 2);
}

ComplexVector FirstOrderAnalysis::rates(double s) const {
  const RealVector lambda = protocol_.at(s);
  const EigenSystem eig = eigensystem(model_, lambda);
  const ComplexMatrix dh = model_.directional_derivative(lambda, protocol_.velocity(s));
  const ComplexVector column = eig.states.adjoint() * (dh * eig.states.col(level_));
  ComplexVector out = ComplexVector::Zero(column.size());
  for (Eigen::Index l = 0; l < column.size(); ++l) {
    if (l == level_) continue;
    const double gap = eig.energies[level_] - eig.energies[l];
    out[l] = column[l] / (gap * gap);
  }
  return out;
}

double FirstOrderAnalysis::overall_rate(double s) const { return rates(s).norm(); }

PhaseAccumulator FirstOrderAnalysis::phase(int l, double tau, double t) const {
  const double s = std::clamp(t / tau, 0.0, 1.0);
  const std::size_t j = node_index(s);
  const Node& node = nodes_[j];
  const double e_int = node.energy_integral[l] + energy_integral(model_, protocol_, l, grid_[j], s);
  const double berry = node.berry[l] + overlap_phase(node.eig.states, eigen_at(s).states, l);
  return PhaseAccumulator{tau * e_int, berry};
}

double FirstOrderAnalysis::probability(double tau, double t) const {
  const double s = std::clamp(t / tau, 0.0, 1.0);
  if (s == 0.0) return 0.0;
  const ComplexVector now = rates(s);
  const double phase_n = phase(level_, tau, t).total();
  double sum = 0.0;
  for (Eigen::Index l = 0; l < now.size(); ++l) {
    if (l == level_) continue;
    const double dphi = phase_n - phase(static_cast<int>(l), tau, t).total();
    sum += std::norm(now[l] * std::polar(1.0, -dphi) - initial_rates_[l]);
  }
  return sum / (tau * tau);
}

std::pair<double, double> FirstOrderAnalysis::bounds(double tau, double t) const {
  const double s = std::clamp(t / tau, 0.0, 1.0);
  const ComplexVector now = rates(s);
  double lower = 0.0;
  double upper = 0.0;
  for (Eigen::Index l = 0; l < now.size(); ++l) {
    if (l == level_) continue;
    const double a = std::abs(now[l]);
    const double b = std::abs(initial_rates_[l]);
    lower += (a - b) * (a - b);
    upper += (a + b) * (a + b);
  }
  return {lower / (tau * tau), upper / (tau * tau)};
}

double first_order_probability(const ParamHamiltonian& model, const Protocol& protocol, double tau, int level,
                               double t) {
  return FirstOrderAnalysis(model, protocol, level).probability(tau, t);
}

std::pair<double, double> probability_bounds(const ParamHamiltonian& model, const Protocol& protocol, double tau,
                                             int level, double t) {
  return FirstOrderAnalysis(model, protocol, level, 2).bounds(tau, t);
}

std::vector<double> combine_mode_probabilities(const std::vector<std::vector<double>>& per_mode) {
  if (per_mode.empty()) return {};
  std::vector<double> survival(per_mode.front().size(), 1.0);
  for (const auto& p : per_mode) {
    if (p.size() != survival.size()) throw Error("combine_mode_probabilities: sample counts differ");
    for (std::size_t i = 0; i < p.size(); ++i) survival[i] *= 1.0 - p[i];
  }
  for (double& v : survival) v = 1.0 - v;
  return survival;
}

}  // namespace qgeo
