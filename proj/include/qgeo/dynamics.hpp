#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "qgeo/hamiltonians.hpp"
#include "qgeo/protocols.hpp"

namespace qgeo {

struct Tolerances {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
};

struct PropagateOptions {
  Tolerances tolerances;
  /// Output times in [0, τ], increasing. Empty means `samples` evenly spaced points.
  std::vector<double> sample_times;
  int samples = 201;
  /// Extra phase applied to eigenvector `level` at `lambda` before projecting.
  /// Probabilities must not depend on it; exposed so that can be checked.
  std::function<Complex(int level, const RealVector& lambda)> rephase;
};

/// Amplitudes c_{nl}(t) = <l(t)|ψ_n(t)> in the gauge-fixed instantaneous eigenbasis.
struct Trajectory {
  int level = 0;
  double tau = 0.0;
  std::vector<double> times;
  std::vector<ComplexVector> amplitudes;
  double norm_drift = 0.0;  // max_t |1 − Σ_l |c_{nl}(t)|²|
};

/// Integrates i dψ/dt = H(λ(t/τ)) ψ from ψ(0) = |n(0)> in the fixed computational
/// basis with an adaptive fourth-order Magnus integrator (step-doubling error control,
/// unitary steps) that lands exactly on the sample times, projecting onto the
/// instantaneous eigenbasis there.
/// Throws IntegrationError (with the failure time) if the step size collapses.
Trajectory propagate(const ParamHamiltonian& model, const Protocol& protocol, double tau, int level,
                     const PropagateOptions& options = {});

/// P_n(t) = Σ_{l≠n} |c_{nl}(t)|² for every sample.
std::vector<double> transition_probability(const Trajectory& trajectory, int level);
std::vector<double> transition_probability(const Trajectory& trajectory);

/// P_n(τ) from a propagation sampled only at the endpoints.
double final_transition_probability(const ParamHamiltonian& model, const Protocol& protocol, double tau,
                                    int level, const Tolerances& tolerances = {});

struct PhaseAccumulator {
  double dynamical = 0.0;  // τ ∫₀^{t/τ} E(s) ds
  double berry = 0.0;      // accumulated from overlap phases of consecutive eigenvectors
  double total() const { return dynamical + berry; }
};

/// First-order adiabatic perturbation theory along one protocol for initial level n.
///
/// Energies, phases and eigenvectors are tabulated once on a uniform s-grid;
/// values between grid points are completed from the nearest node to the left.
class FirstOrderAnalysis {
 public:
  FirstOrderAnalysis(const ParamHamiltonian& model, const Protocol& protocol, int level, int grid = 2048);

  int level() const { return level_; }

  /// T̃_{nl}(s) = <l|∂_s n> / (E_n − E_l) for every l (entry n is zero).
  ComplexVector rates(double s) const;
  /// T̃_n(s) = (Σ_{l≠n} |T̃_{nl}(s)|²)^{1/2}
  double overall_rate(double s) const;

  PhaseAccumulator phase(int l, double tau, double t) const;

  /// (1/τ²) Σ_{l≠n} |T̃_{nl}(t/τ) e^{−i[Φ_n(t) − Φ_l(t)]} − T̃_{nl}(0)|²
  double probability(double tau, double t) const;
  /// (1/τ²) Σ_{l≠n} (|T̃_{nl}(t/τ)| ∓ |T̃_{nl}(0)|)²  as (P₋, P₊)
  std::pair<double, double> bounds(double tau, double t) const;

 private:
  struct Node {
    EigenSystem eig;
    RealVector energy_integral;  // ∫₀^s E_l ds
    RealVector berry;            // per level
  };
  EigenSystem eigen_at(double s) const;
  std::size_t node_index(double s) const;

  const ParamHamiltonian& model_;
  Protocol protocol_;
  int level_;
  std::vector<double> grid_;
  std::vector<Node> nodes_;
  ComplexVector initial_rates_;
};

double first_order_probability(const ParamHamiltonian& model, const Protocol& protocol, double tau, int level,
                               double t);
std::pair<double, double> probability_bounds(const ParamHamiltonian& model, const Protocol& protocol,
                                             double tau, int level, double t);

/// Ground-state transition of the Ising chain assembled from independent k-blocks.
struct IsingTransition {
  std::vector<double> times;
  std::vector<double> ground_transition;  // P_g(t) = 1 − Π_k (1 − p_k(t))
  std::vector<IsingMode> modes;
  std::vector<Trajectory> mode_trajectories;  // one per mode, level 0
};

/// 1 − Π_k (1 − p_k) in mode order.
std::vector<double> combine_mode_probabilities(const std::vector<std::vector<double>>& per_mode);

}  // namespace qgeo
