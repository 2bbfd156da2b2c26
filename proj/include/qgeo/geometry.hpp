#pragma once

#include <functional>

#include "qgeo/hamiltonians.hpp"
#include "qgeo/path.hpp"
#include "qgeo/quadrature.hpp"

namespace qgeo {

/// Dynamical quantum geometric tensor at one point (symmetric, PSD; time² per unit λ²).
struct MetricTensor {
  RealVector point;
  RealMatrix matrix;
};

/// g_{n,ij} = Re Σ_{l≠n} <l|∂_i H|n><n|∂_j H|l> / (E_n − E_l)^4
MetricTensor dqgt(const ParamHamiltonian& model, const RealVector& lambda, int level);

/// Same tensor from an already computed eigensystem.
RealMatrix dqgt(const ParamHamiltonian& model, const RealVector& lambda, const EigenSystem& eig, int level);

/// λ ↦ g(λ). Anything with a metric can drive lengths and constant-rate protocols.
using MetricField = std::function<RealMatrix(const RealVector&)>;

/// Field backed by `dqgt`. `model` must outlive the returned field.
MetricField dqgt_field(const ParamHamiltonian& model, int level);

/// Ising chain metric as the per-mode sum Σ_k sin²k / (64 J² (λ² − 2λ cos k + 1)³).
MetricField ising_metric_field(int sites, double coupling);

/// T̃(u) = sqrt(λ'(u)ᵀ g(λ(u)) λ'(u)).
double overall_rate(const MetricField& metric, const Path& path, double u);
double overall_rate(const ParamHamiltonian& model, const Path& path, double u, int level);

/// ∫₀¹ T̃(u) du by adaptive Gauss-Kronrod to relative tolerance `tol`.
double adiabatic_length(const MetricField& metric, const Path& path, double tol = 1e-8);
double adiabatic_length(const ParamHamiltonian& model, const Path& path, int level, double tol = 1e-8);

/// dL/dλ = Σ_{k>0} sin k / (8 J (λ² − 2λ cos k + 1)^{3/2}): the per-mode sum of rates.
double ising_length_density(int sites, double coupling, double lambda);

/// ∫ |ising_length_density| dλ between the endpoints.
double ising_length_mode_sum(int sites, double coupling, double lambda_start, double lambda_end,
                             double tol = 1e-10);

/// Length under `ising_metric_field` (root of the summed squared per-mode rates).
double ising_length(int sites, double coupling, double lambda_start, double lambda_end, double tol = 1e-10);

/// Thermodynamic-limit chain: throws DivergentLengthError when [a, b] touches λ = ±1.
void check_thermodynamic_interval(double lambda_start, double lambda_end);

/// Closed-form two-level metric (1/(4|λ|⁶)) (|λ|² I − λλᵀ).
MetricTensor sphere_metric(const Eigen::Vector3d& field);

}  // namespace qgeo
