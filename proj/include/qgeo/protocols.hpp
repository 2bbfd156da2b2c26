#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>

#include "qgeo/geometry.hpp"
#include "qgeo/path.hpp"

namespace qgeo {

/// Strictly increasing map s ∈ [0, 1] → u ∈ [0, 1] with exact endpoints.
class Timing {
 public:
  static Timing identity();
  /// `map` and its derivative given in closed form; endpoints are pinned to 0 and 1.
  static Timing closed_form(std::function<double(double)> map, std::function<double(double)> derivative);
  /// Cubic Hermite through (s_i, u_i) with slopes du/ds.
  static Timing hermite(std::vector<double> s, std::vector<double> u, std::vector<double> slopes);

  double operator()(double s) const;
  double derivative(double s) const;
  /// Knots of a tabulated timing (empty otherwise).
  const std::vector<double>& knots() const;

 private:
  Timing() = default;
  std::function<double(double)> map_;
  std::function<double(double)> derivative_;
  std::shared_ptr<const std::vector<double>> knots_;
};

/// A path paired with a schedule; the operation time τ is supplied at run time.
struct Protocol {
  Path path;
  Timing timing;
  std::string label;
  std::optional<std::string> warning;  // set for trivial (zero-length) protocols

  RealVector at(double s) const { return path.point(timing(s)); }
  /// dλ/ds
  RealVector velocity(double s) const { return path.tangent(timing(s)) * timing.derivative(s); }
};

/// λ(s) = (1 − s) start + s end.
Protocol linear_protocol(const RealVector& start, const RealVector& end);

struct ConstantRateOptions {
  double tol = 1e-8;        // relative rate deviation and absolute u error per refinement check
  int initial_knots = 64;
  int max_knots = 1 << 20;
};

/// Timing along `path` such that T̃(s) = L for all s.
///
/// Cumulative length is tabulated on an adaptive u-grid and inverted with a
/// monotone cubic Hermite whose knot slopes are the exact du/ds = L / T̃(u).
/// Throws DivergentLengthError when the length is not finite.
Protocol constant_rate_reparametrize(const MetricField& metric, const Path& path,
                                     const ConstantRateOptions& options = {}, std::string label = "optimal");
Protocol constant_rate_reparametrize(const ParamHamiltonian& model, const Path& path, int level,
                                     const ConstantRateOptions& options = {});

/// λ_op(s) = −λ0 (1 − 2s) / sqrt(1 + 4 λ0² s (1 − s)).
double lz_optimal_protocol(double lambda0, double s);
/// d λ_op / ds = 2 λ0 (1 + λ0²) / (1 + 4 λ0² s (1 − s))^{3/2}.
double lz_optimal_protocol_rate(double lambda0, double s);
/// The closed form above as a Protocol on the path −λ0 → λ0.
Protocol lz_optimal_closed_form(double lambda0);

/// Constant-rate protocol of the finite Ising chain (metric `ising_metric_field`).
Protocol ising_optimal_protocol_finite(int sites, double coupling, double lambda_start, double lambda_end,
                                       int grid = 64);

enum class IsingRegion { below, inside, above };  // λ < −1, −1 < λ < 1, λ > 1

/// Thermodynamic-limit optimal protocol in one region, rescaled-time form:
/// below: −s/sqrt(s² − 1), inside: s/sqrt(1 + s²), above: s/sqrt(s² − 1).
/// Outer regions need s > 1. Throws DomainError otherwise.
double ising_optimal_protocol_thermo(IsingRegion region, double s);

/// Thermodynamic-limit optimal protocol between two points of one region, as a
/// Protocol on s ∈ [0, 1]. Throws DivergentLengthError if [start, end] touches ±1.
Protocol ising_thermo_protocol(double lambda_start, double lambda_end);

/// Small circle λ₁(u) = (√2/2)(cos πu, sin πu, 1) and large circle
/// λ₂(u) = (sin[π(1−2u)/4], 0, cos[π(1−2u)/4]) on the unit sphere.
std::pair<Path, Path> sphere_circle_paths();

}  // namespace qgeo
