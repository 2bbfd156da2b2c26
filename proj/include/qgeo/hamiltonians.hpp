#pragma once

#include <memory>
#include <vector>

#include "qgeo/types.hpp"

namespace qgeo {

inline constexpr double kDegeneracyTolerance = 1e-10;

/// A Hermitian matrix family H(λ) with analytic parameter derivatives.
///
/// Implementations are immutable and safe to share between threads.
class ParamHamiltonian {
 public:
  virtual ~ParamHamiltonian() = default;

  virtual int dimension() const = 0;
  virtual int param_count() const = 0;
  virtual ComplexMatrix evaluate(const RealVector& lambda) const = 0;
  /// ∂H/∂λ_i at `lambda`.
  virtual ComplexMatrix derivative(const RealVector& lambda, int i) const = 0;

  /// Σ_i velocity_i ∂H/∂λ_i.
  ComplexMatrix directional_derivative(const RealVector& lambda, const RealVector& velocity) const;
};

/// Sorted spectrum with gauge-fixed eigenvectors at one parameter point.
///
/// Gauge: in every column the entry of largest modulus is real and positive;
/// a tie on modulus goes to the lowest row index.
struct EigenSystem {
  RealVector energies;    // ascending
  ComplexMatrix states;   // column n is |n>
  double gap_min = 0.0;   // smallest adjacent spacing (inf for dimension 1)
};

EigenSystem eigensystem(const ComplexMatrix& hamiltonian,
                        double degeneracy_tolerance = kDegeneracyTolerance);
EigenSystem eigensystem(const ParamHamiltonian& model, const RealVector& lambda,
                        double degeneracy_tolerance = kDegeneracyTolerance);

/// Rotate `vector` so that its largest-modulus entry is real and positive.
void fix_gauge(Eigen::Ref<ComplexVector> vector);

// ---------------------------------------------------------------------------
// Landau-Zener: H = (Δ/2)(σx + λσz)

ComplexMatrix lz_hamiltonian(double delta, double lambda);

class LandauZener final : public ParamHamiltonian {
 public:
  explicit LandauZener(double delta);
  int dimension() const override { return 2; }
  int param_count() const override { return 1; }
  ComplexMatrix evaluate(const RealVector& lambda) const override;
  ComplexMatrix derivative(const RealVector& lambda, int i) const override;
  double delta() const { return delta_; }

 private:
  double delta_;
};

// ---------------------------------------------------------------------------
// General two-level system: H = (1/2)(λx σx + λy σy + λz σz)

ComplexMatrix two_level_hamiltonian(const Eigen::Vector3d& field);

class TwoLevel final : public ParamHamiltonian {
 public:
  int dimension() const override { return 2; }
  int param_count() const override { return 3; }
  ComplexMatrix evaluate(const RealVector& lambda) const override;
  ComplexMatrix derivative(const RealVector& lambda, int i) const override;
};

// ---------------------------------------------------------------------------
// Transverse-field Ising chain, periodic, even N, reduced to 2x2 k-blocks.
//
// Block basis: row/column 0 = |0_k 0_-k>, row/column 1 = |1_k 1_-k>.

struct IsingMode {
  double k = 0.0;         // wavenumber in (0, π)
  double coupling = 1.0;  // J

  /// ε_k = 2J (λ² − 2λ cos k + 1)^{1/2}
  double quasiparticle_energy(double lambda) const;
};

/// Throws InvalidModelError unless k ∈ (0, π) and J ≠ 0.
void validate(const IsingMode& mode);

/// Modes k = 2π/N, 4π/N, …, π − 2π/N. Requires N even and N ≥ 4.
std::vector<IsingMode> ising_modes(int sites, double coupling);

ComplexMatrix ising_mode_hamiltonian(const IsingMode& mode, double lambda);

struct BogoliubovCoefficients {
  double u = 1.0;      // cos(θ_k/2)
  double v = 0.0;      // sin(θ_k/2)
  double theta = 0.0;  // θ_k ∈ (0, π), θ_k → 0 as λ → +∞
};

/// u_k, v_k with tan θ_k = sin k / (λ − cos k), θ_k taken on the continuous branch.
BogoliubovCoefficients ising_ground_coefficients(const IsingMode& mode, double lambda);

/// Ground state of `ising_mode_hamiltonian` written with the Bogoliubov
/// coefficients: v|00> − i u|11>. (The state u|00> + i v|11> is the upper
/// level of the block as written; the two are swapped by the sign of the
/// Nambu-to-Fock mapping and carry identical transition probabilities.)
ComplexVector ising_block_ground_state(const IsingMode& mode, double lambda);

class IsingModeModel final : public ParamHamiltonian {
 public:
  explicit IsingModeModel(IsingMode mode);
  int dimension() const override { return 2; }
  int param_count() const override { return 1; }
  ComplexMatrix evaluate(const RealVector& lambda) const override;
  ComplexMatrix derivative(const RealVector& lambda, int i) const override;
  const IsingMode& mode() const { return mode_; }

 private:
  IsingMode mode_;
};

/// Σ_k H_k on the tensor product of the retained k-blocks (dimension 2^{N/2−1}).
/// Only meant for small N; used to check the per-mode reduction of the metric.
class IsingBlockProduct final : public ParamHamiltonian {
 public:
  IsingBlockProduct(int sites, double coupling);
  int dimension() const override { return dimension_; }
  int param_count() const override { return 1; }
  ComplexMatrix evaluate(const RealVector& lambda) const override;
  ComplexMatrix derivative(const RealVector& lambda, int i) const override;
  const std::vector<IsingMode>& modes() const { return modes_; }

 private:
  ComplexMatrix embed(const std::vector<ComplexMatrix>& blocks) const;

  std::vector<IsingMode> modes_;
  int dimension_;
};

}  // namespace qgeo
