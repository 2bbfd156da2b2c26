#include "qgeo/hamiltonians.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace qgeo {

namespace {

const Complex kI{0.0, 1.0};

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << 0.0, -kI, kI, 0.0;
  return m;
}

ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

void require_params(const RealVector& lambda, int expected, const char* model) {
  if (lambda.size() != expected) {
    std::ostringstream msg;
    msg << model << ": expected " << expected << " control parameter(s), got " << lambda.size();
    throw InvalidModelError(msg.str());
  }
}

void require_index(int i, int count, const char* model) {
  if (i < 0 || i >= count) {
    std::ostringstream msg;
    msg << model << ": derivative index " << i << " out of range";
    throw InvalidModelError(msg.str());
  }
}

}  // namespace

ComplexMatrix ParamHamiltonian::directional_derivative(const RealVector& lambda,
                                                       const RealVector& velocity) const {
  ComplexMatrix out = ComplexMatrix::Zero(dimension(), dimension());
  for (int i = 0; i < param_count(); ++i) {
    if (velocity[i] != 0.0) out += velocity[i] * derivative(lambda, i);
  }
  return out;
}

void fix_gauge(Eigen::Ref<ComplexVector> vector) {
  Eigen::Index best = 0;
  double best_abs = std::abs(vector[0]);
  for (Eigen::Index i = 1; i < vector.size(); ++i) {
    const double a = std::abs(vector[i]);
    if (a > best_abs * (1.0 + 1e-12)) {
      best = i;
      best_abs = a;
    }
  }
  if (best_abs == 0.0) return;
  vector *= std::conj(vector[best]) / best_abs;
  vector[best] = best_abs;
}

EigenSystem eigensystem(const ComplexMatrix& hamiltonian, double degeneracy_tolerance) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hamiltonian);
  if (solver.info() != Eigen::Success) {
    throw Error("eigensystem: Hermitian eigensolver did not converge");
  }
  EigenSystem out;
  out.energies = solver.eigenvalues();
  out.states = solver.eigenvectors();
  out.gap_min = std::numeric_limits<double>::infinity();
  for (Eigen::Index n = 0; n + 1 < out.energies.size(); ++n) {
    const double gap = out.energies[n + 1] - out.energies[n];
    if (gap <= degeneracy_tolerance) {
      std::ostringstream msg;
      msg << "degenerate spectrum: levels " << n << " and " << n + 1 << " differ by " << gap;
      throw DegenerateSpectrumError(msg.str(), static_cast<int>(n), gap);
    }
    out.gap_min = std::min(out.gap_min, gap);
  }
  for (Eigen::Index n = 0; n < out.states.cols(); ++n) fix_gauge(out.states.col(n));
  return out;
}

EigenSystem eigensystem(const ParamHamiltonian& model, const RealVector& lambda,
                        double degeneracy_tolerance) {
  return eigensystem(model.evaluate(lambda), degeneracy_tolerance);
}

// ---------------------------------------------------------------------------

ComplexMatrix lz_hamiltonian(double delta, double lambda) {
  if (!(delta > 0.0)) throw InvalidModelError("Landau-Zener: Δ must be positive");
  return 0.5 * delta * (pauli_x() + lambda * pauli_z());
}

LandauZener::LandauZener(double delta) : delta_(delta) {
  if (!(delta > 0.0)) throw InvalidModelError("Landau-Zener: Δ must be positive");
}

ComplexMatrix LandauZener::evaluate(const RealVector& lambda) const {
  require_params(lambda, 1, "Landau-Zener");
  return lz_hamiltonian(delta_, lambda[0]);
}

ComplexMatrix LandauZener::derivative(const RealVector& lambda, int i) const {
  require_params(lambda, 1, "Landau-Zener");
  require_index(i, 1, "Landau-Zener");
  return 0.5 * delta_ * pauli_z();
}

// ---------------------------------------------------------------------------

ComplexMatrix two_level_hamiltonian(const Eigen::Vector3d& field) {
  if (field.norm() == 0.0) {
    throw DegenerateSpectrumError("two-level: zero field gives a degenerate spectrum", 0, 0.0);
  }
  return 0.5 * (field.x() * pauli_x() + field.y() * pauli_y() + field.z() * pauli_z());
}

ComplexMatrix TwoLevel::evaluate(const RealVector& lambda) const {
  require_params(lambda, 3, "two-level");
  return two_level_hamiltonian(Eigen::Vector3d(lambda[0], lambda[1], lambda[2]));
}

ComplexMatrix TwoLevel::derivative(const RealVector& lambda, int i) const {
  require_params(lambda, 3, "two-level");
  require_index(i, 3, "two-level");
  switch (i) {
    case 0: return 0.5 * pauli_x();
    case 1: return 0.5 * pauli_y();
    default: return 0.5 * pauli_z();
  }
}

// ---------------------------------------------------------------------------

double IsingMode::quasiparticle_energy(double lambda) const {
  return 2.0 * coupling * std::sqrt(lambda * lambda - 2.0 * lambda * std::cos(k) + 1.0);
}

void validate(const IsingMode& mode) {
  if (!(mode.k > 0.0 && mode.k < std::numbers::pi)) {
    std::ostringstream msg;
    msg << "Ising mode: k = " << mode.k << " outside (0, π)";
    throw InvalidModelError(msg.str());
  }
  if (!(mode.coupling != 0.0) || !std::isfinite(mode.coupling)) {
    throw InvalidModelError("Ising mode: coupling J must be finite and non-zero");
  }
}

std::vector<IsingMode> ising_modes(int sites, double coupling) {
  if (sites < 4 || sites % 2 != 0) {
    throw InvalidModelError("Ising chain: site number must be even and at least 4");
  }
  std::vector<IsingMode> modes;
  modes.reserve(sites / 2 - 1);
  for (int m = 1; m < sites / 2; ++m) {
    IsingMode mode{2.0 * std::numbers::pi * m / sites, coupling};
    validate(mode);
    modes.push_back(mode);
  }
  return modes;
}

ComplexMatrix ising_mode_hamiltonian(const IsingMode& mode, double lambda) {
  validate(mode);
  const double c = std::cos(mode.k);
  const double s = std::sin(mode.k);
  ComplexMatrix h(2, 2);
  h << lambda - c, -kI * s, kI * s, -lambda + c;
  return 2.0 * mode.coupling * h;
}

BogoliubovCoefficients ising_ground_coefficients(const IsingMode& mode, double lambda) {
  validate(mode);
  BogoliubovCoefficients out;
  out.theta = std::atan2(std::sin(mode.k), lambda - std::cos(mode.k));
  out.u = std::cos(0.5 * out.theta);
  out.v = std::sin(0.5 * out.theta);
  return out;
}

ComplexVector ising_block_ground_state(const IsingMode& mode, double lambda) {
  const auto c = ising_ground_coefficients(mode, lambda);
  ComplexVector g(2);
  g << c.v, -kI * c.u;
  return g;
}

IsingModeModel::IsingModeModel(IsingMode mode) : mode_(mode) { validate(mode_); }

ComplexMatrix IsingModeModel::evaluate(const RealVector& lambda) const {
  require_params(lambda, 1, "Ising mode");
  return ising_mode_hamiltonian(mode_, lambda[0]);
}

ComplexMatrix IsingModeModel::derivative(const RealVector& lambda, int i) const {
  require_params(lambda, 1, "Ising mode");
  require_index(i, 1, "Ising mode");
  return 2.0 * mode_.coupling * pauli_z();
}

// ---------------------------------------------------------------------------

IsingBlockProduct::IsingBlockProduct(int sites, double coupling)
    : modes_(ising_modes(sites, coupling)), dimension_(1 << modes_.size()) {
  if (modes_.size() > 12) throw InvalidModelError("Ising block product: N too large for dense product space");
}

ComplexMatrix IsingBlockProduct::embed(const std::vector<ComplexMatrix>& blocks) const {
  const int count = static_cast<int>(blocks.size());
  ComplexMatrix out = ComplexMatrix::Zero(dimension_, dimension_);
  for (int m = 0; m < count; ++m) {
    const int shift = count - 1 - m;
    const int mask = 1 << shift;
    for (int col = 0; col < dimension_; ++col) {
      const int bit = (col >> shift) & 1;
      for (int new_bit = 0; new_bit < 2; ++new_bit) {
        const int row = (col & ~mask) | (new_bit << shift);
        out(row, col) += blocks[m](new_bit, bit);
      }
    }
  }
  return out;
}

ComplexMatrix IsingBlockProduct::evaluate(const RealVector& lambda) const {
  require_params(lambda, 1, "Ising block product");
  std::vector<ComplexMatrix> blocks;
  blocks.reserve(modes_.size());
  for (const auto& mode : modes_) blocks.push_back(ising_mode_hamiltonian(mode, lambda[0]));
  return embed(blocks);
}

ComplexMatrix IsingBlockProduct::derivative(const RealVector& lambda, int i) const {
  require_params(lambda, 1, "Ising block product");
  require_index(i, 1, "Ising block product");
  std::vector<ComplexMatrix> blocks;
  blocks.reserve(modes_.size());
  for (const auto& mode : modes_) blocks.push_back(2.0 * mode.coupling * pauli_z());
  return embed(blocks);
}

}  // namespace qgeo
