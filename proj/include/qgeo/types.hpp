#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qgeo {

using Complex = std::complex<double>;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad model parameters (non-positive Δ, k outside (0, π), odd N, ...).
class InvalidModelError : public Error {
 public:
  using Error::Error;
};

/// Two adjacent levels closer than the degeneracy tolerance.
class DegenerateSpectrumError : public Error {
 public:
  DegenerateSpectrumError(const std::string& what, int lower_level, double gap)
      : Error(what), lower_level_(lower_level), gap_(gap) {}
  int lower_level() const { return lower_level_; }
  double gap() const { return gap_; }

 private:
  int lower_level_;
  double gap_;
};

/// Argument outside the domain of a closed-form expression.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Adiabatic length is infinite (path crosses a thermodynamic-limit critical point).
class DivergentLengthError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature failed to meet its tolerance.
class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, std::vector<std::string> history)
      : Error(what), history_(std::move(history)) {}
  /// One line per refinement round: interval count, estimate, error estimate.
  const std::vector<std::string>& history() const { return history_; }

 private:
  std::vector<std::string> history_;
};

/// Time integration could not proceed.
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double time) : Error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

}  // namespace qgeo
