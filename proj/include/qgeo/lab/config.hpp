#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qgeo/dynamics.hpp"

namespace qgeo::lab {

/// Malformed command line or configuration (exit code 1).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// File could not be read or written (exit code 2).
class IoError : public Error {
 public:
  using Error::Error;
};

enum class ModelKind { landau_zener, two_level, ising };
enum class ProtocolKind { linear, optimal, file };
enum class SpherePath { small_circle, large_circle };

struct ModelSpec {
  ModelKind kind = ModelKind::landau_zener;
  double delta = 2.0;          // landau_zener
  double coupling = 1.0;       // ising J
  int sites = 50;              // ising N
  double lambda_start = -10.0; // landau_zener, ising
  double lambda_end = 10.0;
  SpherePath path = SpherePath::large_circle;  // two_level
  int level = 0;
};

struct ProtocolSpec {
  ProtocolKind kind = ProtocolKind::optimal;
  std::string file;  // for ProtocolKind::file
};

struct RunSpec {
  std::vector<double> taus;
  Tolerances tolerances;
  int samples = 201;
  int workers = 0;
  std::string out = "results";
};

/// One experiment. Text form (sections and keys):
///
///   [model]    name = lz | two_level | ising, level,
///              lz: delta, lambda_start, lambda_end
///              ising: J, N, lambda_start, lambda_end
///              two_level: path = small_circle | large_circle
///   [protocol] kind = linear | optimal | file, file = <csv>
///   [run]      tau = <list> or tau_min, tau_max, tau_count;
///              abs_tol, rel_tol, samples, workers, out
///
/// A [manifest] section is ignored so run manifests can be fed back in.
struct ExperimentConfig {
  ModelSpec model;
  ProtocolSpec protocol;
  RunSpec run;
};

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

/// Canonical text form; parse_config(echo(c)) reproduces c exactly.
std::string echo(const ExperimentConfig& config);

/// Rejects non-positive τ, fewer than two samples and bad tolerances.
void validate(const ExperimentConfig& config);

std::string to_string(ModelKind kind);
std::string to_string(ProtocolKind kind);
std::string to_string(SpherePath path);

}  // namespace qgeo::lab
