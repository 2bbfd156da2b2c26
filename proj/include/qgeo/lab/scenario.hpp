#pragma once

#include <memory>
#include <span>

#include "qgeo/lab/config.hpp"
#include "qgeo/lab/csv.hpp"
#include "qgeo/parallel.hpp"

namespace qgeo::lab {

/// A model with its default path, hiding whether dynamics run on one matrix
/// family or on the independent k-blocks of the Ising chain.
class Scenario {
 public:
  explicit Scenario(const ModelSpec& spec);

  const ModelSpec& spec() const { return spec_; }
  int parameter_count() const;
  const Path& path() const { return path_; }
  MetricField metric() const;

  /// Adiabatic length of the protocol's path.
  double length(const Protocol& protocol) const;
  Protocol make_protocol(const ProtocolSpec& spec) const;
  Protocol make_protocol(ProtocolKind kind) const;

  /// P_n(τ) per τ, in input order.
  std::vector<double> final_probabilities(const Protocol& protocol, std::span<const double> taus,
                                          const Tolerances& tolerances, const ExecutionPolicy& policy) const;

  /// Columns t, s, lambda_1.., P_n, P_minus, P_plus, first_order.
  Table trajectory(const Protocol& protocol, double tau, const PropagateOptions& options,
                   const ExecutionPolicy& policy) const;

 private:
  ModelSpec spec_;
  std::shared_ptr<const ParamHamiltonian> model_;  // null for the Ising chain
  Path path_;
};

}  // namespace qgeo::lab
