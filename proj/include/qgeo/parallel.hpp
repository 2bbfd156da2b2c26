#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "qgeo/dynamics.hpp"

namespace qgeo {

/// Parallel kernels and their serial references.
///
/// Each kernel writes result i into slot i and reduces in index order, so the
/// serial and OpenMP variants return bit-identical values for any worker count.
enum class Execution { serial, parallel };

struct ExecutionPolicy {
  Execution mode = Execution::parallel;
  int workers = 0;  // 0: OpenMP default
};

inline constexpr ExecutionPolicy kSerial{Execution::serial, 1};

/// Calls job(i) for i ∈ [0, count). Exceptions are collected per index and the
/// lowest-index one is rethrown after the loop.
void for_each_index(std::size_t count, const ExecutionPolicy& policy, const std::function<void(std::size_t)>& job);

/// P_n(τ) for every τ.
std::vector<double> sweep_final_probability(const ParamHamiltonian& model, const Protocol& protocol,
                                            std::span<const double> taus, int level, const Tolerances& tolerances,
                                            const ExecutionPolicy& policy = {});

/// Propagates every k-block of the chain and combines P_g(t) = 1 − Π_k (1 − p_k(t)).
/// A failing mode is reported in an IntegrationError naming its k.
IsingTransition ising_ground_transition(int sites, double coupling, const Protocol& protocol, double tau,
                                        const PropagateOptions& options = {}, const ExecutionPolicy& policy = {});

/// P_g(τ) of the chain for every τ.
std::vector<double> ising_sweep_final_probability(int sites, double coupling, const Protocol& protocol,
                                                  std::span<const double> taus, const Tolerances& tolerances,
                                                  const ExecutionPolicy& policy = {});

/// First-order P_g(t) of the chain and its bounds, summed over modes: (first, P₋, P₊) per time.
struct IsingFirstOrder {
  std::vector<double> first_order;
  std::vector<double> lower;
  std::vector<double> upper;
};
IsingFirstOrder ising_first_order(int sites, double coupling, const Protocol& protocol, double tau,
                                  std::span<const double> times, const ExecutionPolicy& policy = {});

/// Root-sum-of-squares adiabatic length of the chain for each site number.
std::vector<double> ising_lengths(std::span<const int> sites, double coupling, double lambda_start,
                                  double lambda_end, const ExecutionPolicy& policy = {});

}  // namespace qgeo
