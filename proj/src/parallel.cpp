#include "qgeo/parallel.hpp"

#include <exception>
#include <sstream>

#include <omp.h>

#include "qgeo/geometry.hpp"

namespace qgeo {

void for_each_index(std::size_t count, const ExecutionPolicy& policy, const std::function<void(std::size_t)>& job) {
  std::vector<std::exception_ptr> errors(count);
  if (policy.mode == Execution::serial) {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        job(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    const int threads = policy.workers > 0 ? policy.workers : omp_get_max_threads();
    const auto n = static_cast<long>(count);
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (long i = 0; i < n; ++i) {
      try {
        job(static_cast<std::size_t>(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<double> sweep_final_probability(const ParamHamiltonian& model, const Protocol& protocol,
                                            std::span<const double> taus, int level, const Tolerances& tolerances,
                                            const ExecutionPolicy& policy) {
  std::vector<double> out(taus.size());
  for_each_index(taus.size(), policy, [&](std::size_t i) {
    out[i] = final_transition_probability(model, protocol, taus[i], level, tolerances);
  });
  return out;
}

IsingTransition ising_ground_transition(int sites, double coupling, const Protocol& protocol, double tau,
                                        const PropagateOptions& options, const ExecutionPolicy& policy) {
  IsingTransition out;
  out.modes = ising_modes(sites, coupling);
  out.mode_trajectories.resize(out.modes.size());
  std::vector<std::string> failures(out.modes.size());
  std::vector<double> failure_times(out.modes.size(), 0.0);

  for_each_index(out.modes.size(), policy, [&](std::size_t m) {
    try {
      const IsingModeModel model(out.modes[m]);
      out.mode_trajectories[m] = propagate(model, protocol, tau, 0, options);
    } catch (const IntegrationError& e) {
      failures[m] = e.what();
      failure_times[m] = e.time();
    } catch (const std::exception& e) {
      failures[m] = e.what();
    }
  });

  std::ostringstream msg;
  double first_time = -1.0;
  for (std::size_t m = 0; m < failures.size(); ++m) {
    if (failures[m].empty()) continue;
    if (first_time < 0.0) first_time = failure_times[m];
    msg << "mode k = " << out.modes[m].k << ": " << failures[m] << "; ";
  }
  if (first_time >= 0.0) throw IntegrationError("Ising chain propagation failed: " + msg.str(), first_time);

  std::vector<std::vector<double>> per_mode;
  per_mode.reserve(out.modes.size());
  for (const auto& trajectory : out.mode_trajectories) per_mode.push_back(transition_probability(trajectory));
  out.times = out.mode_trajectories.front().times;
  out.ground_transition = combine_mode_probabilities(per_mode);
  return out;
}

std::vector<double> ising_sweep_final_probability(int sites, double coupling, const Protocol& protocol,
                                                  std::span<const double> taus, const Tolerances& tolerances,
                                                  const ExecutionPolicy& policy) {
  const auto modes = ising_modes(sites, coupling);
  const std::size_t count = modes.size();
  // Flattened (τ, mode) jobs keep all workers busy for short sweeps too.
  std::vector<double> p(taus.size() * count);
  for_each_index(p.size(), policy, [&](std::size_t job) {
    const std::size_t t = job / count;
    const std::size_t m = job % count;
    const IsingModeModel model(modes[m]);
    try {
      p[job] = final_transition_probability(model, protocol, taus[t], 0, tolerances);
    } catch (const IntegrationError& e) {
      std::ostringstream msg;
      msg << "mode k = " << modes[m].k << ", τ = " << taus[t] << ": " << e.what();
      throw IntegrationError(msg.str(), e.time());
    }
  });
  std::vector<double> out(taus.size());
  for (std::size_t t = 0; t < taus.size(); ++t) {
    double survival = 1.0;
    for (std::size_t m = 0; m < count; ++m) survival *= 1.0 - p[t * count + m];
    out[t] = 1.0 - survival;
  }
  return out;
}

IsingFirstOrder ising_first_order(int sites, double coupling, const Protocol& protocol, double tau,
                                  std::span<const double> times, const ExecutionPolicy& policy) {
  const auto modes = ising_modes(sites, coupling);
  std::vector<IsingFirstOrder> per_mode(modes.size());
  for_each_index(modes.size(), policy, [&](std::size_t m) {
    const IsingModeModel model(modes[m]);
    const FirstOrderAnalysis analysis(model, protocol, 0);
    auto& slot = per_mode[m];
    for (double t : times) {
      slot.first_order.push_back(analysis.probability(tau, t));
      const auto [lo, hi] = analysis.bounds(tau, t);
      slot.lower.push_back(lo);
      slot.upper.push_back(hi);
    }
  });
  IsingFirstOrder out;
  out.first_order.assign(times.size(), 0.0);
  out.lower.assign(times.size(), 0.0);
  out.upper.assign(times.size(), 0.0);
  for (const auto& slot : per_mode) {
    for (std::size_t i = 0; i < times.size(); ++i) {
      out.first_order[i] += slot.first_order[i];
      out.lower[i] += slot.lower[i];
      out.upper[i] += slot.upper[i];
    }
  }
  return out;
}

std::vector<double> ising_lengths(std::span<const int> sites, double coupling, double lambda_start,
                                  double lambda_end, const ExecutionPolicy& policy) {
  std::vector<double> out(sites.size());
  for_each_index(sites.size(), policy, [&](std::size_t i) {
    out[i] = ising_length(sites[i], coupling, lambda_start, lambda_end);
  });
  return out;
}

}  // namespace qgeo
