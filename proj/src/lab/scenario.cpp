#include "qgeo/lab/scenario.hpp"

namespace qgeo::lab {

namespace {

Path default_path(const ModelSpec& spec) {
  switch (spec.kind) {
    case ModelKind::two_level: {
      auto [small, large] = sphere_circle_paths();
      return spec.path == SpherePath::small_circle ? small : large;
    }
    case ModelKind::landau_zener:
    case ModelKind::ising: {
      RealVector a(1), b(1);
      a << spec.lambda_start;
      b << spec.lambda_end;
      return Path::linear(a, b);
    }
  }
  throw UsageError("unknown model");
}

std::shared_ptr<const ParamHamiltonian> make_model(const ModelSpec& spec) {
  switch (spec.kind) {
    case ModelKind::landau_zener: return std::make_shared<LandauZener>(spec.delta);
    case ModelKind::two_level: return std::make_shared<TwoLevel>();
    case ModelKind::ising: ising_modes(spec.sites, spec.coupling); return nullptr;
  }
  return nullptr;
}

}  // namespace

Scenario::Scenario(const ModelSpec& spec) : spec_(spec), model_(make_model(spec)), path_(default_path(spec)) {}

int Scenario::parameter_count() const { return spec_.kind == ModelKind::two_level ? 3 : 1; }

MetricField Scenario::metric() const {
  if (!model_) return ising_metric_field(spec_.sites, spec_.coupling);
  auto model = model_;
  const int level = spec_.level;
  return [model, level](const RealVector& lambda) { return dqgt(*model, lambda, level).matrix; };
}

double Scenario::length(const Protocol& protocol) const {
  if (!model_ && protocol.label != "file") {
    return ising_length(spec_.sites, spec_.coupling, spec_.lambda_start, spec_.lambda_end);
  }
  return adiabatic_length(metric(), protocol.path, 1e-10);
}

Protocol Scenario::make_protocol(ProtocolKind kind) const { return make_protocol(ProtocolSpec{kind, {}}); }

Protocol Scenario::make_protocol(const ProtocolSpec& spec) const {
  switch (spec.kind) {
    case ProtocolKind::linear:
      return Protocol{path_, Timing::identity(), "linear", std::nullopt};
    case ProtocolKind::optimal:
      if (!model_) {
        return ising_optimal_protocol_finite(spec_.sites, spec_.coupling, spec_.lambda_start, spec_.lambda_end);
      }
      return constant_rate_reparametrize(metric(), path_);
    case ProtocolKind::file:
      return read_protocol_file(spec.file, parameter_count());
  }
  throw UsageError("unknown protocol kind");
}

std::vector<double> Scenario::final_probabilities(const Protocol& protocol, std::span<const double> taus,
                                                  const Tolerances& tolerances,
                                                  const ExecutionPolicy& policy) const {
  if (!model_) {
    return ising_sweep_final_probability(spec_.sites, spec_.coupling, protocol, taus, tolerances, policy);
  }
  return sweep_final_probability(*model_, protocol, taus, spec_.level, tolerances, policy);
}

Table Scenario::trajectory(const Protocol& protocol, double tau, const PropagateOptions& options,
                           const ExecutionPolicy& policy) const {
  std::vector<double> times;
  std::vector<double> probability;
  std::vector<double> first;
  std::vector<double> lower;
  std::vector<double> upper;
  if (!model_) {
    const IsingTransition run = ising_ground_transition(spec_.sites, spec_.coupling, protocol, tau, options, policy);
    times = run.times;
    probability = run.ground_transition;
    const IsingFirstOrder approx = ising_first_order(spec_.sites, spec_.coupling, protocol, tau, times, policy);
    first = approx.first_order;
    lower = approx.lower;
    upper = approx.upper;
  } else {
    const Trajectory run = propagate(*model_, protocol, tau, spec_.level, options);
    times = run.times;
    probability = transition_probability(run);
    const FirstOrderAnalysis analysis(*model_, protocol, spec_.level);
    for (double t : times) {
      first.push_back(analysis.probability(tau, t));
      const auto [lo, hi] = analysis.bounds(tau, t);
      lower.push_back(lo);
      upper.push_back(hi);
    }
  }

  Table table;
  table.header = {"t", "s"};
  for (int i = 1; i <= parameter_count(); ++i) table.header.push_back("lambda_" + std::to_string(i));
  for (const char* name : {"P_n", "P_minus", "P_plus", "first_order"}) table.header.push_back(name);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double s = times[i] / tau;
    const RealVector lambda = protocol.at(s);
    std::vector<double> row{times[i], s};
    row.insert(row.end(), lambda.data(), lambda.data() + lambda.size());
    row.insert(row.end(), {probability[i], lower[i], upper[i], first[i]});
    table.add(std::move(row));
  }
  return table;
}

}  // namespace qgeo::lab
