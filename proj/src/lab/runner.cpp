#include "qgeo/lab/runner.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <sstream>

#include "qgeo/lab/csv.hpp"
#include "qgeo/lab/scenario.hpp"
#include "qgeo/lab/svg.hpp"

#ifndef QGEO_VERSION
#define QGEO_VERSION "unknown"
#endif

namespace qgeo::lab {

namespace {

using Clock = std::chrono::steady_clock;

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

ExecutionPolicy policy_for(int workers) { return ExecutionPolicy{Execution::parallel, workers}; }

struct Manifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> entries;
  std::string config_echo;
};

void write_manifest(const std::string& path, const Manifest& manifest, const RunReport& report, Clock::time_point start) {
  const double wall = std::chrono::duration<double>(Clock::now() - start).count();
  std::ostringstream out;
  out << "[manifest]\n";
  out << "command = " << manifest.command << "\n";
  out << "version = " << QGEO_VERSION << "\n";
  out << "wall_time_seconds = " << format_double(wall) << "\n";
  for (const auto& [key, value] : manifest.entries) out << key << " = " << value << "\n";
  for (std::size_t i = 0; i < report.files.size(); ++i) {
    out << "file_" << i << " = " << std::filesystem::path(report.files[i]).filename().string() << "\n";
  }
  for (std::size_t i = 0; i < report.failures.size(); ++i) {
    std::string flat = report.failures[i];
    for (char& c : flat) {
      if (c == '\n') c = ' ';
    }
    out << "failure_" << i << " = " << flat << "\n";
  }
  if (!manifest.config_echo.empty()) out << "\n" << manifest.config_echo;
  write_text(path, out.str());
}

void emit(RunReport& report, const std::string& path, const std::string& content) {
  write_text(path, content);
  report.files.push_back(path);
}

void emit_chart(RunReport& report, const std::string& path, const Table& table, const std::string& title,
                std::size_t x_column, std::vector<std::size_t> y_columns, bool log_y) {
  Chart chart{title, table.header[x_column], "", log_y, {}};
  const auto x = table.column(x_column);
  for (std::size_t c : y_columns) chart.series.push_back(Series{table.header[c], x, table.column(c)});
  emit(report, path, render_svg(chart));
}

std::vector<double> range(double lo, double hi, double step) {
  std::vector<double> out;
  const int n = static_cast<int>(std::llround((hi - lo) / step));
  for (int i = 0; i <= n; ++i) out.push_back(lo + step * i);
  return out;
}

/// P(τ) for each τ; rows that fail are nan and their messages are collected.
std::vector<double> robust_sweep(const Scenario& scenario, const Protocol& protocol, std::span<const double> taus,
                                 const Tolerances& tolerances, int workers, std::vector<std::string>& failures) {
  try {
    return scenario.final_probabilities(protocol, taus, tolerances, policy_for(workers));
  } catch (const Error&) {
    // Redo row by row to keep the rows that succeed.
  }
  std::vector<double> out(taus.size(), std::nan(""));
  std::vector<std::string> messages(taus.size());
  for_each_index(taus.size(), policy_for(workers), [&](std::size_t i) {
    try {
      out[i] = scenario.final_probabilities(protocol, taus.subspan(i, 1), tolerances, kSerial)[0];
    } catch (const Error& e) {
      messages[i] = "tau = " + format_double(taus[i]) + ": " + e.what();
    }
  });
  for (auto& m : messages) {
    if (!m.empty()) failures.push_back(std::move(m));
  }
  return out;
}

}  // namespace

double run_length(const ExperimentConfig& config) {
  const Scenario scenario(config.model);
  return scenario.length(scenario.make_protocol(config.protocol));
}

RunReport run_protocol(const ExperimentConfig& config) {
  const auto start = Clock::now();
  const Scenario scenario(config.model);
  const Protocol protocol = scenario.make_protocol(config.protocol);
  RunReport report;
  const Table table = protocol_table(protocol, config.run.samples);
  emit(report, join(config.run.out, "protocol.csv"), table.render());
  std::vector<std::size_t> columns;
  for (std::size_t c = 1; c < table.header.size(); ++c) columns.push_back(c);
  emit_chart(report, join(config.run.out, "protocol.svg"), table, "protocol " + protocol.label, 0, columns, false);
  Manifest manifest{"protocol", {{"length", format_double(scenario.length(protocol))}}, echo(config)};
  if (protocol.warning) manifest.entries.push_back({"warning", *protocol.warning});
  write_manifest(join(config.run.out, "protocol.manifest.ini"), manifest, report, start);
  return report;
}

RunReport run_single(const ExperimentConfig& config) {
  if (config.run.taus.empty()) throw UsageError("evolve: no operation time given ([run] tau)");
  const auto start = Clock::now();
  const Scenario scenario(config.model);
  const Protocol protocol = scenario.make_protocol(config.protocol);
  const double length = scenario.length(protocol);
  PropagateOptions options;
  options.tolerances = config.run.tolerances;
  options.samples = config.run.samples;

  RunReport report;
  Manifest manifest{"evolve", {{"length", format_double(length)}}, echo(config)};
  if (protocol.warning) manifest.entries.push_back({"warning", *protocol.warning});
  const std::size_t count = config.run.taus.size();
  for (std::size_t i = 0; i < count; ++i) {
    const double tau = config.run.taus[i];
    const std::string stem = count == 1 ? "trajectory" : "trajectory_" + std::to_string(i);
    Table table;
    try {
      table = scenario.trajectory(protocol, tau, options, policy_for(config.run.workers));
    } catch (const Error& e) {
      if (dynamic_cast<const UsageError*>(&e) || dynamic_cast<const IoError*>(&e)) throw;
      report.failures.push_back("tau = " + format_double(tau) + ": " + e.what());
      report.exit_code = kExitNumerical;
      continue;
    }
    emit(report, join(config.run.out, stem + ".csv"), table.render());
    const std::size_t p = table.header.size() - 4;
    emit_chart(report, join(config.run.out, stem + ".svg"), table, "tau = " + format_double(tau), 0,
               {p, p + 1, p + 2, p + 3}, false);
    manifest.entries.push_back({stem + "_tau", format_double(tau)});
  }
  write_manifest(join(config.run.out, "trajectory.manifest.ini"), manifest, report, start);
  return report;
}

RunReport run_sweep(const ExperimentConfig& config) {
  if (config.run.taus.size() < 2) throw UsageError("sweep: need at least two operation times");
  const auto start = Clock::now();
  const Scenario scenario(config.model);
  const Protocol protocol = scenario.make_protocol(config.protocol);
  const double length = scenario.length(protocol);

  RunReport report;
  const auto p = robust_sweep(scenario, protocol, config.run.taus, config.run.tolerances, config.run.workers,
                              report.failures);
  Table table;
  table.header = {"tau", "P_n", "estimate", "upper"};
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double tau = config.run.taus[i];
    table.add({tau, p[i], 2 * length * length / (tau * tau), 4 * length * length / (tau * tau)});
  }
  emit(report, join(config.run.out, "sweep.csv"), table.render());
  emit_chart(report, join(config.run.out, "sweep.svg"), table, "final transition probability", 0, {1, 2, 3}, true);
  if (!report.failures.empty()) report.exit_code = kExitNumerical;
  Manifest manifest{"sweep", {{"length", format_double(length)}}, echo(config)};
  if (protocol.warning) manifest.entries.push_back({"warning", *protocol.warning});
  write_manifest(join(config.run.out, "sweep.manifest.ini"), manifest, report, start);
  return report;
}

// ---------------------------------------------------------------------------
// Figure recipes

namespace {

struct FigureContext {
  std::string out;
  int workers;
  Tolerances tolerances;
  RunReport report;
  Manifest manifest;

  void table(const std::string& name, const Table& t, const std::string& title, std::size_t x,
             std::vector<std::size_t> ys, bool log_y) {
    emit(report, join(out, name + ".csv"), t.render());
    emit_chart(report, join(out, name + ".svg"), t, title, x, std::move(ys), log_y);
  }

  std::vector<double> sweep(const Scenario& scenario, const Protocol& protocol, const std::vector<double>& taus) {
    return robust_sweep(scenario, protocol, taus, tolerances, workers, report.failures);
  }

  Table sweep_table(const Scenario& scenario, const std::vector<double>& taus, double length) {
    const auto linear = sweep(scenario, scenario.make_protocol(ProtocolKind::linear), taus);
    const auto optimal = sweep(scenario, scenario.make_protocol(ProtocolKind::optimal), taus);
    Table t;
    t.header = {"tau", "P_linear", "P_optimal", "estimate"};
    for (std::size_t i = 0; i < taus.size(); ++i) {
      t.add({taus[i], linear[i], optimal[i], 2 * length * length / (taus[i] * taus[i])});
    }
    return t;
  }
};

void figure_landau_zener(FigureContext& ctx) {
  ModelSpec spec;
  spec.kind = ModelKind::landau_zener;
  spec.delta = 2.0;
  spec.lambda_start = -10.0;
  spec.lambda_end = 10.0;
  const Scenario scenario(spec);
  const Protocol linear = scenario.make_protocol(ProtocolKind::linear);
  const Protocol optimal = scenario.make_protocol(ProtocolKind::optimal);
  const double length = scenario.length(optimal);
  ctx.manifest.entries = {{"delta", "2"}, {"lambda0", "10"}, {"length", format_double(length)}};

  Table a;
  a.header = {"s", "lambda_linear", "lambda_optimal"};
  for (int i = 0; i <= 200; ++i) {
    const double s = i / 200.0;
    a.add({s, linear.at(s)[0], optimal.at(s)[0]});
  }
  ctx.table("fig2a", a, "protocols", 0, {1, 2}, false);

  const double tau = 10.0;
  PropagateOptions options;
  options.tolerances = ctx.tolerances;
  options.samples = 401;
  const Table lin = scenario.trajectory(linear, tau, options, policy_for(ctx.workers));
  const Table opt = scenario.trajectory(optimal, tau, options, policy_for(ctx.workers));
  Table b;
  b.header = {"t", "P_linear", "P_optimal", "first_order_optimal", "upper_bound"};
  for (std::size_t i = 0; i < opt.rows.size(); ++i) {
    b.add({opt.rows[i][0], lin.rows[i][3], opt.rows[i][3], opt.rows[i][6], 4 * length * length / (tau * tau)});
  }
  ctx.table("fig2b", b, "tau = 10", 0, {1, 2, 3, 4}, false);

  ctx.table("fig2c", ctx.sweep_table(scenario, range(0.5, 20.0, 0.5), length), "short operation times", 0,
            {1, 2, 3}, true);
  ctx.table("fig2d", ctx.sweep_table(scenario, range(20.0, 200.0, 2.0), length), "long operation times", 0,
            {1, 2, 3}, true);
}

void figure_ising_protocols(FigureContext& ctx) {
  // Finite chains over λ ∈ [−5, 5] against s' = 2s − 1.
  std::vector<Protocol> finite;
  for (int sites : {4, 50, 100}) finite.push_back(ising_optimal_protocol_finite(sites, 1.0, -5.0, 5.0));
  Table a;
  a.header = {"s_prime", "lambda_N4", "lambda_N50", "lambda_N100"};
  for (int i = 0; i <= 400; ++i) {
    const double s = i / 400.0;
    a.add({2 * s - 1, finite[0].at(s)[0], finite[1].at(s)[0], finite[2].at(s)[0]});
  }
  ctx.table("fig3a", a, "finite-N optimal protocols", 0, {1, 2, 3}, false);

  Table inside;
  inside.header = {"s", "lambda_inside"};
  for (double s : range(-5.0, 5.0, 0.025)) inside.add({s, ising_optimal_protocol_thermo(IsingRegion::inside, s)});
  ctx.table("fig3b_inside", inside, "thermodynamic limit, |lambda| < 1", 0, {1}, false);

  Table outer;
  outer.header = {"s", "lambda_below", "lambda_above"};
  for (double s : range(1.05, 6.0, 0.025)) {
    outer.add({s, ising_optimal_protocol_thermo(IsingRegion::below, s),
               ising_optimal_protocol_thermo(IsingRegion::above, s)});
  }
  ctx.table("fig3b_outer", outer, "thermodynamic limit, |lambda| > 1", 0, {1, 2}, false);
  ctx.manifest.entries = {{"lambda_start", "-5"}, {"lambda_end", "5"}, {"J", "1"}, {"sites", "4, 50, 100"}};
}

void figure_ising_dynamics(FigureContext& ctx) {
  struct Panel {
    int sites;
    double tau;
    std::string sweep_name;
    std::string trajectory_name;
  };
  const Panel panels[] = {{50, 30.0, "fig4a", "fig4b"}, {100, 80.0, "fig4c", "fig4d"}};
  for (const Panel& panel : panels) {
    ModelSpec spec;
    spec.kind = ModelKind::ising;
    spec.sites = panel.sites;
    spec.coupling = 1.0;
    spec.lambda_start = 2.0;
    spec.lambda_end = 0.0;
    const Scenario scenario(spec);
    const Protocol linear = scenario.make_protocol(ProtocolKind::linear);
    const Protocol optimal = scenario.make_protocol(ProtocolKind::optimal);
    const double length = scenario.length(optimal);
    ctx.manifest.entries.push_back({"length_N" + std::to_string(panel.sites), format_double(length)});

    ctx.table(panel.sweep_name, ctx.sweep_table(scenario, range(5.0, 100.0, 5.0), length),
              "N = " + std::to_string(panel.sites), 0, {1, 2, 3}, true);

    PropagateOptions options;
    options.tolerances = ctx.tolerances;
    options.samples = 301;
    const Table lin = scenario.trajectory(linear, panel.tau, options, policy_for(ctx.workers));
    const Table opt = scenario.trajectory(optimal, panel.tau, options, policy_for(ctx.workers));
    Table t;
    t.header = {"t_over_tau", "P_optimal", "P_linear", "estimate"};
    const double estimate = 2 * length * length / (panel.tau * panel.tau);
    for (std::size_t i = 0; i < opt.rows.size(); ++i) t.add({opt.rows[i][1], opt.rows[i][3], lin.rows[i][3], estimate});
    ctx.table(panel.trajectory_name, t, "tau = " + format_double(panel.tau), 0, {1, 2, 3}, false);
  }
  ctx.manifest.entries.push_back({"lambda_start", "2"});
  ctx.manifest.entries.push_back({"lambda_end", "0"});
  ctx.manifest.entries.push_back({"J", "1"});
}

void figure_sphere(FigureContext& ctx) {
  ModelSpec small_spec;
  small_spec.kind = ModelKind::two_level;
  small_spec.path = SpherePath::small_circle;
  ModelSpec large_spec = small_spec;
  large_spec.path = SpherePath::large_circle;
  const Scenario small(small_spec);
  const Scenario large(large_spec);
  const Protocol small_protocol = small.make_protocol(ProtocolKind::linear);
  const Protocol large_protocol = large.make_protocol(ProtocolKind::linear);
  const double small_length = small.length(small_protocol);
  const double large_length = large.length(large_protocol);
  ctx.manifest.entries = {{"length_small_circle", format_double(small_length)},
                          {"length_large_circle", format_double(large_length)}};

  auto panel = [&](const std::string& name, const std::vector<double>& taus, const std::string& title) {
    const auto p_small = ctx.sweep(small, small_protocol, taus);
    const auto p_large = ctx.sweep(large, large_protocol, taus);
    Table t;
    t.header = {"tau", "P_small_circle", "P_large_circle", "estimate"};
    for (std::size_t i = 0; i < taus.size(); ++i) {
      t.add({taus[i], p_small[i], p_large[i], 2 * large_length * large_length / (taus[i] * taus[i])});
    }
    ctx.table(name, t, title, 0, {1, 2, 3}, true);
  };
  panel("fig5a", range(0.25, 20.0, 0.25), "short operation times");
  panel("fig5b", range(20.0, 50.0, 0.5), "long operation times");
}

const std::vector<std::pair<std::string, std::function<void(FigureContext&)>>>& recipes() {
  static const std::vector<std::pair<std::string, std::function<void(FigureContext&)>>> table{
      {"fig2", figure_landau_zener},
      {"fig3", figure_ising_protocols},
      {"fig4", figure_ising_dynamics},
      {"fig5", figure_sphere},
  };
  return table;
}

}  // namespace

std::vector<std::string> figure_recipes() {
  std::vector<std::string> names;
  for (const auto& [name, fn] : recipes()) names.push_back(name);
  return names;
}

RunReport run_figure(const std::string& recipe, const std::string& out, int workers, const Tolerances& tolerances) {
  for (const auto& [name, fn] : recipes()) {
    if (name != recipe) continue;
    const auto start = Clock::now();
    FigureContext ctx{out, workers, tolerances, {}, {"figure " + name, {}, {}}};
    fn(ctx);
    ctx.manifest.entries.push_back({"abs_tol", format_double(tolerances.abs_tol)});
    ctx.manifest.entries.push_back({"rel_tol", format_double(tolerances.rel_tol)});
    if (!ctx.report.failures.empty()) ctx.report.exit_code = kExitNumerical;
    write_manifest(join(out, name + ".manifest.ini"), ctx.manifest, ctx.report, start);
    return ctx.report;
  }
  std::string list;
  for (const auto& n : figure_recipes()) list += (list.empty() ? "" : ", ") + n;
  throw UsageError("unknown figure recipe '" + recipe + "' (known: " + list + ")");
}

}  // namespace qgeo::lab
