#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qgeo/lab/config.hpp"
#include "qgeo/lab/csv.hpp"
#include "qgeo/lab/runner.hpp"

using namespace qgeo;
using namespace qgeo::lab;

namespace {

struct CommonFlags {
  std::string config;
  std::optional<std::string> out;
  std::optional<int> workers;
  std::optional<double> tol;
};

void add_common(CLI::App* command, CommonFlags& flags, bool needs_config) {
  auto* option = command->add_option("--config", flags.config, "experiment configuration file");
  if (needs_config) option->required();
  command->add_option("--out", flags.out, "output directory");
  command->add_option("--workers", flags.workers, "worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
  command->add_option("--tol", flags.tol, "relative integration tolerance")->check(CLI::PositiveNumber);
}

ExperimentConfig resolve(const CommonFlags& flags) {
  ExperimentConfig config = load_config(flags.config);
  if (flags.out) config.run.out = *flags.out;
  if (flags.workers) config.run.workers = *flags.workers;
  if (flags.tol) config.run.tolerances.rel_tol = *flags.tol;
  validate(config);
  return config;
}

int report(const RunReport& r) {
  for (const auto& f : r.files) std::cout << f << "\n";
  for (const auto& f : r.failures) std::cerr << "numerical failure: " << f << "\n";
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adiabatic length, optimal protocols and transition dynamics"};
  app.set_version_flag("--version", std::string(QGEO_VERSION));
  app.require_subcommand(1);

  CommonFlags length_flags, protocol_flags, evolve_flags, sweep_flags, figure_flags;
  auto* length = app.add_subcommand("length", "print the adiabatic length of the configured path");
  add_common(length, length_flags, true);
  auto* protocol = app.add_subcommand("protocol", "write the configured protocol as a table");
  add_common(protocol, protocol_flags, true);
  auto* evolve = app.add_subcommand("evolve", "propagate and write trajectory tables");
  add_common(evolve, evolve_flags, true);
  std::string protocol_file;
  evolve->add_option("--protocol-file", protocol_file, "protocol table overriding [protocol]");
  auto* sweep = app.add_subcommand("sweep", "final transition probability over operation times");
  add_common(sweep, sweep_flags, true);
  auto* figure = app.add_subcommand("figure", "write the data behind one figure");
  add_common(figure, figure_flags, false);
  std::string recipe;
  figure->add_option("recipe", recipe, "one of fig2, fig3, fig4, fig5")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*length) {
      std::cout << format_double(run_length(resolve(length_flags))) << "\n";
      return kExitOk;
    }
    if (*protocol) return report(run_protocol(resolve(protocol_flags)));
    if (*evolve) {
      ExperimentConfig config = resolve(evolve_flags);
      if (!protocol_file.empty()) config.protocol = ProtocolSpec{ProtocolKind::file, protocol_file};
      return report(run_single(config));
    }
    if (*sweep) return report(run_sweep(resolve(sweep_flags)));
    if (*figure) {
      Tolerances tolerances;
      std::string out = "figures";
      int workers = 0;
      if (!figure_flags.config.empty()) {
        const ExperimentConfig config = resolve(figure_flags);
        tolerances = config.run.tolerances;
        out = config.run.out;
        workers = config.run.workers;
      } else {
        if (figure_flags.out) out = *figure_flags.out;
        if (figure_flags.workers) workers = *figure_flags.workers;
        if (figure_flags.tol) tolerances.rel_tol = *figure_flags.tol;
      }
      return report(run_figure(recipe, out, workers, tolerances));
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidModelError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
