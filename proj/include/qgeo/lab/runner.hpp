#pragma once

#include <string>
#include <vector>

#include "qgeo/lab/config.hpp"

namespace qgeo::lab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitNumerical = 3;

struct RunReport {
  std::vector<std::string> files;
  std::vector<std::string> failures;  // numerical failures that left nan markers
  int exit_code = kExitOk;
};

/// Length of the configured protocol's path.
double run_length(const ExperimentConfig& config);

/// protocol.csv with `samples` rows of s, lambda_1...
RunReport run_protocol(const ExperimentConfig& config);

/// One trajectory CSV per τ (trajectory.csv, or trajectory_<i>.csv for several τ),
/// a line chart per CSV and a manifest.
RunReport run_single(const ExperimentConfig& config);

/// sweep.csv with columns tau, P_n, estimate (2L²/τ²), upper (4L²/τ²); failed rows hold nan.
RunReport run_sweep(const ExperimentConfig& config);

/// Data behind one figure: fig2 | fig3 | fig4 | fig5.
RunReport run_figure(const std::string& recipe, const std::string& out, int workers, const Tolerances& tolerances);

std::vector<std::string> figure_recipes();

}  // namespace qgeo::lab
