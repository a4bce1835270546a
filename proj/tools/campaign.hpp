// Copyright (c) 2026 skrylov contributors
// SPDX-License-Identifier: MIT
#pragma once

#include "skrylov/skrylov.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace skrylov::tools {

/// One benchmark run: a problem sequence, a solver choice, and where the
/// artifacts go. The solver names are "gmres-sdr" (sketching, deflation,
/// recycling), "sgmres" (sketching only; deflation size forced to zero) and
/// "gmres" (the classical restarted baseline).
struct CampaignSpec {
  std::string name;
  ProblemSequence sequence;
  std::string solver = "gmres-sdr";
  SolverConfig config;
  std::uint64_t problem_seed = 0;  ///< seed used to build the sequence (recorded only)
  std::string out_dir;
  std::string load_space_path;  ///< optional recycle-space dump to start from
  std::string save_space_path;  ///< optional dump of the final recycle space
};

struct CampaignOutcome {
  std::vector<SolveReport> reports;
  std::vector<Eigen::VectorXd> solutions;
  RecycleSpace space;
  std::vector<std::string> files;  ///< paths written, in order
};

bool known_solver(const std::string& name);

/// Runs the campaign and writes per-problem convergence CSV files,
/// metrics.csv, metrics.txt and manifest.json into spec.out_dir (created if
/// missing). A solver failure on one system is recorded in that system's
/// report and the run continues.
CampaignOutcome run_campaign(const CampaignSpec& spec);

/// One-problem instrumented run recording, per step, the sketched residual
/// and the reciprocal norm of the newest sketched basis vector, plus the
/// directly computed residual wherever the solver verified one.
struct TraceSpec {
  std::string name;
  ProblemInstance problem;
  SolverConfig config;
  std::string out_dir;
};

std::vector<std::string> run_distortion_trace(const TraceSpec& spec);

/// Output-directory resolution: an explicit flag wins, then the
/// SKRYLOV_OUT_DIR environment variable, then the built-in default.
std::string resolve_out_dir(const std::string& flag_value, const std::string& fallback);

}  // namespace skrylov::tools
