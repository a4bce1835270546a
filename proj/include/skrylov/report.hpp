// Copyright (c) 2026 skrylov contributors
// SPDX-License-Identifier: MIT
#pragma once

#include "skrylov/counters.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace skrylov {

enum class SolveStatus {
  converged,     ///< verified unsketched residual under the target
  max_restarts,  ///< restart budget exhausted
  breakdown,     ///< Krylov space exhausted without reaching the target
  diverged,      ///< a full cycle improved the residual estimate by < 1%
};

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_restarts: return "max_restarts";
    case SolveStatus::breakdown: return "breakdown";
    case SolveStatus::diverged: return "diverged";
  }
  return "unknown";
}

struct ResidualSample {
  std::int64_t iteration = 0;  ///< global step count at which the value was recorded
  double value = 0.0;
};

struct CycleStats {
  Eigen::Index steps = 0;         ///< Arnoldi steps taken this cycle
  double entry_residual = 0.0;    ///< unsketched residual norm at cycle start
  double sketched_entry = 0.0;    ///< sketched residual norm at cycle start
  double exit_sres = 0.0;         ///< last sketched least-squares residual
  double exit_residual = 0.0;     ///< last verified unsketched residual
  double safety_after = 0.0;      ///< safety factor after the cycle
  double basis_cond = 0.0;        ///< whitened-basis condition estimate
  Eigen::Index deflation_rank = 0;  ///< pencil rank used by the recycle update
};

/// Everything observable about one solve.
struct SolveReport {
  SolveStatus status = SolveStatus::max_restarts;
  std::int64_t iterations = 0;  ///< total Arnoldi steps across cycles
  int cycles = 0;
  double rhs_norm = 0.0;
  double final_relative_residual = std::numeric_limits<double>::quiet_NaN();
  Counters counters;
  std::vector<ResidualSample> sketched_residuals;  ///< estimate per iteration
  std::vector<ResidualSample> true_residuals;      ///< at verification points
  std::vector<CycleStats> cycle_stats;
  std::vector<std::string> notes;
  std::string error;  ///< nonempty when the solve aborted with an exception
  double seconds = 0.0;
};

}  // namespace skrylov
