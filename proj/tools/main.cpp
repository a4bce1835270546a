// Copyright (c) 2026 skrylov contributors
// SPDX-License-Identifier: MIT
//
// Benchmark driver: synthetic problem families and Matrix Market inputs,
// solved by the sketched recycling solver or the classical baseline, with
// per-iteration convergence data written as CSV plus a JSON manifest.
#include "campaign.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

namespace {

using namespace skrylov;
using tools::CampaignSpec;
using tools::TraceSpec;

struct SolverOptions {
  std::string solver = "gmres-sdr";
  std::int64_t m = 100;
  std::int64_t t = 2;
  std::int64_t k = 20;
  std::int64_t s = 0;  // 0 = automatic (10 rows per basis-plus-deflation column)
  double tol = 1e-6;
  double safety = 1.4;
  int max_restarts = 10;
  std::string variant = "reuse";
  std::uint64_t sketch_seed = 0x5eedULL;
  std::string out_dir;
  std::string load_space;
  std::string save_space;
};

void add_solver_options(CLI::App* cmd, SolverOptions& opt) {
  cmd->add_option("--solver", opt.solver, "gmres-sdr | sgmres | gmres")
      ->check(CLI::IsMember({"gmres-sdr", "sgmres", "gmres"}));
  cmd->add_option("-m,--m", opt.m, "max Arnoldi steps per cycle");
  cmd->add_option("-t,--t", opt.t, "orthogonalization window");
  cmd->add_option("-k,--k", opt.k, "deflation subspace size");
  cmd->add_option("-s,--s", opt.s, "sketch rows (0 = 10 (m + k))");
  cmd->add_option("--tol", opt.tol, "relative residual target");
  cmd->add_option("--safety", opt.safety, "initial sketched-to-true safety factor");
  cmd->add_option("--max-restarts", opt.max_restarts, "restart budget");
  cmd->add_option("--variant", opt.variant,
                  "deflation-space handling when the matrix changes: reuse | exact | inexact")
      ->check(CLI::IsMember({"reuse", "exact", "inexact"}));
  cmd->add_option("--sketch-seed", opt.sketch_seed, "seed of the sketching operator");
  cmd->add_option("-o,--out", opt.out_dir,
                  "output directory (default per subcommand; SKRYLOV_OUT_DIR overrides)");
  cmd->add_option("--load-space", opt.load_space, "recycle-space dump to start from");
  cmd->add_option("--save-space", opt.save_space, "write the final recycle space here");
}

SolverConfig make_config(const SolverOptions& opt) {
  SolverConfig cfg;
  cfg.m = opt.m;
  cfg.t = opt.t;
  cfg.k = opt.k;
  cfg.s = opt.s > 0 ? opt.s : 10 * (opt.m + opt.k);
  cfg.tol = opt.tol;
  cfg.safety_init = opt.safety;
  cfg.max_restarts = opt.max_restarts;
  cfg.sketch_seed = opt.sketch_seed;
  if (opt.variant == "exact") cfg.variant = SequenceVariant::exact;
  else if (opt.variant == "inexact") cfg.variant = SequenceVariant::inexact;
  else cfg.variant = SequenceVariant::reuse;
  return cfg;
}

CampaignSpec make_spec(const std::string& name, const SolverOptions& opt, ProblemSequence seq,
                       std::uint64_t problem_seed) {
  CampaignSpec spec;
  spec.name = name;
  spec.sequence = std::move(seq);
  spec.solver = opt.solver;
  spec.config = make_config(opt);
  spec.problem_seed = problem_seed;
  spec.out_dir = tools::resolve_out_dir(opt.out_dir, "out-" + name);
  spec.load_space_path = opt.load_space;
  spec.save_space_path = opt.save_space;
  return spec;
}

Eigen::VectorXd rhs_from_file(const std::string& path, Eigen::Index n) {
  SparseMatrix mat = read_matrix_market_file(path);
  if (mat.cols() != 1 || mat.rows() != n)
    throw std::invalid_argument("right-hand side file '" + path + "' holds a " +
                                std::to_string(mat.rows()) + " x " + std::to_string(mat.cols()) +
                                " matrix; expected " + std::to_string(n) + " x 1");
  return mat.dense().col(0);
}

int report_summary(const tools::CampaignOutcome& outcome) {
  for (std::size_t i = 0; i < outcome.reports.size(); ++i) {
    const SolveReport& rep = outcome.reports[i];
    if (!rep.error.empty()) {
      std::cout << "problem " << i << ": error (" << rep.error << ")\n";
      continue;
    }
    std::cout << "problem " << i << ": " << to_string(rep.status) << " in " << rep.iterations
              << " iterations / " << rep.cycles << " cycles, " << rep.counters.matvecs
              << " matvecs, relative residual " << rep.final_relative_residual << "\n";
  }
  if (!outcome.files.empty())
    std::cout << "wrote " << outcome.files.size() << " files under "
              << std::filesystem::path(outcome.files.front()).parent_path().string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sketched Krylov solver benchmarks"};
  app.set_version_flag("--version", std::string(skrylov::version_string));
  app.require_subcommand(1);

  // neumann: one grid operator, several random right-hand sides
  auto* neumann = app.add_subcommand(
      "neumann", "shifted grid Laplacian with mirrored boundaries, random right-hand sides");
  SolverOptions neumann_opt;
  std::int64_t grid = 60;
  double shift = 1e-2;
  int count = 5;
  std::uint64_t seed = 1234;
  neumann->add_option("--grid", grid, "grid side length (problem size is its square)");
  neumann->add_option("--shift", shift, "diagonal shift");
  neumann->add_option("--count", count, "number of right-hand sides");
  neumann->add_option("--seed", seed, "right-hand-side seed");
  add_solver_options(neumann, neumann_opt);

  // convdiff: one system per convection strength, matrix changes in between
  auto* convdiff = app.add_subcommand(
      "convdiff", "convection-diffusion family; the matrix changes between systems");
  SolverOptions convdiff_opt;
  std::int64_t interior = 60;
  std::vector<double> alphas;
  convdiff->add_option("--n", interior, "interior points per side (problem size is its square)");
  convdiff->add_option("--alpha", alphas, "convection strengths, one system each")
      ->expected(-1);
  add_solver_options(convdiff, convdiff_opt);

  // mtx-file: user-supplied operator
  auto* mtx = app.add_subcommand("mtx-file", "solve systems with a Matrix Market operator");
  SolverOptions mtx_opt;
  std::string matrix_path, rhs_path;
  int mtx_count = 1;
  std::uint64_t mtx_seed = 1234;
  mtx->add_option("--matrix", matrix_path, "Matrix Market file with the operator")->required();
  mtx->add_option("--rhs", rhs_path, "Matrix Market file with one right-hand side");
  mtx->add_option("--count", mtx_count, "number of random right-hand sides (ignored with --rhs)");
  mtx->add_option("--seed", mtx_seed, "right-hand-side seed");
  add_solver_options(mtx, mtx_opt);

  // distortion-trace: instrumented single solve
  auto* trace = app.add_subcommand(
      "distortion-trace", "per-step sketched residuals, basis sketch norms and verified residuals");
  SolverOptions trace_opt;
  trace_opt.m = 50;
  trace_opt.k = 0;
  trace_opt.s = 500;
  trace_opt.tol = 1e-8;
  trace_opt.max_restarts = 10;
  std::int64_t trace_grid = 40;
  double trace_shift = 1e-2;
  std::string trace_matrix;
  std::uint64_t trace_seed = 1234;
  trace->add_option("--grid", trace_grid,
                    "grid side of the built-in operator (used without --matrix)");
  trace->add_option("--shift", trace_shift, "diagonal shift of the built-in operator");
  trace->add_option("--matrix", trace_matrix, "Matrix Market operator to trace instead");
  trace->add_option("--seed", trace_seed, "right-hand-side seed");
  add_solver_options(trace, trace_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help/version exit cleanly, everything else is a usage error
  }

  try {
    if (*neumann) {
      ProblemSequence seq = neumann_sequence(grid, shift, count, seed, neumann_opt.tol);
      return report_summary(
          tools::run_campaign(make_spec("neumann", neumann_opt, std::move(seq), seed)));
    }
    if (*convdiff) {
      if (alphas.empty()) alphas = {4.0, 16.0, 64.0};
      ProblemSequence seq = convdiff_sequence(interior, alphas, convdiff_opt.tol);
      return report_summary(
          tools::run_campaign(make_spec("convdiff", convdiff_opt, std::move(seq), 0)));
    }
    if (*mtx) {
      auto matrix = [&] {
        try {
          return std::make_shared<const SparseMatrix>(read_matrix_market_file(matrix_path));
        } catch (const std::exception& e) {
          throw std::invalid_argument(e.what());  // bad input file = usage error
        }
      }();
      ProblemSequence seq;
      seq.shared_matrix = true;
      if (!rhs_path.empty()) {
        ProblemInstance p;
        p.matrix = matrix;
        p.rhs = rhs_from_file(rhs_path, matrix->rows());
        p.target_tol = mtx_opt.tol;
        seq.problems.push_back(std::move(p));
      } else {
        for (int i = 0; i < mtx_count; ++i) {
          ProblemInstance p;
          p.matrix = matrix;
          p.rhs = gaussian_vector(matrix->rows(), mtx_seed + static_cast<std::uint64_t>(i));
          p.target_tol = mtx_opt.tol;
          seq.problems.push_back(std::move(p));
        }
      }
      return report_summary(
          tools::run_campaign(make_spec("mtx-file", mtx_opt, std::move(seq), mtx_seed)));
    }
    if (*trace) {
      TraceSpec spec;
      spec.name = "distortion-trace";
      if (!trace_matrix.empty()) {
        try {
          spec.problem.matrix =
              std::make_shared<const SparseMatrix>(read_matrix_market_file(trace_matrix));
        } catch (const std::exception& e) {
          throw std::invalid_argument(e.what());
        }
      } else {
        spec.problem.matrix =
            std::make_shared<const SparseMatrix>(gen_neumann(trace_grid, trace_shift));
      }
      spec.problem.rhs = gaussian_vector(spec.problem.matrix->rows(), trace_seed);
      spec.problem.target_tol = trace_opt.tol;
      spec.config = make_config(trace_opt);
      spec.out_dir = tools::resolve_out_dir(trace_opt.out_dir, "out-distortion-trace");
      const auto files = tools::run_distortion_trace(spec);
      std::cout << "wrote " << files.size() << " files under "
                << std::filesystem::path(files.front()).parent_path().string() << "\n";
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 1;
  }
  return 2;  // no subcommand matched (require_subcommand should prevent this)
}
