// Copyright (c) 2026 skrylov contributors
// SPDX-License-Identifier: MIT
#include "campaign.hpp"

#include <json.hpp>

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>

namespace skrylov::tools {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

/// Shortest round-trip decimal form of a double ("%.17g").
std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json json_number(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;  // JSON has no NaN/inf
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  return out;
}

json config_json(const SolverConfig& cfg) {
  return json{{"m", cfg.m},
              {"t", cfg.t},
              {"k", cfg.k},
              {"s", cfg.s},
              {"tol", cfg.tol},
              {"safety_init", cfg.safety_init},
              {"max_restarts", cfg.max_restarts},
              {"variant", to_string(cfg.variant)},
              {"sketch_seed", cfg.sketch_seed},
              {"rank_tol", cfg.rank_tol},
              {"breakdown_tol", cfg.breakdown_tol}};
}

json report_json(std::size_t index, const SolveReport& rep) {
  json j{{"index", index},
         {"status", rep.error.empty() ? to_string(rep.status) : "error"},
         {"iterations", rep.iterations},
         {"cycles", rep.cycles},
         {"matvecs", rep.counters.matvecs},
         {"inner_products", rep.counters.inner_products},
         {"sketch_applies", rep.counters.sketch_applies},
         {"final_relative_residual", json_number(rep.final_relative_residual)},
         {"seconds", rep.seconds},
         {"notes", rep.notes}};
  j["error"] = rep.error.empty() ? json(nullptr) : json(rep.error);
  return j;
}

/// convergence_<solver>_p<idx>.csv: the estimate stream with the verified
/// residuals joined on the iteration column (blank where none was computed).
std::string write_convergence_csv(const fs::path& dir, const std::string& solver,
                                  std::size_t index, const SolveReport& rep) {
  const std::string name = "convergence_" + solver + "_p" + std::to_string(index) + ".csv";
  std::ofstream out = open_out(dir / name);
  out << "iteration,sketched_residual,true_residual\n";
  std::map<std::int64_t, double> verified;
  for (const auto& sample : rep.true_residuals) verified[sample.iteration] = sample.value;
  for (const auto& sample : rep.sketched_residuals) {
    out << sample.iteration << ',' << num(sample.value) << ',';
    const auto hit = verified.find(sample.iteration);
    if (hit != verified.end()) out << num(hit->second);
    out << '\n';
  }
  return name;
}

std::string write_metrics_csv(const fs::path& dir, const std::string& solver,
                              const std::vector<SolveReport>& reports) {
  std::ofstream out = open_out(dir / "metrics.csv");
  out << "problem,solver,status,iterations,cycles,matvecs,inner_products,sketch_applies,"
         "final_relative_residual,seconds\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const SolveReport& rep = reports[i];
    out << i << ',' << solver << ',' << (rep.error.empty() ? to_string(rep.status) : "error")
        << ',' << rep.iterations << ',' << rep.cycles << ',' << rep.counters.matvecs << ','
        << rep.counters.inner_products << ',' << rep.counters.sketch_applies << ','
        << num(rep.final_relative_residual) << ',' << num(rep.seconds) << '\n';
  }
  return "metrics.csv";
}

std::string write_metrics_txt(const fs::path& dir, const CampaignSpec& spec,
                              const std::vector<SolveReport>& reports) {
  std::ofstream out = open_out(dir / "metrics.txt");
  out << "campaign: " << spec.name << "\nsolver: " << spec.solver << "\nproblems: "
      << reports.size() << "\n\n";
  char line[256];
  std::snprintf(line, sizeof(line), "%-8s %-13s %6s %6s %8s %12s %8s %12s %9s\n", "problem",
                "status", "iters", "cycles", "matvecs", "inner_prods", "sketches", "rel_resid",
                "seconds");
  out << line;
  Counters total;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const SolveReport& rep = reports[i];
    total += rep.counters;
    std::snprintf(line, sizeof(line), "%-8zu %-13s %6lld %6d %8lld %12lld %8lld %12.3e %9.3f\n", i,
                  rep.error.empty() ? to_string(rep.status) : "error",
                  static_cast<long long>(rep.iterations), rep.cycles,
                  static_cast<long long>(rep.counters.matvecs),
                  static_cast<long long>(rep.counters.inner_products),
                  static_cast<long long>(rep.counters.sketch_applies),
                  rep.final_relative_residual, rep.seconds);
    out << line;
  }
  std::snprintf(line, sizeof(line), "%-8s %-13s %6s %6s %8lld %12lld %8lld\n", "total", "", "", "",
                static_cast<long long>(total.matvecs), static_cast<long long>(total.inner_products),
                static_cast<long long>(total.sketch_applies));
  out << line;
  for (std::size_t i = 0; i < reports.size(); ++i)
    for (const auto& note : reports[i].notes) out << "note (problem " << i << "): " << note << '\n';
  return "metrics.txt";
}

std::string eigen_version() {
  return std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
         std::to_string(EIGEN_MINOR_VERSION);
}

/// Runs the classical baseline over the sequence with the same
/// keep-going-on-failure contract as the sequence driver.
std::pair<std::vector<SolveReport>, std::vector<Eigen::VectorXd>> run_baseline_sequence(
    const ProblemSequence& seq, const SolverConfig& cfg) {
  BaselineConfig base;
  base.m = cfg.m;
  base.tol = cfg.tol;
  base.max_restarts = cfg.max_restarts;
  base.breakdown_tol = cfg.breakdown_tol;
  std::vector<SolveReport> reports;
  std::vector<Eigen::VectorXd> solutions;
  for (std::size_t i = 0; i < seq.problems.size(); ++i) {
    const ProblemInstance& prob = seq.problems[i];
    BaselineConfig local = base;
    if (prob.target_tol > 0.0) local.tol = prob.target_tol;
    try {
      if (!prob.matrix)
        throw std::invalid_argument("baseline sequence: problem " + std::to_string(i) +
                                    " has no matrix");
      BaselineResult res = baseline_gmres(OperatorRef(*prob.matrix), prob.rhs, local,
                                          prob.x0.size() > 0 ? &prob.x0 : nullptr);
      reports.push_back(std::move(res.report));
      solutions.push_back(std::move(res.x));
    } catch (const std::exception& e) {
      SolveReport rep;
      rep.error = e.what();
      rep.notes.push_back("system " + std::to_string(i) + " aborted: " + e.what());
      reports.push_back(std::move(rep));
      solutions.emplace_back();
    }
  }
  return {std::move(reports), std::move(solutions)};
}

}  // namespace

bool known_solver(const std::string& name) {
  return name == "gmres-sdr" || name == "sgmres" || name == "gmres";
}

std::string resolve_out_dir(const std::string& flag_value, const std::string& fallback) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("SKRYLOV_OUT_DIR"); env != nullptr && *env != '\0') return env;
  return fallback;
}

CampaignOutcome run_campaign(const CampaignSpec& spec) {
  if (!known_solver(spec.solver))
    throw std::invalid_argument("unknown solver '" + spec.solver +
                                "' (expected gmres-sdr, sgmres or gmres)");
  if (spec.out_dir.empty()) throw std::invalid_argument("campaign needs an output directory");
  SolverConfig cfg = spec.config;
  if (spec.solver == "sgmres") cfg.k = 0;
  cfg.validate();

  const fs::path dir(spec.out_dir);
  fs::create_directories(dir);

  CampaignOutcome outcome;
  if (spec.solver == "gmres") {
    auto [reports, solutions] = run_baseline_sequence(spec.sequence, cfg);
    outcome.reports = std::move(reports);
    outcome.solutions = std::move(solutions);
  } else {
    RecycleSpace initial;
    if (!spec.load_space_path.empty()) initial = load_recycle_space_file(spec.load_space_path);
    SequenceResult res = solve_sequence(spec.sequence, cfg, nullptr, std::move(initial));
    outcome.reports = std::move(res.reports);
    outcome.solutions = std::move(res.solutions);
    outcome.space = std::move(res.space);
    if (!spec.save_space_path.empty()) save_recycle_space_file(spec.save_space_path, outcome.space);
  }

  for (std::size_t i = 0; i < outcome.reports.size(); ++i)
    outcome.files.push_back(
        (dir / write_convergence_csv(dir, spec.solver, i, outcome.reports[i])).string());
  outcome.files.push_back((dir / write_metrics_csv(dir, spec.solver, outcome.reports)).string());
  outcome.files.push_back((dir / write_metrics_txt(dir, spec, outcome.reports)).string());

  json manifest{{"campaign", spec.name},
                {"solver", spec.solver},
                {"problem_seed", spec.problem_seed},
                {"problem_count", outcome.reports.size()},
                {"config", config_json(cfg)},
                {"versions", {{"skrylov", version_string}, {"eigen", eigen_version()}}}};
  json statuses = json::array();
  json problems = json::array();
  for (std::size_t i = 0; i < outcome.reports.size(); ++i) {
    statuses.push_back(outcome.reports[i].error.empty() ? to_string(outcome.reports[i].status)
                                                        : "error");
    problems.push_back(report_json(i, outcome.reports[i]));
  }
  manifest["statuses"] = std::move(statuses);
  manifest["problems"] = std::move(problems);
  if (spec.solver != "gmres") {
    manifest["recycle"] = {
        {"loaded", spec.load_space_path.empty() ? json(nullptr) : json(spec.load_space_path)},
        {"saved", spec.save_space_path.empty() ? json(nullptr) : json(spec.save_space_path)},
        {"final_dim", outcome.space.dim()},
        {"final_provenance", to_string(outcome.space.provenance)}};
  }
  json files = json::array();
  for (const auto& f : outcome.files) files.push_back(fs::path(f).filename().string());
  files.push_back("manifest.json");
  manifest["files"] = std::move(files);
  {
    std::ofstream out = open_out(dir / "manifest.json");
    out << manifest.dump(2) << '\n';
  }
  outcome.files.push_back((dir / "manifest.json").string());
  return outcome;
}

std::vector<std::string> run_distortion_trace(const TraceSpec& spec) {
  if (!spec.problem.matrix) throw std::invalid_argument("distortion trace needs a matrix");
  if (spec.out_dir.empty()) throw std::invalid_argument("distortion trace needs an output directory");
  SolverConfig cfg = spec.config;
  if (spec.problem.target_tol > 0.0) cfg.tol = spec.problem.target_tol;
  cfg.validate();
  const fs::path dir(spec.out_dir);
  fs::create_directories(dir);

  struct Row {
    std::int64_t iteration = 0;
    double inv_sketch_norm = 0.0;
    double sres = 0.0;
    std::optional<double> true_residual;
  };
  std::vector<Row> rows;
  SolveCallbacks callbacks;
  callbacks.on_iteration = [&rows](const IterationEvent& ev) {
    Row row;
    row.iteration = ev.iteration;
    row.inv_sketch_norm = ev.new_basis_sketch_norm > 0.0 ? 1.0 / ev.new_basis_sketch_norm : 0.0;
    row.sres = ev.sres;
    rows.push_back(row);
  };
  callbacks.on_residual_check = [&rows](const ResidualEvent& ev) {
    if (!rows.empty() && rows.back().iteration == ev.iteration)
      rows.back().true_residual = ev.true_residual;
  };

  SolveResult res = solve(OperatorRef(*spec.problem.matrix), spec.problem.rhs, cfg, {}, nullptr,
                          spec.problem.x0.size() > 0 ? &spec.problem.x0 : nullptr, &callbacks);

  std::vector<std::string> files;
  {
    std::ofstream out = open_out(dir / "distortion_trace.csv");
    out << "iteration,inverse_basis_sketch_norm,sketched_residual,true_residual,ratio\n";
    for (const Row& row : rows) {
      out << row.iteration << ',' << num(row.inv_sketch_norm) << ',' << num(row.sres) << ',';
      if (row.true_residual) {
        out << num(*row.true_residual) << ',';
        if (row.sres > 0.0) out << num(*row.true_residual / row.sres);
      } else {
        out << ',';
      }
      out << '\n';
    }
    files.push_back((dir / "distortion_trace.csv").string());
  }
  {
    json manifest{{"campaign", spec.name},
                  {"solver", "gmres-sdr"},
                  {"config", config_json(cfg)},
                  {"versions", {{"skrylov", version_string}, {"eigen", eigen_version()}}},
                  {"statuses", json::array({to_string(res.report.status)})},
                  {"problems", json::array({report_json(0, res.report)})},
                  {"files", json::array({"distortion_trace.csv", "manifest.json"})}};
    std::ofstream out = open_out(dir / "manifest.json");
    out << manifest.dump(2) << '\n';
    files.push_back((dir / "manifest.json").string());
  }
  return files;
}

}  // namespace skrylov::tools
