// Copyright (c) 2026 skrylov contributors
// SPDX-License-Identifier: MIT
#pragma once

#include "skrylov/arnoldi.hpp"
#include "skrylov/counters.hpp"
#include "skrylov/givens.hpp"
#include "skrylov/incremental_qr.hpp"
#include "skrylov/operator_ref.hpp"
#include "skrylov/problems.hpp"
#include "skrylov/recycle.hpp"
#include "skrylov/report.hpp"
#include "skrylov/sketch.hpp"
#include "skrylov/sparse.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace skrylov {

/// How a carried deflation space is treated when the matrix changes inside a
/// sequence.
enum class SequenceVariant {
  reuse,    ///< matrices are identical; carry U, SU, SAU as they are
  exact,    ///< recompute SAU against the new matrix (k products + k sketches)
  inexact,  ///< keep the stale SAU; no extra work, no residual guarantees
};

inline const char* to_string(SequenceVariant v) {
  switch (v) {
    case SequenceVariant::reuse: return "reuse";
    case SequenceVariant::exact: return "exact";
    case SequenceVariant::inexact: return "inexact";
  }
  return "unknown";
}

struct SolverConfig {
  Eigen::Index m = 100;  ///< max Arnoldi steps per cycle
  Eigen::Index t = 2;    ///< truncation window for the Arnoldi recurrence
  Eigen::Index k = 20;   ///< deflation subspace size (0 disables recycling)
  Eigen::Index s = 0;    ///< sketch rows; must be at least 2 (m + k)
  double tol = 1e-6;     ///< convergence target, relative to ||b||
  double safety_init = 1.4;  ///< initial margin between sketched and true residuals
  int max_restarts = 10;
  SequenceVariant variant = SequenceVariant::reuse;
  std::uint64_t sketch_seed = 0x5eedULL;
  double rank_tol = 1e-12;      ///< rank cutoff for least squares and deflation
  double breakdown_tol = 1e-14;  ///< relative lucky-breakdown threshold

  void validate() const {
    if (m < 1) throw std::invalid_argument("SolverConfig: m must be at least 1");
    if (t < 1) throw std::invalid_argument("SolverConfig: t must be at least 1");
    if (k < 0 || k >= m)
      throw std::invalid_argument("SolverConfig: need 0 <= k < m, got k = " + std::to_string(k) +
                                  ", m = " + std::to_string(m));
    if (s < 2 * (m + k))
      throw std::invalid_argument("SolverConfig: sketch size s = " + std::to_string(s) +
                                  " is below 2 (m + k) = " + std::to_string(2 * (m + k)));
    if (!(tol > 0.0 && tol < 1.0))
      throw std::invalid_argument("SolverConfig: tol must lie in (0, 1)");
    if (!(safety_init >= 1.0))
      throw std::invalid_argument("SolverConfig: safety_init must be at least 1");
    if (max_restarts < 1) throw std::invalid_argument("SolverConfig: max_restarts must be at least 1");
    if (!(rank_tol >= 0.0)) throw std::invalid_argument("SolverConfig: rank_tol must be >= 0");
    if (!(breakdown_tol >= 0.0))
      throw std::invalid_argument("SolverConfig: breakdown_tol must be >= 0");
  }
};

/// Callback payload after each least-squares solve (once per Arnoldi step).
struct IterationEvent {
  int cycle = 0;
  Eigen::Index step = 0;        ///< 1-based step within the cycle
  std::int64_t iteration = 0;   ///< global step count
  double sres = 0.0;            ///< sketched residual norm of the current iterate
  double new_basis_sketch_norm = 1.0;  ///< ||S v|| of the newest unit basis vector
  const KrylovState* state = nullptr;
  const RecycleSpace* space = nullptr;
  const Eigen::VectorXd* y = nullptr;  ///< current least-squares coefficients
};

/// Callback payload whenever an unsketched residual is computed.
struct ResidualEvent {
  int cycle = 0;
  std::int64_t iteration = 0;
  double sres = 0.0;
  double true_residual = 0.0;
};

struct SolveCallbacks {
  std::function<void(const IterationEvent&)> on_iteration;
  std::function<void(const ResidualEvent&)> on_residual_check;
};

struct CycleResult {
  Eigen::VectorXd correction;  ///< solution update [U, V_j] y
  Eigen::VectorXd residual;    ///< r0 - A correction, from the final verification
  double residual_norm = 0.0;
  double sres = 0.0;           ///< sketched residual at exit
  double entry_norm = 0.0;     ///< ||r0||
  double sketched_entry = 0.0;  ///< ||S r0||
  Eigen::Index steps = 0;
  bool converged = false;
  bool breakdown = false;
  double safety = 1.0;  ///< updated safety factor
};

/// One restart cycle of sketched, deflated, truncated-Arnoldi minimization.
///
/// Grows the Krylov basis step by step while solving the sketched
/// least-squares problem over [U, V_j] incrementally. When the sketched
/// residual clears tol_abs / safety (or the step budget runs out), the
/// unsketched residual is verified at the cost of one operator application;
/// a miss widens the safety factor (never narrowed within a solve) and the
/// cycle continues. Afterwards the recycle space is rebuilt from the
/// harmonic pencil of the sketched blocks. The space is updated in place.
inline CycleResult solve_cycle(const OperatorRef& A, const Eigen::VectorXd& r0, RecycleSpace& space,
                               const SketchOperator& S, const SolverConfig& cfg, double tol_abs,
                               double safety_in, Counters& counters, SolveReport* report = nullptr,
                               const SolveCallbacks* callbacks = nullptr, int cycle_index = 1,
                               std::int64_t iteration_base = 0) {
  CycleResult out;
  out.safety = std::max(1.0, safety_in);

  KrylovState st = init_krylov(r0, S, cfg.t, cfg.m, &counters);
  out.entry_norm = st.r0_norm;
  const Eigen::VectorXd sr0 = st.SV.col(0) * st.r0_norm;
  out.sketched_entry = sr0.norm();

  // seed the incremental factorization with the deflation block; a
  // rank-deficient deflation column is dropped from the space for the rest
  // of this system and the factorization is rebuilt without it
  IncrementalQR qr(S.sketch_dim(), space.dim() + cfg.m, cfg.rank_tol);
  for (;;) {
    std::vector<Eigen::Index> bad;
    for (Eigen::Index q = 0; q < space.dim(); ++q) {
      const auto info = qr.append(space.SAU.col(q));
      if (info.rank_deficient) bad.push_back(q);
    }
    if (bad.empty()) break;
    space.drop_columns(bad);
    if (report)
      report->notes.push_back("cycle " + std::to_string(cycle_index) + ": dropped " +
                              std::to_string(bad.size()) +
                              " deflation columns with rank-deficient sketched images");
    qr = IncrementalQR(S.sketch_dim(), space.dim() + cfg.m, cfg.rank_tol);
    if (space.empty()) break;
  }
  const Eigen::Index k_hat = space.dim();

  Eigen::VectorXd y;
  double sres = out.sketched_entry;
  bool done = false;
  while (!done && st.j < cfg.m && !st.breakdown) {
    const StepResult step = arnoldi_step(st, A, S, &counters, cfg.breakdown_tol);
    const Eigen::Index j = st.j;
    const auto info = qr.append(st.SAV.col(j - 1));
    if (info.rank_deficient) {
      qr.exclude(info.column);
      if (report)
        report->notes.push_back("cycle " + std::to_string(cycle_index) + ", step " +
                                std::to_string(j) +
                                ": sketched basis column rank-deficient; excluded from the "
                                "least-squares problem");
    }
    const auto sol = qr.solve(sr0);
    y = sol.y;
    sres = sol.residual_norm;
    const std::int64_t global_iter = iteration_base + j;
    if (report) report->sketched_residuals.push_back({global_iter, sres});
    if (callbacks && callbacks->on_iteration) {
      IterationEvent ev;
      ev.cycle = cycle_index;
      ev.step = j;
      ev.iteration = global_iter;
      ev.sres = sres;
      ev.new_basis_sketch_norm = step.breakdown ? 1.0 : st.SV.col(j).norm();
      ev.state = &st;
      ev.space = &space;
      ev.y = &y;
      callbacks->on_iteration(ev);
    }

    const bool last = j == cfg.m || st.breakdown;
    if (sres < tol_abs / out.safety || last) {
      out.correction.noalias() = st.V.leftCols(j) * y.tail(j);
      if (k_hat > 0) out.correction.noalias() += space.U * y.head(k_hat);
      Eigen::VectorXd a_corr;
      A.apply(out.correction, a_corr);
      ++counters.matvecs;
      out.residual = r0 - a_corr;
      out.residual_norm = out.residual.norm();
      ++counters.inner_products;
      if (report) report->true_residuals.push_back({global_iter, out.residual_norm});
      if (callbacks && callbacks->on_residual_check)
        callbacks->on_residual_check({cycle_index, global_iter, sres, out.residual_norm});
      if (out.residual_norm < tol_abs) {
        out.converged = true;
        done = true;
      } else {
        if (sres > 0.0) out.safety = std::max(out.safety, out.residual_norm / sres);
        if (last) done = true;
      }
    }
  }

  out.steps = st.j;
  out.sres = sres;
  out.breakdown = st.breakdown;

  if (report) {
    CycleStats cs;
    cs.steps = st.j;
    cs.entry_residual = out.entry_norm;
    cs.sketched_entry = out.sketched_entry;
    cs.exit_sres = sres;
    cs.exit_residual = out.residual_norm;
    cs.safety_after = out.safety;
    if (st.j >= 1 && !st.breakdown) {
      // whitened-basis conditioning, surfaced as a diagnostic only
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(st.SV.leftCols(st.j + 1));
      const auto& sv = svd.singularValues();
      cs.basis_cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1)
                                              : std::numeric_limits<double>::infinity();
    }
    report->cycle_stats.push_back(cs);
  }

  // harmonic recycle update (right-multiplications only; no new sketches,
  // no new operator applications)
  if (cfg.k > 0 && st.j >= 1) {
    std::vector<std::string> notes;
    space = update_recycle(st, space, cfg.k, cfg.rank_tol, &counters, &notes);
    if (report && !report->cycle_stats.empty())
      report->cycle_stats.back().deflation_rank = space.dim();
    if (report)
      for (auto& n : notes)
        report->notes.push_back("cycle " + std::to_string(cycle_index) + ": " + std::move(n));
  } else if (cfg.k == 0) {
    space = RecycleSpace{};
  }
  return out;
}

struct SolveResult {
  Eigen::VectorXd x;
  SolveReport report;
  RecycleSpace space;
};

/// Sketched minimal-residual solve with deflated restarting.
///
/// The target is cfg.tol * ||b||; convergence is always declared on an
/// unsketched residual. An optional recycle space warm-starts the first
/// cycle, and the space extracted after the last cycle is returned for the
/// next system. If no sketch operator is supplied, a subsampled-DCT sketch
/// with cfg.s rows is built from cfg.sketch_seed.
inline SolveResult solve(const OperatorRef& A, const Eigen::VectorXd& b, const SolverConfig& cfg,
                         RecycleSpace space = {}, const SketchOperator* sketch = nullptr,
                         const Eigen::VectorXd* x0 = nullptr,
                         const SolveCallbacks* callbacks = nullptr) {
  cfg.validate();
  if (A.rows() != A.cols())
    throw std::invalid_argument("solve: operator must be square, got " + std::to_string(A.rows()) +
                                " x " + std::to_string(A.cols()));
  if (b.size() != A.rows())
    throw std::invalid_argument("solve: rhs length " + std::to_string(b.size()) +
                                " does not match operator size " + std::to_string(A.rows()));
  if (x0 && x0->size() != b.size())
    throw std::invalid_argument("solve: x0 length " + std::to_string(x0->size()) +
                                " does not match rhs length " + std::to_string(b.size()));
  std::optional<SketchOperator> own_sketch;
  if (!sketch) {
    own_sketch = SketchOperator::subsampled_dct(A.rows(), cfg.s, cfg.sketch_seed);
    sketch = &*own_sketch;
  }
  if (sketch->input_dim() != A.rows())
    throw std::invalid_argument("solve: sketch takes length " +
                                std::to_string(sketch->input_dim()) + " but the operator is " +
                                std::to_string(A.rows()) + " x " + std::to_string(A.cols()));
  if (sketch->sketch_dim() < 2 * (cfg.m + cfg.k))
    throw std::invalid_argument("solve: sketch size " + std::to_string(sketch->sketch_dim()) +
                                " is below 2 (m + k) = " + std::to_string(2 * (cfg.m + cfg.k)));
  if (!space.empty() && space.U.rows() != A.rows())
    throw std::invalid_argument("solve: recycle space has " + std::to_string(space.U.rows()) +
                                " rows but the operator is " + std::to_string(A.rows()) + " x " +
                                std::to_string(A.cols()));

  const auto t_start = std::chrono::steady_clock::now();
  SolveResult result;
  SolveReport& rep = result.report;
  rep.rhs_norm = b.norm();
  ++rep.counters.inner_products;
  const double tol_abs = cfg.tol * rep.rhs_norm;

  result.x = x0 ? *x0 : Eigen::VectorXd::Zero(b.size());
  Eigen::VectorXd r;
  if (x0 && !x0->isZero(0.0)) {
    Eigen::VectorXd ax;
    A.apply(*x0, ax);
    ++rep.counters.matvecs;
    r = b - ax;
  } else {
    r = b;  // zero initial guess costs nothing
  }

  double safety = cfg.safety_init;
  double res_norm = std::numeric_limits<double>::quiet_NaN();
  bool have_res_norm = false;
  for (int cycle = 1; cycle <= cfg.max_restarts; ++cycle) {
    CycleResult cr;
    try {
      cr = solve_cycle(A, r, space, *sketch, cfg, tol_abs, safety, rep.counters, &rep, callbacks,
                       cycle, rep.iterations);
    } catch (const std::domain_error&) {
      // zero residual at cycle entry: converged exactly
      rep.status = SolveStatus::converged;
      res_norm = 0.0;
      have_res_norm = true;
      break;
    }
    rep.cycles = cycle;
    rep.iterations += cr.steps;
    safety = cr.safety;
    result.x += cr.correction;
    r = cr.residual;
    res_norm = cr.residual_norm;
    have_res_norm = true;
    if (cr.converged) {
      rep.status = SolveStatus::converged;
      break;
    }
    if (cr.breakdown) {
      // the Krylov space closed without meeting the target; restarting from
      // the same residual cannot enlarge it
      rep.status = SolveStatus::breakdown;
      rep.notes.push_back("cycle " + std::to_string(cycle) +
                          ": basis exhausted before reaching the target");
      break;
    }
    if (cr.steps == cfg.m && cr.sres > 0.99 * cr.sketched_entry) {
      rep.status = SolveStatus::diverged;
      rep.notes.push_back("cycle " + std::to_string(cycle) +
                          ": sketched residual improved by less than 1% over a full cycle");
      break;
    }
    if (cycle == cfg.max_restarts) rep.status = SolveStatus::max_restarts;
  }
  if (have_res_norm)
    rep.final_relative_residual = rep.rhs_norm > 0.0 ? res_norm / rep.rhs_norm : res_norm;
  result.space = std::move(space);
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return result;
}

inline SolveResult solve(const SparseMatrix& A, const Eigen::VectorXd& b, const SolverConfig& cfg,
                         RecycleSpace space = {}, const SketchOperator* sketch = nullptr,
                         const Eigen::VectorXd* x0 = nullptr,
                         const SolveCallbacks* callbacks = nullptr) {
  return solve(OperatorRef(A), b, cfg, std::move(space), sketch, x0, callbacks);
}

struct SequenceResult {
  std::vector<SolveReport> reports;
  std::vector<Eigen::VectorXd> solutions;
  RecycleSpace space;  ///< deflation space after the last system
};

/// Solves a family of systems in order, carrying the deflation space from
/// one to the next. When the matrix changes, the space is refreshed
/// according to cfg.variant. A failure on one system is recorded in its
/// report and the sequence continues; the space is left as it was before
/// the failed solve.
inline SequenceResult solve_sequence(const ProblemSequence& seq, const SolverConfig& cfg,
                                     const SketchOperator* sketch = nullptr,
                                     RecycleSpace initial_space = {},
                                     const SolveCallbacks* callbacks = nullptr) {
  cfg.validate();
  if (seq.problems.empty()) return {};
  const Eigen::Index n = seq.problems.front().matrix->rows();
  std::optional<SketchOperator> own_sketch;
  if (!sketch) {
    own_sketch = SketchOperator::subsampled_dct(n, cfg.s, cfg.sketch_seed);
    sketch = &*own_sketch;
  }

  SequenceResult result;
  result.space = std::move(initial_space);
  result.reports.reserve(seq.problems.size());
  result.solutions.reserve(seq.problems.size());
  const SparseMatrix* prev_matrix = nullptr;
  for (std::size_t i = 0; i < seq.problems.size(); ++i) {
    const ProblemInstance& prob = seq.problems[i];
    SolverConfig local = cfg;
    if (prob.target_tol > 0.0) local.tol = prob.target_tol;
    Counters pre;  // refresh work is charged to the system that needs it
    try {
      if (!prob.matrix)
        throw std::invalid_argument("solve_sequence: problem " + std::to_string(i) +
                                    " has no matrix");
      if (prob.matrix->rows() != n || prob.matrix->cols() != n)
        throw std::invalid_argument("solve_sequence: problem " + std::to_string(i) + " is " +
                                    std::to_string(prob.matrix->rows()) + " x " +
                                    std::to_string(prob.matrix->cols()) +
                                    " but the sequence runs at size " + std::to_string(n));
      const bool matrix_changed = prev_matrix != nullptr && prev_matrix != prob.matrix.get() &&
                                  !seq.shared_matrix;
      std::string refresh_note;
      if (matrix_changed && !result.space.empty()) {
        switch (local.variant) {
          case SequenceVariant::exact:
            refresh_for_new_matrix(result.space, OperatorRef(*prob.matrix), *sketch,
                                   RefreshMode::exact, &pre);
            break;
          case SequenceVariant::inexact:
            refresh_for_new_matrix(result.space, OperatorRef(*prob.matrix), *sketch,
                                   RefreshMode::inexact, &pre);
            break;
          case SequenceVariant::reuse:
            // carrying a stale image across a changed matrix is the inexact
            // trade expressed implicitly; record that it happened
            refresh_for_new_matrix(result.space, OperatorRef(*prob.matrix), *sketch,
                                   RefreshMode::inexact, &pre);
            refresh_note = "matrix changed under variant=reuse; sketched image carried unrefreshed";
            break;
        }
      } else if (prev_matrix != nullptr && !result.space.empty()) {
        result.space.provenance = RecycleSpace::Provenance::reused;
      }
      SolveResult sr = solve(OperatorRef(*prob.matrix), prob.rhs, local, std::move(result.space),
                             sketch, prob.x0.size() > 0 ? &prob.x0 : nullptr, callbacks);
      result.space = std::move(sr.space);
      sr.report.counters += pre;
      if (!refresh_note.empty()) sr.report.notes.push_back(std::move(refresh_note));
      result.reports.push_back(std::move(sr.report));
      result.solutions.push_back(std::move(sr.x));
    } catch (const std::exception& e) {
      SolveReport rep;
      rep.error = e.what();
      rep.counters = pre;
      rep.notes.push_back("system " + std::to_string(i) + " aborted: " + e.what());
      result.reports.push_back(std::move(rep));
      result.solutions.emplace_back();
    }
    prev_matrix = prob.matrix.get();
  }
  return result;
}

}  // namespace skrylov
