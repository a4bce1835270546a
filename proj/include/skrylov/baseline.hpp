// Copyright (c) 2026 skrylov contributors
// SPDX-License-Identifier: MIT
#pragma once

#include "skrylov/counters.hpp"
#include "skrylov/operator_ref.hpp"
#include "skrylov/report.hpp"
#include "skrylov/sparse.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace skrylov {

/// Classical restarted minimal-residual solver used as the comparison
/// point: full modified Gram-Schmidt orthogonalization, so every step pays
/// one operator application plus inner products against the whole basis.
struct BaselineConfig {
  Eigen::Index m = 100;  ///< steps per restart cycle
  double tol = 1e-6;     ///< convergence target, relative to ||b||
  int max_restarts = 10;
  double breakdown_tol = 1e-14;

  void validate() const {
    if (m < 1) throw std::invalid_argument("BaselineConfig: m must be at least 1");
    if (!(tol > 0.0 && tol < 1.0))
      throw std::invalid_argument("BaselineConfig: tol must lie in (0, 1)");
    if (max_restarts < 1)
      throw std::invalid_argument("BaselineConfig: max_restarts must be at least 1");
    if (!(breakdown_tol >= 0.0))
      throw std::invalid_argument("BaselineConfig: breakdown_tol must be >= 0");
  }
};

struct BaselineResult {
  Eigen::VectorXd x;
  SolveReport report;
};

/// Restarted minimal-residual solve with rotation-tracked residual
/// estimates. Each cycle ends with one verification product so convergence
/// is declared on a directly computed residual, matching the verification
/// discipline of the sketched solver; the estimate stream is recorded in
/// the report alongside the verified values.
inline BaselineResult baseline_gmres(const OperatorRef& A, const Eigen::VectorXd& b,
                                     const BaselineConfig& cfg,
                                     const Eigen::VectorXd* x0 = nullptr) {
  cfg.validate();
  if (A.rows() != A.cols())
    throw std::invalid_argument("baseline_gmres: operator must be square, got " +
                                std::to_string(A.rows()) + " x " + std::to_string(A.cols()));
  if (b.size() != A.rows())
    throw std::invalid_argument("baseline_gmres: rhs length " + std::to_string(b.size()) +
                                " does not match operator size " + std::to_string(A.rows()));
  if (x0 && x0->size() != b.size())
    throw std::invalid_argument("baseline_gmres: x0 length " + std::to_string(x0->size()) +
                                " does not match rhs length " + std::to_string(b.size()));

  const auto t_start = std::chrono::steady_clock::now();
  BaselineResult result;
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
    r = b;
  }

  const Eigen::Index n = b.size();
  Eigen::MatrixXd V(n, cfg.m + 1);
  Eigen::MatrixXd H(cfg.m + 1, cfg.m);   // raw recurrence coefficients
  Eigen::MatrixXd R(cfg.m + 1, cfg.m);   // rotated (triangular) copy
  Eigen::VectorXd g(cfg.m + 1), cs(cfg.m), sn(cfg.m);

  double res_norm = std::numeric_limits<double>::quiet_NaN();
  bool have_res_norm = false;
  for (int cycle = 1; cycle <= cfg.max_restarts; ++cycle) {
    const double beta = r.norm();
    ++rep.counters.inner_products;
    if (beta == 0.0) {
      rep.status = SolveStatus::converged;
      res_norm = 0.0;
      have_res_norm = true;
      break;
    }
    rep.cycles = cycle;
    V.col(0) = r / beta;
    H.setZero();
    R.setZero();
    g.setZero();
    g(0) = beta;

    Eigen::Index p = 0;
    bool breakdown = false;
    double est = beta;
    while (p < cfg.m) {
      const Eigen::Index q = p;
      Eigen::VectorXd w = A(V.col(q));
      ++rep.counters.matvecs;
      for (Eigen::Index i = 0; i <= q; ++i) {
        const double h = V.col(i).dot(w);
        ++rep.counters.inner_products;
        H(i, q) = h;
        w.noalias() -= h * V.col(i);
      }
      const double h_next = w.norm();
      ++rep.counters.inner_products;
      H(q + 1, q) = h_next;
      const double col_norm = H.col(q).head(q + 2).norm();
      if (h_next <= cfg.breakdown_tol * col_norm) {
        H(q + 1, q) = 0.0;
        breakdown = true;
      } else {
        V.col(q + 1) = w / h_next;
      }

      // rotate the new column into triangular form and extend the rotated rhs
      R.col(q).head(q + 2) = H.col(q).head(q + 2);
      for (Eigen::Index i = 0; i < q; ++i) {
        const double a = R(i, q), bb = R(i + 1, q);
        R(i, q) = cs(i) * a + sn(i) * bb;
        R(i + 1, q) = -sn(i) * a + cs(i) * bb;
      }
      const double a = R(q, q), bb = R(q + 1, q);
      const double rr = std::hypot(a, bb);
      double c = 1.0, s = 0.0;
      if (rr > 0.0) {
        c = a / rr;
        s = bb / rr;
      }
      cs(q) = c;
      sn(q) = s;
      R(q, q) = rr;
      R(q + 1, q) = 0.0;
      const double ga = g(q);
      g(q) = c * ga;
      g(q + 1) = -s * ga;
      est = std::abs(g(q + 1));
      ++p;
      rep.sketched_residuals.push_back({rep.iterations + p, est});
      if (est < tol_abs || breakdown) break;
    }

    // assemble the cycle iterate from the triangular system (least-squares
    // fallback if a rotation left a zero pivot)
    Eigen::VectorXd y;
    bool diag_ok = true;
    for (Eigen::Index i = 0; i < p; ++i)
      if (R(i, i) == 0.0) diag_ok = false;
    if (diag_ok) {
      y = R.topLeftCorner(p, p).triangularView<Eigen::Upper>().solve(g.head(p));
    } else {
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(p + 1);
      rhs(0) = beta;
      y = H.topLeftCorner(p + 1, p).colPivHouseholderQr().solve(rhs);
    }
    Eigen::VectorXd correction = V.leftCols(p) * y;
    result.x += correction;

    // one verification product per cycle; convergence is decided here
    Eigen::VectorXd a_corr;
    A.apply(correction, a_corr);
    ++rep.counters.matvecs;
    r -= a_corr;
    res_norm = r.norm();
    ++rep.counters.inner_products;
    have_res_norm = true;
    rep.iterations += p;
    rep.true_residuals.push_back({rep.iterations, res_norm});

    CycleStats stats;
    stats.steps = p;
    stats.entry_residual = beta;
    stats.sketched_entry = beta;
    stats.exit_sres = est;
    stats.exit_residual = res_norm;
    stats.safety_after = 1.0;
    rep.cycle_stats.push_back(stats);

    if (res_norm < tol_abs) {
      rep.status = SolveStatus::converged;
      break;
    }
    if (breakdown) {
      rep.status = SolveStatus::breakdown;
      rep.notes.push_back("cycle " + std::to_string(cycle) +
                          ": basis exhausted before reaching the target");
      break;
    }
    if (p == cfg.m && est > 0.99 * beta) {
      rep.status = SolveStatus::diverged;
      rep.notes.push_back("cycle " + std::to_string(cycle) +
                          ": residual estimate improved by less than 1% over a full cycle");
      break;
    }
    if (cycle == cfg.max_restarts) rep.status = SolveStatus::max_restarts;
  }
  if (have_res_norm)
    rep.final_relative_residual = rep.rhs_norm > 0.0 ? res_norm / rep.rhs_norm : res_norm;
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return result;
}

inline BaselineResult baseline_gmres(const SparseMatrix& A, const Eigen::VectorXd& b,
                                     const BaselineConfig& cfg,
                                     const Eigen::VectorXd* x0 = nullptr) {
  return baseline_gmres(OperatorRef(A), b, cfg, x0);
}

}  // namespace skrylov
