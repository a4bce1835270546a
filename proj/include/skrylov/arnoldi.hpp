// Copyright (c) 2026 skrylov contributors
// SPDX-License-Identifier: MIT
#pragma once

#include "skrylov/counters.hpp"
#include "skrylov/operator_ref.hpp"
#include "skrylov/sketch.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <stdexcept>
#include <string>

namespace skrylov {

/// Krylov basis grown by truncated Arnoldi, with the sketched basis and the
/// sketched image maintained in lockstep.
///
/// After j steps: V holds j+1 unit-norm basis columns (j on breakdown), H is
/// the (j+1) x j band Hessenberg with H(i, q) = 0 for i < q - t + 1, SV
/// holds the sketches of the basis columns, and SAV(:, q) equals
/// SV(:, 0:q+1) * H(0:q+1, q) column by column, so S(A v_q) is reproduced
/// through the recurrence without sketching A v_q a second time. Exactly one
/// new sketch application per step.
struct KrylovState {
  Eigen::MatrixXd V;    ///< n x (m_max + 1), first basis_cols() columns valid
  Eigen::MatrixXd H;    ///< (m_max + 1) x m_max band Hessenberg
  Eigen::MatrixXd SV;   ///< s x (m_max + 1)
  Eigen::MatrixXd SAV;  ///< s x m_max
  Eigen::Index j = 0;       ///< completed steps
  Eigen::Index t = 0;       ///< truncation window
  Eigen::Index m_max = 0;   ///< step capacity
  double r0_norm = 0.0;     ///< norm of the starting residual
  bool breakdown = false;   ///< the last step found no new direction

  Eigen::Index basis_cols() const { return breakdown ? j : j + 1; }
};

struct StepResult {
  double h_subdiag = 0.0;  ///< new subdiagonal entry (0 on breakdown)
  bool breakdown = false;
};

/// Starts a Krylov state from the residual r0 (one sketch application, one
/// norm). Errors on a zero r0, which signals an already-converged system.
inline KrylovState init_krylov(const Eigen::VectorXd& r0, const SketchOperator& S, Eigen::Index t,
                               Eigen::Index m_max, Counters* counters = nullptr) {
  if (t < 1) throw std::invalid_argument("init_krylov: truncation window must be at least 1");
  if (m_max < 1) throw std::invalid_argument("init_krylov: m_max must be at least 1");
  if (r0.size() != S.input_dim())
    throw std::invalid_argument("init_krylov: residual length " + std::to_string(r0.size()) +
                                " does not match sketch input " + std::to_string(S.input_dim()));
  KrylovState st;
  st.t = t;
  st.m_max = m_max;
  st.r0_norm = r0.norm();
  if (counters) ++counters->inner_products;
  if (st.r0_norm == 0.0)
    throw std::domain_error("init_krylov: zero initial residual (already converged)");
  const Eigen::Index n = r0.size();
  const Eigen::Index s = S.sketch_dim();
  st.V.resize(n, m_max + 1);
  st.H = Eigen::MatrixXd::Zero(m_max + 1, m_max);
  st.SV.resize(s, m_max + 1);
  st.SAV.resize(s, m_max);
  st.V.col(0) = r0 / st.r0_norm;
  Eigen::VectorXd sr0 = S.apply(r0);
  if (counters) ++counters->sketch_applies;
  st.SV.col(0) = sr0 / st.r0_norm;
  return st;
}

/// One truncated-Arnoldi step: w = A v_j is orthogonalized against the last
/// t basis vectors by modified Gram-Schmidt and normalized into v_{j+1}.
///
/// The recurrence A v_j = sum_i v_i H(i, j) holds to rounding error whether
/// or not the truncated basis is orthogonal. A new direction shorter than
/// breakdown_tol times ||A v_j|| is a lucky breakdown: the subdiagonal entry
/// is set to zero and no new basis vector is added, signaling that the
/// Krylov space is exhausted (exact-arithmetic convergence).
inline StepResult arnoldi_step(KrylovState& st, const OperatorRef& A, const SketchOperator& S,
                               Counters* counters = nullptr, double breakdown_tol = 1e-14) {
  if (st.breakdown) throw std::logic_error("arnoldi_step: basis already broke down");
  if (st.j >= st.m_max) throw std::logic_error("arnoldi_step: step capacity exhausted");
  const Eigen::Index j = st.j;
  Eigen::VectorXd w = A(st.V.col(j));
  if (counters) ++counters->matvecs;
  const double norm_before = w.norm();
  if (counters) ++counters->inner_products;
  const Eigen::Index i0 = std::max<Eigen::Index>(0, j - st.t + 1);
  for (Eigen::Index i = i0; i <= j; ++i) {
    const double h = st.V.col(i).dot(w);
    if (counters) ++counters->inner_products;
    st.H(i, j) = h;
    w.noalias() -= h * st.V.col(i);
  }
  const double h_next = w.norm();
  if (counters) ++counters->inner_products;
  StepResult res;
  if (h_next <= breakdown_tol * norm_before) {
    st.H(j + 1, j) = 0.0;
    st.SAV.col(j).noalias() = st.SV.middleCols(i0, j - i0 + 1) * st.H.col(j).segment(i0, j - i0 + 1);
    st.breakdown = true;
    st.j = j + 1;
    res.breakdown = true;
    return res;
  }
  st.H(j + 1, j) = h_next;
  st.V.col(j + 1) = w / h_next;
  Eigen::VectorXd sv;
  S.apply(st.V.col(j + 1), sv);
  if (counters) ++counters->sketch_applies;
  st.SV.col(j + 1) = sv;
  st.SAV.col(j).noalias() = st.SV.middleCols(i0, j - i0 + 2) * st.H.col(j).segment(i0, j - i0 + 2);
  st.j = j + 1;
  res.h_subdiag = h_next;
  return res;
}

}  // namespace skrylov
