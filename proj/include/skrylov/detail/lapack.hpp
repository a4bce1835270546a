// Copyright (c) 2026 skrylov contributors
// SPDX-License-Identifier: MIT
#pragma once

#include <Eigen/Dense>
#include <lapacke.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace skrylov::detail {

// The *_work LAPACKE entry points are used throughout with explicitly sized
// workspaces; the convenience wrappers' internal workspace queries are
// avoided on purpose (broken on some LAPACKE builds).

struct RealSchurResult {
  Eigen::MatrixXd t;   ///< quasi upper triangular factor
  Eigen::MatrixXd q;   ///< orthogonal Schur basis
  Eigen::VectorXd wr;  ///< eigenvalue real parts
  Eigen::VectorXd wi;  ///< eigenvalue imaginary parts
};

inline RealSchurResult real_schur(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("real_schur: matrix must be square");
  const lapack_int n = static_cast<lapack_int>(a.rows());
  RealSchurResult out;
  out.t = a;
  out.q.resize(n, n);
  out.wr.resize(n);
  out.wi.resize(n);
  if (n == 0) return out;
  lapack_int sdim = 0;
  std::vector<double> work(static_cast<std::size_t>(80 * n + 64));
  const lapack_int info = LAPACKE_dgees_work(
      LAPACK_COL_MAJOR, 'V', 'N', nullptr, n, out.t.data(), n, &sdim, out.wr.data(), out.wi.data(),
      out.q.data(), n, work.data(), static_cast<lapack_int>(work.size()), nullptr);
  if (info != 0)
    throw std::runtime_error("real_schur: dgees failed with info = " + std::to_string(info));
  return out;
}

/// Reorders a real Schur form so the selected eigenvalues lead.
inline void reorder_schur(RealSchurResult& schur, const std::vector<lapack_int>& select) {
  const lapack_int n = static_cast<lapack_int>(schur.t.rows());
  if (static_cast<lapack_int>(select.size()) != n)
    throw std::invalid_argument("reorder_schur: select size mismatch");
  if (n == 0) return;
  lapack_int m = 0;
  double s_cond = 0.0, sep = 0.0;
  std::vector<double> work(static_cast<std::size_t>(std::max<lapack_int>(1, n * n)));
  std::vector<lapack_int> iwork(static_cast<std::size_t>(std::max<lapack_int>(1, n * n)));
  const lapack_int info = LAPACKE_dtrsen_work(
      LAPACK_COL_MAJOR, 'N', 'V', select.data(), n, schur.t.data(), n, schur.q.data(), n,
      schur.wr.data(), schur.wi.data(), &m, &s_cond, &sep, work.data(),
      static_cast<lapack_int>(work.size()), iwork.data(), static_cast<lapack_int>(iwork.size()));
  if (info != 0)
    throw std::runtime_error("reorder_schur: dtrsen failed with info = " + std::to_string(info));
}

struct GeneralizedSchurResult {
  Eigen::MatrixXd s;       ///< quasi triangular factor of A
  Eigen::MatrixXd t;       ///< triangular factor of B
  Eigen::MatrixXd q;       ///< left orthogonal factor
  Eigen::MatrixXd z;       ///< right orthogonal factor
  Eigen::VectorXd alphar;  ///< generalized eigenvalue numerators (real)
  Eigen::VectorXd alphai;  ///< generalized eigenvalue numerators (imag)
  Eigen::VectorXd beta;    ///< generalized eigenvalue denominators
};

inline GeneralizedSchurResult generalized_schur(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
    throw std::invalid_argument("generalized_schur: matrices must be square and same size");
  const lapack_int n = static_cast<lapack_int>(a.rows());
  GeneralizedSchurResult out;
  out.s = a;
  out.t = b;
  out.q.resize(n, n);
  out.z.resize(n, n);
  out.alphar.resize(n);
  out.alphai.resize(n);
  out.beta.resize(n);
  if (n == 0) return out;
  lapack_int sdim = 0;
  std::vector<double> work(static_cast<std::size_t>(80 * n + 64));
  const lapack_int info = LAPACKE_dgges_work(
      LAPACK_COL_MAJOR, 'V', 'V', 'N', nullptr, n, out.s.data(), n, out.t.data(), n, &sdim,
      out.alphar.data(), out.alphai.data(), out.beta.data(), out.q.data(), n, out.z.data(), n,
      work.data(), static_cast<lapack_int>(work.size()), nullptr);
  if (info != 0)
    throw std::runtime_error("generalized_schur: dgges failed with info = " + std::to_string(info));
  return out;
}

/// Reorders a generalized Schur form so the selected pairs lead.
inline void reorder_generalized_schur(GeneralizedSchurResult& gs,
                                      const std::vector<lapack_int>& select) {
  const lapack_int n = static_cast<lapack_int>(gs.s.rows());
  if (static_cast<lapack_int>(select.size()) != n)
    throw std::invalid_argument("reorder_generalized_schur: select size mismatch");
  if (n == 0) return;
  lapack_int m = 0;
  double pl = 0.0, pr = 0.0;
  double dif[2] = {0.0, 0.0};
  std::vector<double> work(static_cast<std::size_t>(8 * n + 64));
  std::vector<lapack_int> iwork(static_cast<std::size_t>(n + 16));
  const lapack_int info = LAPACKE_dtgsen_work(
      LAPACK_COL_MAJOR, 0, 1, 1, select.data(), n, gs.s.data(), n, gs.t.data(), n,
      gs.alphar.data(), gs.alphai.data(), gs.beta.data(), gs.q.data(), n, gs.z.data(), n, &m, &pl,
      &pr, dif, work.data(), static_cast<lapack_int>(work.size()), iwork.data(),
      static_cast<lapack_int>(iwork.size()));
  if (info != 0)
    throw std::runtime_error("reorder_generalized_schur: dtgsen failed with info = " +
                             std::to_string(info));
}

}  // namespace skrylov::detail
