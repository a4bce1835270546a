// Copyright (c) 2026 skrylov contributors
// SPDX-License-Identifier: MIT
#pragma once

#include "skrylov/givens.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <stdexcept>
#include <string>

namespace skrylov {

/// Galerkin coefficients from a Hessenberg least-squares family: solves the
/// leading j x j block against beta e1. The resulting iterate V y zeroes the
/// first j components of the (whitened) residual instead of minimizing its
/// norm. Throws when the block is singular to working precision, which is
/// the classical failure mode of the Galerkin condition.
inline Eigen::VectorXd fom_coefficients(const Eigen::MatrixXd& H, double beta, Eigen::Index j) {
  if (j < 1 || j > H.cols() || j + 1 > H.rows())
    throw std::invalid_argument("fom_coefficients: block size " + std::to_string(j) +
                                " does not fit a " + std::to_string(H.rows()) + " x " +
                                std::to_string(H.cols()) + " Hessenberg matrix");
  const Eigen::MatrixXd block = H.topLeftCorner(j, j);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(block);
  if (!lu.isInvertible())
    throw std::runtime_error("fom_coefficients: singular Galerkin block at size " +
                             std::to_string(j));
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(j);
  rhs(0) = beta;
  return lu.solve(rhs);
}

inline Eigen::VectorXd fom_coefficients(const WhitenedProblem& wp, Eigen::Index j) {
  return fom_coefficients(wp.H, wp.beta, j);
}

/// Minimal-residual coefficients: least-squares solution of the leading
/// (j+1) x j Hessenberg block against beta e1.
inline Eigen::VectorXd gmres_coefficients(const Eigen::MatrixXd& H, double beta, Eigen::Index j) {
  if (j < 1 || j > H.cols() || j + 1 > H.rows())
    throw std::invalid_argument("gmres_coefficients: block size " + std::to_string(j) +
                                " does not fit a " + std::to_string(H.rows()) + " x " +
                                std::to_string(H.cols()) + " Hessenberg matrix");
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(j + 1);
  rhs(0) = beta;
  return H.topLeftCorner(j + 1, j).householderQr().solve(rhs);
}

inline Eigen::VectorXd gmres_coefficients(const WhitenedProblem& wp, Eigen::Index j) {
  return gmres_coefficients(wp.H, wp.beta, j);
}

/// Worst-case gap, over block sizes 1..p, in the coupling between the
/// minimal-residual and Galerkin families of one Hessenberg problem:
/// the step-j minimal-residual coefficients are the convex combination
/// c_j^2 * (Galerkin at j) + s_j^2 * (minimal-residual at j-1, zero-padded),
/// with c_j, s_j the j-th rotation cosine and sine. Sizes whose Galerkin
/// block is singular are skipped: there c_j = 0 and the minimal-residual
/// iterate simply repeats the previous one, so the coupling says nothing.
inline double mr_galerkin_coupling_gap(const Eigen::MatrixXd& H, double beta) {
  const Eigen::Index p = H.cols();
  if (p < 1 || H.rows() != p + 1)
    throw std::invalid_argument("mr_galerkin_coupling_gap: need a (p+1) x p Hessenberg matrix");
  const GivensDiagnostics diag = givens_residual_track(H, beta);
  double gap = 0.0;
  Eigen::VectorXd y_prev = Eigen::VectorXd::Zero(0);
  for (Eigen::Index j = 1; j <= p; ++j) {
    const Eigen::VectorXd y_mr = gmres_coefficients(H, beta, j);
    Eigen::VectorXd padded = Eigen::VectorXd::Zero(j);
    padded.head(j - 1) = y_prev;
    try {
      const Eigen::VectorXd y_f = fom_coefficients(H, beta, j);
      const double c = diag.cosines(j - 1), s = diag.sines(j - 1);
      const Eigen::VectorXd combo = c * c * y_f + s * s * padded;
      const double scale = std::max(1.0, y_mr.norm());
      gap = std::max(gap, (y_mr - combo).norm() / scale);
    } catch (const std::runtime_error&) {
      // singular Galerkin block: no Galerkin iterate exists at this size
    }
    y_prev = y_mr;
  }
  return gap;
}

}  // namespace skrylov
