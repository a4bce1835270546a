// Copyright (c) 2026 skrylov contributors
// SPDX-License-Identifier: MIT
#pragma once

#include "skrylov/arnoldi.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>

namespace skrylov {

/// Givens-rotation record for a Hessenberg least-squares problem
/// min || H y - beta e1 ||: rotation magnitudes and the running residual
/// norms beta * prod |s_i|.
struct GivensDiagnostics {
  Eigen::VectorXd sines;      ///< |s_j| per step
  Eigen::VectorXd cosines;    ///< |c_j| per step
  Eigen::VectorXd residuals;  ///< residual norm after step j
  double beta = 0.0;
  Eigen::MatrixXd r_factor;        ///< triangularized H (p x p upper part valid)
  Eigen::VectorXd transformed_rhs;  ///< rotated beta e1, length p + 1
};

/// Triangularizes an upper Hessenberg matrix with Givens rotations and
/// tracks the least-squares residual norm step by step.
///
/// H must be (p+1) x p with exact zeros below the first subdiagonal; the
/// residual after step j equals beta times the product of the first j
/// rotation sines, which the rotation recursion reproduces exactly.
inline GivensDiagnostics givens_residual_track(const Eigen::MatrixXd& H, double beta) {
  const Eigen::Index p = H.cols();
  if (H.rows() != p + 1)
    throw std::invalid_argument("givens_residual_track: matrix must be (p+1) x p, got " +
                                std::to_string(H.rows()) + " x " + std::to_string(p));
  for (Eigen::Index j = 0; j < p; ++j)
    for (Eigen::Index i = j + 2; i < p + 1; ++i)
      if (H(i, j) != 0.0)
        throw std::invalid_argument("givens_residual_track: nonzero entry below the subdiagonal at (" +
                                    std::to_string(i) + ", " + std::to_string(j) + ")");
  GivensDiagnostics diag;
  diag.beta = beta;
  diag.sines.resize(p);
  diag.cosines.resize(p);
  diag.residuals.resize(p);
  Eigen::MatrixXd R = H;
  Eigen::VectorXd g = Eigen::VectorXd::Zero(p + 1);
  g(0) = beta;
  Eigen::VectorXd cs(p), sn(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      const double a = R(i, j), b = R(i + 1, j);
      R(i, j) = cs(i) * a + sn(i) * b;
      R(i + 1, j) = -sn(i) * a + cs(i) * b;
    }
    const double a = R(j, j), b = R(j + 1, j);
    const double r = std::hypot(a, b);
    double c = 1.0, s = 0.0;
    if (r != 0.0) {
      c = a / r;
      s = b / r;
    }
    cs(j) = c;
    sn(j) = s;
    R(j, j) = r;
    R(j + 1, j) = 0.0;
    const double ga = g(j), gb = g(j + 1);
    g(j) = c * ga + s * gb;
    g(j + 1) = -s * ga + c * gb;
    diag.sines(j) = std::abs(s);
    diag.cosines(j) = std::abs(c);
    diag.residuals(j) = std::abs(g(j + 1));
  }
  diag.r_factor = R.topRows(p);
  diag.transformed_rhs = g;
  return diag;
}

/// One-step bound on the unsketched residual norm: with the latest angle
/// sine s and cosine c and a norm-distortion level eps in [0, 1), the new
/// residual is at most prev * sqrt((s^2 + 2 eps (1 + c)) / (1 - eps^2)).
/// At eps = 0 this reduces to the familiar |s| * prev.
inline double estimate_true_residual(const GivensDiagnostics& diag, double eps_hat,
                                     double prev_estimate) {
  if (diag.sines.size() == 0)
    throw std::invalid_argument("estimate_true_residual: no rotations recorded");
  if (!(eps_hat >= 0.0 && eps_hat < 1.0))
    throw std::invalid_argument("estimate_true_residual: eps must lie in [0, 1)");
  const double s = diag.sines(diag.sines.size() - 1);
  const double c = diag.cosines(diag.cosines.size() - 1);
  return prev_estimate *
         std::sqrt((s * s + 2.0 * eps_hat * (1.0 + c)) / (1.0 - eps_hat * eps_hat));
}

/// Truncated-Arnoldi data recast over an orthonormal sketched basis.
struct WhitenedProblem {
  Eigen::MatrixXd H;   ///< (j+1) x j full upper Hessenberg
  double beta = 0.0;   ///< sketched residual norm (whitened rhs is beta e1)
  double r_cond = 0.0;  ///< condition estimate of the whitening R factor
};

namespace detail {

/// Thin QR with the R diagonal forced nonnegative (Q columns flip to match).
inline void thin_qr_positive(const Eigen::MatrixXd& X, Eigen::MatrixXd& Q, Eigen::MatrixXd& R) {
  const Eigen::Index p = X.cols();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(X);
  Q = qr.householderQ() * Eigen::MatrixXd::Identity(X.rows(), p);
  R = qr.matrixQR().topRows(p).triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < p; ++i) {
    if (R(i, i) < 0.0) {
      R.row(i) = -R.row(i);
      Q.col(i) = -Q.col(i);
    }
  }
}

inline double triangular_cond_estimate(const Eigen::MatrixXd& R) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(R);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(sv.size() - 1) == 0.0) return std::numeric_limits<double>::infinity();
  return sv(0) / sv(sv.size() - 1);
}

}  // namespace detail

/// Orthonormalizes the sketched basis SV and transforms the band Hessenberg
/// into the full Hessenberg of the equivalent whitened problem
/// min || H_w y - beta e1 ||, whose residuals match the sketched residuals
/// of the original least-squares problem. Diagnostic path: the solver itself
/// never whitens.
inline WhitenedProblem whiten_arnoldi(const KrylovState& st) {
  const Eigen::Index j = st.j;
  if (j < 1) throw std::invalid_argument("whiten_arnoldi: no Arnoldi steps taken");
  if (st.breakdown)
    throw std::invalid_argument("whiten_arnoldi: basis broke down; whitened form undefined");
  Eigen::MatrixXd Q, R;
  detail::thin_qr_positive(st.SV.leftCols(j + 1), Q, R);
  WhitenedProblem wp;
  wp.H = R * st.H.topLeftCorner(j + 1, j);
  wp.beta = R(0, 0) * st.r0_norm;  // = ||S r0||, since SV(:,0) = S r0 / ||r0||
  wp.r_cond = detail::triangular_cond_estimate(R);
  return wp;
}

/// Whitened form of the augmented problem min || [SAU, SAV_j] y - S r0 ||.
///
/// QR-factoring [SAU, SV_{j+1}] makes the augmented matrix upper Hessenberg
/// in the rotated coordinates; rows touching the augmentation block
/// triangularize exactly, so the Givens residual recursion applies to the
/// trailing block returned here, with beta the part of S r0 orthogonal to
/// the span of SAU.
inline WhitenedProblem whiten_augmented(const KrylovState& st, const Eigen::MatrixXd& SAU) {
  const Eigen::Index j = st.j;
  const Eigen::Index k = SAU.cols();
  if (j < 1) throw std::invalid_argument("whiten_augmented: no Arnoldi steps taken");
  if (st.breakdown)
    throw std::invalid_argument("whiten_augmented: basis broke down; whitened form undefined");
  if (SAU.rows() != st.SV.rows())
    throw std::invalid_argument("whiten_augmented: SAU row count does not match the sketch size");
  Eigen::MatrixXd X(st.SV.rows(), k + j + 1);
  X.leftCols(k) = SAU;
  X.rightCols(j + 1) = st.SV.leftCols(j + 1);
  Eigen::MatrixXd Q, R;
  detail::thin_qr_positive(X, Q, R);
  WhitenedProblem wp;
  wp.H = R.block(k, k, j + 1, j + 1) * st.H.topLeftCorner(j + 1, j);
  wp.beta = R(k, k) * st.r0_norm;  // component of S r0 outside span(SAU)
  wp.r_cond = detail::triangular_cond_estimate(R);
  return wp;
}

}  // namespace skrylov
