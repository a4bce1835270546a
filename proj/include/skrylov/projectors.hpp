// Copyright (c) 2026 skrylov contributors
// SPDX-License-Identifier: MIT
#pragma once

#include "skrylov/sketch.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <stdexcept>
#include <string>

namespace skrylov {

/// Moore-Penrose pseudoinverse through a complete orthogonal decomposition.
inline Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& X) {
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(X);
  return cod.pseudoInverse();
}

/// Oblique projector onto range(C) along the kernel of (S C)^+ S, built
/// densely: Phi = C (S C)^+ S. Applying it to a residual keeps the part the
/// deflation image can absorb, as judged through the sketch.
inline Eigen::MatrixXd oblique_image_projector(const Eigen::MatrixXd& C,
                                               const Eigen::MatrixXd& S_dense) {
  if (S_dense.cols() != C.rows())
    throw std::invalid_argument("oblique_image_projector: sketch takes length " +
                                std::to_string(S_dense.cols()) + " but C has " +
                                std::to_string(C.rows()) + " rows");
  return C * pseudo_inverse(S_dense * C) * S_dense;
}

/// Solution-side deflation projector Pi = U (S A U)^+ S A. Idempotent with
/// range(U); the part of the error it captures is exactly what the carried
/// space resolves without any Krylov steps.
inline Eigen::MatrixXd deflation_projector(const Eigen::MatrixXd& U, const Eigen::MatrixXd& A_dense,
                                           const Eigen::MatrixXd& S_dense) {
  if (A_dense.rows() != A_dense.cols())
    throw std::invalid_argument("deflation_projector: operator must be square");
  if (U.rows() != A_dense.cols())
    throw std::invalid_argument("deflation_projector: U has " + std::to_string(U.rows()) +
                                " rows but the operator is " + std::to_string(A_dense.rows()) +
                                " x " + std::to_string(A_dense.cols()));
  const Eigen::MatrixXd SA = S_dense * A_dense;
  return U * pseudo_inverse(SA * U) * SA;
}

/// Orthogonal projector in sketch coordinates onto range(S C).
inline Eigen::MatrixXd sketch_space_projector(const Eigen::MatrixXd& C,
                                              const Eigen::MatrixXd& S_dense) {
  const Eigen::MatrixXd SC = S_dense * C;
  return SC * pseudo_inverse(SC);
}

/// Structural defects of the deflation projectors, all relative:
/// both idempotencies, the intertwining S Phi = Psi S, the range identity
/// Phi C = C, and the transport identity A Pi = Phi A.
struct ProjectorDiagnostics {
  double phi_idempotency = 0.0;
  double pi_idempotency = 0.0;
  double intertwine_defect = 0.0;
  double range_defect = 0.0;
  double transport_defect = 0.0;

  double worst() const {
    return std::max({phi_idempotency, pi_idempotency, intertwine_defect, range_defect,
                     transport_defect});
  }
};

inline ProjectorDiagnostics projector_check(const Eigen::MatrixXd& A_dense,
                                            const Eigen::MatrixXd& U,
                                            const Eigen::MatrixXd& S_dense) {
  const Eigen::MatrixXd C = A_dense * U;
  const Eigen::MatrixXd phi = oblique_image_projector(C, S_dense);
  const Eigen::MatrixXd pi = deflation_projector(U, A_dense, S_dense);
  const Eigen::MatrixXd psi = sketch_space_projector(C, S_dense);
  auto rel = [](const Eigen::MatrixXd& defect, double scale) {
    return defect.norm() / std::max(1.0, scale);
  };
  ProjectorDiagnostics d;
  d.phi_idempotency = rel(phi * phi - phi, phi.norm());
  d.pi_idempotency = rel(pi * pi - pi, pi.norm());
  d.intertwine_defect = rel(S_dense * phi - psi * S_dense, S_dense.norm());
  d.range_defect = rel(phi * C - C, C.norm());
  d.transport_defect = rel(A_dense * pi - phi * A_dense, A_dense.norm());
  return d;
}

inline ProjectorDiagnostics projector_check(const Eigen::MatrixXd& A_dense,
                                            const Eigen::MatrixXd& U, const SketchOperator& S) {
  return projector_check(A_dense, U, S.dense());
}

}  // namespace skrylov
