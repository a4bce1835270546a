// Copyright (c) 2026 skrylov contributors
// SPDX-License-Identifier: MIT
#pragma once

#include "skrylov/rng.hpp"
#include "skrylov/sparse.hpp"

#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

namespace skrylov {

/// One linear system A x = b with an optional initial guess and its own
/// convergence target (relative to ||b||).
struct ProblemInstance {
  std::shared_ptr<const SparseMatrix> matrix;
  Eigen::VectorXd rhs;
  Eigen::VectorXd x0;  // empty means zero initial guess
  double target_tol = 0.0;  // 0 means "use the solver default"
};

/// Ordered family of systems solved back to back. shared_matrix marks the
/// fixed-operator case (every instance points at the same matrix).
struct ProblemSequence {
  std::vector<ProblemInstance> problems;
  bool shared_matrix = false;
};

/// Shifted five-point grid operator with mirrored boundary neighbors.
///
/// On a grid_side x grid_side grid each row carries 4 on the diagonal and -1
/// for each of the four neighbors; a neighbor falling outside the grid is
/// reflected back across the boundary node, so coefficients accumulate on the
/// mirror cell and every row of the unshifted operator sums to zero (the
/// all-ones vector spans the null space). `shift` is added to the diagonal.
inline SparseMatrix gen_neumann(Eigen::Index grid_side, double shift) {
  if (grid_side < 2) throw std::invalid_argument("gen_neumann: grid_side must be at least 2");
  const Eigen::Index g = grid_side;
  const Eigen::Index n = g * g;
  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(5 * n));
  auto reflect = [g](Eigen::Index i) {
    if (i < 0) return -i;       // mirror across the first node
    if (i >= g) return 2 * g - 2 - i;  // mirror across the last node
    return i;
  };
  for (Eigen::Index r = 0; r < g; ++r) {
    for (Eigen::Index c = 0; c < g; ++c) {
      const Eigen::Index p = r * g + c;
      triplets.push_back({p, p, 4.0 + shift});
      const Eigen::Index nbr[4][2] = {{r - 1, c}, {r + 1, c}, {r, c - 1}, {r, c + 1}};
      for (const auto& d : nbr) {
        const Eigen::Index rr = reflect(d[0]);
        const Eigen::Index cc = reflect(d[1]);
        triplets.push_back({p, rr * g + cc, -1.0});
      }
    }
  }
  return SparseMatrix::from_triplets(n, n, std::move(triplets));
}

/// Convection-diffusion operator on the unit square, n x n interior grid.
///
/// Second differences scaled by (n+1)^2 plus `alpha` times centered first
/// differences scaled by (n+1)/2, applied in both grid directions; alpha = 0
/// gives the symmetric diffusion operator, larger alpha increasing
/// nonsymmetry. N = n^2 unknowns.
inline SparseMatrix gen_convdiff(Eigen::Index n, double alpha) {
  if (n < 1) throw std::invalid_argument("gen_convdiff: n must be positive");
  const double h2 = static_cast<double>((n + 1) * (n + 1));  // 1/h^2
  const double cv = alpha * static_cast<double>(n + 1) / 2.0;  // alpha/(2h)
  const Eigen::Index N = n * n;
  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(5 * N));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const Eigen::Index p = i * n + j;
      triplets.push_back({p, p, -4.0 * h2});
      if (i > 0) triplets.push_back({p, p - n, h2 - cv});
      if (i + 1 < n) triplets.push_back({p, p + n, h2 + cv});
      if (j > 0) triplets.push_back({p, p - 1, h2 - cv});
      if (j + 1 < n) triplets.push_back({p, p + 1, h2 + cv});
    }
  }
  return SparseMatrix::from_triplets(N, N, std::move(triplets));
}

/// `count` systems sharing one grid operator, with seeded Gaussian
/// right-hand sides (rhs i uses seed + i).
inline ProblemSequence neumann_sequence(Eigen::Index grid_side, double shift, int count,
                                        std::uint64_t seed, double tol) {
  auto A = std::make_shared<const SparseMatrix>(gen_neumann(grid_side, shift));
  ProblemSequence seq;
  seq.shared_matrix = true;
  seq.problems.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    ProblemInstance p;
    p.matrix = A;
    p.rhs = gaussian_vector(A->rows(), seed + static_cast<std::uint64_t>(i));
    p.target_tol = tol;
    seq.problems.push_back(std::move(p));
  }
  return seq;
}

/// One system per convection strength, all with the all-ones right-hand side.
inline ProblemSequence convdiff_sequence(Eigen::Index n, const std::vector<double>& alphas,
                                         double tol) {
  ProblemSequence seq;
  seq.shared_matrix = false;
  seq.problems.reserve(alphas.size());
  for (const double alpha : alphas) {
    ProblemInstance p;
    p.matrix = std::make_shared<const SparseMatrix>(gen_convdiff(n, alpha));
    p.rhs = Eigen::VectorXd::Ones(n * n);
    p.target_tol = tol;
    seq.problems.push_back(std::move(p));
  }
  return seq;
}

}  // namespace skrylov
