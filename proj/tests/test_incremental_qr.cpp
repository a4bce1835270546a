// Copyright (c) 2026 skrylov contributors
// SPDX-License-Identifier: MIT
#include "skrylov/incremental_qr.hpp"

#include "skrylov/rng.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

using skrylov::IncrementalQR;

namespace {

Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  skrylov::Rng rng(seed);
  Eigen::MatrixXd M(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) M(i, j) = rng.gaussian();
  return M;
}

}  // namespace

TEST_CASE("incremental factorization matches the appended columns", "[qr]") {
  const Eigen::Index rows = 40, cols = 10;
  const Eigen::MatrixXd M = random_matrix(rows, cols, 21);
  IncrementalQR qr(rows, 4);
  for (Eigen::Index j = 0; j < cols; ++j) {
    const auto info = qr.append(M.col(j));
    REQUIRE(info.column == j);
    REQUIRE_FALSE(info.rank_deficient);
  }
  REQUIRE(qr.cols() == cols);
  REQUIRE(qr.raw().isApprox(M, 1e-15));
  const Eigen::MatrixXd Q = qr.q();
  const Eigen::MatrixXd R = qr.r();
  REQUIRE((Q.transpose() * Q - Eigen::MatrixXd::Identity(cols, cols)).norm() <= 1e-13);
  REQUIRE((Q * R - M).norm() <= 1e-13 * M.norm());
  for (Eigen::Index j = 0; j < cols; ++j) {
    REQUIRE(R(j, j) > 0.0);
    for (Eigen::Index i = j + 1; i < cols; ++i) REQUIRE(R(i, j) == 0.0);
  }
}

TEST_CASE("least-squares solves agree with a dense reference", "[qr]") {
  const Eigen::Index rows = 50, cols = 12;
  const Eigen::MatrixXd M = random_matrix(rows, cols, 22);
  const Eigen::VectorXd rhs = skrylov::gaussian_vector(rows, 23);
  IncrementalQR qr(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) qr.append(M.col(j));
  const auto sol = skrylov::ls_solve(qr, rhs);
  const Eigen::VectorXd y_ref = M.householderQr().solve(rhs);
  REQUIRE((sol.y - y_ref).norm() <= 1e-12 * y_ref.norm());
  REQUIRE(sol.residual_norm == Catch::Approx((rhs - M * sol.y).norm()).epsilon(1e-14));
  REQUIRE(sol.residual_norm <= (rhs - M * y_ref).norm() * (1.0 + 1e-12));
}

TEST_CASE("reorthogonalization keeps Q orthonormal on graded columns", "[qr]") {
  // Columns with norms spanning twelve orders of magnitude: plain
  // Gram-Schmidt loses orthogonality here, one reorthogonalization does not.
  const Eigen::Index rows = 30, cols = 8;
  Eigen::MatrixXd M = random_matrix(rows, cols, 24);
  for (Eigen::Index j = 0; j < cols; ++j) M.col(j) *= std::pow(10.0, -1.5 * static_cast<double>(j));
  IncrementalQR qr(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) REQUIRE_FALSE(qr.append(M.col(j)).rank_deficient);
  const Eigen::MatrixXd Q = qr.q();
  REQUIRE((Q.transpose() * Q - Eigen::MatrixXd::Identity(cols, cols)).norm() <= 1e-13);
  REQUIRE((Q * qr.r() - M).norm() <= 1e-13 * M.norm());
}

TEST_CASE("a dependent column is flagged and can be excluded", "[qr]") {
  const Eigen::Index rows = 25;
  const Eigen::MatrixXd M = random_matrix(rows, 3, 25);
  IncrementalQR qr(rows, 8);
  for (Eigen::Index j = 0; j < 3; ++j) qr.append(M.col(j));

  const Eigen::VectorXd dependent = 2.0 * M.col(0) - M.col(1);
  const auto info = qr.append(dependent);
  REQUIRE(info.column == 3);
  REQUIRE(info.rank_deficient);
  REQUIRE(qr.q().col(3).norm() == 0.0);
  REQUIRE(qr.r()(3, 3) == 0.0);
  REQUIRE(qr.unresolved_columns() == std::vector<Eigen::Index>{3});

  const Eigen::VectorXd rhs = skrylov::gaussian_vector(rows, 26);
  REQUIRE_THROWS_WITH(qr.solve(rhs), Catch::Matchers::ContainsSubstring("column 3"));

  qr.exclude(3);
  REQUIRE(qr.is_excluded(3));
  REQUIRE(qr.unresolved_columns().empty());

  // Later columns are unaffected by the sentinel: its R row stays zero.
  const Eigen::VectorXd extra = skrylov::gaussian_vector(rows, 27);
  REQUIRE_FALSE(qr.append(extra).rank_deficient);
  REQUIRE(qr.r()(3, 4) == 0.0);

  const auto sol = qr.solve(rhs);
  REQUIRE(sol.y(3) == 0.0);
  Eigen::MatrixXd used(rows, 4);
  used << M, extra;
  const Eigen::VectorXd y_ref = used.householderQr().solve(rhs);
  Eigen::VectorXd y_used(4);
  y_used << sol.y.head(3), sol.y(4);
  REQUIRE((y_used - y_ref).norm() <= 1e-12 * y_ref.norm());
  REQUIRE(sol.residual_norm == Catch::Approx((rhs - used * y_ref).norm()).epsilon(1e-12));
}

TEST_CASE("the rank test is relative to the column norm", "[qr]") {
  const Eigen::Index rows = 20;
  IncrementalQR qr(rows, 4);
  qr.append(Eigen::VectorXd::Unit(rows, 0));
  // Tiny but independent: direction matters, magnitude does not.
  const Eigen::VectorXd tiny = 1e-9 * Eigen::VectorXd::Unit(rows, 1);
  REQUIRE_FALSE(qr.append(tiny).rank_deficient);
  // Unit norm but within rank_tol of the current span.
  Eigen::VectorXd nearly = Eigen::VectorXd::Unit(rows, 0);
  nearly(2) = 1e-13;
  REQUIRE(qr.append(nearly.normalized()).rank_deficient);
}

TEST_CASE("capacity grows transparently past the initial allocation", "[qr]") {
  const Eigen::Index rows = 15, cols = 9;
  const Eigen::MatrixXd M = random_matrix(rows, cols, 28);
  IncrementalQR qr(rows, 2);
  for (Eigen::Index j = 0; j < cols; ++j) skrylov::qr_append(qr, M.col(j));
  REQUIRE(qr.cols() == cols);
  REQUIRE((qr.q() * qr.r() - M).norm() <= 1e-13 * M.norm());
}

TEST_CASE("incremental QR rejects malformed input", "[qr]") {
  IncrementalQR qr(10, 4);
  REQUIRE_THROWS_AS(IncrementalQR(0, 4), std::invalid_argument);
  REQUIRE_THROWS_AS(qr.append(Eigen::VectorXd::Zero(9)), std::invalid_argument);
  qr.append(Eigen::VectorXd::Unit(10, 0));
  REQUIRE_THROWS_AS(qr.solve(Eigen::VectorXd::Zero(11)), std::invalid_argument);
  REQUIRE_THROWS_AS(qr.exclude(1), std::invalid_argument);
  REQUIRE_THROWS_AS(qr.is_excluded(-1), std::invalid_argument);
}
