// Copyright (c) 2026 skrylov contributors
// SPDX-License-Identifier: MIT
#include "skrylov/sparse.hpp"

#include "skrylov/rng.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

using skrylov::SparseMatrix;
using skrylov::Triplet;

TEST_CASE("triplet assembly sums duplicates and drops zeros", "[sparse]") {
  std::vector<Triplet> trip{
      {0, 0, 2.0}, {0, 0, 3.0},   // duplicate -> 5
      {1, 2, 1.5}, {2, 1, -1.0},
      {1, 0, 4.0}, {1, 0, -4.0},  // cancels exactly -> dropped
  };
  const SparseMatrix A = SparseMatrix::from_triplets(3, 3, trip);
  const Eigen::MatrixXd D = A.dense();
  Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(3, 3);
  expect(0, 0) = 5.0;
  expect(1, 2) = 1.5;
  expect(2, 1) = -1.0;
  REQUIRE(D == expect);
}

TEST_CASE("apply matches the dense product", "[sparse]") {
  std::vector<Triplet> trip;
  skrylov::Rng rng(17);
  for (int q = 0; q < 60; ++q)
    trip.push_back({static_cast<Eigen::Index>(rng.uniform_below(8)),
                    static_cast<Eigen::Index>(rng.uniform_below(6)), rng.gaussian()});
  const SparseMatrix A = SparseMatrix::from_triplets(8, 6, trip);
  const Eigen::VectorXd x = skrylov::gaussian_vector(6, 99);
  const Eigen::VectorXd y = A * x;
  const Eigen::VectorXd y_dense = A.dense() * x;
  REQUIRE((y - y_dense).norm() <= 1e-14 * (1.0 + y_dense.norm()));
  REQUIRE(skrylov::matvec(A, x) == y);
}

TEST_CASE("construction rejects malformed storage", "[sparse]") {
  using I = Eigen::Index;
  // valid 2x2: [[1, 2], [0, 3]]
  REQUIRE_NOTHROW(SparseMatrix(2, 2, std::vector<I>{0, 2, 3}, std::vector<I>{0, 1, 1},
                               std::vector<double>{1.0, 2.0, 3.0}));
  // offsets not monotone
  REQUIRE_THROWS_AS(SparseMatrix(2, 2, std::vector<I>{0, 2, 1}, std::vector<I>{0, 1, 1},
                                 std::vector<double>{1.0, 2.0, 3.0}),
                    std::invalid_argument);
  // column out of range
  REQUIRE_THROWS_AS(SparseMatrix(2, 2, std::vector<I>{0, 2, 3}, std::vector<I>{0, 5, 1},
                                 std::vector<double>{1.0, 2.0, 3.0}),
                    std::invalid_argument);
  // columns not strictly increasing within a row
  REQUIRE_THROWS_AS(SparseMatrix(2, 2, std::vector<I>{0, 2, 3}, std::vector<I>{1, 0, 1},
                                 std::vector<double>{1.0, 2.0, 3.0}),
                    std::invalid_argument);
  // non-finite value
  REQUIRE_THROWS_AS(SparseMatrix(2, 2, std::vector<I>{0, 2, 3}, std::vector<I>{0, 1, 1},
                                 std::vector<double>{1.0, std::nan(""), 3.0}),
                    std::invalid_argument);
  // triplet out of range
  REQUIRE_THROWS_AS(SparseMatrix::from_triplets(2, 2, {{2, 0, 1.0}}), std::invalid_argument);
}

TEST_CASE("dimension mismatches are reported with both sizes", "[sparse]") {
  const SparseMatrix A = SparseMatrix::from_triplets(3, 4, {{0, 0, 1.0}});
  const Eigen::VectorXd x = Eigen::VectorXd::Ones(3);  // wrong length
  try {
    (void)(A * x);
    FAIL("expected an exception");
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    REQUIRE(msg.find('3') != std::string::npos);
    REQUIRE(msg.find('4') != std::string::npos);
  }
}
