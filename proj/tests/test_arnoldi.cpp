// Copyright (c) 2026 skrylov contributors
// SPDX-License-Identifier: MIT
#include "skrylov/arnoldi.hpp"

#include "oracles.hpp"
#include "skrylov/rng.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>

#include <stdexcept>

using skrylov::arnoldi_step;
using skrylov::Counters;
using skrylov::init_krylov;
using skrylov::KrylovState;
using skrylov::OperatorRef;
using skrylov::SketchOperator;

namespace {

Eigen::MatrixXd random_matrix(Eigen::Index n, std::uint64_t seed) {
  skrylov::Rng rng(seed);
  Eigen::MatrixXd A(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) A(i, j) = rng.gaussian();
  A.diagonal().array() += static_cast<double>(n);  // keep it well conditioned
  return A;
}

}  // namespace

TEST_CASE("truncated recurrence reproduces A v_q exactly", "[arnoldi]") {
  const Eigen::Index n = 40, m = 10, t = 2;
  const Eigen::MatrixXd A = random_matrix(n, 3);
  const OperatorRef op(A);
  const auto S = SketchOperator::subsampled_dct(n, 30, 5);
  const Eigen::VectorXd r0 = skrylov::gaussian_vector(n, 7);
  KrylovState st = init_krylov(r0, S, t, m);
  for (Eigen::Index q = 0; q < m; ++q) arnoldi_step(st, op, S);
  REQUIRE(st.j == m);
  REQUIRE_FALSE(st.breakdown);
  for (Eigen::Index q = 0; q < m; ++q) {
    const Eigen::VectorXd lhs = A * st.V.col(q);
    const Eigen::VectorXd rhs = st.V.leftCols(q + 2) * st.H.col(q).head(q + 2);
    REQUIRE((lhs - rhs).norm() <= 1e-12 * lhs.norm());
  }
  // entries above the orthogonalization window stay exactly zero
  for (Eigen::Index q = 0; q < m; ++q)
    for (Eigen::Index i = 0; i < q - t + 1; ++i) REQUIRE(st.H(i, q) == 0.0);
}

TEST_CASE("full window matches the dense reference", "[arnoldi]") {
  const Eigen::Index n = 30, m = 8;
  const Eigen::MatrixXd A = random_matrix(n, 11);
  const OperatorRef op(A);
  const auto S = SketchOperator::identity(n);
  const Eigen::VectorXd r0 = skrylov::gaussian_vector(n, 13);
  KrylovState st = init_krylov(r0, S, m, m);  // window >= step count = full Arnoldi
  for (Eigen::Index q = 0; q < m; ++q) arnoldi_step(st, op, S);
  const auto ref = oracle::dense_arnoldi(A, r0, m);
  REQUIRE(ref.H.cols() == m);
  REQUIRE((st.H.topLeftCorner(m + 1, m) - ref.H).norm() <= 1e-10 * ref.H.norm());
  const Eigen::MatrixXd V = st.V.leftCols(m + 1);
  // single-pass Gram-Schmidt: near-orthonormal, not machine-orthonormal
  REQUIRE((V.transpose() * V - Eigen::MatrixXd::Identity(m + 1, m + 1)).norm() < 1e-8);
}

TEST_CASE("sketched blocks track the basis without extra sketches", "[arnoldi]") {
  const Eigen::Index n = 60, m = 12, t = 3;
  const Eigen::MatrixXd A = random_matrix(n, 17);
  const OperatorRef op(A);
  const auto S = SketchOperator::subsampled_dct(n, 40, 23);
  const Eigen::VectorXd r0 = skrylov::gaussian_vector(n, 29);
  Counters counters;
  KrylovState st = init_krylov(r0, S, t, m, &counters);
  for (Eigen::Index q = 0; q < m; ++q) arnoldi_step(st, op, S, &counters);
  for (Eigen::Index q = 0; q <= m; ++q) {
    const Eigen::VectorXd sv = S.apply(st.V.col(q));
    REQUIRE((st.SV.col(q) - sv).norm() <= 1e-13 * (1.0 + sv.norm()));
  }
  // SAV holds S A v_q although A v_q was never sketched directly
  for (Eigen::Index q = 0; q < m; ++q) {
    const Eigen::VectorXd sav = S.apply(A * st.V.col(q));
    REQUIRE((st.SAV.col(q) - sav).norm() <= 1e-11 * (1.0 + sav.norm()));
  }
  REQUIRE(counters.sketch_applies == m + 1);  // one at init, one per step
  REQUIRE(counters.matvecs == m);
  // inner products: one norm at init, then per step the pre-norm, the
  // window dots, and the post-norm
  std::int64_t expect_ips = 1;
  for (Eigen::Index q = 0; q < m; ++q) expect_ips += std::min<Eigen::Index>(t, q + 1) + 2;
  REQUIRE(counters.inner_products == expect_ips);
}

TEST_CASE("an invariant subspace triggers a clean breakdown", "[arnoldi]") {
  const Eigen::Index n = 20;
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n) * 2.5;
  const OperatorRef op(A);
  const auto S = SketchOperator::subsampled_dct(n, 10, 3);
  const Eigen::VectorXd r0 = skrylov::gaussian_vector(n, 31);
  KrylovState st = init_krylov(r0, S, 2, 5);
  const auto step = arnoldi_step(st, op, S);
  REQUIRE(step.breakdown);
  REQUIRE(st.breakdown);
  REQUIRE(st.j == 1);
  REQUIRE(st.basis_cols() == 1);
  REQUIRE(st.H(1, 0) == 0.0);
  REQUIRE(st.H(0, 0) == Catch::Approx(2.5).epsilon(1e-12));
  // the sketched image column is still filled through the recurrence
  const Eigen::VectorXd sav = S.apply(A * st.V.col(0));
  REQUIRE((st.SAV.col(0) - sav).norm() <= 1e-12 * sav.norm());
  REQUIRE_THROWS_AS(arnoldi_step(st, op, S), std::logic_error);
}

TEST_CASE("zero start residual is rejected as already converged", "[arnoldi]") {
  const auto S = SketchOperator::identity(8);
  Counters counters;
  REQUIRE_THROWS_AS(init_krylov(Eigen::VectorXd::Zero(8), S, 1, 4, &counters), std::domain_error);
  REQUIRE(counters.matvecs == 0);
  REQUIRE(counters.sketch_applies == 0);
  REQUIRE_THROWS_AS(init_krylov(Eigen::VectorXd::Ones(7), S, 1, 4), std::invalid_argument);
}

TEST_CASE("step capacity is enforced", "[arnoldi]") {
  const Eigen::Index n = 16;
  const Eigen::MatrixXd A = random_matrix(n, 41);
  const OperatorRef op(A);
  const auto S = SketchOperator::identity(n);
  KrylovState st = init_krylov(skrylov::gaussian_vector(n, 43), S, 2, 3);
  for (int q = 0; q < 3; ++q) arnoldi_step(st, op, S);
  REQUIRE_THROWS_AS(arnoldi_step(st, op, S), std::logic_error);
}
