// Copyright (c) 2026 skrylov contributors
// SPDX-License-Identifier: MIT
#include "skrylov/sketch.hpp"

#include "skrylov/rng.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

using skrylov::SketchBackend;
using skrylov::SketchOperator;

TEST_CASE("cosine transform is exactly orthonormal", "[sketch]") {
  const Eigen::Index n = 64;
  Eigen::MatrixXd F(n, n);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n), col(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    e(j) = 1.0;
    skrylov::detail::dct2_orthonormal(e.data(), col.data(), n);
    F.col(j) = col;
    e(j) = 0.0;
  }
  REQUIRE((F * F.transpose() - Eigen::MatrixXd::Identity(n, n)).norm() < 1e-13);
  REQUIRE((F.transpose() * F - Eigen::MatrixXd::Identity(n, n)).norm() < 1e-13);
}

TEST_CASE("fft and direct evaluations realize the same operator", "[sketch]") {
  const Eigen::Index n = 200, s = 48;
  const auto fft = SketchOperator::subsampled_dct(n, s, 31, SketchBackend::fft);
  const auto direct = SketchOperator::subsampled_dct(n, s, 31, SketchBackend::direct);
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::VectorXd x = skrylov::gaussian_vector(n, 100 + static_cast<std::uint64_t>(trial));
    const Eigen::VectorXd a = fft.apply(x);
    const Eigen::VectorXd b = direct.apply(x);
    REQUIRE(a.size() == s);
    REQUIRE((a - b).norm() <= 1e-12 * (1.0 + a.norm()));
  }
}

TEST_CASE("dense realization matches apply", "[sketch]") {
  const Eigen::Index n = 96, s = 24;
  const auto S = SketchOperator::subsampled_dct(n, s, 5);
  const Eigen::MatrixXd D = S.dense();
  REQUIRE(D.rows() == s);
  REQUIRE(D.cols() == n);
  const Eigen::VectorXd x = skrylov::gaussian_vector(n, 12);
  REQUIRE((D * x - S.apply(x)).norm() <= 1e-12 * (1.0 + x.norm()));
  // rows of the dense map are orthogonal with squared norm n/s (selected
  // rows of an orthonormal transform, scaled)
  const Eigen::MatrixXd G = D * D.transpose();
  const double expected = static_cast<double>(n) / static_cast<double>(s);
  REQUIRE((G - expected * Eigen::MatrixXd::Identity(s, s)).norm() < 1e-12 * expected);
}

TEST_CASE("the operator is determined by its seed", "[sketch]") {
  const Eigen::Index n = 128, s = 32;
  const auto a = SketchOperator::subsampled_dct(n, s, 9);
  const auto b = SketchOperator::subsampled_dct(n, s, 9);
  const auto c = SketchOperator::subsampled_dct(n, s, 10);
  const Eigen::VectorXd x = skrylov::gaussian_vector(n, 55);
  REQUIRE(a.apply(x) == b.apply(x));
  REQUIRE(a.apply(x) != c.apply(x));
  REQUIRE(a.seed() == 9);
}

TEST_CASE("sketched norms are unbiased across seeds", "[sketch]") {
  const Eigen::Index n = 256, s = 64;
  const Eigen::VectorXd x = skrylov::gaussian_vector(n, 2);
  double mean_ratio = 0.0;
  const int trials = 64;
  for (int i = 0; i < trials; ++i) {
    const auto S = SketchOperator::subsampled_dct(n, s, 1000 + static_cast<std::uint64_t>(i));
    mean_ratio += S.apply(x).squaredNorm() / x.squaredNorm();
  }
  mean_ratio /= trials;
  REQUIRE(std::abs(mean_ratio - 1.0) < 0.1);
}

TEST_CASE("identity embedding passes vectors through", "[sketch]") {
  const auto S = SketchOperator::identity(40);
  REQUIRE(S.sketch_dim() == 40);
  const Eigen::VectorXd x = skrylov::gaussian_vector(40, 8);
  REQUIRE(S.apply(x) == x);
  REQUIRE(S.dense() == Eigen::MatrixXd::Identity(40, 40));
  const auto est = skrylov::measure_distortion(S, {x}, 50, 4);
  REQUIRE(est.eps_hat == 0.0);
}

TEST_CASE("subspace distortion is small at reasonable oversampling", "[sketch]") {
  const Eigen::Index n = 1024, s = 200, d = 8;
  const auto S = SketchOperator::subsampled_dct(n, s, 77);
  std::vector<Eigen::VectorXd> basis;
  for (Eigen::Index q = 0; q < d; ++q)
    basis.push_back(skrylov::gaussian_vector(n, 900 + static_cast<std::uint64_t>(q)));
  const auto est = skrylov::measure_distortion(S, basis, 200, 13);
  REQUIRE(est.samples == d + 200);
  REQUIRE(est.eps_hat > 0.0);
  REQUIRE(est.eps_hat < 0.75);  // far from losing the subspace
}

TEST_CASE("invalid sketch shapes are rejected", "[sketch]") {
  REQUIRE_THROWS_AS(SketchOperator::subsampled_dct(100, 100, 1), std::invalid_argument);
  REQUIRE_THROWS_AS(SketchOperator::subsampled_dct(100, 0, 1), std::invalid_argument);
  REQUIRE_THROWS_AS(SketchOperator::identity(0), std::invalid_argument);
  const auto S = SketchOperator::subsampled_dct(64, 16, 3);
  REQUIRE_THROWS_AS(S.apply(Eigen::VectorXd::Ones(63)), std::invalid_argument);
}
