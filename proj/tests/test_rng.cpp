// Copyright (c) 2026 skrylov contributors
// SPDX-License-Identifier: MIT
#include "skrylov/rng.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>
#include <vector>

using skrylov::Rng;

TEST_CASE("equal seeds give identical streams", "[rng]") {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) {
    REQUIRE(a.next_u64() == b.next_u64());
  }
  Rng c(42), d(43);
  bool all_equal = true;
  for (int i = 0; i < 16; ++i) all_equal = all_equal && c.next_u64() == d.next_u64();
  REQUIRE_FALSE(all_equal);
}

TEST_CASE("uniform stays inside the half-open unit interval", "[rng]") {
  Rng rng(7);
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  REQUIRE(lo < 0.01);  // the range is actually exercised
  REQUIRE(hi > 0.99);
}

TEST_CASE("uniform_below is in range and roughly flat", "[rng]") {
  Rng rng(11);
  const std::uint64_t bound = 10;
  std::vector<int> hits(bound, 0);
  const int draws = 50000;
  for (int i = 0; i < draws; ++i) {
    const std::uint64_t v = rng.uniform_below(bound);
    REQUIRE(v < bound);
    ++hits[v];
  }
  for (const int h : hits) {
    REQUIRE(h > draws / static_cast<int>(bound) / 2);
    REQUIRE(h < 2 * draws / static_cast<int>(bound));
  }
  REQUIRE_THROWS_AS(rng.uniform_below(0), std::invalid_argument);
}

TEST_CASE("gaussian has the right first two moments", "[rng]") {
  Rng rng(3);
  const int draws = 200000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double g = rng.gaussian();
    sum += g;
    sumsq += g * g;
  }
  const double mean = sum / draws;
  const double var = sumsq / draws - mean * mean;
  REQUIRE(std::abs(mean) < 0.02);
  REQUIRE(std::abs(var - 1.0) < 0.03);
}

TEST_CASE("sign flips both ways", "[rng]") {
  Rng rng(5);
  int plus = 0, minus = 0;
  for (int i = 0; i < 1000; ++i) {
    const double s = rng.sign();
    REQUIRE((s == 1.0 || s == -1.0));
    (s > 0 ? plus : minus)++;
  }
  REQUIRE(plus > 300);
  REQUIRE(minus > 300);
}

TEST_CASE("sampling without replacement gives sorted distinct indices", "[rng]") {
  Rng rng(9);
  const auto idx = rng.sample_without_replacement(100, 30);
  REQUIRE(idx.size() == 30);
  std::set<Eigen::Index> seen;
  Eigen::Index prev = -1;
  for (const auto i : idx) {
    REQUIRE(i >= 0);
    REQUIRE(i < 100);
    REQUIRE(i > prev);  // sorted strictly ascending implies distinct
    prev = i;
    seen.insert(i);
  }
  REQUIRE(seen.size() == 30);

  const auto all = rng.sample_without_replacement(10, 10);
  for (Eigen::Index i = 0; i < 10; ++i) REQUIRE(all[static_cast<std::size_t>(i)] == i);
  REQUIRE_THROWS_AS(rng.sample_without_replacement(5, 6), std::invalid_argument);
}

TEST_CASE("gaussian_vector is seed-deterministic", "[rng]") {
  const Eigen::VectorXd a = skrylov::gaussian_vector(64, 123);
  const Eigen::VectorXd b = skrylov::gaussian_vector(64, 123);
  const Eigen::VectorXd c = skrylov::gaussian_vector(64, 124);
  REQUIRE(a == b);
  REQUIRE(a != c);
  REQUIRE(a.size() == 64);
}
