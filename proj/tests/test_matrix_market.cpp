// Copyright (c) 2026 skrylov contributors
// SPDX-License-Identifier: MIT
#include "skrylov/matrix_market.hpp"

#include "skrylov/rng.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <sstream>
#include <stdexcept>
#include <string>

using skrylov::read_matrix_market;
using skrylov::SparseMatrix;
using skrylov::write_matrix_market;

namespace {

SparseMatrix parse(const std::string& text) {
  std::istringstream in(text);
  return read_matrix_market(in);
}

std::string error_of(const std::string& text) {
  try {
    (void)parse(text);
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("coordinate general round-trips through text", "[matrix-market]") {
  skrylov::Rng rng(21);
  std::vector<skrylov::Triplet> trip;
  for (int q = 0; q < 40; ++q)
    trip.push_back({static_cast<Eigen::Index>(rng.uniform_below(9)),
                    static_cast<Eigen::Index>(rng.uniform_below(9)),
                    rng.gaussian() * std::pow(10.0, static_cast<double>(q % 7) - 3.0)});
  const SparseMatrix A = SparseMatrix::from_triplets(9, 9, trip);
  std::stringstream buf;
  write_matrix_market(buf, A);
  const SparseMatrix B = read_matrix_market(buf);
  REQUIRE(A.dense() == B.dense());  // 17 significant digits round-trip exactly
}

TEST_CASE("symmetric coordinate entries are mirrored", "[matrix-market]") {
  const SparseMatrix A = parse(
      "%%MatrixMarket matrix coordinate real symmetric\n"
      "3 3 4\n"
      "1 1 2.0\n"
      "2 1 -1.0\n"
      "3 2 0.5\n"
      "3 3 4.0\n");
  Eigen::MatrixXd expect(3, 3);
  expect << 2.0, -1.0, 0.0, -1.0, 0.0, 0.5, 0.0, 0.5, 4.0;
  REQUIRE(A.dense() == expect);
}

TEST_CASE("integer values and array format are accepted", "[matrix-market]") {
  const SparseMatrix A = parse(
      "%%MatrixMarket matrix coordinate integer general\n"
      "% a comment line\n"
      "2 2 2\n"
      "1 1 3\n"
      "2 2 -7\n");
  REQUIRE(A.dense()(0, 0) == 3.0);
  REQUIRE(A.dense()(1, 1) == -7.0);

  const SparseMatrix B = parse(
      "%%MatrixMarket matrix array real general\n"
      "2 3\n"
      "1\n2\n3\n4\n5\n6\n");
  Eigen::MatrixXd expect(2, 3);
  expect << 1, 3, 5, 2, 4, 6;  // column-major order
  REQUIRE(B.dense() == expect);
}

TEST_CASE("array symmetric reads the lower triangle", "[matrix-market]") {
  const SparseMatrix A = parse(
      "%%MatrixMarket matrix array real symmetric\n"
      "3 3\n"
      "1\n2\n3\n4\n5\n6\n");
  Eigen::MatrixXd expect(3, 3);
  expect << 1, 2, 3, 2, 4, 5, 3, 5, 6;
  REQUIRE(A.dense() == expect);
}

TEST_CASE("unsupported headers are rejected", "[matrix-market]") {
  REQUIRE_THROWS_AS(parse("%%MatrixMarket matrix coordinate complex general\n1 1 1\n1 1 1 0\n"),
                    std::runtime_error);
  REQUIRE_THROWS_AS(parse("%%MatrixMarket matrix coordinate pattern general\n1 1 1\n1 1\n"),
                    std::runtime_error);
  REQUIRE_THROWS_AS(parse("%%MatrixMarket matrix coordinate real skew-symmetric\n1 1 0\n"),
                    std::runtime_error);
  REQUIRE_THROWS_AS(parse("not a header\n"), std::runtime_error);
}

TEST_CASE("parse errors carry the line number", "[matrix-market]") {
  // entry out of range on line 3
  const std::string bad_index = error_of(
      "%%MatrixMarket matrix coordinate real general\n"
      "2 2 1\n"
      "5 1 1.0\n");
  REQUIRE(bad_index.find("line 3") != std::string::npos);

  // truncated file: size line promises one entry, none follow
  const std::string truncated = error_of(
      "%%MatrixMarket matrix coordinate real general\n"
      "2 2 1\n");
  REQUIRE_FALSE(truncated.empty());

  // malformed number on line 4
  const std::string bad_value = error_of(
      "%%MatrixMarket matrix coordinate real general\n"
      "2 2 2\n"
      "1 1 1.0\n"
      "2 2 zz\n");
  REQUIRE(bad_value.find("line 4") != std::string::npos);
}

TEST_CASE("duplicate coordinate entries are summed", "[matrix-market]") {
  const SparseMatrix A = parse(
      "%%MatrixMarket matrix coordinate real general\n"
      "2 2 3\n"
      "1 1 1.5\n"
      "1 1 2.5\n"
      "2 1 1.0\n");
  REQUIRE(A.dense()(0, 0) == 4.0);
  REQUIRE(A.dense()(1, 0) == 1.0);
}

TEST_CASE("file wrappers round-trip and report missing files", "[matrix-market]") {
  const SparseMatrix A = SparseMatrix::from_triplets(2, 2, {{0, 1, 3.25}, {1, 0, -1.0}});
  const std::string path = "mm_roundtrip_test.mtx";
  skrylov::write_matrix_market_file(path, A);
  const SparseMatrix B = skrylov::read_matrix_market_file(path);
  REQUIRE(A.dense() == B.dense());
  std::remove(path.c_str());
  REQUIRE_THROWS_AS(skrylov::read_matrix_market_file("definitely_missing_file.mtx"),
                    std::runtime_error);
}
