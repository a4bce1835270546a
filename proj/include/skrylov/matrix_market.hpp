// Copyright (c) 2026 skrylov contributors
// SPDX-License-Identifier: MIT
#pragma once

#include "skrylov/sparse.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace skrylov {

namespace detail {

struct MmLineReader {
  std::istream& in;
  long line_number = 0;

  /// Next non-comment, non-blank line; false at end of stream.
  bool next(std::string& out) {
    while (std::getline(in, out)) {
      ++line_number;
      if (!out.empty() && out.back() == '\r') out.pop_back();
      const auto pos = out.find_first_not_of(" \t");
      if (pos == std::string::npos) continue;  // blank
      if (out[pos] == '%' && line_number > 1) continue;  // comment
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw std::runtime_error("Matrix Market parse error at line " + std::to_string(line_number) +
                             ": " + what);
  }
};

inline std::vector<std::string> mm_tokens(const std::string& line) {
  std::vector<std::string> toks;
  std::istringstream ss(line);
  std::string t;
  while (ss >> t) toks.push_back(t);
  return toks;
}

inline std::string mm_lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

inline long long mm_parse_int(const std::string& tok, const MmLineReader& rd) {
  long long v = 0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
    rd.fail("expected integer, got '" + tok + "'");
  return v;
}

inline double mm_parse_real(const std::string& tok, const MmLineReader& rd) {
  double v = 0.0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
    rd.fail("expected real number, got '" + tok + "'");
  return v;
}

}  // namespace detail

/// Parses a Matrix Market stream into a real sparse matrix.
///
/// Accepted headers: coordinate or array format, real or integer field,
/// general or symmetric symmetry. Symmetric storage is expanded to both
/// triangles; explicit zeros are dropped; duplicate coordinate entries are
/// summed. All malformed input is reported with the offending line number.
inline SparseMatrix read_matrix_market(std::istream& in) {
  detail::MmLineReader rd{in};
  std::string line;
  if (!rd.next(line)) rd.fail("empty stream");
  auto header = detail::mm_tokens(line);
  if (header.size() != 5 || detail::mm_lower(header[0]) != "%%matrixmarket" ||
      detail::mm_lower(header[1]) != "matrix")
    rd.fail("expected header '%%MatrixMarket matrix <format> <field> <symmetry>'");
  const std::string format = detail::mm_lower(header[2]);
  const std::string field = detail::mm_lower(header[3]);
  const std::string symmetry = detail::mm_lower(header[4]);
  if (format != "coordinate" && format != "array") rd.fail("unsupported format '" + format + "'");
  if (field != "real" && field != "integer")
    rd.fail("unsupported field '" + field + "' (this build reads real data)");
  if (symmetry != "general" && symmetry != "symmetric")
    rd.fail("unsupported symmetry '" + symmetry + "'");
  const bool symmetric = symmetry == "symmetric";

  if (!rd.next(line)) rd.fail("missing size line");
  auto size_toks = detail::mm_tokens(line);

  std::vector<Triplet> triplets;
  if (format == "coordinate") {
    if (size_toks.size() != 3) rd.fail("coordinate size line needs 'rows cols nnz'");
    const auto rows = detail::mm_parse_int(size_toks[0], rd);
    const auto cols = detail::mm_parse_int(size_toks[1], rd);
    const auto nnz = detail::mm_parse_int(size_toks[2], rd);
    if (rows < 0 || cols < 0 || nnz < 0) rd.fail("negative size");
    if (symmetric && rows != cols) rd.fail("symmetric matrix must be square");
    triplets.reserve(static_cast<std::size_t>(symmetric ? 2 * nnz : nnz));
    for (long long e = 0; e < nnz; ++e) {
      if (!rd.next(line)) {
        rd.fail("unexpected end of data: entry " + std::to_string(e + 1) + " of " +
                std::to_string(nnz) + " missing");
      }
      auto toks = detail::mm_tokens(line);
      if (toks.size() != 3) rd.fail("coordinate entry needs 'row col value'");
      const auto i = detail::mm_parse_int(toks[0], rd);
      const auto j = detail::mm_parse_int(toks[1], rd);
      const double v = detail::mm_parse_real(toks[2], rd);
      if (i < 1 || i > rows || j < 1 || j > cols)
        rd.fail("entry (" + std::to_string(i) + ", " + std::to_string(j) + ") outside " +
                std::to_string(rows) + "x" + std::to_string(cols));
      triplets.push_back({static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(j - 1), v});
      if (symmetric && i != j)
        triplets.push_back({static_cast<Eigen::Index>(j - 1), static_cast<Eigen::Index>(i - 1), v});
    }
    return SparseMatrix::from_triplets(static_cast<Eigen::Index>(rows),
                                       static_cast<Eigen::Index>(cols), std::move(triplets));
  }

  // array format: dense values listed column-major
  if (size_toks.size() != 2) rd.fail("array size line needs 'rows cols'");
  const auto rows = detail::mm_parse_int(size_toks[0], rd);
  const auto cols = detail::mm_parse_int(size_toks[1], rd);
  if (rows < 0 || cols < 0) rd.fail("negative size");
  if (symmetric && rows != cols) rd.fail("symmetric matrix must be square");
  for (long long j = 0; j < cols; ++j) {
    const long long i_begin = symmetric ? j : 0;  // symmetric array stores lower triangle
    for (long long i = i_begin; i < rows; ++i) {
      if (!rd.next(line)) rd.fail("unexpected end of data in array body");
      auto toks = detail::mm_tokens(line);
      if (toks.size() != 1) rd.fail("array entry needs a single value per line");
      const double v = detail::mm_parse_real(toks[0], rd);
      triplets.push_back({static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j), v});
      if (symmetric && i != j)
        triplets.push_back({static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i), v});
    }
  }
  return SparseMatrix::from_triplets(static_cast<Eigen::Index>(rows),
                                     static_cast<Eigen::Index>(cols), std::move(triplets));
}

inline SparseMatrix read_matrix_market_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open Matrix Market file '" + path + "'");
  return read_matrix_market(in);
}

/// Writes coordinate/real/general Matrix Market with 17 significant digits,
/// enough for doubles to round-trip bit-exactly.
inline void write_matrix_market(std::ostream& out, const SparseMatrix& A) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << A.rows() << " " << A.cols() << " " << A.nonzeros() << "\n";
  char buf[64];
  for (Eigen::Index r = 0; r < A.rows(); ++r) {
    for (Eigen::Index p = A.offsets()[static_cast<std::size_t>(r)];
         p < A.offsets()[static_cast<std::size_t>(r) + 1]; ++p) {
      std::snprintf(buf, sizeof(buf), "%.16e", A.values()[static_cast<std::size_t>(p)]);
      out << (r + 1) << " " << (A.columns()[static_cast<std::size_t>(p)] + 1) << " " << buf << "\n";
    }
  }
}

inline void write_matrix_market_file(const std::string& path, const SparseMatrix& A) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_matrix_market(out, A);
}

}  // namespace skrylov
