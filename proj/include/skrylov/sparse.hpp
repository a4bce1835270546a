// Copyright (c) 2026 skrylov contributors
// SPDX-License-Identifier: MIT
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace skrylov {

struct Triplet {
  Eigen::Index row = 0;
  Eigen::Index col = 0;
  double value = 0.0;
};

/// Sparse matrix in compressed-sparse-row form.
///
/// Construction validates the structure: offsets are nondecreasing with
/// offsets[0] == 0 and offsets[rows] == nnz, column indices are strictly
/// increasing within each row (so no duplicate entries) and inside
/// [0, cols), and all stored values are finite.
class SparseMatrix {
 public:
  SparseMatrix() = default;

  SparseMatrix(Eigen::Index rows, Eigen::Index cols, std::vector<Eigen::Index> offsets,
               std::vector<Eigen::Index> columns, std::vector<double> values)
      : rows_(rows), cols_(cols), offsets_(std::move(offsets)), columns_(std::move(columns)),
        values_(std::move(values)) {
    validate();
  }

  /// Builds from coordinate triplets; duplicates are summed, exact zeros
  /// (including sums that cancel to zero) are dropped.
  static SparseMatrix from_triplets(Eigen::Index rows, Eigen::Index cols,
                                    std::vector<Triplet> triplets) {
    for (const auto& t : triplets) {
      if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
        throw std::invalid_argument("SparseMatrix::from_triplets: entry (" + std::to_string(t.row) +
                                    ", " + std::to_string(t.col) + ") outside " +
                                    std::to_string(rows) + "x" + std::to_string(cols));
    }
    std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
      return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    std::vector<Eigen::Index> offsets(static_cast<std::size_t>(rows) + 1, 0);
    std::vector<Eigen::Index> columns;
    std::vector<double> values;
    columns.reserve(triplets.size());
    values.reserve(triplets.size());
    std::size_t i = 0;
    while (i < triplets.size()) {
      const Eigen::Index r = triplets[i].row;
      const Eigen::Index c = triplets[i].col;
      double v = 0.0;
      while (i < triplets.size() && triplets[i].row == r && triplets[i].col == c) {
        v += triplets[i].value;
        ++i;
      }
      if (v != 0.0) {
        columns.push_back(c);
        values.push_back(v);
        ++offsets[static_cast<std::size_t>(r) + 1];
      }
    }
    for (std::size_t r = 0; r < static_cast<std::size_t>(rows); ++r) offsets[r + 1] += offsets[r];
    return SparseMatrix(rows, cols, std::move(offsets), std::move(columns), std::move(values));
  }

  Eigen::Index rows() const { return rows_; }
  Eigen::Index cols() const { return cols_; }
  Eigen::Index nonzeros() const { return static_cast<Eigen::Index>(values_.size()); }

  const std::vector<Eigen::Index>& offsets() const { return offsets_; }
  const std::vector<Eigen::Index>& columns() const { return columns_; }
  const std::vector<double>& values() const { return values_; }

  /// y = A x.
  void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
    if (x.size() != cols_)
      throw std::invalid_argument("SparseMatrix::apply: matrix has " + std::to_string(cols_) +
                                  " columns but vector has " + std::to_string(x.size()) +
                                  " entries");
    y.resize(rows_);
    for (Eigen::Index r = 0; r < rows_; ++r) {
      double acc = 0.0;
      const auto begin = offsets_[static_cast<std::size_t>(r)];
      const auto end = offsets_[static_cast<std::size_t>(r) + 1];
      for (Eigen::Index p = begin; p < end; ++p)
        acc += values_[static_cast<std::size_t>(p)] * x(columns_[static_cast<std::size_t>(p)]);
      y(r) = acc;
    }
  }

  Eigen::VectorXd operator*(const Eigen::VectorXd& x) const {
    Eigen::VectorXd y;
    apply(x, y);
    return y;
  }

  Eigen::MatrixXd dense() const {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(rows_, cols_);
    for (Eigen::Index r = 0; r < rows_; ++r) {
      for (Eigen::Index p = offsets_[static_cast<std::size_t>(r)];
           p < offsets_[static_cast<std::size_t>(r) + 1]; ++p)
        d(r, columns_[static_cast<std::size_t>(p)]) = values_[static_cast<std::size_t>(p)];
    }
    return d;
  }

 private:
  void validate() const {
    if (rows_ < 0 || cols_ < 0)
      throw std::invalid_argument("SparseMatrix: negative dimensions");
    if (offsets_.size() != static_cast<std::size_t>(rows_) + 1)
      throw std::invalid_argument("SparseMatrix: offsets size " + std::to_string(offsets_.size()) +
                                  " does not match rows + 1 = " + std::to_string(rows_ + 1));
    if (offsets_.front() != 0)
      throw std::invalid_argument("SparseMatrix: offsets must start at 0");
    if (offsets_.back() != static_cast<Eigen::Index>(values_.size()) ||
        columns_.size() != values_.size())
      throw std::invalid_argument("SparseMatrix: offsets/columns/values sizes inconsistent");
    for (std::size_t r = 0; r < static_cast<std::size_t>(rows_); ++r) {
      if (offsets_[r + 1] < offsets_[r])
        throw std::invalid_argument("SparseMatrix: offsets decrease at row " + std::to_string(r));
      for (Eigen::Index p = offsets_[r]; p < offsets_[r + 1]; ++p) {
        const auto c = columns_[static_cast<std::size_t>(p)];
        if (c < 0 || c >= cols_)
          throw std::invalid_argument("SparseMatrix: column index " + std::to_string(c) +
                                      " out of range in row " + std::to_string(r));
        if (p > offsets_[r] && columns_[static_cast<std::size_t>(p) - 1] >= c)
          throw std::invalid_argument("SparseMatrix: column indices not strictly increasing in row " +
                                      std::to_string(r));
        if (!std::isfinite(values_[static_cast<std::size_t>(p)]))
          throw std::invalid_argument("SparseMatrix: non-finite value in row " + std::to_string(r));
      }
    }
  }

  Eigen::Index rows_ = 0;
  Eigen::Index cols_ = 0;
  std::vector<Eigen::Index> offsets_{0};
  std::vector<Eigen::Index> columns_;
  std::vector<double> values_;
};

/// y = A x as a free function.
inline Eigen::VectorXd matvec(const SparseMatrix& A, const Eigen::VectorXd& x) { return A * x; }

}  // namespace skrylov
