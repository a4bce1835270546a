// Copyright (c) 2026 skrylov contributors
// SPDX-License-Identifier: MIT
#pragma once

#include "skrylov/sparse.hpp"

#include <Eigen/Dense>

#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

namespace skrylov {

/// Type-erased handle for the action y = A x.
///
/// Holds a callable plus dimensions; does not own the underlying matrix, so
/// the referenced operator must outlive the handle.
class OperatorRef {
 public:
  using Apply = std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>;

  OperatorRef(Eigen::Index rows, Eigen::Index cols, Apply fn)
      : rows_(rows), cols_(cols), fn_(std::move(fn)) {}

  explicit OperatorRef(const SparseMatrix& A)
      : rows_(A.rows()), cols_(A.cols()),
        fn_([&A](const Eigen::VectorXd& x, Eigen::VectorXd& y) { A.apply(x, y); }) {}

  explicit OperatorRef(const Eigen::MatrixXd& A)
      : rows_(A.rows()), cols_(A.cols()),
        fn_([&A](const Eigen::VectorXd& x, Eigen::VectorXd& y) { y = A * x; }) {}

  Eigen::Index rows() const { return rows_; }
  Eigen::Index cols() const { return cols_; }

  void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
    if (x.size() != cols_)
      throw std::invalid_argument("OperatorRef::apply: operator has " + std::to_string(cols_) +
                                  " columns but vector has " + std::to_string(x.size()) +
                                  " entries");
    fn_(x, y);
  }

  Eigen::VectorXd operator()(const Eigen::VectorXd& x) const {
    Eigen::VectorXd y;
    apply(x, y);
    return y;
  }

 private:
  Eigen::Index rows_ = 0;
  Eigen::Index cols_ = 0;
  Apply fn_;
};

}  // namespace skrylov
