// Copyright (c) 2026 skrylov contributors
// SPDX-License-Identifier: MIT
#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace skrylov {

/// Economy QR factorization grown one column at a time.
///
/// Each append orthogonalizes by Gram-Schmidt with exactly one
/// reorthogonalization pass. The raw appended columns M are kept so that
/// least-squares residuals are always evaluated against the original matrix,
/// not the factorization.
///
/// A new column within rank_tol (relative) of the span of the previous ones
/// is flagged instead of normalized: its Q column is zero, its R diagonal is
/// zero, and the off-diagonal R entries keep the projection coefficients.
/// Because the sentinel Q column is zero, the sentinel's R row stays zero for
/// all later columns. Solving while a flagged column is unresolved is an
/// error naming the column; callers either exclude the column or rebuild.
class IncrementalQR {
 public:
  IncrementalQR(Eigen::Index rows, Eigen::Index capacity, double rank_tol = 1e-12)
      : rank_tol_(rank_tol) {
    if (rows < 1) throw std::invalid_argument("IncrementalQR: rows must be positive");
    if (capacity < 1) capacity = 1;
    m_.resize(rows, capacity);
    q_.resize(rows, capacity);
    r_ = Eigen::MatrixXd::Zero(capacity, capacity);
  }

  Eigen::Index rows() const { return m_.rows(); }
  Eigen::Index cols() const { return p_; }
  double rank_tol() const { return rank_tol_; }

  struct AppendInfo {
    Eigen::Index column = 0;
    bool rank_deficient = false;
  };

  AppendInfo append(const Eigen::VectorXd& col) {
    if (col.size() != m_.rows())
      throw std::invalid_argument("IncrementalQR::append: column length " +
                                  std::to_string(col.size()) + " does not match " +
                                  std::to_string(m_.rows()) + " rows");
    if (p_ == m_.cols()) grow();
    const Eigen::Index p = p_;
    m_.col(p) = col;
    Eigen::VectorXd w = col;
    Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(p);
    for (int pass = 0; pass < 2; ++pass) {
      if (p > 0) {
        Eigen::VectorXd c = q_.leftCols(p).transpose() * w;
        w.noalias() -= q_.leftCols(p) * c;
        coeffs += c;
      }
    }
    const double rho = w.norm();
    AppendInfo info;
    info.column = p;
    r_.col(p).head(p) = coeffs;
    if (rho <= rank_tol_ * col.norm()) {
      info.rank_deficient = true;
      q_.col(p).setZero();
      r_(p, p) = 0.0;
      state_.push_back(ColumnState::unresolved);
    } else {
      q_.col(p) = w / rho;
      r_(p, p) = rho;
      state_.push_back(ColumnState::ok);
    }
    ++p_;
    return info;
  }

  /// Removes a rank-deficient column from all future solves (its coefficient
  /// is pinned to zero).
  void exclude(Eigen::Index column) {
    check_column(column);
    state_[static_cast<std::size_t>(column)] = ColumnState::excluded;
  }

  bool is_excluded(Eigen::Index column) const {
    check_column(column);
    return state_[static_cast<std::size_t>(column)] == ColumnState::excluded;
  }

  std::vector<Eigen::Index> unresolved_columns() const {
    std::vector<Eigen::Index> out;
    for (Eigen::Index i = 0; i < p_; ++i)
      if (state_[static_cast<std::size_t>(i)] == ColumnState::unresolved) out.push_back(i);
    return out;
  }

  struct Solution {
    Eigen::VectorXd y;
    double residual_norm = 0.0;
  };

  /// min ||rhs - M y|| over the included columns; excluded columns get
  /// y = 0. The residual is evaluated against the raw columns M.
  Solution solve(const Eigen::VectorXd& rhs) const {
    if (rhs.size() != m_.rows())
      throw std::invalid_argument("IncrementalQR::solve: rhs length " + std::to_string(rhs.size()) +
                                  " does not match " + std::to_string(m_.rows()) + " rows");
    const auto unresolved = unresolved_columns();
    if (!unresolved.empty())
      throw std::runtime_error("IncrementalQR::solve: column " + std::to_string(unresolved.front()) +
                               " is rank-deficient and unresolved; exclude it or rebuild");
    std::vector<Eigen::Index> used;
    used.reserve(static_cast<std::size_t>(p_));
    for (Eigen::Index i = 0; i < p_; ++i)
      if (state_[static_cast<std::size_t>(i)] == ColumnState::ok) used.push_back(i);
    Solution sol;
    sol.y = Eigen::VectorXd::Zero(p_);
    if (!used.empty()) {
      Eigen::VectorXd c(static_cast<Eigen::Index>(used.size()));
      for (std::size_t q = 0; q < used.size(); ++q) c(static_cast<Eigen::Index>(q)) = q_.col(used[q]).dot(rhs);
      // back substitution on R restricted to the used columns (upper
      // triangular there, since excluded columns contribute zero rows)
      for (std::size_t q = used.size(); q-- > 0;) {
        double acc = c(static_cast<Eigen::Index>(q));
        for (std::size_t q2 = q + 1; q2 < used.size(); ++q2)
          acc -= r_(used[q], used[q2]) * sol.y(used[q2]);
        sol.y(used[q]) = acc / r_(used[q], used[q]);
      }
    }
    sol.residual_norm = (rhs - m_.leftCols(p_) * sol.y).norm();
    return sol;
  }

  Eigen::Ref<const Eigen::MatrixXd> raw() const { return m_.leftCols(p_); }
  Eigen::Ref<const Eigen::MatrixXd> q() const { return q_.leftCols(p_); }
  Eigen::Ref<const Eigen::MatrixXd> r() const { return r_.topLeftCorner(p_, p_); }

 private:
  enum class ColumnState { ok, unresolved, excluded };

  void check_column(Eigen::Index column) const {
    if (column < 0 || column >= p_)
      throw std::invalid_argument("IncrementalQR: no column " + std::to_string(column));
  }

  void grow() {
    const Eigen::Index cap = 2 * m_.cols();
    m_.conservativeResize(Eigen::NoChange, cap);
    q_.conservativeResize(Eigen::NoChange, cap);
    Eigen::MatrixXd r2 = Eigen::MatrixXd::Zero(cap, cap);
    r2.topLeftCorner(p_, p_) = r_.topLeftCorner(p_, p_);
    r_.swap(r2);
  }

  Eigen::MatrixXd m_, q_, r_;
  std::vector<ColumnState> state_;
  double rank_tol_ = 1e-12;
  Eigen::Index p_ = 0;
};

inline IncrementalQR::AppendInfo qr_append(IncrementalQR& qr, const Eigen::VectorXd& col) {
  return qr.append(col);
}

inline IncrementalQR::Solution ls_solve(const IncrementalQR& qr, const Eigen::VectorXd& rhs) {
  return qr.solve(rhs);
}

}  // namespace skrylov
