// Copyright (c) 2026 skrylov contributors
// SPDX-License-Identifier: MIT
#pragma once

#include "skrylov/rng.hpp"

#include <Eigen/Dense>
#include <fftw3.h>

#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace skrylov {

namespace detail {

/// Process-wide cache of FFTW plans for the orthonormal DCT-II, keyed by
/// length. Plan creation is not reentrant, so it is serialized here; the
/// new-array execute calls on caller-owned buffers are thread-safe.
/// FFTW_ESTIMATE keeps planning deterministic (no runtime measurement).
class DctPlanCache {
 public:
  static fftw_plan get(Eigen::Index n) {
    static DctPlanCache cache;
    std::lock_guard<std::mutex> lock(cache.mutex_);
    auto it = cache.plans_.find(n);
    if (it != cache.plans_.end()) return it->second;
    std::vector<double> in(static_cast<std::size_t>(n)), out(static_cast<std::size_t>(n));
    fftw_plan plan = fftw_plan_r2r_1d(static_cast<int>(n), in.data(), out.data(), FFTW_REDFT10,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr)
      throw std::runtime_error("DctPlanCache: FFTW failed to plan length " + std::to_string(n));
    cache.plans_.emplace(n, plan);
    return plan;
  }

 private:
  DctPlanCache() = default;
  ~DctPlanCache() {
    for (auto& [n, plan] : plans_) fftw_destroy_plan(plan);
  }
  std::mutex mutex_;
  std::map<Eigen::Index, fftw_plan> plans_;
};

/// Orthonormal DCT-II: out = F in with F F^T = I. FFTW's REDFT10 computes
/// Y_k = 2 sum_j x_j cos(pi (2j+1) k / (2n)); dividing Y_0 by 2 sqrt(n) and
/// the rest by sqrt(2n) makes the transform orthonormal.
inline void dct2_orthonormal(const double* in, double* out, Eigen::Index n) {
  fftw_execute_r2r(DctPlanCache::get(n), const_cast<double*>(in), out);
  const double scale0 = 1.0 / (2.0 * std::sqrt(static_cast<double>(n)));
  const double scale = 1.0 / std::sqrt(2.0 * static_cast<double>(n));
  out[0] *= scale0;
  for (Eigen::Index k = 1; k < n; ++k) out[k] *= scale;
}

/// Selected rows of the same transform, evaluated term by term. O(rows * n);
/// used as an independent reference and as a small-problem fallback.
inline void dct2_selected_direct(const Eigen::VectorXd& x, const std::vector<Eigen::Index>& rows,
                                 Eigen::VectorXd& out) {
  const Eigen::Index n = x.size();
  out.resize(static_cast<Eigen::Index>(rows.size()));
  const double theta = std::numbers::pi / (2.0 * static_cast<double>(n));
  for (std::size_t q = 0; q < rows.size(); ++q) {
    const double k = static_cast<double>(rows[q]);
    double acc = 0.0;
    for (Eigen::Index j = 0; j < n; ++j)
      acc += x(j) * std::cos(theta * k * (2.0 * static_cast<double>(j) + 1.0));
    const double alpha = rows[q] == 0 ? std::sqrt(1.0 / static_cast<double>(n))
                                      : std::sqrt(2.0 / static_cast<double>(n));
    out(static_cast<Eigen::Index>(q)) = alpha * acc;
  }
}

}  // namespace detail

enum class SketchKind { subsampled_dct, identity };

/// How the subsampled transform is evaluated. `automatic` picks the FFT path;
/// `direct` forces the term-by-term evaluation (same map, different rounding).
enum class SketchBackend { automatic, fft, direct };

/// Worst observed norm distortion over a vector set.
struct DistortionEstimate {
  double eps_hat = 0.0;     ///< max |  ||S v||^2 / ||v||^2  - 1 |
  Eigen::Index samples = 0;  ///< number of vectors evaluated
};

/// Randomized embedding S : R^n -> R^s.
///
/// The production map is sign flips, an orthonormal discrete cosine
/// transform, and a uniform row subsample without replacement, scaled by
/// sqrt(n/s) so that E ||S v||^2 = ||v||^2. The operator is fully determined
/// by (n, s, seed). An identity variant (s == n) backs exact-arithmetic
/// equivalence tests.
class SketchOperator {
 public:
  /// Subsampled-DCT sketch; requires 1 <= s < n.
  static SketchOperator subsampled_dct(Eigen::Index n, Eigen::Index s, std::uint64_t seed,
                                       SketchBackend backend = SketchBackend::automatic) {
    if (n < 2 || s < 1 || s >= n)
      throw std::invalid_argument("SketchOperator: need 1 <= s < n, got s = " + std::to_string(s) +
                                  ", n = " + std::to_string(n));
    SketchOperator S;
    S.kind_ = SketchKind::subsampled_dct;
    S.n_ = n;
    S.s_ = s;
    S.seed_ = seed;
    S.use_fft_ = backend != SketchBackend::direct;
    Rng rng(seed);
    S.signs_.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) S.signs_(i) = rng.sign();
    S.rows_ = rng.sample_without_replacement(n, s);
    S.scale_ = std::sqrt(static_cast<double>(n) / static_cast<double>(s));
    return S;
  }

  /// Identity embedding with s == n.
  static SketchOperator identity(Eigen::Index n) {
    if (n < 1) throw std::invalid_argument("SketchOperator::identity: n must be positive");
    SketchOperator S;
    S.kind_ = SketchKind::identity;
    S.n_ = n;
    S.s_ = n;
    return S;
  }

  Eigen::Index input_dim() const { return n_; }
  Eigen::Index sketch_dim() const { return s_; }
  SketchKind kind() const { return kind_; }
  std::uint64_t seed() const { return seed_; }

  void apply(const Eigen::VectorXd& x, Eigen::VectorXd& out) const {
    if (x.size() != n_)
      throw std::invalid_argument("SketchOperator::apply: operator takes length " +
                                  std::to_string(n_) + " but vector has length " +
                                  std::to_string(x.size()));
    if (kind_ == SketchKind::identity) {
      out = x;
      return;
    }
    if (use_fft_) {
      thread_local std::vector<double> flipped, transformed;
      flipped.resize(static_cast<std::size_t>(n_));
      transformed.resize(static_cast<std::size_t>(n_));
      for (Eigen::Index i = 0; i < n_; ++i) flipped[static_cast<std::size_t>(i)] = signs_(i) * x(i);
      detail::dct2_orthonormal(flipped.data(), transformed.data(), n_);
      out.resize(s_);
      for (Eigen::Index q = 0; q < s_; ++q)
        out(q) = scale_ * transformed[static_cast<std::size_t>(rows_[static_cast<std::size_t>(q)])];
    } else {
      const Eigen::VectorXd flipped = signs_.cwiseProduct(x);
      detail::dct2_selected_direct(flipped, rows_, out);
      out *= scale_;
    }
  }

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const {
    Eigen::VectorXd out;
    apply(x, out);
    return out;
  }

  /// Dense s x n realization via n applications; intended for small n
  /// (tests and diagnostics).
  Eigen::MatrixXd dense() const {
    Eigen::MatrixXd D(s_, n_);
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n_), col;
    for (Eigen::Index j = 0; j < n_; ++j) {
      e(j) = 1.0;
      apply(e, col);
      D.col(j) = col;
      e(j) = 0.0;
    }
    return D;
  }

 private:
  SketchKind kind_ = SketchKind::identity;
  Eigen::Index n_ = 0;
  Eigen::Index s_ = 0;
  std::uint64_t seed_ = 0;
  Eigen::VectorXd signs_;
  std::vector<Eigen::Index> rows_;
  double scale_ = 1.0;
  bool use_fft_ = true;
};

inline SketchOperator make_sketch(Eigen::Index n, Eigen::Index s, std::uint64_t seed) {
  return SketchOperator::subsampled_dct(n, s, seed);
}

inline SketchOperator identity_sketch(Eigen::Index n) { return SketchOperator::identity(n); }

inline Eigen::VectorXd apply_sketch(const SketchOperator& S, const Eigen::VectorXd& v) {
  return S.apply(v);
}

/// Worst norm distortion over the given vectors plus `samples` random
/// Gaussian combinations drawn from their span.
inline DistortionEstimate measure_distortion(const SketchOperator& S,
                                             const std::vector<Eigen::VectorXd>& vectors,
                                             Eigen::Index samples = 200,
                                             std::uint64_t seed = 0x9e3779b97f4a7c15ull) {
  if (vectors.empty())
    throw std::invalid_argument("measure_distortion: need at least one vector");
  DistortionEstimate est;
  auto account = [&](const Eigen::VectorXd& v) {
    const double nrm2 = v.squaredNorm();
    if (nrm2 == 0.0) return;
    const double ratio = S.apply(v).squaredNorm() / nrm2;
    est.eps_hat = std::max(est.eps_hat, std::abs(ratio - 1.0));
    ++est.samples;
  };
  for (const auto& v : vectors) {
    if (v.size() != S.input_dim())
      throw std::invalid_argument("measure_distortion: vector length " + std::to_string(v.size()) +
                                  " does not match sketch input " + std::to_string(S.input_dim()));
    account(v);
  }
  Rng rng(seed);
  for (Eigen::Index t = 0; t < samples; ++t) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(S.input_dim());
    for (const auto& b : vectors) v += rng.gaussian() * b;
    account(v);
  }
  return est;
}

}  // namespace skrylov
