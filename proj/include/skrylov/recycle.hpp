// Copyright (c) 2026 skrylov contributors
// SPDX-License-Identifier: MIT
#pragma once

#include "skrylov/arnoldi.hpp"
#include "skrylov/counters.hpp"
#include "skrylov/detail/lapack.hpp"
#include "skrylov/operator_ref.hpp"
#include "skrylov/sketch.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace skrylov {

/// Deflation-space block carried between cycles and between systems:
/// U together with its sketched images SU = S U and SAU = S A U.
/// The three blocks are always transformed by the same right-multiplications,
/// so the pairings survive every update without new sketches or products.
struct RecycleSpace {
  enum class Provenance {
    empty,              ///< no space yet
    fresh,              ///< first harmonic extraction of this sequence
    reused,             ///< carried to another system with the same matrix
    exact_resketch,     ///< matrix changed; SAU recomputed against it
    inexact_carryover,  ///< matrix changed; stale SAU kept deliberately
  };

  Eigen::MatrixXd U;    ///< n x k
  Eigen::MatrixXd SU;   ///< s x k
  Eigen::MatrixXd SAU;  ///< s x k
  Provenance provenance = Provenance::empty;

  Eigen::Index dim() const { return U.cols(); }
  bool empty() const { return U.cols() == 0; }

  void drop_columns(const std::vector<Eigen::Index>& cols) {
    if (cols.empty()) return;
    std::vector<bool> drop(static_cast<std::size_t>(dim()), false);
    for (const auto c : cols) {
      if (c < 0 || c >= dim())
        throw std::invalid_argument("RecycleSpace::drop_columns: no column " + std::to_string(c));
      drop[static_cast<std::size_t>(c)] = true;
    }
    Eigen::Index keep = 0;
    for (Eigen::Index c = 0; c < dim(); ++c)
      if (!drop[static_cast<std::size_t>(c)]) ++keep;
    Eigen::MatrixXd u(U.rows(), keep), su(SU.rows(), keep), sau(SAU.rows(), keep);
    Eigen::Index q = 0;
    for (Eigen::Index c = 0; c < dim(); ++c) {
      if (drop[static_cast<std::size_t>(c)]) continue;
      u.col(q) = U.col(c);
      su.col(q) = SU.col(c);
      sau.col(q) = SAU.col(c);
      ++q;
    }
    U.swap(u);
    SU.swap(su);
    SAU.swap(sau);
  }
};

inline const char* to_string(RecycleSpace::Provenance p) {
  switch (p) {
    case RecycleSpace::Provenance::empty: return "empty";
    case RecycleSpace::Provenance::fresh: return "fresh";
    case RecycleSpace::Provenance::reused: return "reused";
    case RecycleSpace::Provenance::exact_resketch: return "exact-resketch";
    case RecycleSpace::Provenance::inexact_carryover: return "inexact-carryover";
  }
  return "unknown";
}

/// Rank-revealing decomposition of the sketched image block SAW, with the
/// projected pencil data for harmonic extraction.
struct HarmonicPencil {
  Eigen::MatrixXd u;      ///< s x l left singular vectors
  Eigen::VectorXd sigma;  ///< l singular values above the rank cutoff
  Eigen::MatrixXd v;      ///< (k + m) x l right singular vectors
  Eigen::MatrixXd m_mat;  ///< l x l projected basis block u^T SW v

  Eigen::Index rank() const { return sigma.size(); }
};

/// SVD of SAW truncated at rank_tol * sigma_max. The projected block m_mat
/// is filled separately (it needs the sketched basis SW).
inline HarmonicPencil truncated_svd(const Eigen::MatrixXd& SAW, double rank_tol = 1e-12) {
  if (!(rank_tol >= 0.0)) throw std::invalid_argument("truncated_svd: rank_tol must be >= 0");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(SAW, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  Eigen::Index l = 0;
  const double cutoff = sv.size() > 0 ? rank_tol * sv(0) : 0.0;
  while (l < sv.size() && sv(l) > cutoff && sv(l) > 0.0) ++l;
  HarmonicPencil pencil;
  pencil.u = svd.matrixU().leftCols(l);
  pencil.sigma = sv.head(l);
  pencil.v = svd.matrixV().leftCols(l);
  return pencil;
}

/// Projects the sketched basis block into the singular coordinates:
/// m_mat = u^T SW v.
inline void fill_pencil(HarmonicPencil& pencil, const Eigen::MatrixXd& SW) {
  if (SW.rows() != pencil.u.rows() || SW.cols() != pencil.v.rows())
    throw std::invalid_argument("fill_pencil: SW dimensions do not match the decomposition");
  pencil.m_mat = pencil.u.transpose() * SW * pencil.v;
}

inline HarmonicPencil make_harmonic_pencil(const Eigen::MatrixXd& SAW, const Eigen::MatrixXd& SW,
                                           double rank_tol = 1e-12) {
  HarmonicPencil pencil = truncated_svd(SAW, rank_tol);
  fill_pencil(pencil, SW);
  return pencil;
}

/// Harmonic deflation data extracted from a pencil.
struct HarmonicPairs {
  Eigen::MatrixXd coeffs;    ///< (k + m) x k_effective real deflating basis
  Eigen::VectorXcd mu;       ///< selected pencil eigenvalues (largest |mu|)
  Eigen::MatrixXcd vectors;  ///< per-pair eigenvector coordinates (diagnostic)
  Eigen::Index k_requested = 0;
  Eigen::Index k_effective = 0;
  bool pair_extended = false;  ///< grew by one to keep a conjugate pair together
  bool rank_limited = false;   ///< shrank because the pencil rank was below k
};

/// Selects the k pencil eigenvalues of largest magnitude and returns a real
/// basis of the matching right deflating subspace, mapped back to
/// coefficients in the [U, V_m] coordinates.
///
/// The generalized problem (m_mat, diag(sigma)) is reduced to the ordered
/// real Schur form of diag(sigma)^{-1} m_mat: with sigma invertible the
/// leading invariant subspace of that matrix is exactly the pencil's right
/// deflating subspace, so one Schur factorization plus one reordering
/// replaces a QZ sweep. Ties in |mu| break toward larger real part, then
/// original position, deterministically. A complex-conjugate pair straddling
/// the cut extends the subspace by one; a pencil rank below k shrinks it.
inline HarmonicPairs harmonic_pairs(const HarmonicPencil& pencil, Eigen::Index k) {
  if (k < 0) throw std::invalid_argument("harmonic_pairs: k must be nonnegative");
  if (pencil.m_mat.rows() != pencil.rank() || pencil.m_mat.cols() != pencil.rank())
    throw std::invalid_argument("harmonic_pairs: pencil is incomplete (m_mat not filled)");
  const Eigen::Index l = pencil.rank();
  HarmonicPairs hp;
  hp.k_requested = k;
  if (k > l) {
    k = l;
    hp.rank_limited = true;
  }
  if (k == 0 || l == 0) {
    hp.coeffs.resize(pencil.v.rows(), 0);
    hp.mu.resize(0);
    hp.vectors.resize(pencil.v.rows(), 0);
    return hp;
  }

  Eigen::MatrixXd c = pencil.sigma.cwiseInverse().asDiagonal() * pencil.m_mat;
  detail::RealSchurResult schur = detail::real_schur(c);

  // rank eigenvalue positions by (|mu| desc, Re desc, position asc)
  std::vector<Eigen::Index> order(static_cast<std::size_t>(l));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  auto abs_mu = [&](Eigen::Index i) { return std::hypot(schur.wr(i), schur.wi(i)); };
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    const double ma = abs_mu(a), mb = abs_mu(b);
    if (ma != mb) return ma > mb;
    if (schur.wr(a) != schur.wr(b)) return schur.wr(a) > schur.wr(b);
    return a < b;
  });
  std::vector<bool> selected(static_cast<std::size_t>(l), false);
  for (Eigen::Index q = 0; q < k; ++q) selected[static_cast<std::size_t>(order[static_cast<std::size_t>(q)])] = true;

  // keep complex-conjugate pairs (adjacent positions i, i+1 with wi != 0) whole
  for (Eigen::Index i = 0; i + 1 < l;) {
    if (schur.wi(i) != 0.0) {
      const bool a = selected[static_cast<std::size_t>(i)];
      const bool b = selected[static_cast<std::size_t>(i) + 1];
      if (a != b) {
        selected[static_cast<std::size_t>(i)] = true;
        selected[static_cast<std::size_t>(i) + 1] = true;
        hp.pair_extended = true;
      }
      i += 2;
    } else {
      ++i;
    }
  }
  Eigen::Index k_eff = 0;
  for (const bool sel : selected)
    if (sel) ++k_eff;

  std::vector<lapack_int> select(static_cast<std::size_t>(l));
  for (Eigen::Index i = 0; i < l; ++i)
    select[static_cast<std::size_t>(i)] = selected[static_cast<std::size_t>(i)] ? 1 : 0;
  detail::reorder_schur(schur, select);

  hp.k_effective = k_eff;
  hp.coeffs = pencil.v * schur.q.leftCols(k_eff);

  // eigenvalues and eigenvector coordinates of the selected block, paired
  // index by index (the vectors are diagnostics; the subspace is what the
  // solver reuses)
  const Eigen::MatrixXd t_lead = schur.t.topLeftCorner(k_eff, k_eff);
  Eigen::EigenSolver<Eigen::MatrixXd> es(t_lead);
  hp.mu = es.eigenvalues();
  hp.vectors = hp.coeffs.cast<std::complex<double>>() * es.eigenvectors();
  return hp;
}

/// Harmonic update of the recycle space after a cycle: combines the current
/// space with the new Krylov basis through the deflating-subspace
/// coefficients. All three blocks get the same right-multiplication and a
/// joint column normalization, so no new sketches and no new operator
/// applications happen here (the per-column norms are ordinary length-n
/// inner products).
inline RecycleSpace update_recycle(const KrylovState& st, const RecycleSpace& current,
                                   Eigen::Index k, double rank_tol = 1e-12,
                                   Counters* counters = nullptr,
                                   std::vector<std::string>* notes = nullptr) {
  const Eigen::Index j = st.j;
  if (j < 1) throw std::invalid_argument("update_recycle: no Arnoldi steps taken");
  const Eigen::Index k_hat = current.dim();
  const Eigen::Index s = st.SV.rows();
  Eigen::MatrixXd SAW(s, k_hat + j), SW(s, k_hat + j);
  if (k_hat > 0) {
    SAW.leftCols(k_hat) = current.SAU;
    SW.leftCols(k_hat) = current.SU;
  }
  SAW.rightCols(j) = st.SAV.leftCols(j);
  SW.rightCols(j) = st.SV.leftCols(j);

  HarmonicPencil pencil = make_harmonic_pencil(SAW, SW, rank_tol);
  HarmonicPairs hp = harmonic_pairs(pencil, k);
  if (notes) {
    if (hp.rank_limited)
      notes->push_back("deflation space limited to pencil rank " + std::to_string(pencil.rank()) +
                       " (requested " + std::to_string(hp.k_requested) + ")");
    if (hp.pair_extended)
      notes->push_back("deflation space grew by one to keep a conjugate pair together");
  }

  RecycleSpace next;
  next.provenance = current.empty() ? RecycleSpace::Provenance::fresh : current.provenance;
  const Eigen::Index k_eff = hp.k_effective;
  if (k_eff == 0) return next;

  next.U.resize(st.V.rows(), k_eff);
  next.U.noalias() = st.V.leftCols(j) * hp.coeffs.bottomRows(j);
  next.SU.noalias() = st.SV.leftCols(j) * hp.coeffs.bottomRows(j);
  next.SAU.noalias() = st.SAV.leftCols(j) * hp.coeffs.bottomRows(j);
  if (k_hat > 0) {
    next.U.noalias() += current.U * hp.coeffs.topRows(k_hat);
    next.SU.noalias() += current.SU * hp.coeffs.topRows(k_hat);
    next.SAU.noalias() += current.SAU * hp.coeffs.topRows(k_hat);
  }

  // normalize columns of U; SU and SAU take the same scaling so the sketched
  // pairings stay exact
  std::vector<Eigen::Index> bad;
  for (Eigen::Index q = 0; q < k_eff; ++q) {
    const double nrm = next.U.col(q).norm();
    if (counters) ++counters->inner_products;
    if (nrm == 0.0 || !std::isfinite(nrm)) {
      bad.push_back(q);
      continue;
    }
    next.U.col(q) /= nrm;
    next.SU.col(q) /= nrm;
    next.SAU.col(q) /= nrm;
  }
  if (!bad.empty()) {
    next.drop_columns(bad);
    if (notes)
      notes->push_back("dropped " + std::to_string(bad.size()) +
                       " degenerate deflation columns after the harmonic update");
  }
  if (next.empty()) next.provenance = RecycleSpace::Provenance::empty;
  return next;
}

enum class RefreshMode { exact, inexact };

/// Prepares a carried space for a changed matrix. `exact` recomputes
/// SAU = S A_new U (k operator applications plus k sketches); `inexact`
/// keeps the stale image and only marks the provenance, trading the
/// sketched-residual guarantees for zero extra work.
inline void refresh_for_new_matrix(RecycleSpace& space, const OperatorRef& A_new,
                                   const SketchOperator& S, RefreshMode mode,
                                   Counters* counters = nullptr) {
  if (space.empty()) return;
  if (space.U.rows() != A_new.cols())
    throw std::invalid_argument("refresh_for_new_matrix: space has " +
                                std::to_string(space.U.rows()) + " rows but the operator takes " +
                                std::to_string(A_new.cols()));
  if (mode == RefreshMode::inexact) {
    space.provenance = RecycleSpace::Provenance::inexact_carryover;
    return;
  }
  Eigen::VectorXd au, sau;
  for (Eigen::Index q = 0; q < space.dim(); ++q) {
    A_new.apply(space.U.col(q), au);
    if (counters) ++counters->matvecs;
    S.apply(au, sau);
    if (counters) ++counters->sketch_applies;
    space.SAU.col(q) = sau;
  }
  space.provenance = RecycleSpace::Provenance::exact_resketch;
}

namespace detail {

inline void write_raw(std::ostream& out, const void* data, std::size_t bytes) {
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(bytes));
}

inline void read_raw(std::istream& in, void* data, std::size_t bytes, const char* what) {
  in.read(static_cast<char*>(data), static_cast<std::streamsize>(bytes));
  if (static_cast<std::size_t>(in.gcount()) != bytes)
    throw std::runtime_error(std::string("recycle-space load: truncated file while reading ") +
                             what);
}

}  // namespace detail

/// Binary dump of a recycle space (native-endian doubles, column-major),
/// for carrying deflation data across program runs.
inline void save_recycle_space(std::ostream& out, const RecycleSpace& space) {
  const char magic[8] = {'S', 'K', 'R', 'Y', 'R', 'C', 'Y', '1'};
  detail::write_raw(out, magic, sizeof(magic));
  const std::int64_t n = space.U.rows(), s = space.SU.rows(), k = space.dim();
  const std::int64_t prov = static_cast<std::int64_t>(space.provenance);
  detail::write_raw(out, &n, sizeof(n));
  detail::write_raw(out, &s, sizeof(s));
  detail::write_raw(out, &k, sizeof(k));
  detail::write_raw(out, &prov, sizeof(prov));
  detail::write_raw(out, space.U.data(), sizeof(double) * static_cast<std::size_t>(n * k));
  detail::write_raw(out, space.SU.data(), sizeof(double) * static_cast<std::size_t>(s * k));
  detail::write_raw(out, space.SAU.data(), sizeof(double) * static_cast<std::size_t>(s * k));
}

inline RecycleSpace load_recycle_space(std::istream& in) {
  char magic[8];
  detail::read_raw(in, magic, sizeof(magic), "magic");
  const char expect[8] = {'S', 'K', 'R', 'Y', 'R', 'C', 'Y', '1'};
  if (!std::equal(magic, magic + 8, expect))
    throw std::runtime_error("recycle-space load: bad magic (not a recycle-space dump)");
  std::int64_t n = 0, s = 0, k = 0, prov = 0;
  detail::read_raw(in, &n, sizeof(n), "dimensions");
  detail::read_raw(in, &s, sizeof(s), "dimensions");
  detail::read_raw(in, &k, sizeof(k), "dimensions");
  detail::read_raw(in, &prov, sizeof(prov), "provenance");
  if (n < 0 || s < 0 || k < 0 || prov < 0 || prov > 4)
    throw std::runtime_error("recycle-space load: corrupt header");
  RecycleSpace space;
  space.U.resize(n, k);
  space.SU.resize(s, k);
  space.SAU.resize(s, k);
  space.provenance = static_cast<RecycleSpace::Provenance>(prov);
  detail::read_raw(in, space.U.data(), sizeof(double) * static_cast<std::size_t>(n * k), "U");
  detail::read_raw(in, space.SU.data(), sizeof(double) * static_cast<std::size_t>(s * k), "SU");
  detail::read_raw(in, space.SAU.data(), sizeof(double) * static_cast<std::size_t>(s * k), "SAU");
  return space;
}

inline void save_recycle_space_file(const std::string& path, const RecycleSpace& space) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  save_recycle_space(out, space);
}

inline RecycleSpace load_recycle_space_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open recycle-space file '" + path + "'");
  return load_recycle_space(in);
}

/// Test-side consistency check: SU and SAU reproduce S U and S A U.
/// Returns the worst relative column error.
inline double recycle_consistency_error(const RecycleSpace& space, const OperatorRef& A,
                                        const SketchOperator& S) {
  double worst = 0.0;
  Eigen::VectorXd su, au, sau;
  for (Eigen::Index q = 0; q < space.dim(); ++q) {
    S.apply(space.U.col(q), su);
    A.apply(space.U.col(q), au);
    S.apply(au, sau);
    const double scale_u = std::max(1.0, su.norm());
    const double scale_au = std::max(1.0, sau.norm());
    worst = std::max(worst, (su - space.SU.col(q)).norm() / scale_u);
    worst = std::max(worst, (sau - space.SAU.col(q)).norm() / scale_au);
  }
  return worst;
}

}  // namespace skrylov
