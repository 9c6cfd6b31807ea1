// SPDX-License-Identifier: Apache-2.0
//
// Dense complex kernels and the Loewner-order toolbox.
#ifndef SATK_LINALG_HPP
#define SATK_LINALG_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"
#include "graded.hpp"

namespace satk {

inline constexpr double kEps = std::numeric_limits<double>::epsilon();
inline constexpr double kHermTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;

/// Numerical-rank threshold relative to the largest singular value.
/// The 1e3 factor absorbs the backward error of forming products like S^*ES.
inline double default_rank_tol(Index m) { return 1e3 * static_cast<double>(m) * kEps; }

inline void require_matrix(const CMatrix& M, const char* who)
{
  if (M.rows() < 1 || M.rows() != M.cols())
    throw InvalidInput(std::string(who) + ": matrix must be square with dim >= 1");
  if (!M.allFinite()) throw InvalidInput(std::string(who) + ": non-finite entry");
}

inline double max_abs(const CMatrix& M) { return M.size() == 0 ? 0.0 : M.cwiseAbs().maxCoeff(); }

/// Spectral norm.
inline double op_norm(const CMatrix& M)
{
  if (M.size() == 0) return 0.0;
  if (M.rows() <= 16 && M.cols() <= 16) {
    Eigen::JacobiSVD<CMatrix> svd(M);
    return svd.singularValues()(0);
  }
  Eigen::BDCSVD<CMatrix> svd(M);
  return svd.singularValues()(0);
}

inline CMatrix identity(Index m) { return CMatrix::Identity(m, m); }

/// Self-adjoint matrix; the stored matrix is exactly Hermitian.
class HermMatrix
{
 public:
  HermMatrix() = default;
  explicit HermMatrix(const CMatrix& base)
  {
    require_matrix(base, "HermMatrix");
    const double scale = max_abs(base);
    if (max_abs(base - base.adjoint()) > kHermTol * scale)
      throw InvalidInput("HermMatrix: matrix is not Hermitian");
    m_ = 0.5 * (base + base.adjoint());
  }

  /// Symmetrises without checking; for results that are Hermitian by construction.
  static HermMatrix trusted(const CMatrix& base)
  {
    HermMatrix h;
    h.m_ = 0.5 * (base + base.adjoint());
    return h;
  }

  const CMatrix& matrix() const { return m_; }
  Index dim() const { return m_.rows(); }

  /// Ascending.
  Eigen::VectorXd eigenvalues() const
  {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m_, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
  }

 private:
  CMatrix m_;
};

/// Positive semidefinite matrix with its smallest eigenvalue cached.
class PsdMatrix
{
 public:
  PsdMatrix() = default;
  explicit PsdMatrix(const HermMatrix& h) : h_(h)
  {
    const Eigen::VectorXd ev = h.eigenvalues();
    minEig_ = ev(0);
    const double norm2 = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
    if (minEig_ < -kPsdTol * std::max(1.0, norm2))
      throw InvalidInput("PsdMatrix: smallest eigenvalue " + std::to_string(minEig_) + " is negative");
  }
  explicit PsdMatrix(const CMatrix& m) : PsdMatrix(HermMatrix(m)) {}

  /// V diag(w) V^* for known w >= 0 (negative roundoff is clamped).
  static PsdMatrix from_spectral(const CMatrix& V, const Eigen::VectorXd& w)
  {
    PsdMatrix p;
    const Eigen::VectorXd wc = w.cwiseMax(0.0);
    p.h_ = HermMatrix::trusted(V * wc.asDiagonal() * V.adjoint());
    p.minEig_ = (w.size() == V.rows() && w.size() > 0) ? wc.minCoeff() : 0.0;
    return p;
  }

  static PsdMatrix from_graded(const GradedEigen& g, double p)
  {
    PsdMatrix out;
    out.h_ = HermMatrix::trusted(g.power(p));
    out.minEig_ = g.logEig.back() == kNegInf ? 0.0 : std::exp(p * g.logEig.back());
    return out;
  }

  const CMatrix& matrix() const { return h_.matrix(); }
  const HermMatrix& herm() const { return h_; }
  Index dim() const { return h_.dim(); }
  double minEig() const { return minEig_; }

 private:
  HermMatrix h_;
  double minEig_ = 0.0;
};

struct SvdResult
{
  CMatrix leftBasis;
  Eigen::VectorXd singulars;  // descending
  CMatrix rightBasis;
};

inline SvdResult svd(const CMatrix& T)
{
  if (T.rows() <= 16) {
    Eigen::JacobiSVD<CMatrix> s(T, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return {s.matrixU(), s.singularValues(), s.matrixV()};
  }
  Eigen::BDCSVD<CMatrix> s(T, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {s.matrixU(), s.singularValues(), s.matrixV()};
}

/// Eigenpairs of a Hermitian matrix, ascending.
inline std::pair<Eigen::VectorXd, CMatrix> eigh(const CMatrix& H)
{
  Eigen::SelfAdjointEigenSolver<CMatrix> es(H);
  if (es.info() != Eigen::Success) throw NumericalFailure("eigh: eigensolver did not converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

/// |T| = (T^*T)^{1/2}.
inline PsdMatrix abs_op(const CMatrix& T)
{
  require_matrix(T, "abs_op");
  auto [w, V] = eigh(T.adjoint() * T);
  return PsdMatrix::from_spectral(V, w.cwiseMax(0.0).cwiseSqrt());
}

/// H^p via the spectral theorem.  Eigenvalues below rankTol * lambda_max map
/// to zero, so 0^p = 0.
inline PsdMatrix psd_power(const PsdMatrix& H, double p, double rankTol = -1.0)
{
  if (!(p > 0.0) || !std::isfinite(p)) throw InvalidInput("psd_power: exponent must be positive");
  if (rankTol < 0) rankTol = default_rank_tol(H.dim());
  auto [w, V] = eigh(H.matrix());
  const double top = std::max(w.maxCoeff(), 0.0);
  Eigen::VectorXd out(w.size());
  for (Index k = 0; k < w.size(); ++k) out(k) = (w(k) <= rankTol * top || w(k) <= 0.0) ? 0.0 : std::pow(w(k), p);
  return PsdMatrix::from_spectral(V, out);
}

/// A <= B in the Loewner order: lambda_min(B - A) >= -tol.
inline bool loewner_leq(const HermMatrix& A, const HermMatrix& B, double tol)
{
  if (A.dim() != B.dim()) throw InvalidInput("loewner_leq: dimension mismatch");
  return HermMatrix::trusted(B.matrix() - A.matrix()).eigenvalues()(0) >= -tol;
}

/// Smallest eigenvalue of B - A; the margin that `loewner_leq` tests.
inline double loewner_margin(const CMatrix& A, const CMatrix& B)
{
  if (A.rows() != B.rows()) throw InvalidInput("loewner_margin: dimension mismatch");
  return HermMatrix::trusted(B - A).eigenvalues()(0);
}

struct RangeProjection
{
  PsdMatrix projector;
  Index rank = 0;

  const CMatrix& matrix() const { return projector.matrix(); }
};

namespace detail {
inline RangeProjection projector_from_basis(const CMatrix& U, Index rank)
{
  const Index m = U.rows();
  Eigen::VectorXd w = Eigen::VectorXd::Zero(m);
  w.head(rank).setOnes();
  return {PsdMatrix::from_spectral(U, w), rank};
}
}  // namespace detail

/// Orthogonal projection onto ran(T): left singular vectors with
/// sigma > rankTol * sigma_max.
inline RangeProjection range_projection(const CMatrix& T, double rankTol = -1.0)
{
  require_matrix(T, "range_projection");
  if (rankTol < 0) rankTol = default_rank_tol(T.rows());
  const SvdResult s = svd(T);
  const double top = s.singulars(0);
  Index rank = 0;
  while (rank < s.singulars.size() && top > 0.0 && s.singulars(rank) > rankTol * top) ++rank;
  return detail::projector_from_basis(s.leftBasis, rank);
}

/// Range projection when the rank is known a priori (e.g. the trace of an
/// idempotent).
inline RangeProjection range_projection_of_rank(const CMatrix& T, Index rank)
{
  require_matrix(T, "range_projection_of_rank");
  if (rank < 0 || rank > T.rows()) throw InvalidInput("range_projection_of_rank: rank out of range");
  return detail::projector_from_basis(svd(T).leftBasis, rank);
}

struct WeightedTerm
{
  double weight;  // a_i >= 0
  PsdMatrix H;
};

/// (sum_i a_i^n H_i)^{1/n} with a_1 < ... < a_k.  Each H_i is split into its
/// eigenvectors and the weights are carried as logarithms, so a_i^n never
/// has to be representable.
inline PsdMatrix weighted_psd_sum_root(const std::vector<WeightedTerm>& terms, long n, double rankTol = -1.0)
{
  if (terms.empty()) throw InvalidInput("weighted_psd_sum_root: no terms");
  if (n < 1) throw InvalidInput("weighted_psd_sum_root: n must be positive");
  const Index m = terms.front().H.dim();
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (!(terms[i].weight >= 0.0) || !std::isfinite(terms[i].weight))
      throw InvalidInput("weighted_psd_sum_root: weights must be finite and non-negative");
    if (terms[i].H.dim() != m) throw InvalidInput("weighted_psd_sum_root: dimension mismatch");
    if (i > 0 && !(terms[i].weight > terms[i - 1].weight))
      throw InvalidInput("weighted_psd_sum_root: weights must be strictly increasing");
  }
  if (rankTol < 0) rankTol = default_rank_tol(m);

  std::vector<CVector> vecs;
  std::vector<double> logs;
  for (const auto& t : terms) {
    if (t.weight == 0.0) continue;
    auto [w, V] = eigh(t.H.matrix());
    const double top = w.maxCoeff();
    for (Index k = 0; k < w.size(); ++k) {
      if (!(w(k) > rankTol * top) || w(k) <= 0.0) continue;
      vecs.push_back(V.col(k));
      logs.push_back(0.5 * (static_cast<double>(n) * std::log(t.weight) + std::log(w(k))));
    }
  }
  const GradedEigen g = graded_gram_eigen(vecs, logs, m);
  return PsdMatrix::from_graded(g, 1.0 / static_cast<double>(n));
}

inline Eigen::VectorXcd eigenvalues(const CMatrix& A)
{
  require_matrix(A, "eigenvalues");
  Eigen::ComplexEigenSolver<CMatrix> es(A, false);
  if (es.info() != Eigen::Success) throw NumericalFailure("eigenvalues: eigensolver did not converge");
  return es.eigenvalues();
}

inline double spectral_radius(const CMatrix& A)
{
  return eigenvalues(A).cwiseAbs().maxCoeff();
}

}  // namespace satk

#endif
