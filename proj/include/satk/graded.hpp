// SPDX-License-Identifier: Apache-2.0
//
// Log-scaled Gram eigensolver.
//
// Sums of the form  M = sum_i exp(2 l_i) v_i v_i^*  appear whenever a matrix
// power or a weighted sum a_i^n H_i is formed; the scales exp(l_i) routinely
// span thousands of orders of magnitude, far outside double range.  The
// eigen-decomposition is recovered level by level: vectors are orthogonalised
// against everything with a larger scale (a Schur complement), and only
// scales closer than `kLevelGap` nats are ever combined in floating point.
#ifndef SATK_GRADED_HPP
#define SATK_GRADED_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

namespace satk {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Index = Eigen::Index;
using cplx = std::complex<double>;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

namespace detail {

/// One-sided (Hestenes) Jacobi on the columns of Y.  On return Y has
/// mutually orthogonal columns and V is the accumulated unitary, so that
/// Y_in * V = Y_out.  Column-scaled inputs keep full relative accuracy.
inline void hestenes(CMatrix& Y, CMatrix& V)
{
  const Index p = Y.cols();
  V = CMatrix::Identity(p, p);
  const double eps = std::numeric_limits<double>::epsilon();
  for (int sweep = 0; sweep < 80; ++sweep) {
    bool rotated = false;
    for (Index i = 0; i < p - 1; ++i) {
      for (Index j = i + 1; j < p; ++j) {
        const double alpha = Y.col(i).squaredNorm();
        const double beta = Y.col(j).squaredNorm();
        const cplx gamma = Y.col(i).dot(Y.col(j));  // y_i^* y_j
        const double g = std::abs(gamma);
        if (g == 0.0 || g <= eps * std::sqrt(alpha) * std::sqrt(beta)) continue;
        rotated = true;
        const cplx phase = gamma / g;
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        CVector yi = Y.col(i);
        CVector yj = Y.col(j) * std::conj(phase);
        Y.col(i) = c * yi - s * yj;
        Y.col(j) = s * yi + c * yj;
        CVector vi = V.col(i);
        CVector vj = V.col(j) * std::conj(phase);
        V.col(i) = c * vi - s * vj;
        V.col(j) = s * vi + c * vj;
      }
    }
    if (!rotated) break;
  }
}

}  // namespace detail

/// Eigen-decomposition of a PSD matrix held as log-eigenvalues.
/// `vectors` is unitary; `logEig[k]` is the natural log of the k-th
/// eigenvalue (-inf for an exact zero), sorted descending.
struct GradedEigen
{
  CMatrix vectors;
  std::vector<double> logEig;

  Index dim() const { return vectors.rows(); }

  /// M^p for p > 0; eigenvalues that are exactly zero stay zero.
  CMatrix power(double p) const
  {
    const Index m = dim();
    Eigen::VectorXd w(m);
    for (Index k = 0; k < m; ++k) w(k) = logEig[k] == kNegInf ? 0.0 : std::exp(p * logEig[k]);
    CMatrix out = vectors * w.asDiagonal() * vectors.adjoint();
    return 0.5 * (out + out.adjoint());
  }
};

/// Spread, in nats, beyond which two scales are treated as decoupled.
/// Cross terms between such levels are below exp(-kLevelGap) relative.
inline constexpr double kLevelGap = 36.0;

/// Eigen-decomposition of sum_i exp(2 logScales[i]) vecs[i] vecs[i]^*.
/// Vectors need not be normalised; zero vectors and -inf scales are dropped.
inline GradedEigen graded_gram_eigen(const std::vector<CVector>& vecs, const std::vector<double>& logScales,
                                     Index dim)
{
  struct Term
  {
    CVector v;
    double log;
  };
  std::vector<Term> terms;
  for (std::size_t i = 0; i < vecs.size(); ++i) {
    const double nrm = vecs[i].norm();
    if (nrm == 0.0 || logScales[i] == kNegInf || !std::isfinite(nrm)) continue;
    terms.push_back({vecs[i] / nrm, logScales[i] + std::log(nrm)});
  }
  std::stable_sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.log > b.log; });

  const Index p = static_cast<Index>(terms.size());
  CMatrix Q(dim, 0);
  std::vector<double> rowLog;         // scale of the term that created each basis row
  std::vector<Index> rowCreator;      // term index that created each basis row
  CMatrix coef = CMatrix::Zero(dim, p);  // coefficients of each term in the basis

  const double dropTol = 1e-12;
  for (Index i = 0; i < p; ++i) {
    CVector r = terms[i].v;
    CVector c = CVector::Zero(Q.cols());
    for (int pass = 0; pass < 2 && Q.cols() > 0; ++pass) {
      CVector ci = Q.adjoint() * r;
      r -= Q * ci;
      c += ci;
    }
    const double rho = r.norm();
    const Index k = Q.cols();
    coef.col(i).head(k) = c;
    if (rho > dropTol && k < dim) {
      Q.conservativeResize(dim, k + 1);
      Q.col(k) = r / rho;
      coef(k, i) = rho;
      rowLog.push_back(terms[i].log);
      rowCreator.push_back(i);
    }
  }

  const Index r = Q.cols();
  GradedEigen out;
  out.vectors.resize(dim, dim);
  out.logEig.assign(dim, kNegInf);
  Index filled = 0;

  Index s = 0;
  while (s < r) {
    Index e = s + 1;
    while (e < r && rowLog[e - 1] - rowLog[e] <= kLevelGap) ++e;
    const double top = rowLog[s];
    const Index firstTerm = rowCreator[s];
    const Index rows = e - s;
    const Index cols = p - firstTerm;
    // Y = X^* where X is the level block scaled by exp(-top).
    CMatrix Y(cols, rows);
    for (Index t = 0; t < cols; ++t) {
      const double sc = std::exp(terms[firstTerm + t].log - top);
      for (Index j = 0; j < rows; ++j) Y(t, j) = std::conj(coef(s + j, firstTerm + t)) * sc;
    }
    CMatrix V;
    detail::hestenes(Y, V);
    std::vector<Index> order(rows);
    std::iota(order.begin(), order.end(), 0);
    Eigen::VectorXd sig(rows);
    for (Index j = 0; j < rows; ++j) sig(j) = Y.col(j).norm();
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return sig(a) > sig(b); });
    CMatrix basis = Q.middleCols(s, rows) * V;
    for (Index j : order) {
      out.vectors.col(filled) = basis.col(j);
      out.logEig[filled] = sig(j) > 0.0 ? 2.0 * (top + std::log(sig(j))) : kNegInf;
      ++filled;
    }
    s = e;
  }

  if (filled < dim) {
    CMatrix full = CMatrix::Identity(dim, dim);
    if (r > 0) {
      Eigen::HouseholderQR<CMatrix> qr(Q);
      full = qr.householderQ() * CMatrix::Identity(dim, dim);
    }
    for (Index j = r; j < dim; ++j) out.vectors.col(filled++) = full.col(j);
  }

  // Levels are emitted in descending order but Jacobi may leave small
  // inversions at level boundaries; sort once more.
  std::vector<Index> order(dim);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return out.logEig[a] > out.logEig[b]; });
  GradedEigen sorted;
  sorted.vectors.resize(dim, dim);
  sorted.logEig.resize(dim);
  for (Index k = 0; k < dim; ++k) {
    sorted.vectors.col(k) = out.vectors.col(order[k]);
    sorted.logEig[k] = out.logEig[order[k]];
  }
  return sorted;
}

}  // namespace satk

#endif
