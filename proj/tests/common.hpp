// SPDX-License-Identifier: Apache-2.0
//
// Random draws and oracles shared by the test binaries.  Oracles avoid the
// library routine they check: range projections come from a rank-revealing
// QR instead of the SVD, |T| from the SVD instead of eigh(T^*T).
#ifndef SATK_TESTS_COMMON_HPP
#define SATK_TESTS_COMMON_HPP

#include <cmath>
#include <initializer_list>
#include <vector>

#include "satk/satk.hpp"

namespace satk::test {

inline CMatrix diag(std::initializer_list<cplx> d)
{
  Eigen::VectorXcd v(static_cast<Index>(d.size()));
  Index i = 0;
  for (cplx x : d) v(i++) = x;
  return v.asDiagonal();
}

inline CMatrix mat2(cplx a, cplx b, cplx c, cplx d)
{
  CMatrix M(2, 2);
  M << a, b, c, d;
  return M;
}

inline CVector vec(std::initializer_list<cplx> d)
{
  CVector v(static_cast<Index>(d.size()));
  Index i = 0;
  for (cplx x : d) v(i++) = x;
  return v;
}

inline CMatrix random_hermitian(Rng& rng, Index m)
{
  const CMatrix G = rng.gaussian(m, m);
  return 0.5 * (G + G.adjoint());
}

/// PSD of rank r (r = m for full rank) with eigenvalues in [lo, hi].
inline CMatrix random_psd(Rng& rng, Index m, Index r, double lo = 0.1, double hi = 4.0)
{
  const CMatrix U = rng.unitary(m);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(m);
  for (Index i = 0; i < r; ++i) w(i) = rng.uniform(lo, hi);
  CMatrix H = U * w.asDiagonal() * U.adjoint();
  return 0.5 * (H + H.adjoint());
}

/// Orthogonal projection of rank r.
inline CMatrix random_projection(Rng& rng, Index m, Index r)
{
  const CMatrix U = rng.unitary(m);
  return U.leftCols(r) * U.leftCols(r).adjoint();
}

/// Invertible S = I + delta G with condition number at most `cap`.
inline CMatrix random_invertible(Rng& rng, Index m, double cap = 50.0)
{
  const CMatrix G = rng.gaussian(m, m) / std::sqrt(static_cast<double>(m));
  double delta = 1.0;
  for (;;) {
    CMatrix S = identity(m) + delta * G;
    Eigen::JacobiSVD<CMatrix> s(S);
    const auto sv = s.singularValues();
    if (sv(0) / sv(m - 1) <= cap) return S;
    delta *= 0.7;
  }
}

/// Range projection oracle: column-pivoted QR with a relative threshold.
inline CMatrix oracle_range_projection(const CMatrix& T, double relTol = 1e-9)
{
  Eigen::ColPivHouseholderQR<CMatrix> qr(T);
  qr.setThreshold(relTol);
  const Index r = qr.rank();
  const CMatrix Q = qr.householderQ() * CMatrix::Identity(T.rows(), T.rows());
  return Q.leftCols(r) * Q.leftCols(r).adjoint();
}

/// |T| from the SVD T = U S V^*: |T| = V S V^*.
inline CMatrix oracle_abs(const CMatrix& T)
{
  Eigen::JacobiSVD<CMatrix> s(T, Eigen::ComputeFullV);
  return s.matrixV() * s.singularValues().asDiagonal() * s.matrixV().adjoint();
}

inline double min_eig(const CMatrix& H) { return HermMatrix::trusted(H).eigenvalues()(0); }

/// H^p through the spectral theorem with an independent eigensolver call
/// (complex Schur on a Hermitian input); eigenvalues below `cut` map to 0.
inline CMatrix oracle_psd_power(const CMatrix& H, double p, double cut = 1e-12)
{
  Eigen::ComplexEigenSolver<CMatrix> es(H);
  // eigenvectors of a Hermitian matrix from ComplexEigenSolver are not
  // orthonormal in degenerate clusters; re-orthonormalise with QR
  const CMatrix V = Eigen::HouseholderQR<CMatrix>(es.eigenvectors()).householderQ() * identity(H.rows());
  const CMatrix L = V.adjoint() * H * V;
  Eigen::VectorXd w(H.rows());
  for (Index i = 0; i < H.rows(); ++i) {
    const double lam = L(i, i).real();
    w(i) = lam > cut ? std::pow(lam, p) : 0.0;
  }
  return V * w.asDiagonal() * V.adjoint();
}

}  // namespace satk::test

#endif
