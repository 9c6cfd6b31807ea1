// SPDX-License-Identifier: Apache-2.0
//
// Eigenvalue clustering, spectral idempotents and the Dunford
// (Jordan-Chevalley) decomposition A = D + N.
//
// Idempotents come from an ordered complex Schur form: the cluster is
// swapped to the leading block with Givens rotations, and the coupling block
// is removed by a triangular Sylvester solve.  With A = Z T Z^* and
//   T = [T11 T12; 0 T22],  T11 Y - Y T22 = -T12,
// the idempotent onto the leading invariant subspace along the trailing one
// is Z [I -Y; 0 0] Z^*.
#ifndef SATK_SPECTRAL_HPP
#define SATK_SPECTRAL_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/Eigenvalues>

#include "linalg.hpp"

namespace satk {

struct EigenCluster
{
  cplx representative;
  std::vector<cplx> members;
  Index algebraicMultiplicity = 0;
};

struct SpectralIdempotent
{
  CMatrix matrix;
  EigenCluster cluster;
};

struct DunfordDecomposition
{
  CMatrix A;
  CMatrix D;
  CMatrix N;
  std::vector<SpectralIdempotent> idempotents;
  double conditionBound = 0.0;  // max ||P_i||_2
  double clusterTol = 0.0;

  Index dim() const { return A.rows(); }
};

inline double default_cluster_tol(const CMatrix& A) { return 1e-6 * std::max(1.0, op_norm(A)); }

struct SchurForm
{
  CMatrix T;  // upper triangular
  CMatrix Z;  // unitary, A = Z T Z^*
};

inline SchurForm schur(const CMatrix& A)
{
  require_matrix(A, "schur");
  Eigen::ComplexSchur<CMatrix> cs(A);
  if (cs.info() != Eigen::Success) throw NumericalFailure("schur: QR algorithm did not converge");
  SchurForm s{cs.matrixT(), cs.matrixU()};
  for (Index j = 0; j < s.T.cols(); ++j)
    for (Index i = j + 1; i < s.T.rows(); ++i) s.T(i, j) = 0.0;
  return s;
}

namespace detail {

/// Swap diagonal entries k and k+1 of the Schur form (complex ztrexc step).
inline void swap_schur(SchurForm& s, Index k)
{
  CMatrix& T = s.T;
  const Index m = T.rows();
  const cplx a = T(k, k);
  const cplx b = T(k, k + 1);
  const cplx c = T(k + 1, k + 1);
  // (b, c - a) spans the eigenvector of the 2x2 block for eigenvalue c.
  cplx x1 = b;
  cplx x2 = c - a;
  const double nrm = std::hypot(std::abs(x1), std::abs(x2));
  x1 /= nrm;
  x2 /= nrm;
  Eigen::Matrix2cd W;
  W << x1, -std::conj(x2), x2, std::conj(x1);
  T.block(k, 0, 2, m) = W.adjoint() * T.block(k, 0, 2, m);
  T.block(0, k, m, 2) = T.block(0, k, m, 2) * W;
  s.Z.block(0, k, m, 2) = s.Z.block(0, k, m, 2) * W;
  T(k + 1, k) = 0.0;
  T(k, k) = c;
  T(k + 1, k + 1) = a;
}

/// Reorder so diagonal positions flagged in `lead` come first, preserving
/// relative order.  Only non-members are swapped past members.
inline void reorder_schur(SchurForm& s, std::vector<bool> lead)
{
  const Index m = s.T.rows();
  Index target = 0;
  for (Index j = 0; j < m; ++j) {
    if (!lead[j]) continue;
    for (Index k = j; k > target; --k) {
      swap_schur(s, k - 1);
      std::swap(lead[k - 1], lead[k]);
    }
    ++target;
  }
}

struct Dsu
{
  std::vector<Index> parent;
  explicit Dsu(Index n) : parent(n) { std::iota(parent.begin(), parent.end(), Index{0}); }
  Index find(Index x)
  {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(Index a, Index b) { parent[find(a)] = find(b); }
};

/// Cluster ids for each diagonal entry; clusters sorted by (|rep|, arg rep).
inline std::pair<std::vector<EigenCluster>, std::vector<Index>> cluster_values(const Eigen::VectorXcd& ev,
                                                                                double tol)
{
  const Index m = ev.size();
  Dsu dsu(m);
  for (Index i = 0; i < m; ++i)
    for (Index j = i + 1; j < m; ++j)
      if (std::abs(ev(i) - ev(j)) <= tol) dsu.unite(i, j);

  std::vector<Index> roots;
  std::vector<Index> rootOf(m);
  for (Index i = 0; i < m; ++i) {
    rootOf[i] = dsu.find(i);
    if (std::find(roots.begin(), roots.end(), rootOf[i]) == roots.end()) roots.push_back(rootOf[i]);
  }
  std::vector<EigenCluster> clusters(roots.size());
  for (std::size_t c = 0; c < roots.size(); ++c) {
    cplx sum = 0.0;
    for (Index i = 0; i < m; ++i)
      if (rootOf[i] == roots[c]) {
        clusters[c].members.push_back(ev(i));
        sum += ev(i);
      }
    clusters[c].algebraicMultiplicity = static_cast<Index>(clusters[c].members.size());
    clusters[c].representative = sum / static_cast<double>(clusters[c].members.size());
  }
  std::vector<std::size_t> order(clusters.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double ma = std::abs(clusters[a].representative), mb = std::abs(clusters[b].representative);
    if (ma != mb) return ma < mb;
    return std::arg(clusters[a].representative) < std::arg(clusters[b].representative);
  });
  std::vector<EigenCluster> sorted;
  std::vector<Index> newId(clusters.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    sorted.push_back(clusters[order[k]]);
    newId[order[k]] = static_cast<Index>(k);
  }
  std::vector<Index> label(m);
  for (Index i = 0; i < m; ++i) {
    const auto it = std::find(roots.begin(), roots.end(), rootOf[i]);
    label[i] = newId[static_cast<std::size_t>(it - roots.begin())];
  }
  return {sorted, label};
}

/// Flags the diagonal entries of T that belong to `cluster`.
inline std::vector<bool> members_on_diagonal(const CMatrix& T, const EigenCluster& cluster)
{
  const Index m = T.rows();
  std::vector<bool> lead(m, false);
  std::vector<bool> used(cluster.members.size(), false);
  Index hits = 0;
  for (Index j = 0; j < m; ++j) {
    for (std::size_t c = 0; c < cluster.members.size(); ++c) {
      if (used[c]) continue;
      if (std::abs(T(j, j) - cluster.members[c]) <= 1e-12 * std::max(1.0, std::abs(T(j, j)))) {
        used[c] = true;
        lead[j] = true;
        ++hits;
        break;
      }
    }
  }
  if (hits != cluster.algebraicMultiplicity)
    throw InvalidInput("spectral_idempotent: cluster was not produced from this matrix");
  return lead;
}

inline CMatrix idempotent_from_schur(SchurForm s, const std::vector<bool>& lead)
{
  const Index m = s.T.rows();
  const Index p = static_cast<Index>(std::count(lead.begin(), lead.end(), true));
  if (p == m) return identity(m);
  if (p == 0) return CMatrix::Zero(m, m);
  reorder_schur(s, lead);
  const Index q = m - p;
  const CMatrix T11 = s.T.topLeftCorner(p, p);
  const CMatrix T12 = s.T.topRightCorner(p, q);
  const CMatrix T22 = s.T.bottomRightCorner(q, q);
  CMatrix Y(p, q);
  for (Index j = 0; j < q; ++j) {
    CVector rhs = -T12.col(j);
    for (Index i = 0; i < j; ++i) rhs += Y.col(i) * T22(i, j);
    CMatrix shifted = T11;
    shifted.diagonal().array() -= T22(j, j);
    Y.col(j) = shifted.triangularView<Eigen::Upper>().solve(rhs);
  }
  const double residual =
      (T11 * Y - Y * T22 + T12).norm() / (std::max(s.T.norm(), 1e-300) * (1.0 + Y.norm()));
  if (!std::isfinite(residual) || residual > 1e-10)
    throw IllConditioned("spectral_idempotent: Sylvester separation failed", residual);
  CMatrix P = CMatrix::Zero(m, m);
  P.topLeftCorner(p, p).setIdentity();
  P.topRightCorner(p, q) = -Y;
  return s.Z * P * s.Z.adjoint();
}

}  // namespace detail

/// Single-linkage clustering of the eigenvalues of A.
inline std::vector<EigenCluster> eigen_clusters(const CMatrix& A, double clusterTol)
{
  if (!(clusterTol > 0.0)) throw InvalidInput("eigen_clusters: clusterTol must be positive");
  const SchurForm s = schur(A);
  return detail::cluster_values(s.T.diagonal(), clusterTol).first;
}

inline SpectralIdempotent spectral_idempotent(const CMatrix& A, const EigenCluster& cluster)
{
  const SchurForm s = schur(A);
  return {detail::idempotent_from_schur(s, detail::members_on_diagonal(s.T, cluster)), cluster};
}

inline DunfordDecomposition dunford(const CMatrix& A, double clusterTol = -1.0)
{
  require_matrix(A, "dunford");
  if (clusterTol < 0) clusterTol = default_cluster_tol(A);
  if (!(clusterTol > 0.0)) throw InvalidInput("dunford: clusterTol must be positive");
  const SchurForm s = schur(A);
  auto [clusters, label] = detail::cluster_values(s.T.diagonal(), clusterTol);
  const Index m = A.rows();

  DunfordDecomposition dec;
  dec.A = A;
  dec.clusterTol = clusterTol;
  dec.D = CMatrix::Zero(m, m);
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    std::vector<bool> lead(m);
    for (Index j = 0; j < m; ++j) lead[j] = label[j] == static_cast<Index>(c);
    SpectralIdempotent e{detail::idempotent_from_schur(s, lead), clusters[c]};
    dec.D += clusters[c].representative * e.matrix;
    dec.conditionBound = std::max(dec.conditionBound, op_norm(e.matrix));
    dec.idempotents.push_back(std::move(e));
  }
  dec.N = A - dec.D;
  return dec;
}

/// Spectral regions built from discs and half-planes.
struct Region
{
  enum class Kind { Disc, HalfPlane, OutsideDisc, Full, Empty };
  Kind kind = Kind::Full;
  double param = 0.0;

  static Region disc(double r) { return r < 0 ? empty() : Region{Kind::Disc, r}; }
  static Region halfplane(double b) { return {Kind::HalfPlane, b}; }
  static Region outside_disc(double r) { return {Kind::OutsideDisc, r}; }
  static Region full() { return {Kind::Full, 0.0}; }
  static Region empty() { return {Kind::Empty, 0.0}; }

  bool contains(cplx z) const
  {
    switch (kind) {
      case Kind::Disc: return std::abs(z) <= param;
      case Kind::HalfPlane: return z.real() <= param;
      case Kind::OutsideDisc: return !(std::abs(z) <= param);
      case Kind::Full: return true;
      case Kind::Empty: return false;
    }
    return false;
  }
};

/// e_A(Omega): sum of the idempotents whose cluster representative lies in Omega.
inline CMatrix idempotent_for_region(const DunfordDecomposition& dec, const Region& omega)
{
  const Index m = dec.dim();
  if (omega.kind == Region::Kind::Full) return identity(m);
  CMatrix E = CMatrix::Zero(m, m);
  for (const auto& p : dec.idempotents)
    if (omega.contains(p.cluster.representative)) E += p.matrix;
  return E;
}

struct NormalSimilarity
{
  CMatrix S;       // ||S||_2 = 1
  CMatrix Lambda;  // diagonal, D = S^{-1} Lambda S
};

/// D = S^{-1} Lambda S with Lambda diagonal, built from orthonormal bases of
/// the idempotent ranges.
inline NormalSimilarity similarity_to_normal(const DunfordDecomposition& dec)
{
  const Index m = dec.dim();
  CMatrix V(m, m);
  Eigen::VectorXcd lam(m);
  Index col = 0;
  for (const auto& p : dec.idempotents) {
    const Index r = p.cluster.algebraicMultiplicity;
    const SvdResult s = svd(p.matrix);
    V.middleCols(col, r) = s.leftBasis.leftCols(r);
    lam.segment(col, r).setConstant(p.cluster.representative);
    col += r;
  }
  const Eigen::VectorXd sv = svd(V).singulars;
  const double cond = sv(m - 1) > 0 ? sv(0) / sv(m - 1) : std::numeric_limits<double>::infinity();
  if (!(cond < 1e12)) throw IllConditioned("similarity_to_normal: eigenbasis is numerically singular", cond);
  CMatrix S = V.inverse();
  S /= op_norm(S);
  return {S, lam.asDiagonal()};
}

}  // namespace satk

#endif
