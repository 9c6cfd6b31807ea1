// SPDX-License-Identifier: Apache-2.0
//
// Seeded random instances A = S^{-1} (Lambda + N0) S with known ground truth.
//
// Moduli come from the grid base * ratio^j, so distinct moduli are separated
// by at least `ratio`.  N0 is strictly upper triangular, non-zero only on the
// superdiagonal inside blocks of equal eigenvalues, with Jordan chains of
// length at most two.
//
// In flag mode S is upper triangular and the diagonal is sorted by ascending
// level, then the basis is permuted.  Every subspace spanned by the first j
// permuted basis vectors is then exactly invariant in floating point, which
// keeps vector iterations from picking up rounding components along faster
// directions.
#ifndef SATK_RANDOM_HPP
#define SATK_RANDOM_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "spectral.hpp"

namespace satk {

/// mt19937_64 with hand-rolled uniform and Box-Muller transforms, so the
/// stream does not depend on the standard library's distributions.
class Rng
{
 public:
  static constexpr const char* kName = "mt19937_64+boxmuller/1";

  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  std::uint64_t below(std::uint64_t n) { return gen_() % n; }

  double normal()
  {
    if (hasSpare_) {
      hasSpare_ = false;
      return spare_;
    }
    double u = 0.0;
    while (u == 0.0) u = uniform();
    const double v = uniform();
    const double r = std::sqrt(-2.0 * std::log(u));
    spare_ = r * std::sin(2.0 * std::numbers::pi * v);
    hasSpare_ = true;
    return r * std::cos(2.0 * std::numbers::pi * v);
  }
  cplx cnormal() { return {normal(), normal()}; }

  CMatrix gaussian(Index rows, Index cols)
  {
    CMatrix M(rows, cols);
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j) M(i, j) = cnormal();
    return M;
  }
  CVector gaussian(Index n)
  {
    CVector v(n);
    for (Index i = 0; i < n; ++i) v(i) = cnormal();
    return v;
  }

  /// Haar-ish unitary from the QR of a Gaussian matrix.
  CMatrix unitary(Index m)
  {
    Eigen::HouseholderQR<CMatrix> qr(gaussian(m, m));
    return qr.householderQ() * CMatrix::Identity(m, m);
  }

 private:
  std::mt19937_64 gen_;
  bool hasSpare_ = false;
  double spare_ = 0.0;
};

struct InstanceSpec
{
  Index dim = 4;
  double base = 0.05;         // smallest grid modulus
  double ratio = 1.25;        // grid ratio, >= 1.25
  int gridSize = 10;
  double repeatProb = 0.3;    // chance a slot reuses an earlier eigenvalue
  double nilpotentDensity = 0.5;
  double nilpotentScale = 0.05;  // relative to |lambda| (to 1 for semigroup)
  double condCap = 100.0;
  bool flagExact = false;
  bool semigroup = false;     // eigenvalues log(a) + i phi, |phi| < pi

  void validate() const
  {
    if (dim < 1) throw InvalidInput("InstanceSpec: dim must be positive");
    if (!(base > 0.0) || !(ratio >= 1.25) || gridSize < 1) throw InvalidInput("InstanceSpec: bad modulus grid");
    if (!(repeatProb >= 0.0 && repeatProb < 1.0)) throw InvalidInput("InstanceSpec: repeatProb must lie in [0, 1)");
    if (!(nilpotentDensity >= 0.0 && nilpotentDensity <= 1.0)) throw InvalidInput("InstanceSpec: bad nilpotent density");
    if (!(nilpotentScale >= 0.0)) throw InvalidInput("InstanceSpec: bad nilpotent scale");
    if (!(condCap > 1.0)) throw InvalidInput("InstanceSpec: condCap must exceed 1");
  }
};

struct Instance
{
  CMatrix A;
  CMatrix S;         // A = S^{-1} (Lambda + N0) S
  CMatrix Sinv;
  Eigen::VectorXcd lambda;  // diagonal of Lambda
  CMatrix N0;
  DunfordDecomposition truth;
  double condS = 1.0;

  /// S^{-1} e_j: a generalized eigenvector for lambda(j).
  CVector generalized_vector(Index j) const { return Sinv.col(j); }
};

/// Eigenvalue moduli sorted descending, repeated by multiplicity.
inline std::vector<double> sorted_moduli(const Eigen::VectorXcd& lambda)
{
  std::vector<double> out;
  for (Index i = 0; i < lambda.size(); ++i) out.push_back(std::abs(lambda(i)));
  std::sort(out.rbegin(), out.rend());
  return out;
}

inline Instance generate_instance(std::uint64_t seed, const InstanceSpec& spec)
{
  spec.validate();
  Rng rng(seed);
  const Index m = spec.dim;

  // distinct eigenvalues with multiplicities
  std::vector<cplx> distinct;
  std::vector<double> level;  // modulus (or real part) used for ordering
  std::vector<Index> mult;
  for (Index slot = 0; slot < m; ++slot) {
    if (!distinct.empty() && rng.uniform() < spec.repeatProb) {
      ++mult[rng.below(distinct.size())];
      continue;
    }
    for (int attempt = 0;; ++attempt) {
      const double a = spec.base * std::pow(spec.ratio, static_cast<double>(rng.below(spec.gridSize)));
      const double phi = rng.uniform(-std::numbers::pi, std::numbers::pi) * (spec.semigroup ? 0.95 : 1.0);
      const cplx z = spec.semigroup ? cplx(std::log(a), phi) : std::polar(a, phi);
      bool ok = true;
      for (const cplx& d : distinct)
        if (std::abs(d - z) < 0.05 * std::max(std::abs(d), std::abs(z))) ok = false;
      if (ok || attempt > 100) {
        distinct.push_back(z);
        level.push_back(spec.semigroup ? z.real() : a);
        mult.push_back(1);
        break;
      }
    }
  }

  std::vector<std::size_t> order(distinct.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  if (spec.flagExact) {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return level[a] < level[b]; });
  } else {
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  }

  Instance inst;
  inst.lambda.resize(m);
  inst.N0 = CMatrix::Zero(m, m);
  std::vector<std::pair<Index, Index>> blocks;  // [start, size)
  Index pos = 0;
  for (std::size_t b : order) {
    blocks.emplace_back(pos, mult[b]);
    for (Index k = 0; k < mult[b]; ++k) inst.lambda(pos + k) = distinct[b];
    const double scale = spec.nilpotentScale * (spec.semigroup ? 1.0 : std::abs(distinct[b]));
    bool previous = false;
    for (Index k = 0; k + 1 < mult[b]; ++k) {
      if (!previous && rng.uniform() < spec.nilpotentDensity) {
        inst.N0(pos + k, pos + k + 1) = scale * std::polar(1.0, rng.uniform(0.0, 2.0 * std::numbers::pi));
        previous = true;
      } else {
        previous = false;
      }
    }
    pos += mult[b];
  }

  // similarity with condition number below the cap
  CMatrix G = rng.gaussian(m, m) / std::sqrt(static_cast<double>(m));
  if (spec.flagExact) G = G.triangularView<Eigen::StrictlyUpper>();
  double delta = rng.uniform(0.3, 1.0);
  CMatrix S;
  for (;;) {
    S = identity(m) + delta * G;
    const Eigen::VectorXd sv = svd(S).singulars;
    inst.condS = sv(0) / sv(m - 1);
    if (inst.condS <= spec.condCap) break;
    delta *= 0.7;
  }
  CMatrix Sinv = spec.flagExact ? CMatrix(S.triangularView<Eigen::Upper>().solve(identity(m))) : CMatrix(S.inverse());
  CMatrix T = inst.N0;
  T.diagonal() += inst.lambda;
  CMatrix A = Sinv * T * S;

  if (spec.flagExact) {
    // conjugate by a random permutation: A <- P A P^T, S <- S P^T
    std::vector<Index> perm(m);
    for (Index i = 0; i < m; ++i) perm[i] = i;
    for (Index i = m; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
    CMatrix PA(m, m), PSinv(m, m), SP(m, m);
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < m; ++j) {
        PA(perm[i], perm[j]) = A(i, j);
        PSinv(perm[i], j) = Sinv(i, j);
        SP(i, perm[j]) = S(i, j);
      }
    A = PA;
    Sinv = PSinv;
    S = SP;
  }
  inst.A = A;
  inst.S = S;
  inst.Sinv = Sinv;

  DunfordDecomposition& t = inst.truth;
  t.A = A;
  t.clusterTol = default_cluster_tol(A);
  t.D = Sinv * inst.lambda.asDiagonal() * S;
  t.N = Sinv * inst.N0 * S;
  for (const auto& [start, size] : blocks) {
    EigenCluster c;
    c.representative = inst.lambda(start);
    c.members.assign(size, inst.lambda(start));
    c.algebraicMultiplicity = size;
    CMatrix P = Sinv.middleCols(start, size) * S.middleRows(start, size);
    t.conditionBound = std::max(t.conditionBound, op_norm(P));
    t.idempotents.push_back({P, c});
  }
  return inst;
}

/// Random commuting pair (T, Q) with Q nilpotent, built in a common upper
/// triangular form and conjugated by a unitary.
inline std::pair<CMatrix, CMatrix> commuting_pair(Rng& rng, Index m)
{
  // scalar blocks of size <= 2; longer chains move computed eigenvalues by
  // eps^{1/3}, beyond the clustering tolerance
  CMatrix T = CMatrix::Zero(m, m);
  CMatrix Q = CMatrix::Zero(m, m);
  Index pos = 0;
  while (pos < m) {
    const Index size = std::min<Index>(m - pos, 1 + static_cast<Index>(rng.below(2)));
    const cplx lam = std::polar(rng.uniform(0.2, 2.0), rng.uniform(0.0, 2.0 * std::numbers::pi));
    for (Index i = 0; i < size; ++i) {
      T(pos + i, pos + i) = lam;
      for (Index j = i + 1; j < size; ++j) Q(pos + i, pos + j) = 0.3 * rng.cnormal();
    }
    pos += size;
  }
  const CMatrix U = rng.unitary(m);
  return {U * T * U.adjoint(), U * Q * U.adjoint()};
}

}  // namespace satk

#endif
