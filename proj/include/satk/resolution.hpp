// SPDX-License-Identifier: Apache-2.0
//
// Bounded resolutions of the identity built from spectral idempotents and
// the closed-form limit  K = sum_j a_j (F_j - F_{j-1})  of |A^n|^{1/n}.
#ifndef SATK_RESOLUTION_HPP
#define SATK_RESOLUTION_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "spectral.hpp"

namespace satk {

/// Levels l_1 < ... < l_k (moduli or real parts) with orthogonal projections
/// F_1 <= ... <= F_k = I.  `regions[j]` is the spectral region whose
/// idempotent F_j projects onto the range of.
struct LevelResolution
{
  std::vector<double> levels;
  std::vector<RangeProjection> projections;
  std::vector<Region> regions;
  DunfordDecomposition source;

  std::size_t size() const { return levels.size(); }
};

using ModulusResolution = LevelResolution;

struct LimitOperator
{
  PsdMatrix K;
  std::vector<double> spectrumModuli;
  std::vector<Index> multiplicities;
};

namespace detail {

/// Groups cluster representatives by a real key (modulus or real part),
/// single linkage with tolerance `tol`.  Each group reports its mean level,
/// the largest key it contains (used as region boundary) and its total
/// multiplicity.
struct KeyGroup
{
  double level;
  double upper;
  Index multiplicity;
};

inline std::vector<KeyGroup> group_keys(const DunfordDecomposition& dec, const std::function<double(cplx)>& key,
                                        double tol)
{
  std::vector<std::pair<double, Index>> vals;
  for (const auto& p : dec.idempotents) vals.emplace_back(key(p.cluster.representative), p.cluster.algebraicMultiplicity);
  std::sort(vals.begin(), vals.end());
  std::vector<KeyGroup> groups;
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (i == 0 || vals[i].first - vals[i - 1].first > tol) {
      if (count > 0) groups.back().level = sum / static_cast<double>(count);
      groups.push_back({vals[i].first, vals[i].first, 0});
      sum = 0.0;
      count = 0;
    }
    sum += vals[i].first;
    ++count;
    groups.back().upper = vals[i].first;
    groups.back().multiplicity += vals[i].second;
  }
  if (count > 0) groups.back().level = sum / static_cast<double>(count);
  return groups;
}

inline LevelResolution build_resolution(const DunfordDecomposition& dec, const std::vector<KeyGroup>& groups,
                                        const std::function<Region(double)>& regionOf)
{
  LevelResolution res;
  res.source = dec;
  Index rank = 0;
  for (const auto& g : groups) {
    rank += g.multiplicity;
    const Region omega = regionOf(g.upper);
    const CMatrix E = idempotent_for_region(dec, omega);
    res.levels.push_back(g.level);
    res.regions.push_back(omega);
    res.projections.push_back(range_projection_of_rank(E, rank));
  }
  return res;
}

inline LimitOperator integrate(const LevelResolution& res, const std::function<double(double)>& f)
{
  const Index m = res.projections.front().projector.dim();
  CMatrix K = CMatrix::Zero(m, m);
  CMatrix prev = CMatrix::Zero(m, m);
  LimitOperator out;
  Index prevRank = 0;
  for (std::size_t j = 0; j < res.size(); ++j) {
    const CMatrix& F = res.projections[j].matrix();
    K += f(res.levels[j]) * (F - prev);
    prev = F;
    out.spectrumModuli.push_back(f(res.levels[j]));
    out.multiplicities.push_back(res.projections[j].rank - prevRank);
    prevRank = res.projections[j].rank;
  }
  auto [w, V] = eigh(K);
  out.K = PsdMatrix::from_spectral(V, w);
  return out;
}

}  // namespace detail

/// F_j = R(e_A(D_{a_j})) over the clustered distinct moduli a_j.  Moduli of
/// different clusters within `modulusTol` merge into one jump.
inline ModulusResolution modulus_resolution(const DunfordDecomposition& dec, double modulusTol = -1.0)
{
  if (modulusTol < 0) modulusTol = dec.clusterTol;
  const auto groups = detail::group_keys(dec, [](cplx z) { return std::abs(z); }, modulusTol);
  return detail::build_resolution(dec, groups, [](double r) { return Region::disc(r); });
}

/// K = sum_j a_j (F_j - F_{j-1}), F_0 = 0.
inline LimitOperator limit_operator(const ModulusResolution& res)
{
  return detail::integrate(res, [](double a) { return a; });
}

/// Smallest level whose region idempotent fixes x (relative residual `tol`).
inline double level_exponent(const LevelResolution& res, const CVector& x, double tol)
{
  const double nx = x.norm();
  for (std::size_t j = 0; j < res.size(); ++j) {
    const CMatrix E = idempotent_for_region(res.source, res.regions[j]);
    if ((E * x - x).norm() <= tol * nx) return res.levels[j];
  }
  return res.levels.back();
}

inline constexpr double kMembershipTol = 1e-8;

/// lambda_x: the smallest modulus a_j with x in ran e_A(D_{a_j}); 0 for x = 0.
inline double vector_exponent_exact(const DunfordDecomposition& dec, const CVector& x, double modulusTol = -1.0)
{
  if (x.size() != dec.dim()) throw InvalidInput("vector_exponent_exact: dimension mismatch");
  if (x.norm() == 0.0) return 0.0;
  return level_exponent(modulus_resolution(dec, modulusTol), x, kMembershipTol);
}

struct ResolutionDiagnostics
{
  double idempotency = 0.0;   // max ||F^2 - F|| and ||F - F^*||
  double monotonicity = 0.0;  // max(0, -lambda_min(F_{j+1} - F_j))
  double topIdentity = 0.0;   // ||F_k - I||

  double worst() const { return std::max({idempotency, monotonicity, topIdentity}); }
};

/// Works on raw projection lists so broken families can be inspected too.
inline ResolutionDiagnostics check_resolution(const std::vector<CMatrix>& projections)
{
  ResolutionDiagnostics d;
  if (projections.empty()) return d;
  const Index m = projections.front().rows();
  for (std::size_t j = 0; j < projections.size(); ++j) {
    const CMatrix& F = projections[j];
    d.idempotency = std::max({d.idempotency, op_norm(F * F - F), op_norm(F - F.adjoint())});
    if (j + 1 < projections.size())
      d.monotonicity = std::max(d.monotonicity, -loewner_margin(F, projections[j + 1]));
  }
  d.topIdentity = op_norm(projections.back() - identity(m));
  return d;
}

inline ResolutionDiagnostics check_resolution(const LevelResolution& res)
{
  std::vector<CMatrix> ps;
  for (const auto& p : res.projections) ps.push_back(p.matrix());
  return check_resolution(ps);
}

}  // namespace satk

#endif
