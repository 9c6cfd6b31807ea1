// SPDX-License-Identifier: Apache-2.0
//
// exp(tA): half-plane resolutions, the limit of |exp(tA)|^{1/t} and growth
// exponents of individual vectors.
#ifndef SATK_SEMIGROUP_HPP
#define SATK_SEMIGROUP_HPP

#include <cmath>
#include <vector>

#include "power.hpp"

namespace satk {

/// Levels are the clustered real parts b_1 < ... < b_l, G_j = R(e_A(H_{b_j})).
using HalfplaneResolution = LevelResolution;

inline HalfplaneResolution halfplane_resolution(const DunfordDecomposition& dec, double tol = -1.0)
{
  if (tol < 0) tol = dec.clusterTol;
  const auto groups = detail::group_keys(dec, [](cplx z) { return z.real(); }, tol);
  return detail::build_resolution(dec, groups, [](double b) { return Region::halfplane(b); });
}

/// K_exp = sum_j exp(b_j) (G_j - G_{j-1}).
inline LimitOperator semigroup_limit(const HalfplaneResolution& res)
{
  return detail::integrate(res, [](double b) { return std::exp(b); });
}

/// gamma_x: the smallest b_j with x in ran e_A(H_{b_j}).
inline double exp_growth_exponent_exact(const DunfordDecomposition& dec, const CVector& x, double tol = -1.0)
{
  if (x.size() != dec.dim()) throw InvalidInput("exp_growth_exponent_exact: dimension mismatch");
  if (x.norm() == 0.0) throw InvalidInput("exp_growth_exponent_exact: x must be non-zero");
  return level_exponent(halfplane_resolution(dec, tol), x, kMembershipTol);
}

/// exp(tA) by scaling and squaring; the base exp(2^{-s} tA) comes from a
/// Taylor series with ||2^{-s} tA|| <= 1/2, and every square is renormalised.
inline ScaledPower matrix_exp_scaled(const CMatrix& A, double t)
{
  require_matrix(A, "matrix_exp_scaled");
  if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidInput("matrix_exp_scaled: t must be finite and >= 0");
  const Index m = A.rows();
  const double norm = t * op_norm(A);
  int s = 0;
  if (norm > 0.5) s = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const CMatrix X = (t * std::ldexp(1.0, -s)) * A;

  CMatrix E = identity(m);
  CMatrix term = identity(m);
  for (int k = 1; k <= 40; ++k) {
    term = term * X / static_cast<double>(k);
    E += term;
    if (max_abs(term) <= kEps * max_abs(E) * 1e-3) break;
  }

  ScaledPower out{E, 0.0, false};
  detail::renormalize(out.unit, out.logScale, out.zero);
  for (int k = 0; k < s; ++k) {
    out.unit = out.unit * out.unit;
    out.logScale *= 2.0;
    detail::renormalize(out.unit, out.logScale, out.zero);
  }
  return out;
}

/// log ||exp(tA) x|| / t for x scaled to unit length, so that the value
/// depends on the direction of x only.
inline double exp_growth_estimate(const CMatrix& A, const CVector& x, double t)
{
  if (x.size() != A.rows()) throw InvalidInput("exp_growth_estimate: dimension mismatch");
  const double nx = x.stableNorm();
  if (nx == 0.0) throw InvalidInput("exp_growth_estimate: x must be non-zero");
  if (!(t > 0.0)) throw InvalidInput("exp_growth_estimate: t must be positive");
  const ScaledPower E = matrix_exp_scaled(A, t);
  const double y = (E.unit * (x / nx)).stableNorm();
  if (y == 0.0) return kNegInf;
  return (E.logScale + std::log(y)) / t;
}

/// Tail fit of t g(t) = gamma t + c + k log t over the samples, removing the
/// constant and polynomial prefactors that dominate the error of a single
/// sample.  Needs at least three distinct t.
inline double exp_growth_extrapolated(const CMatrix& A, const CVector& x, const std::vector<double>& ts)
{
  if (ts.size() < 3) throw InvalidInput("exp_growth_extrapolated: need at least three samples");
  Eigen::MatrixXd M(ts.size(), 3);
  Eigen::VectorXd rhs(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    M(i, 0) = ts[i];
    M(i, 1) = 1.0;
    M(i, 2) = std::log(ts[i]);
    rhs(i) = ts[i] * exp_growth_estimate(A, x, ts[i]);
  }
  return M.colPivHouseholderQr().solve(rhs)(0);
}

}  // namespace satk

#endif
