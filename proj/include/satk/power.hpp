// SPDX-License-Identifier: Apache-2.0
//
// Overflow-safe matrix powers and the normalized power sequence |A^n|^{1/n}.
//
// |A^n|^{1/n} is computed without forming A^n.  A warm-started QR iteration
//   A Q_{k-1} = Q_k R_k
// gives A^n Q_0 = Q_n (R_n ... R_1), so |A^n|^2 = Q_0 R^* R Q_0^* with
// R = R_n ... R_1.  R is accumulated row by row as exp(l_i) u_i with unit
// rows u_i; its rows are graded by the eigenvalue moduli, and the Gram sum
// R^*R = sum_i exp(2 l_i) u_i^* u_i is diagonalised by graded_gram_eigen.
// Singular values that differ by thousands of orders of magnitude survive.
#ifndef SATK_POWER_HPP
#define SATK_POWER_HPP

#include <chrono>
#include <cmath>
#include <cstdint>
#include <future>
#include <random>
#include <vector>

#include "resolution.hpp"

namespace satk {

/// A^n = exp(logScale) * unit.
struct ScaledPower
{
  CMatrix unit;
  double logScale = 0.0;
  bool zero = false;

  CMatrix value() const { return zero ? CMatrix(CMatrix::Zero(unit.rows(), unit.cols())) : CMatrix(std::exp(logScale) * unit); }
};

namespace detail {

/// Spectral-norm estimate: a few power steps on M^*M from the largest column.
inline double norm_estimate(const CMatrix& M)
{
  Index best = 0;
  double bestNorm = -1.0;
  for (Index j = 0; j < M.cols(); ++j) {
    const double c = M.col(j).norm();
    if (c > bestNorm) {
      bestNorm = c;
      best = j;
    }
  }
  if (bestNorm <= 0.0) return 0.0;
  CVector v = CVector::Zero(M.cols());
  v(best) = 1.0;
  double est = bestNorm;
  for (int it = 0; it < 6; ++it) {
    CVector w = M * v;
    const double wn = w.norm();
    est = std::max(est, wn);
    CVector z = M.adjoint() * w;
    const double zn = z.norm();
    if (zn == 0.0) break;
    v = z / zn;
  }
  return est;
}

inline void renormalize(CMatrix& M, double& logScale, bool& zero)
{
  const double s = norm_estimate(M);
  if (s == 0.0) {
    zero = true;
    M.setZero();
    logScale = 0.0;
    return;
  }
  M /= s;
  logScale += std::log(s);
}

}  // namespace detail

/// A^n by binary exponentiation with renormalisation after every product.
inline ScaledPower scaled_power(const CMatrix& A, long n)
{
  require_matrix(A, "scaled_power");
  if (n < 1) throw InvalidInput("scaled_power: n must be positive");
  const Index m = A.rows();
  ScaledPower result{identity(m), 0.0, false};
  CMatrix base = A;
  double baseLog = 0.0;
  bool baseZero = false;
  detail::renormalize(base, baseLog, baseZero);
  bool first = true;
  for (long e = n; e > 0; e >>= 1) {
    if (baseZero) {
      result = {CMatrix::Zero(m, m), 0.0, true};
      return result;
    }
    if (e & 1) {
      if (first) {
        result.unit = base;
        result.logScale = baseLog;
        first = false;
      } else {
        result.unit = result.unit * base;
        result.logScale += baseLog;
        detail::renormalize(result.unit, result.logScale, result.zero);
        if (result.zero) return result;
      }
    }
    if (e > 1) {
      base = base * base;
      baseLog *= 2.0;
      detail::renormalize(base, baseLog, baseZero);
    }
  }
  return result;
}

/// Plain repeated multiplication; the independent oracle for small n.
inline CMatrix brute_force_power(const CMatrix& A, long n)
{
  require_matrix(A, "brute_force_power");
  if (n < 1 || n > 64) throw InvalidInput("brute_force_power: n must lie in [1, 64]");
  CMatrix P = A;
  for (long k = 1; k < n; ++k) {
    P = P * A;
    if (!P.allFinite()) throw OverflowError("brute_force_power: overflow at power " + std::to_string(k + 1));
  }
  return P;
}

inline constexpr int kQrWarmup = 256;

/// Eigen-decomposition of |A^n|^2 in log form.
inline GradedEigen power_gram(const CMatrix& A, long n)
{
  require_matrix(A, "power_gram");
  if (n < 1) throw InvalidInput("power_gram: n must be positive");
  const Index m = A.rows();

  if (scaled_power(A, std::min<long>(n, static_cast<long>(m))).zero) {
    GradedEigen g;
    g.vectors = identity(m);
    g.logEig.assign(m, kNegInf);
    return g;
  }

  // Fixed pseudo-random start so that no invariant flag of A is hit exactly.
  std::mt19937_64 gen(0x5eed5a7cULL);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  CMatrix Q0(m, m);
  for (Index j = 0; j < m; ++j)
    for (Index i = 0; i < m; ++i) Q0(i, j) = cplx(uni(gen), uni(gen));
  CMatrix Q = Eigen::HouseholderQR<CMatrix>(Q0).householderQ() * identity(m);

  const double scale = std::max(max_abs(A), 1e-300);
  const CMatrix As = A / scale;  // A^n = scale^n As^n
  for (int k = 0; k < kQrWarmup; ++k) {
    Eigen::HouseholderQR<CMatrix> qr(As * Q);
    Q = qr.householderQ() * identity(m);
  }
  const CMatrix start = Q;

  CMatrix U = identity(m);
  std::vector<double> ell(m, 0.0);
  for (long k = 0; k < n; ++k) {
    Eigen::HouseholderQR<CMatrix> qr(As * Q);
    Q = qr.householderQ() * identity(m);
    const CMatrix& QR = qr.matrixQR();
    for (Index i = 0; i < m; ++i) {
      double L = kNegInf;
      for (Index j = i; j < m; ++j) {
        const double a = std::abs(QR(i, j));
        if (a > 0.0 && ell[j] != kNegInf) L = std::max(L, ell[j] + std::log(a));
      }
      if (L == kNegInf) {
        ell[i] = kNegInf;
        U.row(i).setZero();
        continue;
      }
      Eigen::RowVectorXcd row = Eigen::RowVectorXcd::Zero(m);
      for (Index j = i; j < m; ++j) {
        if (QR(i, j) == cplx(0.0) || ell[j] == kNegInf) continue;
        row += QR(i, j) * std::exp(ell[j] - L) * U.row(j);
      }
      const double nu = row.stableNorm();
      if (nu == 0.0) {
        ell[i] = kNegInf;
        U.row(i).setZero();
      } else {
        ell[i] = L + std::log(nu);
        U.row(i) = row / nu;
      }
    }
  }

  const double logScale = static_cast<double>(n) * std::log(scale);
  std::vector<CVector> vecs;
  std::vector<double> logs;
  for (Index i = 0; i < m; ++i) {
    if (ell[i] == kNegInf) continue;
    vecs.push_back(start * U.row(i).adjoint());
    logs.push_back(ell[i] + logScale);
  }
  return graded_gram_eigen(vecs, logs, m);
}

/// |A^n|^{1/n}.
inline PsdMatrix normalized_power(const CMatrix& A, long n)
{
  return PsdMatrix::from_graded(power_gram(A, n), 0.5 / static_cast<double>(n));
}

/// (s_1(A^n)^{1/n}, ..., s_m(A^n)^{1/n}), descending.
inline std::vector<double> yamamoto_limits(const CMatrix& A, long n)
{
  const GradedEigen g = power_gram(A, n);
  std::vector<double> out;
  for (double l : g.logEig) out.push_back(l == kNegInf ? 0.0 : std::exp(0.5 * l / static_cast<double>(n)));
  return out;
}

/// ||A^n x||^{1/n} by renormalised iteration.
inline double vector_exponent_estimate(const CMatrix& A, const CVector& x, long n)
{
  require_matrix(A, "vector_exponent_estimate");
  if (x.size() != A.rows()) throw InvalidInput("vector_exponent_estimate: dimension mismatch");
  if (n < 1) throw InvalidInput("vector_exponent_estimate: n must be positive");
  const double nx = x.norm();
  if (nx == 0.0) return 0.0;
  CVector v = x / nx;
  double sumLog = std::log(nx);
  for (long k = 0; k < n; ++k) {
    v = A * v;
    const double nv = v.stableNorm();
    if (nv == 0.0) return 0.0;
    sumLog += std::log(nv);
    v /= nv;
  }
  return std::exp(sumLog / static_cast<double>(n));
}

struct ConvergenceReport
{
  std::vector<long> schedule;
  std::vector<double> errors;
  double estimatedRate = 0.0;  // slope of log(error) against n over the tail
  bool converged = false;
  double wallTime = 0.0;
};

inline ConvergenceReport convergence_study(const CMatrix& A, const std::vector<long>& schedule, const LimitOperator& K,
                                           double target = 1e-3, unsigned threads = 1)
{
  if (schedule.empty()) throw InvalidInput("convergence_study: empty schedule");
  for (std::size_t i = 0; i < schedule.size(); ++i)
    if (schedule[i] < 1 || (i > 0 && schedule[i] <= schedule[i - 1]))
      throw InvalidInput("convergence_study: schedule must be positive and strictly increasing");
  const auto t0 = std::chrono::steady_clock::now();
  ConvergenceReport rep;
  rep.schedule = schedule;
  rep.errors.resize(schedule.size());
  auto errorAt = [&](std::size_t i) { return op_norm(normalized_power(A, schedule[i]).matrix() - K.K.matrix()); };
  if (threads <= 1) {
    for (std::size_t i = 0; i < schedule.size(); ++i) rep.errors[i] = errorAt(i);
  } else {
    for (std::size_t base = 0; base < schedule.size(); base += threads) {
      std::vector<std::future<double>> jobs;
      for (std::size_t i = base; i < std::min(schedule.size(), base + threads); ++i)
        jobs.push_back(std::async(std::launch::async, errorAt, i));
      for (std::size_t k = 0; k < jobs.size(); ++k) rep.errors[base + k] = jobs[k].get();
    }
  }
  // least squares over the second half of the points (at least two)
  const std::size_t count = schedule.size();
  const std::size_t from = count >= 4 ? count / 2 : 0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t used = 0;
  for (std::size_t i = from; i < count; ++i) {
    if (!(rep.errors[i] > 0.0)) continue;
    const double x = static_cast<double>(schedule[i]);
    const double y = std::log(rep.errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++used;
  }
  if (used >= 2) {
    const double u = static_cast<double>(used);
    const double den = u * sxx - sx * sx;
    if (den != 0.0) rep.estimatedRate = (u * sxy - sx * sy) / den;
  }
  rep.converged = rep.errors.back() <= target;
  rep.wallTime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

struct EquivalenceCheck
{
  double value = 0.0;  // || |(S^{-1}TS)^n|^{1/n} - (S^*|T^n|^2 S)^{1/2n} ||
  double bound = 0.0;  // max(|1-||S||^{-1/n}|, |1-||S^{-1}||^{1/n}|) * ||(S^*|T^n|^2 S)^{1/2n}||
};

inline EquivalenceCheck similarity_equivalence_check(const CMatrix& T, const CMatrix& S, long n)
{
  require_matrix(T, "similarity_equivalence_check");
  require_matrix(S, "similarity_equivalence_check");
  if (S.rows() != T.rows()) throw InvalidInput("similarity_equivalence_check: dimension mismatch");
  const Eigen::VectorXd sv = svd(S).singulars;
  const double cond = sv(sv.size() - 1) > 0 ? sv(0) / sv(sv.size() - 1) : std::numeric_limits<double>::infinity();
  if (!(cond <= 1e8)) throw IllConditioned("similarity_equivalence_check: S is too ill-conditioned", cond);
  const CMatrix Sinv = S.inverse();

  auto rootOf = [n](const GradedEigen& g, const CMatrix& congruence) {
    std::vector<CVector> vecs;
    std::vector<double> logs;
    for (Index k = 0; k < g.dim(); ++k) {
      vecs.push_back(congruence * g.vectors.col(k));
      logs.push_back(0.5 * g.logEig[k]);
    }
    return graded_gram_eigen(vecs, logs, g.dim()).power(0.5 / static_cast<double>(n));
  };
  const Index m = T.rows();
  const CMatrix Y = rootOf(power_gram(Sinv * T * S, n), identity(m));
  const CMatrix X = rootOf(power_gram(T, n), S.adjoint());
  const double dn = static_cast<double>(n);
  const double c = std::max(std::abs(1.0 - std::pow(sv(0), -1.0 / dn)),
                            std::abs(std::pow(1.0 / sv(sv.size() - 1), 1.0 / dn) - 1.0));
  return {op_norm(Y - X), c * op_norm(X)};
}

struct SandwichMargins
{
  double lowerOuter = 0.0;  // lambda_min(M on E') - (1-eps)^{2n}, after scaling
  double upperOuter = 0.0;  // (1+eps)^{2n} - lambda_max(M on E')
  double upperInner = 0.0;  // 1 - lambda_max(M on E)
  double lowerInner = 0.0;  // lambda_min(M on E) >= 0
  double scale = 1.0;       // largest scaled eigenvalue, for relative tolerances
};

/// Checks the two-sided bound on ((N+Q)^n)^*(N+Q)^n for N = diag(lambda)
/// normal and Q nilpotent commuting with N, split by the disc D_eps.
/// The inequality is tested after the congruence by C = diag(c_i), with
/// c_i = |lambda_i|^{-n} outside the disc and (2 eps)^{-n} inside; C
/// commutes with N + Q and maps every bound to a multiple of the identity
/// on each part.
inline SandwichMargins nq_sandwich_margins(const Eigen::VectorXcd& lambda, const CMatrix& Q, long n, double eps)
{
  const Index m = lambda.size();
  if (Q.rows() != m || Q.cols() != m) throw InvalidInput("nq_sandwich_margins: dimension mismatch");
  std::vector<Index> outer, inner;
  Eigen::VectorXd s(m);
  for (Index i = 0; i < m; ++i) {
    const double r = std::abs(lambda(i));
    if (r > eps) {
      outer.push_back(i);
      s(i) = 1.0 / r;
    } else {
      inner.push_back(i);
      s(i) = 1.0 / (2.0 * eps);
    }
  }
  CMatrix B = Q;
  B.diagonal() += lambda;
  B = B * s.asDiagonal();
  const ScaledPower P = scaled_power(B, n);
  const CMatrix Pv = P.value();
  const CMatrix M = Pv.adjoint() * Pv;

  auto sub = [&](const std::vector<Index>& idx) {
    CMatrix out(static_cast<Index>(idx.size()), static_cast<Index>(idx.size()));
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = 0; b < idx.size(); ++b) out(a, b) = M(idx[a], idx[b]);
    return out;
  };
  SandwichMargins out;
  const double dn = static_cast<double>(n);
  if (!outer.empty()) {
    const Eigen::VectorXd ev = HermMatrix::trusted(sub(outer)).eigenvalues();
    out.lowerOuter = ev(0) - std::pow(1.0 - eps, 2.0 * dn);
    out.upperOuter = std::pow(1.0 + eps, 2.0 * dn) - ev(ev.size() - 1);
    out.scale = std::max(out.scale, ev(ev.size() - 1));
  }
  if (!inner.empty()) {
    const Eigen::VectorXd ev = HermMatrix::trusted(sub(inner)).eigenvalues();
    out.lowerInner = ev(0);
    out.upperInner = 1.0 - ev(ev.size() - 1);
  }
  return out;
}

}  // namespace satk

#endif
