// SPDX-License-Identifier: Apache-2.0
//
// Weighted unilateral shifts on l^2(N), indices from k = 1 with w_0 = 0.
#ifndef SATK_SHIFTS_HPP
#define SATK_SHIFTS_HPP

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "power.hpp"

namespace satk {

class WeightSequence
{
 public:
  enum class Kind { Explicit, Harmonic, Geometric, Constant, Blocks };

  static WeightSequence explicit_list(std::vector<double> w)
  {
    for (double v : w)
      if (!std::isfinite(v)) throw InvalidInput("WeightSequence: non-finite weight");
    WeightSequence s(Kind::Explicit, 0.0);
    s.list_ = std::move(w);
    return s;
  }
  static WeightSequence harmonic() { return {Kind::Harmonic, 0.0}; }
  static WeightSequence geometric(double q)
  {
    if (!(q > 0.0 && q < 1.0)) throw InvalidInput("WeightSequence: geometric ratio must lie in (0, 1)");
    return {Kind::Geometric, q};
  }
  static WeightSequence constant(double c)
  {
    if (!(c > 0.0) || !std::isfinite(c)) throw InvalidInput("WeightSequence: constant must be positive");
    return {Kind::Constant, c};
  }
  /// c on blocks [2^j, 2^{j+1}) with j even, 1/c with j odd.
  static WeightSequence blocks(double c)
  {
    if (!(c > 1.0) || !std::isfinite(c)) throw InvalidInput("WeightSequence: blocks level must exceed 1");
    return {Kind::Blocks, c};
  }

  Kind kind() const { return kind_; }
  double param() const { return param_; }
  const std::vector<double>& list() const { return list_; }

  std::string name() const
  {
    switch (kind_) {
      case Kind::Explicit: return "explicit";
      case Kind::Harmonic: return "harmonic";
      case Kind::Geometric: return "geometric";
      case Kind::Constant: return "constant";
      case Kind::Blocks: return "blocks";
    }
    return "?";
  }

  /// w_k; w_0 = 0 and explicit lists are zero past their end.
  double operator()(long k) const
  {
    if (k <= 0) return 0.0;
    switch (kind_) {
      case Kind::Explicit: return k <= static_cast<long>(list_.size()) ? list_[k - 1] : 0.0;
      case Kind::Harmonic: return 1.0 / static_cast<double>(k + 1);
      case Kind::Geometric: return std::pow(param_, static_cast<double>(k));
      case Kind::Constant: return param_;
      case Kind::Blocks: {
        int j = 0;
        while ((2L << j) <= k) ++j;
        return j % 2 == 0 ? param_ : 1.0 / param_;
      }
    }
    return 0.0;
  }

  double bound() const
  {
    switch (kind_) {
      case Kind::Explicit: {
        double b = 0.0;
        for (double v : list_) b = std::max(b, std::abs(v));
        return b;
      }
      case Kind::Harmonic: return 0.5;
      case Kind::Geometric: return param_;
      case Kind::Constant:
      case Kind::Blocks: return param_;
    }
    return 0.0;
  }

 private:
  WeightSequence(Kind k, double p) : kind_(k), param_(p) {}

  Kind kind_;
  double param_;
  std::vector<double> list_;
};

/// alpha_{k,n} = (prod_{i<n} |w_{k+i}|)^{1/n}, 1 <= k <= K, 1 <= n <= N.
struct MeanTable
{
  long K = 0;
  long N = 0;
  Eigen::MatrixXd values;  // values(k-1, n-1)

  double operator()(long k, long n) const { return values(k - 1, n - 1); }
};

inline MeanTable geometric_mean_table(const WeightSequence& w, long K, long N)
{
  if (K < 1 || N < 1) throw InvalidInput("geometric_mean_table: K and N must be positive");
  const long last = K + N - 1;
  std::vector<double> logSum(last + 1, 0.0);
  std::vector<long> zeros(last + 1, 0);
  for (long k = 1; k <= last; ++k) {
    const double a = std::abs(w(k));
    zeros[k] = zeros[k - 1] + (a == 0.0 ? 1 : 0);
    logSum[k] = logSum[k - 1] + (a == 0.0 ? 0.0 : std::log(a));
  }
  MeanTable t{K, N, Eigen::MatrixXd(K, N)};
  for (long k = 1; k <= K; ++k)
    for (long n = 1; n <= N; ++n) {
      const long hi = k + n - 1;
      t.values(k - 1, n - 1) =
          zeros[hi] > zeros[k - 1] ? 0.0 : std::exp((logSum[hi] - logSum[k - 1]) / static_cast<double>(n));
    }
  return t;
}

/// Finite-horizon heuristic: a finite table cannot certify a limit.
struct DetectorResult
{
  bool converged = false;
  double alpha = 0.0;   // tail mean
  double spread = 0.0;  // sup |alpha_{k,n} - alpha| over the tail
  std::array<long, 4> witness{};  // (k, n) of the largest and (k', n') of the smallest tail cell
};

inline DetectorResult uniform_limit_detector(const MeanTable& table, double tol, long tailWindow)
{
  if (!(tol > 0.0)) throw InvalidInput("uniform_limit_detector: tol must be positive");
  if (tailWindow < 1 || tailWindow > table.N) throw InvalidInput("uniform_limit_detector: bad tail window");
  const long n0 = table.N - tailWindow + 1;
  double sum = 0.0;
  long cells = 0;
  long kMax = 1, nMax = n0, kMin = 1, nMin = n0;
  for (long k = 1; k <= table.K; ++k)
    for (long n = n0; n <= table.N; ++n) {
      const double v = table(k, n);
      sum += v;
      ++cells;
      if (v > table(kMax, nMax)) kMax = k, nMax = n;
      if (v < table(kMin, nMin)) kMin = k, nMin = n;
    }
  DetectorResult r;
  r.alpha = sum / static_cast<double>(cells);
  r.spread = std::max(table(kMax, nMax) - r.alpha, r.alpha - table(kMin, nMin));
  r.converged = r.spread <= tol;
  r.witness = {kMax, nMax, kMin, nMin};
  return r;
}

/// F_w delta_k = w_k delta_{k+1} restricted to span(delta_1..delta_m).
inline CMatrix truncate_forward(const WeightSequence& w, Index m)
{
  if (m < 2) throw InvalidInput("truncate_forward: m must be at least 2");
  CMatrix F = CMatrix::Zero(m, m);
  for (Index k = 1; k < m; ++k) F(k, k - 1) = w(k);
  return F;
}

/// B_w delta_k = w_k delta_{k-1}, delta_0 = 0.
inline CMatrix truncate_backward(const WeightSequence& w, Index m)
{
  if (m < 2) throw InvalidInput("truncate_backward: m must be at least 2");
  CMatrix B = CMatrix::Zero(m, m);
  for (Index k = 2; k <= m; ++k) B(k - 2, k - 1) = w(k);
  return B;
}

/// Does |B_w^n|^{1/n} -> 0, i.e. w_n -> 0?  Decided from the kind for the
/// closed-form families; for explicit lists, sup |w_n| over the last quarter
/// of [1, horizon] is compared against tol.
inline bool backward_classifier(const WeightSequence& w, long horizon, double tol)
{
  if (horizon < 1) throw InvalidInput("backward_classifier: horizon must be positive");
  switch (w.kind()) {
    case WeightSequence::Kind::Harmonic:
    case WeightSequence::Kind::Geometric: return true;
    case WeightSequence::Kind::Constant:
    case WeightSequence::Kind::Blocks: return false;
    case WeightSequence::Kind::Explicit: break;
  }
  const long from = horizon - std::max(1L, horizon / 4) + 1;
  double sup = 0.0;
  for (long k = from; k <= horizon; ++k) sup = std::max(sup, std::abs(w(k)));
  return sup <= tol;
}

struct ShiftCrosscheck
{
  double maxDeviation = 0.0;  // max_k |diag_k |F^n|^{1/n} - alpha_{k,n}| over k <= m - n
  double offDiagonal = 0.0;   // max |off-diagonal| of unit^* unit
  long interior = 0;
};

inline ShiftCrosscheck shift_power_crosscheck(const WeightSequence& w, Index m, long n)
{
  if (m < 2) throw InvalidInput("shift_power_crosscheck: m must be at least 2");
  if (n < 1 || 2 * n > m) throw InvalidInput("shift_power_crosscheck: need 1 <= n <= m/2");
  const ScaledPower P = scaled_power(truncate_forward(w, m), n);
  const MeanTable table = geometric_mean_table(w, m - n, n);
  ShiftCrosscheck r;
  r.interior = m - n;
  if (P.zero) {
    for (long k = 1; k <= r.interior; ++k) r.maxDeviation = std::max(r.maxDeviation, table(k, n));
    return r;
  }
  const CMatrix G = P.unit.adjoint() * P.unit;
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j)
      if (i != j) r.offDiagonal = std::max(r.offDiagonal, std::abs(G(i, j)));
  // diag |F^n|^2 read from column norms: squaring would underflow long
  // before the entries themselves do
  const double dn = static_cast<double>(n);
  for (long k = 1; k <= r.interior; ++k) {
    const double c = P.unit.col(k - 1).stableNorm();
    const double root = c > 0.0 ? std::exp((P.logScale + std::log(c)) / dn) : 0.0;
    r.maxDeviation = std::max(r.maxDeviation, std::abs(root - table(k, n)));
  }
  return r;
}

}  // namespace satk

#endif
