// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>

#include "common.hpp"

using namespace satk;
using namespace satk::test;

namespace {

const double kE = std::exp(1.0);

CMatrix rotation(double b) { return mat2(0, b, -b, 0); }

InstanceSpec semigroup_spec(std::uint64_t seed)
{
  InstanceSpec spec;
  spec.dim = 2 + static_cast<Index>(seed % 7);
  spec.semigroup = true;
  spec.nilpotentScale = 0.005;
  return spec;
}

}  // namespace

TEST(HalfplaneResolution, Diagonal)
{
  const HalfplaneResolution res = halfplane_resolution(dunford(diag({1, -1})));
  ASSERT_EQ(res.size(), 2u);
  EXPECT_NEAR(res.levels[0], -1.0, 1e-12);
  EXPECT_NEAR(res.levels[1], 1.0, 1e-12);
  EXPECT_LT(op_norm(res.projections[0].matrix() - diag({0, 1})), 1e-12);
}

TEST(HalfplaneResolution, RotationHasOneLevel)
{
  const HalfplaneResolution res = halfplane_resolution(dunford(rotation(3.0)));
  ASSERT_EQ(res.size(), 1u);
  EXPECT_NEAR(res.levels[0], 0.0, 1e-12);
  EXPECT_LT(op_norm(res.projections[0].matrix() - identity(2)), 1e-12);
}

TEST(HalfplaneResolution, UpperTriangular)
{
  const HalfplaneResolution res = halfplane_resolution(dunford(mat2(1, 1, 0, 2)));
  ASSERT_EQ(res.size(), 2u);
  EXPECT_LT(op_norm(res.projections[0].matrix() - oracle_range_projection(mat2(1, -1, 0, 0))), 1e-12);
  EXPECT_LE(check_resolution(res).worst(), 1e-12);
}

TEST(SemigroupLimit, Examples)
{
  EXPECT_LT(op_norm(semigroup_limit(halfplane_resolution(dunford(diag({1, -1})))).K.matrix() - diag({kE, 1 / kE})), 1e-12);
  EXPECT_LT(op_norm(semigroup_limit(halfplane_resolution(dunford(rotation(2.0)))).K.matrix() - identity(2)), 1e-12);
  EXPECT_LT(op_norm(semigroup_limit(halfplane_resolution(dunford(mat2(1, 1, 0, 2)))).K.matrix() - diag({kE, kE * kE})),
            1e-12);
}

TEST(SemigroupLimit, SpectrumIsExpOfRealParts)
{
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const Instance inst = generate_instance(seed, semigroup_spec(seed));
    const LimitOperator L = semigroup_limit(halfplane_resolution(dunford(inst.A)));
    std::vector<double> want;
    for (Index i = 0; i < inst.lambda.size(); ++i) want.push_back(std::exp(inst.lambda(i).real()));
    std::sort(want.begin(), want.end());
    const Eigen::VectorXd ev = HermMatrix::trusted(L.K.matrix()).eigenvalues();
    std::vector<double> got(ev.data(), ev.data() + ev.size());
    std::sort(got.begin(), got.end());
    for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], 1e-6) << "seed " << seed;
  }
}

TEST(GrowthExponentExact, Examples)
{
  const DunfordDecomposition d = dunford(diag({1, -1}));
  EXPECT_NEAR(exp_growth_exponent_exact(d, vec({0, 1})), -1.0, 1e-12);
  EXPECT_NEAR(exp_growth_exponent_exact(d, vec({1, 1})), 1.0, 1e-12);
  EXPECT_NEAR(exp_growth_exponent_exact(dunford(mat2(1, 1, 0, 2)), vec({1, 0})), 1.0, 1e-12);
  EXPECT_THROW(exp_growth_exponent_exact(d, vec({0, 0})), InvalidInput);
}

TEST(MatrixExpScaled, Examples)
{
  EXPECT_LT(op_norm(matrix_exp_scaled(CMatrix::Zero(3, 3), 1.0).value() - identity(3)), 1e-15);
  const ScaledPower E = matrix_exp_scaled(diag({1, -1}), 3.0);
  const CMatrix V = E.value();
  EXPECT_NEAR(V(0, 0).real(), std::exp(3.0), 1e-10 * std::exp(3.0));
  EXPECT_NEAR(V(1, 1).real(), std::exp(-3.0), 1e-10 * std::exp(-3.0));
  EXPECT_EQ(std::abs(V(0, 1)), 0.0);
  EXPECT_THROW(matrix_exp_scaled(identity(2), -1.0), InvalidInput);
}

TEST(MatrixExpScaled, LargeTStaysInScaledForm)
{
  const ScaledPower E = matrix_exp_scaled(diag({2, 1}), 1000.0);
  EXPECT_NEAR(E.logScale + std::log(op_norm(E.unit)), 2000.0, 1e-9);
}

// exp(t(D + N)) = exp(tD) sum_k (tN)^k / k! for commuting D (diagonalisable)
// and nilpotent N.
TEST(MatrixExpScaled, MatchesNilpotentSeries)
{
  Rng rng(12);
  for (int draw = 0; draw < 40; ++draw) {
    const Index m = 2 + draw % 6;
    const auto [T, Q] = commuting_pair(rng, m);
    for (double t : {0.3, 1.0, 4.0}) {
      // exp(tD) from the unitary diagonalisation used by commuting_pair
      const DunfordDecomposition dec = dunford(T);
      CMatrix expD = CMatrix::Zero(m, m);
      for (const auto& p : dec.idempotents) expD += std::exp(t * p.cluster.representative) * p.matrix;
      CMatrix series = identity(m), term = identity(m);
      for (Index k = 1; k < m; ++k) {
        term = term * (t * Q) / static_cast<double>(k);
        series += term;
      }
      const CMatrix want = expD * series;
      EXPECT_LE(op_norm(matrix_exp_scaled(T + Q, t).value() - want), 1e-9 * op_norm(want)) << "draw " << draw;
    }
  }
}

TEST(GrowthEstimate, Examples)
{
  EXPECT_NEAR(exp_growth_estimate(diag({1, -1}), vec({0, 1}), 50.0), -1.0, 1e-6);
  EXPECT_NEAR(exp_growth_estimate(mat2(1, 1, 0, 2), vec({1, 1}), 200.0), 2.0, 1e-2);
  Rng rng(13);
  for (int k = 0; k < 5; ++k) EXPECT_NEAR(exp_growth_estimate(rotation(1.7), rng.gaussian(2), 100.0), 0.0, 1e-9);
  EXPECT_THROW(exp_growth_estimate(identity(2), vec({0, 0}), 1.0), InvalidInput);
  EXPECT_THROW(exp_growth_estimate(identity(2), vec({1, 0}), 0.0), InvalidInput);
}

TEST(GrowthEstimate, RandomInstancesAtT200)
{
  Rng rng(14);
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    InstanceSpec spec = semigroup_spec(seed);
    spec.flagExact = true;
    const Instance inst = generate_instance(seed, spec);
    const Index m = inst.A.rows();
    const double floor = -spectral_radius(inst.A);
    for (Index j = 0; j < m; ++j) {
      const CVector x = inst.generalized_vector(j);
      const double exact = exp_growth_exponent_exact(inst.truth, x);
      const double est = exp_growth_estimate(inst.A, x, 200.0);
      EXPECT_NEAR(est, exact, 1e-2) << "seed " << seed << " j " << j;
      EXPECT_GE(est, floor - 1e-2) << "seed " << seed;
    }
    const CVector ones = inst.Sinv * CVector::Ones(m);
    EXPECT_NEAR(exp_growth_estimate(inst.A, ones, 200.0), exp_growth_exponent_exact(inst.truth, ones), 1e-2)
        << "seed " << seed;
    // a combination with weight c on its top level is shifted by ln(c)/t, so
    // coefficients have modulus in [0.5, 1]
    for (int c = 0; c < 5; ++c) {
      CVector g(m);
      for (Index i = 0; i < m; ++i) g(i) = std::polar(rng.uniform(0.5, 1.0), rng.uniform(0.0, 6.283));
      const CVector x = inst.Sinv * g;
      EXPECT_NEAR(exp_growth_estimate(inst.A, x, 200.0), exp_growth_exponent_exact(inst.truth, x), 1e-2)
          << "seed " << seed;
    }
  }
}

TEST(GrowthEstimate, ExtrapolationRemovesPrefactor)
{
  // x = (0, 1) under [[1, 1], [0, 1]]: ||exp(tA)x|| = e^t sqrt(1 + t^2)
  const CMatrix A = mat2(1, 1, 0, 1);
  const double single = exp_growth_estimate(A, vec({0, 1}), 200.0);
  const double fit = exp_growth_extrapolated(A, vec({0, 1}), {25, 50, 100, 200});
  EXPECT_GT(std::abs(single - 1.0), 1e-2);
  EXPECT_LT(std::abs(fit - 1.0), 1e-3);
  EXPECT_THROW(exp_growth_extrapolated(A, vec({0, 1}), {1, 2}), InvalidInput);
}

// The modulus resolution of exp(A) carries levels exp(b_j) and the same
// projections as the half-plane resolution of A.
TEST(FunctionalCalculus, ExpOfModulusResolution)
{
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const Instance inst = generate_instance(seed, semigroup_spec(seed));
    const HalfplaneResolution G = halfplane_resolution(dunford(inst.A));
    const CMatrix expA = matrix_exp_scaled(inst.A, 1.0).value();
    const ModulusResolution F = modulus_resolution(dunford(expA));
    ASSERT_EQ(F.size(), G.size()) << "seed " << seed;
    for (std::size_t j = 0; j < F.size(); ++j) {
      EXPECT_NEAR(F.levels[j], std::exp(G.levels[j]), 1e-6) << "seed " << seed;
      EXPECT_LE(op_norm(F.projections[j].matrix() - G.projections[j].matrix()), 1e-6) << "seed " << seed;
    }
  }
}

TEST(FunctionalCalculus, DiscreteMatchesContinuousLimit)
{
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const Instance inst = generate_instance(seed, semigroup_spec(seed));
    const CMatrix K = semigroup_limit(halfplane_resolution(inst.truth)).K.matrix();
    const CMatrix expA = matrix_exp_scaled(inst.A, 1.0).value();
    EXPECT_LE(op_norm(normalized_power(expA, 4096).matrix() - K), 1e-3) << "seed " << seed;
  }
}
