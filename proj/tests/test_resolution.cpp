// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>

#include "common.hpp"

using namespace satk;
using namespace satk::test;

namespace {

ModulusResolution resolve(const CMatrix& A) { return modulus_resolution(dunford(A)); }

// Closed form sum_j a_j (F_j - F_{j-1}) assembled in the test from explicit
// projections.
CMatrix closed_form(const std::vector<double>& levels, const std::vector<CMatrix>& F)
{
  const Index m = F.front().rows();
  CMatrix K = CMatrix::Zero(m, m);
  CMatrix prev = CMatrix::Zero(m, m);
  for (std::size_t j = 0; j < levels.size(); ++j) {
    K += levels[j] * (F[j] - prev);
    prev = F[j];
  }
  return K;
}

std::vector<double> sorted_eigs(const CMatrix& H)
{
  const Eigen::VectorXd ev = HermMatrix::trusted(H).eigenvalues();
  std::vector<double> out(ev.data(), ev.data() + ev.size());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(ModulusResolution, Diagonal)
{
  const ModulusResolution res = resolve(diag({2, 1}));
  ASSERT_EQ(res.size(), 2u);
  EXPECT_NEAR(res.levels[0], 1.0, 1e-12);
  EXPECT_NEAR(res.levels[1], 2.0, 1e-12);
  EXPECT_LT(op_norm(res.projections[0].matrix() - diag({0, 1})), 1e-12);
  EXPECT_LT(op_norm(res.projections[1].matrix() - identity(2)), 1e-12);
}

TEST(ModulusResolution, NilpotentHasSingleZeroLevel)
{
  const ModulusResolution res = resolve(mat2(0, 1, 0, 0));
  ASSERT_EQ(res.size(), 1u);
  EXPECT_EQ(res.levels[0], 0.0);
  EXPECT_LT(op_norm(res.projections[0].matrix() - identity(2)), 1e-12);
}

TEST(ModulusResolution, UpperTriangularFirstProjection)
{
  const ModulusResolution res = resolve(mat2(1, 1, 0, 2));
  ASSERT_EQ(res.size(), 2u);
  // oracle: range projection of the idempotent [[1,-1],[0,0]] by QR
  EXPECT_LT(op_norm(res.projections[0].matrix() - oracle_range_projection(mat2(1, -1, 0, 0))), 1e-12);
  EXPECT_LT(op_norm(res.projections[0].matrix() - diag({1, 0})), 1e-12);
}

TEST(ModulusResolution, EqualModuliMerge)
{
  const ModulusResolution res = resolve(diag({2, -2, cplx(0, 2), 1}));
  ASSERT_EQ(res.size(), 2u);
  EXPECT_NEAR(res.levels[1], 2.0, 1e-12);
  EXPECT_EQ(res.projections[0].rank, 1);
}

TEST(LimitOperator, Examples)
{
  EXPECT_LT(op_norm(limit_operator(resolve(diag({2, 1}))).K.matrix() - diag({2, 1})), 1e-12);
  EXPECT_LT(op_norm(limit_operator(resolve(mat2(1, 1, 0, 2))).K.matrix() - diag({1, 2})), 1e-12);
  EXPECT_LT(op_norm(limit_operator(resolve(mat2(0, 5, 0, 0))).K.matrix()), 1e-15);
}

TEST(LimitOperator, UpperTriangularMatchesPowerAt4096)
{
  const CMatrix A = mat2(1, 1, 0, 2);
  EXPECT_LE(op_norm(normalized_power(A, 4096).matrix() - limit_operator(resolve(A)).K.matrix()), 1e-3);
}

TEST(LimitOperator, SpectrumIsModulusMultiset)
{
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    InstanceSpec spec;
    spec.dim = 2 + static_cast<Index>(seed % 7);
    const Instance inst = generate_instance(seed, spec);
    const LimitOperator L = limit_operator(resolve(inst.A));
    std::vector<double> want = sorted_moduli(inst.lambda);
    std::sort(want.begin(), want.end());
    const std::vector<double> got = sorted_eigs(L.K.matrix());
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], 1e-6) << "seed " << seed;
    Index total = 0;
    for (Index mult : L.multiplicities) total += mult;
    EXPECT_EQ(total, inst.A.rows());
  }
}

TEST(LimitOperator, IndependentOfNilpotentPart)
{
  for (std::uint64_t seed = 50; seed < 110; ++seed) {
    InstanceSpec spec;
    spec.dim = 3 + static_cast<Index>(seed % 6);
    spec.nilpotentDensity = 1.0;
    const DunfordDecomposition dec = dunford(generate_instance(seed, spec).A);
    const CMatrix K1 = limit_operator(modulus_resolution(dec)).K.matrix();
    const CMatrix K2 = limit_operator(resolve(dec.D)).K.matrix();
    EXPECT_LE(op_norm(K1 - K2), 1e-8) << "seed " << seed;
  }
}

TEST(VectorExponentExact, Examples)
{
  const DunfordDecomposition dec = dunford(mat2(1, 1, 0, 2));
  EXPECT_NEAR(vector_exponent_exact(dec, vec({1, 0})), 1.0, 1e-12);
  EXPECT_NEAR(vector_exponent_exact(dec, vec({1, 1})), 2.0, 1e-12);
  EXPECT_EQ(vector_exponent_exact(dec, vec({0, 0})), 0.0);
  EXPECT_NEAR(vector_exponent_estimate(dec.A, vec({1, 0}), 4096), 1.0, 1e-3);
  EXPECT_NEAR(vector_exponent_estimate(dec.A, vec({1, 1}), 4096), 2.0, 1e-3);
}

TEST(VectorExponentExact, SingleEigenvalue)
{
  Rng rng(4);
  const CMatrix A = mat2(cplx(0, 3), 1, 0, cplx(0, 3));
  const DunfordDecomposition dec = dunford(A);
  for (int k = 0; k < 10; ++k) EXPECT_NEAR(vector_exponent_exact(dec, rng.gaussian(2)), 3.0, 1e-12);
}

TEST(VectorExponentExact, DimensionMismatchThrows)
{
  EXPECT_THROW(vector_exponent_exact(dunford(identity(2)), vec({1, 2, 3})), InvalidInput);
}

TEST(CheckResolution, ValidResolutionsPass)
{
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    InstanceSpec spec;
    spec.dim = 8;
    const ResolutionDiagnostics d = check_resolution(resolve(generate_instance(seed, spec).A));
    EXPECT_LE(d.worst(), 1e-8) << "seed " << seed;
  }
  EXPECT_LE(check_resolution(resolve(mat2(1, 1, 0, 2))).worst(), 1e-9);
}

TEST(CheckResolution, SwappedProjectionsReportMonotonicityViolation)
{
  const ModulusResolution res = resolve(diag({1, 2, 3}));
  std::vector<CMatrix> ps;
  for (const auto& p : res.projections) ps.push_back(p.matrix());
  ASSERT_EQ(ps.size(), 3u);
  std::swap(ps[0], ps[1]);
  const ResolutionDiagnostics d = check_resolution(ps);
  EXPECT_GT(d.monotonicity, 0.5);
  EXPECT_LE(d.idempotency, 1e-12);
  EXPECT_LE(d.topIdentity, 1e-12);
}

TEST(CheckResolution, MissingTopReportsIdentityGap)
{
  const ModulusResolution res = resolve(diag({1, 2}));
  EXPECT_NEAR(check_resolution(std::vector<CMatrix>{res.projections[0].matrix()}).topIdentity, 1.0, 1e-12);
}

// R(S^{-1} E_lambda S) is again a resolution of the identity for a spectral
// resolution E of a diagonal PSD H.
TEST(SpectralResolutionOfLimit, CongruentFamilyIsMonotone)
{
  Rng rng(31);
  for (int k = 0; k < 100; ++k) {
    const Index m = 2 + k % 7;
    Eigen::VectorXd h(m);
    for (Index i = 0; i < m; ++i) h(i) = static_cast<double>(rng.below(4));
    const CMatrix S = random_invertible(rng, m);
    const CMatrix Sinv = S.inverse();
    std::vector<double> levels(h.data(), h.data() + m);
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    std::vector<CMatrix> F;
    for (double l : levels) {
      CMatrix E = CMatrix::Zero(m, m);
      for (Index i = 0; i < m; ++i)
        if (h(i) <= l) E(i, i) = 1.0;
      F.push_back(range_projection(Sinv * E * S).matrix());
    }
    EXPECT_LE(check_resolution(F).worst(), 1e-9) << "draw " << k;
  }
}

// k projections: weighted_psd_sum_root((a_i, S^* E_i S), n) against
// sum a_i (F_i - F_{i-1}) with F_i = R(S^{-1}(E_1 + .. + E_i) S).  The
// finite-n gap is about 2 a_max |ln sigma(S)| / n, so n = 512 within 1e-3
// uses S with condition number at most 1.2; the ill-conditioned case runs
// at larger n.
TEST(KProjections, AgreementAtN512)
{
  Rng rng(41);
  for (int draw = 0; draw < 30; ++draw) {
    const Index m = 3 + draw % 5;
    const Index k = 2 + draw % 2;
    const CMatrix U = rng.unitary(m);
    std::vector<Index> cuts{0};
    for (Index i = 1; i < k; ++i) cuts.push_back(i * m / k);
    cuts.push_back(m);
    const CMatrix S = random_invertible(rng, m, 1.2);
    std::vector<WeightedTerm> terms;
    std::vector<CMatrix> F;
    const std::vector<double> a = k == 2 ? std::vector<double>{1.0, 2.0} : std::vector<double>{0.5, 1.0, 2.0};
    CMatrix partial = CMatrix::Zero(m, m);
    for (Index i = 0; i < k; ++i) {
      const Index r = cuts[i + 1] - cuts[i];
      const CMatrix E = U.middleCols(cuts[i], r) * U.middleCols(cuts[i], r).adjoint();
      terms.push_back({a[i], PsdMatrix(S.adjoint() * E * S)});
      partial += E;
      F.push_back(oracle_range_projection(S.inverse() * partial * S));
    }
    const PsdMatrix R = weighted_psd_sum_root(terms, 512);
    EXPECT_LE(op_norm(R.matrix() - closed_form(a, F)), 1e-3) << "draw " << draw;
  }
}

TEST(KProjections, IllConditionedAtLargeN)
{
  Rng rng(43);
  for (int draw = 0; draw < 10; ++draw) {
    const Index m = 4;
    const CMatrix U = rng.unitary(m);
    const CMatrix S = random_invertible(rng, m, 50.0);
    const CMatrix E1 = U.leftCols(1) * U.leftCols(1).adjoint();
    const CMatrix E2 = U.middleCols(1, 2) * U.middleCols(1, 2).adjoint();
    const CMatrix E3 = U.rightCols(1) * U.rightCols(1).adjoint();
    const std::vector<double> a{0.5, 1.0, 2.0};
    const std::vector<CMatrix> F{oracle_range_projection(S.inverse() * E1 * S),
                                 oracle_range_projection(S.inverse() * (E1 + E2) * S), identity(m)};
    const PsdMatrix R = weighted_psd_sum_root(
        {{0.5, PsdMatrix(S.adjoint() * E1 * S)}, {1.0, PsdMatrix(S.adjoint() * E2 * S)}, {2.0, PsdMatrix(S.adjoint() * E3 * S)}},
        1L << 17);
    EXPECT_LE(op_norm(R.matrix() - closed_form(a, F)), 1e-3) << "draw " << draw;
  }
}

// (S^* H^n S)^{1/n} for PSD H at n = 2^10 against the closed form built from
// R(S^{-1} E_lambda S); the limit's spectrum is sp(H).
TEST(ApplicationOfSpectralTheorem, LimitAndSpectrum)
{
  Rng rng(47);
  for (int draw = 0; draw < 100; ++draw) {
    const Index m = 2 + draw % 6;
    const CMatrix U = rng.unitary(m);
    // well separated eigenvalues, some repeated
    std::vector<double> pool{0.5, 1.0, 2.0, 3.5};
    Eigen::VectorXd h(m);
    for (Index i = 0; i < m; ++i) h(i) = pool[rng.below(pool.size())];
    const CMatrix S = random_invertible(rng, m, 10.0);

    std::vector<double> levels(h.data(), h.data() + m);
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    std::vector<CMatrix> F;
    for (double l : levels) {
      Eigen::VectorXcd sel(m);
      for (Index i = 0; i < m; ++i) sel(i) = h(i) <= l ? 1.0 : 0.0;
      F.push_back(oracle_range_projection(S.inverse() * U * sel.asDiagonal() * U.adjoint() * S));
    }
    // H^n = sum_l l^n E_l overflows for l > 2 at this n, so S^* H^n S goes
    // through the weighted root
    std::vector<WeightedTerm> terms;
    for (double l : levels) {
      Eigen::VectorXcd sel(m);
      for (Index i = 0; i < m; ++i) sel(i) = h(i) == l ? 1.0 : 0.0;
      terms.push_back({l, PsdMatrix(S.adjoint() * U * sel.asDiagonal() * U.adjoint() * S)});
    }
    const PsdMatrix R = weighted_psd_sum_root(terms, 1024);
    const CMatrix K = closed_form(levels, F);
    EXPECT_LE(op_norm(R.matrix() - K), 1e-2) << "draw " << draw;

    std::vector<double> want(h.data(), h.data() + m);
    std::sort(want.begin(), want.end());
    const std::vector<double> got = sorted_eigs(K);
    for (Index i = 0; i < m; ++i) EXPECT_NEAR(got[i], want[i], 1e-9) << "draw " << draw;
  }
}
