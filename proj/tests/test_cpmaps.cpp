#include <gtest/gtest.h>

#include <numbers>

#include "nearalg/core/rng.hpp"
#include "nearalg/cpmaps.hpp"
#include "nearalg/geometry.hpp"
#include "support.hpp"

using namespace nearalg;

namespace {

/// Random unital Kraus family built with the test oracle generator:
/// K_l <- K_l S^(-1/2)-normalized so that sum K_l K_l* = 1.
std::vector<CMatrix> oracle_unital_kraus(oracle::Lcg& g, int n_out, int n_in, int count) {
  std::vector<CMatrix> ks;
  oracle::Mat s = oracle::Mat::Zero(n_out, n_out);
  for (int l = 0; l < count; ++l) {
    ks.push_back(g.gaussian(n_out, n_in));
    s += ks.back() * ks.back().adjoint();
  }
  Eigen::SelfAdjointEigenSolver<oracle::Mat> es(s);
  const oracle::Mat inv_sqrt = es.eigenvectors() *
                               es.eigenvalues().cwiseSqrt().cwiseInverse().cast<cplx>().asDiagonal() *
                               es.eigenvectors().adjoint();
  for (auto& k : ks) k = inv_sqrt * k;
  return ks;
}

std::vector<CMatrix> random_elements(const ConcreteAlgebra& a, oracle::Lcg& g, int count) {
  std::vector<CMatrix> out;
  for (int k = 0; k < count; ++k) {
    CVector c(a.dim());
    for (int i = 0; i < a.dim(); ++i) c(i) = cplx(g.normal(), g.normal());
    out.push_back(a.span().combine(c));
  }
  return out;
}

LinMap transpose_map(int n) {
  return LinMap::from_function(full_algebra(n), n, [](const CMatrix& x) { return CMatrix(x.transpose()); });
}

}  // namespace

TEST(Choi, IdentityMapIsRankOneWithTraceTwo) {
  const LinMap id = inclusion_map(full_algebra(2));
  const CMatrix c = id.choi();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(c);
  int rank = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) rank += es.eigenvalues()(i) > 1e-12;
  EXPECT_EQ(rank, 1);
  EXPECT_NEAR(c.trace().real(), 2.0, 1e-14);
}

TEST(Choi, TransposeHasNegativeEigenvalue) {
  const LinMap t = transpose_map(2);
  EXPECT_NEAR(min_hermitian_eigenvalue(t.choi()), -1.0, 1e-12);
  const ClassifyReport r = classify(t);
  EXPECT_EQ(r.flags.cp, Tri::No);
  EXPECT_EQ(r.flags.ucp, Tri::No);
}

TEST(Choi, RoundTrip) {
  oracle::Lcg g(2);
  const FDAlgebra f{{2, 1}};
  const LinMap phi = kraus_map(f, 3, oracle_unital_kraus(g, 3, 3, 2));
  const LinMap back = LinMap::from_choi(f, 3, phi.choi_blocks());
  for (std::size_t i = 0; i < phi.images().size(); ++i)
    EXPECT_LT((phi.images()[i] - back.images()[i]).norm(), 1e-14);
}

TEST(Classify, RandomUnitalKrausIsUcp) {
  oracle::Lcg g(3);
  const LinMap phi = kraus_map(FDAlgebra{{2}}, 3, oracle_unital_kraus(g, 3, 2, 3));
  const ClassifyReport r = classify(phi);
  EXPECT_EQ(r.flags.cp, Tri::Yes);
  EXPECT_EQ(r.flags.cpc, Tri::Yes);
  EXPECT_EQ(r.flags.ucp, Tri::Yes);
  const ClassifyReport half = classify(phi.scaled(0.5));
  EXPECT_EQ(half.flags.cpc, Tri::Yes);
  EXPECT_EQ(half.flags.ucp, Tri::No);
  EXPECT_EQ(classify(phi.scaled(2.0)).flags.cpc, Tri::No);
}

TEST(Stinespring, ReconstructionAndDefectIdentityAcrossProfiles) {
  const std::vector<std::vector<int>> profiles = {{1}, {2}, {1, 1}, {2, 1}, {3}};
  for (const auto& prof : profiles) {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      oracle::Lcg g(seed + 100 * prof.size() + prof[0]);
      const FDAlgebra f{prof};
      const int n = 2 + static_cast<int>(seed % 3);
      // Enough Kraus operators that sum K K* is invertible.
      const int count = (n + f.ambient_dim() - 1) / f.ambient_dim() + static_cast<int>(seed % 2);
      const LinMap phi = kraus_map(f, n, oracle_unital_kraus(g, n, f.ambient_dim(), count));
      const Stinespring s = stinespring(phi);
      EXPECT_LT(opnorm(s.isometry.adjoint() * s.isometry - identity(n)), 1e-10);
      const Certificate c = verify_stinespring(phi, s, random_elements(phi.domain(), g, 5), 1e-10);
      EXPECT_TRUE(c.passed()) << c.note << " " << c.achieved;
    }
  }
}

TEST(Stinespring, DepolarizingDilationSize) {
  for (int n : {2, 3}) {
    const int big = 2;
    const LinMap phi = LinMap::from_function(full_algebra(n), big, [&](const CMatrix& x) {
      return CMatrix(x.trace() / static_cast<double>(n) * identity(big));
    });
    const Stinespring s = stinespring(phi);
    ASSERT_EQ(s.multiplicities.size(), 1u);
    EXPECT_EQ(s.multiplicities[0], n * big);  // Choi rank n N
    EXPECT_EQ(s.dim(), n * n * big);          // pi is n-dimensional per Kraus operator
  }
}

TEST(Stinespring, RejectsNonCp) { EXPECT_THROW(stinespring(transpose_map(2)), PreconditionError); }

TEST(MultDefect, HomomorphismHasZeroDefect) {
  Rng rng(3);
  const ConcreteAlgebra a = block_algebra({2, 1}, 4);
  const LinMap ad = conjugation_map(a, rng.unitary(4));
  oracle::Lcg g(1);
  const DefectReport r = mult_defect(ad, random_elements(a, g, 4));
  EXPECT_LT(r.sup, 1e-12);
  EXPECT_EQ(r.per_element.size(), 8u);
}

TEST(MultDefect, StinespringInequalityOnRandomUcp) {
  oracle::Lcg g(5);
  const LinMap phi = kraus_map(FDAlgebra{{2, 1}}, 3, oracle_unital_kraus(g, 3, 3, 2));
  for (int k = 0; k < 20; ++k) {
    const auto xy = random_elements(phi.domain(), g, 2);
    EXPECT_TRUE(check_stinespring_inequality(phi, xy[0], xy[1]).passed());
  }
}

TEST(ConditionalExpectation, FullAlgebraIsIdentity) {
  const LinMap e = conditional_expectation(3, full_algebra(3));
  oracle::Lcg g(1);
  const CMatrix x = g.gaussian(3, 3);
  EXPECT_LT((e(x) - x).norm(), 1e-13);
}

TEST(ConditionalExpectation, DiagonalIsPinching) {
  const std::vector<int> sizes = {2, 1, 1};
  const LinMap e = conditional_expectation(4, block_algebra(sizes, 4));
  oracle::Lcg g(2);
  for (int k = 0; k < 5; ++k) {
    const CMatrix x = g.gaussian(4, 4);
    EXPECT_LT((e(x) - oracle::block_pinching(x, sizes)).norm(), 1e-13);
  }
  EXPECT_EQ(classify(e).flags.ucp, Tri::Yes);
}

TEST(ConditionalExpectation, ScalarsGiveNormalizedTrace) {
  const LinMap e = conditional_expectation(3, generate_algebra({identity(3)}, 3));
  oracle::Lcg g(3);
  const CMatrix x = g.gaussian(3, 3);
  EXPECT_LT((e(x) - x.trace() / 3.0 * identity(3)).norm(), 1e-13);
}

TEST(ConditionalExpectation, PropertyIdempotentBimodule) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(seed);
    const ConcreteAlgebra a = conjugate(block_algebra({2, 1}, 3), rng.unitary(3));
    const LinMap e = conditional_expectation(3, a);
    oracle::Lcg g(seed);
    const CMatrix x = g.gaussian(3, 3);
    const auto ab = random_elements(a, g, 2);
    EXPECT_LT((e(e(x)) - e(x)).norm(), 1e-12);
    EXPECT_LT((e(ab[0] * x * ab[1]) - ab[0] * e(x) * ab[1]).norm(), 1e-11);
    EXPECT_EQ(classify(e).flags.ucp, Tri::Yes);
  }
}

TEST(ConditionalExpectation, NonUnitalThrows) {
  EXPECT_THROW(conditional_expectation(3, block_algebra({2}, 3)), PreconditionError);
}

TEST(Arveson, RestrictionWithinTwiceGamma) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    Rng rng(seed);
    const ConcreteAlgebra a = block_algebra({2, 1}, 4);
    const ConcreteAlgebra b = conjugate(a, unitary_exp(0.02 * rng.hermitian(4)));
    SampleSpec spec;
    spec.random_selfadjoint = spec.random_unitary = 12;
    spec.seed = seed;
    const NearInclusionCert cert = near_inclusion(a, b, spec);
    const auto xs = unit_ball_samples(a, spec);
    const ArvesonResult r = arveson_restrict(a, b, xs, cert.gamma_hi);
    EXPECT_TRUE(r.certificate.passed()) << r.certificate.achieved << " vs " << r.certificate.ceiling;
    EXPECT_EQ(classify(r.map).flags.cpc, Tri::Yes);
  }
}

TEST(UcpExtension, ZeroMapSendsUnitToUnit) {
  const ConcreteAlgebra a = block_algebra({2}, 2);
  const LinMap zero = LinMap::from_function(a, 2, [](const CMatrix&) { return CMatrix(CMatrix::Zero(2, 2)); });
  const LinMap ext = ucp_extension(zero, Unitization::Tilde);
  const CMatrix y = tilde_embed(a.basis()[0]) + 3.0 * identity(3);
  EXPECT_LT((ext(y) - 3.0 * identity(2)).norm(), 1e-13);
  EXPECT_EQ(classify(ext).flags.ucp, Tri::Yes);
}

TEST(UcpExtension, CpcBecomesUcp) {
  oracle::Lcg g(9);
  const LinMap phi = kraus_map(FDAlgebra{{2, 1}}, 3, oracle_unital_kraus(g, 3, 3, 2)).scaled(0.6);
  const LinMap ext = ucp_extension(phi, Unitization::Tilde);
  EXPECT_EQ(classify(ext).flags.ucp, Tri::Yes);
  EXPECT_EQ(ext.domain().dim(), phi.domain().dim() + 1);
}

TEST(UcpExtension, DaggerOfUcpIsItself) {
  oracle::Lcg g(10);
  const LinMap phi = kraus_map(FDAlgebra{{2}}, 2, oracle_unital_kraus(g, 2, 2, 2));
  const LinMap ext = ucp_extension(phi, Unitization::Dagger);
  EXPECT_EQ(ext.domain().dim(), phi.domain().dim());
}

TEST(CBBracket, CpMapIsExact) {
  oracle::Lcg g(11);
  const LinMap phi = kraus_map(FDAlgebra{{2, 1}}, 3, oracle_unital_kraus(g, 3, 3, 2)).scaled(0.7);
  const CBBracket b = cb_bracket(phi);
  EXPECT_NEAR(b.lo, 0.7, 1e-12);
  EXPECT_EQ(b.lo, b.hi);
}

TEST(CBBracket, ConjugationMinusIdentity) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(seed);
    const CMatrix u = unitary_exp((0.05 + 0.1 * seed) * rng.hermitian(3));
    const ConcreteAlgebra a = full_algebra(3);
    const LinMap d = conjugation_map(a, u) - inclusion_map(a);
    const CBBracket b = cb_bracket(d);
    EXPECT_LE(b.lo, b.hi + 1e-12);
    EXPECT_LE(b.hi, 2 * opnorm(u - identity(3)) + 1e-12);
  }
}

TEST(CBBracket, TransposeBracketContainsTwo) {
  // The completely bounded norm of the transpose on M_2 is 2.
  const CBBracket b = cb_bracket(transpose_map(2), 64);
  EXPECT_LE(b.lo, 2.0 + 1e-12);
  EXPECT_GE(b.hi, 2.0 - 1e-12);
  EXPECT_GE(b.lo, 1.0);
}
