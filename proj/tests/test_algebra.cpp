#include <gtest/gtest.h>

#include "nearalg/algebra.hpp"
#include "nearalg/core/rng.hpp"
#include "support.hpp"

using namespace nearalg;

namespace {

CMatrix diag3(double a, double b, double c) {
  CMatrix d = CMatrix::Zero(3, 3);
  d(0, 0) = a;
  d(1, 1) = b;
  d(2, 2) = c;
  return d;
}

/// Random unitary conjugate of (M_2 (x) I_mult) (+) M_1 embedded in M_n.
ConcreteAlgebra random_block_algebra(std::uint64_t seed, const std::vector<int>& sizes,
                                     const std::vector<int>& mult, int n) {
  const ConcreteAlgebra base = block_algebra(sizes, n, mult);
  Rng rng(seed);
  const CMatrix u = rng.unitary(n);
  std::vector<CMatrix> gens;
  // Generate from two random elements so the structure is recomputed from scratch.
  for (int k = 0; k < 2; ++k) {
    CVector c(base.dim());
    for (int i = 0; i < base.dim(); ++i) c(i) = rng.complex_normal();
    gens.push_back(u * base.span().combine(c) * u.adjoint());
  }
  return generate_algebra(gens, n);
}

}  // namespace

TEST(GenerateAlgebra, ScalarMultiplesOfIdentity) {
  const ConcreteAlgebra a = generate_algebra({identity(2)}, 2);
  EXPECT_EQ(a.dim(), 1);
  EXPECT_TRUE(a.is_unital_in_ambient());
}

TEST(GenerateAlgebra, MatrixUnitsGenerateFullAlgebra) {
  const ConcreteAlgebra a = generate_algebra({matrix_unit(2, 0, 0), matrix_unit(2, 0, 1)}, 2);
  EXPECT_EQ(a.dim(), 4);
}

TEST(GenerateAlgebra, DiagonalProjections) {
  const ConcreteAlgebra a = generate_algebra({diag3(1, 0, 0), diag3(0, 1, 1)}, 3);
  EXPECT_EQ(a.dim(), 2);
  EXPECT_TRUE(a.is_unital_in_ambient());
}

TEST(GenerateAlgebra, ShapeMismatchThrows) {
  EXPECT_THROW(generate_algebra({identity(3)}, 2), PreconditionError);
}

TEST(GenerateAlgebra, NonUnitalSupport) {
  CMatrix x = CMatrix::Zero(3, 3);
  x(0, 1) = 1.0;
  const ConcreteAlgebra a = generate_algebra({x}, 3);
  EXPECT_EQ(a.dim(), 4);
  EXPECT_FALSE(a.is_unital_in_ambient());
  EXPECT_EQ(projection_rank(a.support()), 2);
}

TEST(GenerateAlgebra, PropertyClosedAndIdempotent) {
  // Products of basis elements span no more than the algebra (oracle rank count).
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    oracle::Lcg g(seed);
    const int n = 2 + static_cast<int>(seed % 4);
    std::vector<CMatrix> gens;
    // Block-diagonal generators keep the result a proper subalgebra.
    for (int k = 0; k < 2; ++k) {
      CMatrix x = CMatrix::Zero(n, n);
      x.topLeftCorner(n - 1, n - 1) = g.gaussian(n - 1, n - 1);
      x(n - 1, n - 1) = g.normal();
      gens.push_back(x);
    }
    const ConcreteAlgebra a = generate_algebra(gens, n);
    EXPECT_TRUE(verify_algebra(a).passed()) << verify_algebra(a).note;
    std::vector<oracle::Mat> all(a.basis().begin(), a.basis().end());
    for (const auto& x : a.basis())
      for (const auto& y : a.basis()) all.push_back(x * y);
    EXPECT_EQ(oracle::span_rank(all), a.dim());
    EXPECT_EQ(generate_algebra(a.basis(), n).dim(), a.dim());
    EXPECT_EQ(a.dim(), (n - 1) * (n - 1) + 1);
  }
}

TEST(VerifyAlgebra, RejectsNonSelfAdjointSpan) {
  const Certificate c = verify_basis({matrix_unit(2, 0, 1)}, 2);
  EXPECT_FALSE(c.passed());
  EXPECT_EQ(c.note, "not closed under adjoint");
}

TEST(VerifyAlgebra, RejectsMisnormalizedBasis) {
  const Certificate c = verify_basis({2.0 * identity(2)}, 2);
  EXPECT_FALSE(c.passed());
  EXPECT_EQ(c.note, "basis not orthonormal");
}

TEST(Wedderburn, FullMatrixAlgebra) {
  const ConcreteAlgebra a = generate_algebra({matrix_unit(3, 0, 1), matrix_unit(3, 1, 2)}, 3);
  const BlockStructure s = wedderburn_decompose(a, 1);
  ASSERT_EQ(s.summands.size(), 1u);
  EXPECT_EQ(s.summands[0].size, 3);
  EXPECT_EQ(s.summands[0].multiplicity, 1);
}

TEST(Wedderburn, AmplifiedBlock) {
  oracle::Lcg g(4);
  std::vector<CMatrix> gens;
  for (int k = 0; k < 2; ++k) {
    const CMatrix x = g.gaussian(2, 2);
    gens.push_back(direct_sum({x, x}));
  }
  const BlockStructure s = wedderburn_decompose(generate_algebra(gens, 4), 2);
  ASSERT_EQ(s.summands.size(), 1u);
  EXPECT_EQ(s.summands[0].size, 2);
  EXPECT_EQ(s.summands[0].multiplicity, 2);
}

TEST(Wedderburn, DiagonalAlgebra) {
  const ConcreteAlgebra a = generate_algebra({diag3(1, 2, 3)}, 3);
  const BlockStructure s = wedderburn_decompose(a, 3);
  ASSERT_EQ(s.summands.size(), 3u);
  for (const auto& b : s.summands) {
    EXPECT_EQ(b.size, 1);
    EXPECT_EQ(b.multiplicity, 1);
  }
}

TEST(Wedderburn, PropertyMatrixUnitRelations) {
  const std::vector<std::vector<int>> profiles = {{2, 1}, {1, 1, 1}, {3}, {2, 2}};
  const std::vector<std::vector<int>> mults = {{1, 2}, {1, 1, 2}, {1}, {1, 1}};
  for (std::size_t pi = 0; pi < profiles.size(); ++pi) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      int n = 0;
      for (std::size_t k = 0; k < profiles[pi].size(); ++k) n += profiles[pi][k] * mults[pi][k];
      n += 1;  // leave room so the algebra is non-unital
      const ConcreteAlgebra a = random_block_algebra(seed * 31 + pi, profiles[pi], mults[pi], n);
      const BlockStructure& s = a.structure();
      ASSERT_EQ(s.summands.size(), profiles[pi].size());
      int dim = 0;
      std::vector<oracle::Mat> span(a.basis().begin(), a.basis().end());
      CMatrix unit_sum = CMatrix::Zero(n, n);
      for (std::size_t k = 0; k < s.summands.size(); ++k) {
        const int nk = s.summands[k].size;
        dim += nk * nk;
        for (int i = 0; i < nk; ++i) {
          unit_sum += s.unit(k, i, i);
          for (int j = 0; j < nk; ++j) {
            const CMatrix& e = s.unit(k, i, j);
            span.push_back(e);
            EXPECT_LT((e.adjoint() - s.unit(k, j, i)).norm(), 1e-9);
            for (int l = 0; l < nk; ++l) EXPECT_LT((e * s.unit(k, j, l) - s.unit(k, i, l)).norm(), 1e-9);
          }
        }
      }
      EXPECT_EQ(dim, a.dim());
      EXPECT_EQ(oracle::span_rank(span), a.dim());
      EXPECT_LT((unit_sum - a.support()).norm(), 1e-9);
    }
  }
}

TEST(Wedderburn, ConjugatedMatrixUnitBasis) {
  // Basis elements of different blocks multiply to roundoff, not to zero.
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    oracle::Lcg g(seed);
    const ConcreteAlgebra c = conjugate(block_algebra({2, 1}, 4), g.unitary(4));
    const ConcreteAlgebra bare(4, c.span());
    const BlockStructure s = wedderburn_decompose(bare, seed);
    ASSERT_EQ(s.summands.size(), 2u) << seed;
    EXPECT_EQ(s.dim(), 5);
  }
}

TEST(Wedderburn, SeedDeterminism) {
  const ConcreteAlgebra a = random_block_algebra(5, {2, 1}, {1, 1}, 4);
  const BlockStructure s1 = wedderburn_decompose(a, 9), s2 = wedderburn_decompose(a, 9);
  for (std::size_t k = 0; k < s1.matrix_units.size(); ++k)
    for (std::size_t i = 0; i < s1.matrix_units[k].size(); ++i)
      EXPECT_EQ((s1.matrix_units[k][i] - s2.matrix_units[k][i]).norm(), 0.0);
}

TEST(Unitization, DaggerContainsSupport) {
  const ConcreteAlgebra a = generate_algebra({diag3(1, -1, 0)}, 3);
  const ConcreteAlgebra d = unitize_dagger(a);
  EXPECT_TRUE(d.contains(diag3(1, 1, 0)));
  EXPECT_TRUE(d.dim() == a.dim() || d.dim() == a.dim() + 1);
}

TEST(Unitization, TildeAddsOneDimension) {
  for (const auto& a : {block_algebra({2}, 3), block_algebra({2}, 2), block_algebra({1, 1}, 3)}) {
    const ConcreteAlgebra t = unitize_tilde(a);
    EXPECT_EQ(t.dim(), a.dim() + 1);
    EXPECT_TRUE(t.is_unital_in_ambient());
    EXPECT_TRUE(verify_algebra(t).passed());
    const BlockStructure& s = t.structure();
    EXPECT_EQ(s.dim(), t.dim());
    auto [x, lambda] = tilde_split(tilde_embed(a.basis()[0]) + 2.0 * identity(a.ambient_dim() + 1));
    EXPECT_LT((x - a.basis()[0]).norm(), 1e-14);
    EXPECT_NEAR(lambda.real(), 2.0, 1e-14);
  }
}

TEST(Algebra, ConjugatePreservesStructure) {
  const ConcreteAlgebra a = block_algebra({2, 1}, 4);
  Rng rng(2);
  const ConcreteAlgebra b = conjugate(a, rng.unitary(4));
  EXPECT_TRUE(verify_algebra(b).passed());
  EXPECT_EQ(b.structure().summands.size(), 2u);
}
