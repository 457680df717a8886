#include <gtest/gtest.h>

#include "nearalg/core/rng.hpp"
#include "nearalg/geometry.hpp"
#include "support.hpp"

using namespace nearalg;

namespace {

SampleSpec small_spec(std::uint64_t seed = 0) {
  SampleSpec s;
  s.random_selfadjoint = 16;
  s.random_unitary = 16;
  s.seed = seed;
  s.iters = 300;
  return s;
}

CMatrix small_unitary(std::uint64_t seed, int n, double t) {
  Rng rng(seed);
  return unitary_exp(t * rng.hermitian(n));
}

}  // namespace

TEST(NearestInBall, OffDiagonalUnitAgainstDiagonal) {
  const ConcreteAlgebra diag = block_algebra({1, 1}, 2);
  const NearestResult r = nearest_in_ball(matrix_unit(2, 0, 1), diag);
  EXPECT_NEAR(r.upper, 1.0, 1e-12);
  EXPECT_LT(r.witness.norm(), 1e-12);
  EXPECT_NEAR(r.lower, 1.0, 1e-12);
}

TEST(NearestInBall, MemberIsItsOwnWitness) {
  const ConcreteAlgebra a = block_algebra({2}, 3);
  const CMatrix x = a.basis()[1];
  const NearestResult r = nearest_in_ball(x, a);
  EXPECT_LT(r.upper, 1e-12);
}

TEST(NearestInBall, WitnessStaysInBall) {
  oracle::Lcg g(2);
  const ConcreteAlgebra a = block_algebra({2, 1}, 4);
  for (int k = 0; k < 10; ++k) {
    const CMatrix x = g.gaussian(4, 4);
    const NearestResult r = nearest_in_ball(x, a);
    EXPECT_LE(opnorm(r.witness), 1.0 + 1e-12);
    EXPECT_LE(r.lower, r.upper + 1e-12);
    EXPECT_NEAR(opnorm(x - r.witness), r.upper, 1e-12);
  }
}

TEST(NearestInBall, DualBoundIsValidAgainstPinching) {
  // Against the diagonal algebra the exact distance of x (with norm <= 1 off the
  // diagonal dominating) is bounded below by the off-diagonal part's norm over 2.
  oracle::Lcg g(8);
  const ConcreteAlgebra d = block_algebra({1, 1, 1}, 3);
  for (int k = 0; k < 10; ++k) {
    oracle::Mat x = g.gaussian(3, 3);
    x /= oracle::opnorm(x);
    const NearestResult r = nearest_in_ball(x, d);
    const oracle::Mat off = x - oracle::block_pinching(x, {1, 1, 1});
    // Any diagonal b satisfies ||x - b|| >= ||off|| / 2 (pinching halves at most).
    EXPECT_GE(r.upper, oracle::opnorm(off) / 2 - 1e-9);
    EXPECT_LE(r.lower, r.upper + 1e-12);
  }
}

TEST(NearInclusion, SelfInclusionIsZero) {
  const ConcreteAlgebra a = block_algebra({2, 1}, 4);
  const NearInclusionCert c = near_inclusion(a, a, small_spec(), 1e-10);
  EXPECT_LE(c.gamma_hi, 1e-10);
}

TEST(NearInclusion, EmptyAlgebra) {
  const NearInclusionCert c = near_inclusion(ConcreteAlgebra(3), block_algebra({1}, 3), small_spec());
  EXPECT_EQ(c.gamma_hi, 0.0);
}

TEST(NearInclusion, ConjugateWithinTwiceUnitaryDistance) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const ConcreteAlgebra a = block_algebra({2, 1}, 4);
    const CMatrix u = small_unitary(seed, 4, 0.01);
    const ConcreteAlgebra b = conjugate(a, u);
    const double t = opnorm(u - identity(4));
    const NearInclusionCert c = near_inclusion(a, b, small_spec(seed), 1e-10);
    EXPECT_LE(c.gamma_hi, 2 * t + 1e-10);
    EXPECT_LE(c.gamma_lo, c.gamma_hi);
    EXPECT_LE(recompute_witnesses(c), 1e-12);
  }
}

TEST(NearInclusion, FullAlgebraFarFromDiagonal) {
  const NearInclusionCert c = near_inclusion(full_algebra(2), block_algebra({1, 1}, 2), small_spec(), 1e-10);
  EXPECT_GE(c.gamma_lo, 1.0 - 1e-10);
}

TEST(KKDistance, SymmetricAndBracketed) {
  const ConcreteAlgebra a = block_algebra({2}, 3);
  const ConcreteAlgebra b = conjugate(a, small_unitary(4, 3, 0.05));
  const DistanceInterval d1 = kk_distance(a, b, small_spec(1));
  const DistanceInterval d2 = kk_distance(b, a, small_spec(1));
  EXPECT_EQ(d1.hi, d2.hi);
  EXPECT_EQ(d1.lo, d2.lo);
  EXPECT_LE(0.0, d1.lo);
  EXPECT_LE(d1.lo, d1.hi);
  EXPECT_LE(d1.hi, 2.0);
  EXPECT_GT(d1.lo, 0.0);
}

TEST(KKDistance, ZeroForEqualAlgebras) {
  const ConcreteAlgebra a = block_algebra({1, 1}, 3);
  const DistanceInterval d = kk_distance(a, a, small_spec(), 1e-10);
  EXPECT_LE(d.hi, 1e-10);
}

TEST(KKDistance, TriangleOnConjugationChain) {
  const double tol = 1e-10;
  const ConcreteAlgebra a = block_algebra({2, 1}, 4);
  const ConcreteAlgebra b = conjugate(a, small_unitary(5, 4, 0.03));
  const ConcreteAlgebra c = conjugate(b, small_unitary(6, 4, 0.03));
  const double ab = kk_distance(a, b, small_spec(2), tol).hi;
  const double bc = kk_distance(b, c, small_spec(2), tol).hi;
  const double ac = kk_distance(a, c, small_spec(2), tol).hi;
  EXPECT_LE(ac, ab + bc + 3 * tol);
}

TEST(TensorLift, ElementaryTensorKeepsWitness) {
  const ConcreteAlgebra a = block_algebra({2}, 3);
  const ConcreteAlgebra b = conjugate(a, small_unitary(9, 3, 0.02));
  const CMatrix x = a.basis()[1];
  const NearestResult r = nearest_in_ball(x, b);
  const CMatrix ax = kron(x, matrix_unit(2, 0, 0));
  const NearInclusionCert c = tensor_lift({ax}, b, 2, r.upper);
  EXPECT_LE(c.gamma_hi, r.upper + 1e-12);
}

TEST(TensorLift, AmplifiedSamplesMeetBound) {
  const ConcreteAlgebra a = block_algebra({2}, 3);
  const ConcreteAlgebra b = conjugate(a, small_unitary(10, 3, 0.02));
  const ConcreteAlgebra amp = tensor(a, full_algebra(2));
  SampleSpec s = small_spec(3);
  s.random_selfadjoint = 6;
  s.random_unitary = 6;
  const double gamma = near_inclusion(a, b, small_spec(3)).gamma_hi;
  const NearInclusionCert c = tensor_lift(unit_ball_samples(amp, s), b, 2, gamma);
  EXPECT_LE(c.gamma_hi, 2 * gamma + gamma * gamma + 1e-10);
}

TEST(TensorLift, BoundAtTenPercent) {
  const double gamma = 0.1;
  EXPECT_NEAR(2 * gamma + gamma * gamma, 0.21, 1e-15);
}

TEST(EqualityCriterion, EqualAlgebras) {
  const ConcreteAlgebra a = block_algebra({2}, 3);
  const NearInclusionCert c = near_inclusion(a, a, small_spec());
  EXPECT_TRUE(equality_criterion(a, a, c));
}

TEST(EqualityCriterion, ProperSubalgebraWithSmallConstantIsContradiction) {
  const ConcreteAlgebra a = block_algebra({1, 1}, 2);
  const ConcreteAlgebra b = full_algebra(2);
  NearInclusionCert fake;
  fake.gamma_hi = 0.5;
  EXPECT_THROW(equality_criterion(a, b, fake), CertificateContradiction);
}

TEST(EqualityCriterion, RequiresContainment) {
  const ConcreteAlgebra a = full_algebra(2);
  const ConcreteAlgebra b = block_algebra({1, 1}, 2);
  NearInclusionCert c;
  EXPECT_THROW(equality_criterion(a, b, c), PreconditionError);
  c.gamma_hi = 1.0;
  EXPECT_THROW(equality_criterion(b, b, c), PreconditionError);
}
