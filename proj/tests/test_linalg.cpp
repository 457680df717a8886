#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "nearalg/core/linalg.hpp"
#include "nearalg/core/rng.hpp"
#include "support.hpp"

using namespace nearalg;

TEST(Linalg, OpnormAgreesWithPowerIteration) {
  oracle::Lcg g(11);
  for (int n : {1, 2, 3, 5, 8}) {
    for (int rep = 0; rep < 5; ++rep) {
      const CMatrix x = g.gaussian(n, n + rep % 2);
      EXPECT_NEAR(opnorm(x), oracle::opnorm(x), 1e-9 * oracle::opnorm(x));
    }
  }
}

TEST(Linalg, KronMatchesEntrywiseFormula) {
  oracle::Lcg g(3);
  const CMatrix a = g.gaussian(2, 3), b = g.gaussian(3, 2);
  EXPECT_LT((kron(a, b) - oracle::kron(a, b)).norm(), 1e-14);
}

TEST(Linalg, PolarPartIsUnitaryAndFactorsMatrix) {
  oracle::Lcg g(5);
  const CMatrix x = g.gaussian(4, 4);
  const CMatrix u = polar_part(x);
  EXPECT_LT((u.adjoint() * u - identity(4)).norm(), 1e-12);
  const CMatrix pos = u.adjoint() * x;
  EXPECT_LT((pos - pos.adjoint()).norm(), 1e-10);
  EXPECT_GT(min_hermitian_eigenvalue(pos), -1e-10);
}

TEST(Linalg, UnitaryLogInvertsExp) {
  oracle::Lcg g(7);
  CMatrix h = g.hermitian(4);
  h *= 2.5 / oracle::opnorm(h);
  const CMatrix u = unitary_exp(h);
  EXPECT_LT((unitary_log(u) - cplx(0, 1) * h).norm(), 1e-10);
}

TEST(Linalg, UnitaryLogRejectsMinusOne) {
  CMatrix u = identity(2);
  u(1, 1) = -1.0;
  EXPECT_THROW(unitary_log(u), PreconditionError);
}

TEST(Linalg, SpectralProjectionOfDiagonal) {
  CMatrix d = CMatrix::Zero(3, 3);
  d(0, 0) = 0.1;
  d(1, 1) = 0.7;
  d(2, 2) = 0.9;
  const CMatrix p = spectral_projection(d, 0.5, 1.0);
  EXPECT_NEAR(p(0, 0).real(), 0.0, 1e-14);
  EXPECT_NEAR(p(1, 1).real(), 1.0, 1e-14);
  EXPECT_EQ(projection_rank(p), 2);
}

TEST(Linalg, ShortestDoubleRoundTrip) {
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double v = rng.normal() * std::pow(10.0, static_cast<int>(rng.uniform() * 20) - 10);
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
}

TEST(Rng, StreamsAreReproducible) {
  Rng a = Rng::stream(42, 3), b = Rng::stream(42, 3), c = Rng::stream(42, 4);
  const auto x = a.next_u64();
  EXPECT_EQ(x, b.next_u64());
  EXPECT_NE(x, c.next_u64());
}

TEST(Rng, FixedSequence) {
  // Frozen output guards against accidental changes of the variate derivation.
  Rng r(2024);
  const double u = r.uniform();
  Rng r2(2024);
  EXPECT_EQ(u, static_cast<double>(r2.next_u64() >> 11) * 0x1.0p-53);
  Rng n(9);
  double sum = 0;
  for (int i = 0; i < 20000; ++i) sum += n.normal();
  EXPECT_LT(std::abs(sum / 20000), 0.03);
}

TEST(Rng, UnitaryIsUnitary) {
  Rng r(3);
  for (int n : {1, 2, 5, 9}) {
    const CMatrix u = r.unitary(n);
    EXPECT_LT((u.adjoint() * u - identity(n)).norm(), 1e-12);
  }
}
