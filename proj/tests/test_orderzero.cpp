#include <gtest/gtest.h>

#include <cmath>

#include "nearalg/core/rng.hpp"
#include "nearalg/orderzero.hpp"
#include "support.hpp"

using namespace nearalg;

namespace {

struct OzOracle {
  ConcreteAlgebra domain;
  LinMap pi;
  LinMap phi;
  CMatrix h;
};

/// pi(x) = U (sum_k x_k (x) I_{m_k} + 0) U* and h = U (sum_k I (x) c_k + 0) U* with
/// spec(c_k) in [floor, 1].
OzOracle oracle_order_zero(const std::vector<int>& sizes, const std::vector<int>& mults, int n, std::uint64_t seed,
                           double floor) {
  oracle::Lcg g(seed);
  const FDAlgebra f{sizes};
  const ConcreteAlgebra dom = realize(f);
  const oracle::Mat u = g.unitary(n);
  oracle::Mat h = oracle::Mat::Zero(n, n);
  int pos = 0;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    const oracle::Mat v = g.unitary(mults[k]);
    oracle::Mat d = oracle::Mat::Zero(mults[k], mults[k]);
    for (int i = 0; i < mults[k]; ++i) d(i, i) = floor + (1 - floor) * g.uniform();
    const int w = sizes[k] * mults[k];
    h.block(pos, pos, w, w) = oracle::kron(oracle::Mat::Identity(sizes[k], sizes[k]), v * d * v.adjoint());
    pos += w;
  }
  h = u * h * u.adjoint();
  auto pi_fn = [&](const CMatrix& x) {
    oracle::Mat y = oracle::Mat::Zero(n, n);
    int at = 0, in = 0;
    for (std::size_t k = 0; k < sizes.size(); ++k) {
      const int w = sizes[k] * mults[k];
      y.block(at, at, w, w) = oracle::kron(x.block(in, in, sizes[k], sizes[k]), oracle::Mat::Identity(mults[k], mults[k]));
      at += w;
      in += sizes[k];
    }
    return CMatrix(u * y * u.adjoint());
  };
  const LinMap pi = LinMap::from_function(dom, n, pi_fn);
  const LinMap phi = LinMap::from_function(dom, n, [&](const CMatrix& x) { return CMatrix(pi_fn(x) * h); });
  return {dom, pi, phi, h};
}

CMatrix random_in(const ConcreteAlgebra& a, oracle::Lcg& g) {
  CMatrix x = CMatrix::Zero(a.ambient_dim(), a.ambient_dim());
  for (const auto& b : a.basis()) x += oracle::cplx(g.normal(), g.normal()) * b;
  return x / oracle::opnorm(x);
}

/// Conjugation of A by exp(i s H) with ||H|| = 1; returns the unitary.
CMatrix small_unitary(int n, double s, std::uint64_t seed) {
  oracle::Lcg g(seed);
  const oracle::Mat h = g.hermitian(n);
  return unitary_exp(s * h / oracle::opnorm(h));
}

const Certificate& find(const std::vector<Certificate>& cs, const std::string& name) {
  for (const auto& c : cs)
    if (c.name == name) return c;
  throw std::runtime_error("missing certificate " + name);
}

}  // namespace

TEST(IsOrderZero, HomomorphismHasProjectionUnit) {
  const OzOracle o = oracle_order_zero({2, 1}, {1, 2}, 5, 1, 1.0);
  const LinMap hom = o.pi;
  const auto oz = is_order_zero(hom);
  ASSERT_TRUE(oz.has_value());
  EXPECT_LT(opnorm(oz->h * oz->h - oz->h), 1e-12);
  for (const auto& e : o.domain.basis()) EXPECT_LT(opnorm(oz->pi(e) - hom(e)), 1e-10);
}

TEST(IsOrderZero, ScalarDamping) {
  const OzOracle o = oracle_order_zero({2}, {2}, 4, 2, 1.0);
  for (double t : {1.0, 0.5, 0.1}) {
    const auto oz = is_order_zero(o.pi.scaled(t));
    ASSERT_TRUE(oz.has_value()) << t;
    EXPECT_LT(opnorm(oz->h - t * o.pi(o.domain.support())), 1e-12);
    for (const auto& e : o.domain.basis()) EXPECT_LT(opnorm(oz->pi(e) - o.pi(e)), 1e-9);
  }
}

TEST(IsOrderZero, ChoiNoiseDependsOnTolerance) {
  const OzOracle o = oracle_order_zero({2}, {1}, 3, 3, 1.0);
  oracle::Lcg g(30);
  std::vector<CMatrix> chois = o.pi.choi_blocks();
  const oracle::Mat w = g.gaussian(chois[0].rows(), chois[0].rows());
  const oracle::Mat noise = w * w.adjoint();
  chois[0] += 1e-3 * noise / oracle::opnorm(noise);
  LinMap noisy = LinMap::from_choi(FDAlgebra{{2}}, 3, chois);
  noisy = noisy.scaled(1.0 / std::max(1.0, opnorm(noisy(identity(2)))));
  EXPECT_FALSE(is_order_zero(noisy, 1e-9).has_value());
  EXPECT_TRUE(is_order_zero(noisy, 1e-2).has_value());
}

TEST(IsOrderZero, RejectsNonOrderZeroAndNonContractive) {
  const ConcreteAlgebra d = block_algebra({1, 1, 1}, 3);
  const LinMap avg = LinMap::from_function(d, 3, [](const CMatrix& y) { return CMatrix(y.trace() / 3.0 * identity(3)); });
  EXPECT_FALSE(is_order_zero(avg).has_value());
  EXPECT_FALSE(is_order_zero(inclusion_map(d).scaled(2.0)).has_value());
}

TEST(StructureDecompose, RecoversConstructedPairs) {
  const std::vector<std::pair<std::vector<int>, std::vector<int>>> profiles = {
      {{1}, {2}}, {{2}, {1}}, {{2}, {2}}, {{1, 1}, {1, 2}}, {{2, 1}, {1, 1}}};
  for (const auto& [sizes, mults] : profiles)
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      int n = 0;
      for (std::size_t k = 0; k < sizes.size(); ++k) n += sizes[k] * mults[k];
      const OzOracle o = oracle_order_zero(sizes, mults, n + static_cast<int>(seed % 2), seed, 0.05);
      const StructureResult s = structure_decompose(o.phi);
      EXPECT_LT(opnorm(s.h - o.h), 1e-12);
      for (const auto& e : o.domain.basis()) ASSERT_LT(opnorm(s.pi(e) - o.pi(e)), 1e-9) << seed;
      EXPECT_LT(s.residuals.worst(), 1e-9);
    }
}

TEST(StructureDecompose, ThrowsOnNonOrderZero) {
  const ConcreteAlgebra d = block_algebra({1, 1}, 2);
  const LinMap avg = LinMap::from_function(d, 2, [](const CMatrix& y) { return CMatrix(y.trace() / 2.0 * identity(2)); });
  EXPECT_THROW(structure_decompose(avg), NumericalError);
}

TEST(ConeEvaluate, GeneratorAndSquare) {
  const OzOracle o = oracle_order_zero({2}, {2}, 5, 4, 0.1);
  const OrderZeroMap oz = order_zero_from(o.pi, o.h);
  for (const auto& e : o.domain.basis()) EXPECT_LT(opnorm(cone_evaluate(oz, {0, 1}, e) - o.phi(e)), 1e-14);
  EXPECT_LT(opnorm(cone_evaluate(oz, {0, 0, 1}, identity(2)) - o.h * o.h), 1e-14);
  EXPECT_THROW(cone_evaluate(oz, {1, 1}, identity(2)), PreconditionError);
}

TEST(ConeEvaluate, MultiplicativeOnRandomPolynomials) {
  oracle::Lcg g(5);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const OzOracle o = oracle_order_zero({2, 1}, {1, 2}, 5, seed, 0.0);
    const OrderZeroMap oz = order_zero_from(o.pi, o.h);
    std::vector<double> f(1 + 1 + seed % 4, 0.0), q(1 + 1 + (seed + 1) % 4, 0.0);
    for (std::size_t k = 1; k < f.size(); ++k) f[k] = g.normal();
    for (std::size_t k = 1; k < q.size(); ++k) q[k] = g.normal();
    const CMatrix x = random_in(o.domain, g), y = random_in(o.domain, g);
    EXPECT_LT(cone_product_residual(oz, f, q, x, y), 1e-10);
  }
}

TEST(PerturbOrderZero, ContainedAlgebraReproducesMap) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const OzOracle o = oracle_order_zero({2, 1}, {1, 1}, 4, seed, 0.1);
    const OrderZeroMap oz = order_zero_from(o.pi, o.h);
    const PerturbResult r = perturb_order_zero(oz, full_algebra(4), 0.0);
    EXPECT_EQ(r.block_size, 2);
    EXPECT_LT(opnorm(r.t - r.u), 1e-12);
    EXPECT_LE(r.achieved_cb, 1e-10);
    for (const auto& e : o.domain.basis()) EXPECT_LT(opnorm(r.psi(e) - o.phi(e)), 1e-10);
    EXPECT_TRUE(all_passed(r.certificates));
  }
}

TEST(PerturbOrderZero, RowContractionNeverExceedsOne) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const OzOracle o = oracle_order_zero({1, 2, 1}, {1, 1, 2}, 6, seed, 0.0);
    const PerturbResult r = perturb_order_zero(order_zero_from(o.pi, o.h), full_algebra(6), 0.0);
    EXPECT_LE(oracle::opnorm(r.t), 1.0 + 1e-10);
  }
}

TEST(PerturbOrderZero, DropsZeroBlocks) {
  const OzOracle o = oracle_order_zero({2, 1}, {1, 1}, 3, 6, 0.5);
  const LinMap killed = LinMap::from_function(o.domain, 3, [&](const CMatrix& x) {
    CMatrix y = x;
    y(2, 2) = 0;
    return o.phi(y);
  });
  const auto oz = is_order_zero(killed);
  ASSERT_TRUE(oz.has_value());
  const PerturbResult r = perturb_order_zero(*oz, full_algebra(3), 0.0);
  EXPECT_EQ(r.kept_blocks, std::vector<int>{0});
}

TEST(PerturbOrderZero, ConjugatedImageMeetsCeiling) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const OzOracle o = oracle_order_zero({2}, {1 + static_cast<int>(seed % 2)}, 4, seed, 0.2);
    const ConcreteAlgebra a = generate_algebra(o.phi.images(), 4);
    const CMatrix u = small_unitary(4, 1e-3 * (1 + seed % 5), 100 + seed);
    const ConcreteAlgebra b = conjugate(a, u);
    const double gamma = 2 * oracle::opnorm(u - identity(4));
    PerturbOptions opt;
    opt.seed = seed;
    const PerturbResult r = perturb_order_zero(order_zero_from(o.pi, o.h), b, gamma, opt);
    for (const auto& c : r.certificates) EXPECT_TRUE(c.passed()) << seed << " " << c.name << " " << c.achieved;
    EXPECT_LE(r.achieved_cb, perturb_ceiling(gamma) + 1e-10);
  }
}

TEST(PerturbOrderZero, CeilingValue) { EXPECT_NEAR(perturb_ceiling(0.01), 0.0406, 5e-5); }

TEST(NucDimDecomposition, FiniteDimensionalIdentity) {
  for (const auto& a : {block_algebra({2, 1}, 4), block_algebra({1, 1, 1}, 3), full_algebra(3)}) {
    const NucDimDecomposition dec = finite_dimensional_decomposition(a);
    EXPECT_EQ(dec.n, 0);
    EXPECT_LT(dec.defect, 1e-12);
    const Certificate c = verify_nucdim_decomposition(a, a.basis(), 1e-10, dec);
    EXPECT_TRUE(c.passed()) << c.note;
  }
}

TEST(NucDimDecomposition, SplitOfDiagonal) {
  const ConcreteAlgebra d = block_algebra({1, 1, 1}, 3);
  const NucDimDecomposition dec = split_decomposition(d, {0.3, 0.5, 1.0});
  EXPECT_EQ(dec.n, 1);
  EXPECT_TRUE(verify_nucdim_decomposition(d, {}, 1e-10, dec).passed());
}

TEST(NucDimDecomposition, BrokenUpMapIsNamed) {
  const ConcreteAlgebra d = block_algebra({1, 1, 1}, 3);
  NucDimDecomposition dec = split_decomposition(d, {0.5, 0.5, 0.5});
  dec.ups[1] = LinMap::from_function(dec.ups[1].domain(), 3,
                                     [](const CMatrix& y) { return CMatrix(y.trace() / 3.0 * identity(3)); });
  const Certificate c = verify_nucdim_decomposition(d, {}, 1e-10, dec);
  EXPECT_FALSE(c.passed());
  EXPECT_EQ(c.note.rfind("up map 1 not order zero", 0), 0u) << c.note;
}

TEST(NucDimDecomposition, BrokenDownMapIsNamed) {
  const ConcreteAlgebra a = full_algebra(2);
  NucDimDecomposition dec = finite_dimensional_decomposition(a);
  dec.down = LinMap::from_function(a, 2, [](const CMatrix& x) { return CMatrix(x.transpose()); });
  const Certificate c = verify_nucdim_decomposition(a, {}, 1e-10, dec);
  EXPECT_FALSE(c.passed());
  EXPECT_EQ(c.note.rfind("down map not cpc", 0), 0u) << c.note;
}

TEST(NucDimDecomposition, DefectAboveEpsilonIsNamed) {
  const ConcreteAlgebra d = block_algebra({1, 1}, 2);
  NucDimDecomposition dec = split_decomposition(d, {0.5, 0.5});
  dec.ups[1] = dec.ups[1].scaled(0.5);
  const Certificate c = verify_nucdim_decomposition(d, {}, 1e-3, dec);
  EXPECT_FALSE(c.passed());
  EXPECT_EQ(c.note, "defect exceeds epsilon");
}

TEST(NucDimTransfer, ContainedAlgebraStaysWithinEpsilon) {
  const ConcreteAlgebra d = block_algebra({2, 1}, 4);
  const NucDimDecomposition dec = finite_dimensional_decomposition(d);
  const TransferResult r = nucdim_cpc_transfer(d, dec, std::nullopt, d.basis(), full_algebra(4), 0.0, 1e-12);
  for (const auto& x : d.basis()) EXPECT_LT(opnorm(r.map(x) - x), 1e-10);
  EXPECT_TRUE(all_passed(r.certificates));
}

TEST(NucDimTransfer, CeilingValue) { EXPECT_NEAR(transfer_ceiling(1, 0.001), 0.016024, 5e-7); }

TEST(NucDimTransfer, SplitOfConjugatedCommutativeAlgebra) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    Rng rng(seed);
    const ConcreteAlgebra d = conjugate(block_algebra({1, 1, 1}, 4), rng.unitary(4));
    const CMatrix u = small_unitary(4, 1e-3, 200 + seed);
    const ConcreteAlgebra b = conjugate(d, u);
    const NucDimDecomposition dec = split_decomposition(d, {0.25, 0.5, 0.75});
    const double gamma = 2 * oracle::opnorm(u - identity(4));
    const TransferResult r = nucdim_cpc_transfer(d, dec, std::nullopt, d.basis(), b, gamma, dec.defect);
    for (const auto& c : r.certificates) EXPECT_TRUE(c.passed()) << seed << " " << c.name << " " << c.achieved;
    const ClassifyReport cr = classify(r.map);
    EXPECT_EQ(cr.flags.cpc, Tri::Yes);
  }
}

TEST(NearEmbedNucDim, InclusionIsKept) {
  const ConcreteAlgebra a = block_algebra({1, 1}, 3);
  const ConcreteAlgebra b = block_algebra({2, 1}, 3);
  IsoOptions o;
  o.track = Track::Experimental;
  const IsoResult r = near_embed_nucdim(a, b, 0.0, finite_dimensional_decomposition(a), a.basis(), o);
  for (const auto& x : a.basis()) EXPECT_LT(opnorm(r.map(x) - x), 1e-9);
  EXPECT_TRUE(all_passed(r.certificates));
}

TEST(NearEmbedNucDim, EtaAndCeilingValues) {
  const double eta = transfer_ceiling(0, 1e-6);
  EXPECT_NEAR(eta, 8e-6, 1e-10);
  EXPECT_NEAR(20 * std::sqrt(eta), 0.0566, 1e-4);
}

TEST(NearEmbedNucDim, ConjugatedFamilyPaperTrack) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    Rng rng(seed);
    const ConcreteAlgebra a = conjugate(block_algebra({2, 1}, 4), rng.unitary(4));
    const CMatrix u = small_unitary(4, 5e-8, 300 + seed);
    const ConcreteAlgebra b = conjugate(a, u);
    const double gamma = 2 * oracle::opnorm(u - identity(4));
    const IsoResult r = near_embed_nucdim(a, b, gamma, finite_dimensional_decomposition(a), a.basis());
    for (const auto& c : r.certificates) EXPECT_TRUE(c.passed()) << seed << " " << c.name << " " << c.achieved;
    EXPECT_GT(r.min_singular_value, 0.5);
  }
}

TEST(NearEmbedNucDim, PaperTrackRejectsLargeEta) {
  const ConcreteAlgebra a = full_algebra(2);
  EXPECT_THROW(near_embed_nucdim(a, a, 1e-3, finite_dimensional_decomposition(a), a.basis()), PreconditionError);
}

TEST(OrderZeroProjection, OrderZeroInputIsFixed) {
  const OzOracle o = oracle_order_zero({2, 1}, {1, 2}, 5, 7, 0.2);
  const ProjectionResult r = order_zero_projection(o.phi, 0.0);
  for (const auto& e : o.domain.basis()) EXPECT_LT(opnorm(r.map(e) - o.phi(e)), 1e-9);
  EXPECT_EQ(r.certificate.verdict, Verdict::Heuristic);
}

TEST(OrderZeroProjection, PerturbedMapIsRepaired) {
  const double gamma = 1e-8;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const OzOracle o = oracle_order_zero({2}, {1}, 4, seed, 0.3);
    const ConcreteAlgebra a = generate_algebra(o.phi.images(), 4);
    const CMatrix u = small_unitary(4, gamma / 2, 400 + seed);
    const PerturbResult p = perturb_order_zero(order_zero_from(o.pi, o.h), conjugate(a, u), gamma);
    const ProjectionResult r = order_zero_projection(p.psi, gamma);
    EXPECT_TRUE(is_order_zero(r.map.map, 1e-9).has_value());
    EXPECT_LT(r.certificate.achieved, 1e-3 * 493 * std::sqrt(gamma));
    EXPECT_EQ(r.certificate.verdict, Verdict::Heuristic);
  }
}

TEST(OrderZeroProjection, CeilingValue) { EXPECT_NEAR(493 * std::sqrt(1e-8), 0.0493, 1e-12); }
