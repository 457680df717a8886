#include "nearalg/lab/acceptance.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "nearalg/lab/instance.hpp"
#include "nearalg/lab/pipeline.hpp"
#include "nearalg/lab/serialize.hpp"
#include "nearalg/orderzero.hpp"

namespace nearalg {

namespace {

// Pinned tolerances of the acceptance run.
constexpr double kBoundSlack = 1e-9;       // polar and projection bounds
constexpr double kDilationTol = 1e-10;     // Stinespring residuals
constexpr double kUnitTol = 1e-12;         // m(w) = 1
constexpr double kCentralTol = 1e-11;      // sandwich centrality
constexpr double kRepairEps = 1e-8;        // requested defect of repaired maps
constexpr double kExactIntertwine = 1e-10;
constexpr double kDriftTol = 1e-11;
constexpr double kHomDefect = 1e-9;
constexpr double kImplementTol = 1e-8;
constexpr double kReproduceTol = 1e-10;
constexpr double kRoundoff = 1e-10;
constexpr double kPsdTol = 1e-9;
constexpr double kMu = 1e-6;

const double kSqrt2 = std::numbers::sqrt2;

/// Counts checks and keeps the first failure and the worst achieved/ceiling ratio.
struct Tally {
  int checks = 0;
  int failures = 0;
  double worst_ratio = 0.0;
  std::string first_failure;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok && failures++ == 0) first_failure = what;
  }
  void bound(const std::string& what, double achieved, double ceiling) {
    if (ceiling > 0.0 && std::isfinite(achieved)) worst_ratio = std::max(worst_ratio, achieved / ceiling);
    expect(achieved <= ceiling, what + ": " + format_double(achieved) + " > " + format_double(ceiling));
  }
  void certificates(const std::vector<Certificate>& cs, const std::string& ctx) {
    for (const auto& c : cs)
      expect(c.passed(), ctx + " certificate '" + c.name + "': " + format_double(c.achieved) + " > " +
                             format_double(c.ceiling) + (c.note.empty() ? "" : " (" + c.note + ")"));
  }
  std::string detail() const {
    std::ostringstream os;
    if (failures > 0)
      os << failures << "/" << checks << " checks failed, first: " << first_failure;
    else
      os << checks << " checks, worst ratio " << std::setprecision(3) << worst_ratio;
    return os.str();
  }
};

double choi_min_eigenvalue(const LinMap& phi) {
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& c : phi.choi_blocks()) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(c), Eigen::EigenvaluesOnly);
    lo = std::min(lo, es.eigenvalues().minCoeff());
  }
  return lo;
}

/// Image of the unit of the domain, the norm of a cp map.
double cp_norm(const LinMap& phi) { return opnorm(phi(phi.domain().support())); }

double distance_to(const ConcreteAlgebra& b, const CMatrix& y) { return opnorm(y - b.project(y)); }

CMatrix random_element(const ConcreteAlgebra& a, Rng& rng) {
  CMatrix x = CMatrix::Zero(a.ambient_dim(), a.ambient_dim());
  for (const auto& e : a.basis()) x += rng.complex_normal() * e;
  return x / opnorm(x);
}

/// Largest ||alpha(xy) - alpha(x)alpha(y)|| and ||alpha(x*) - alpha(x)*|| over basis pairs.
double homomorphism_defect(const LinMap& alpha) {
  const auto& basis = alpha.domain().basis();
  double worst = 0.0;
  for (const auto& x : basis) {
    worst = std::max(worst, opnorm(alpha(x.adjoint()) - alpha(x).adjoint()));
    for (const auto& y : basis) worst = std::max(worst, opnorm(alpha(x * y) - alpha(x) * alpha(y)));
  }
  return worst;
}

double max_deviation(const LinMap& alpha, const std::vector<CMatrix>& xs) {
  double worst = 0.0;
  for (const auto& x : xs) worst = std::max(worst, opnorm(alpha(x) - x));
  return worst;
}

SampleSpec small_spec(std::uint64_t seed) {
  SampleSpec s;
  s.random_selfadjoint = s.random_unitary = 12;
  s.seed = seed;
  s.iters = 300;
  return s;
}

IsoOptions experimental_iso(std::uint64_t seed) {
  IsoOptions o;
  o.track = Track::Experimental;
  o.mu = kMu;
  o.samples = small_spec(seed);
  return o;
}

void profiles_up_to(int limit, int max_part, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (!cur.empty()) out.push_back(cur);
  for (int p = std::min(limit, max_part); p >= 1; --p) {
    cur.push_back(p);
    profiles_up_to(limit - p, p, cur, out);
    cur.pop_back();
  }
}

/// Unital homomorphism Ad(u) mixed with a random ucp map at weight t.
LinMap noisy_homomorphism(const ConcreteAlgebra& a, double t, Rng& rng) {
  const int n = a.ambient_dim();
  const LinMap hom = conjugation_map(a, rng.unitary(n));
  return hom.scaled(1.0 - t) + random_ucp(a, n, 2, rng).scaled(t);
}

struct OzCase {
  LinMap pi;
  CMatrix h;
  LinMap phi;
};

/// pi(x) = U (sum_k x_k (x) 1_{m_k} + 0) U*, h = U (sum_k 1 (x) c_k + 0) U* with spec(c_k) in [floor, 1].
OzCase order_zero_case(const std::vector<int>& sizes, const std::vector<int>& mults, int n, double floor, Rng& rng) {
  const ConcreteAlgebra dom = realize(FDAlgebra{sizes});
  const CMatrix u = rng.unitary(n);
  CMatrix h = CMatrix::Zero(n, n);
  int pos = 0;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    const CMatrix v = rng.unitary(mults[k]);
    CMatrix d = CMatrix::Zero(mults[k], mults[k]);
    for (int i = 0; i < mults[k]; ++i) d(i, i) = floor + (1 - floor) * rng.uniform();
    const int w = sizes[k] * mults[k];
    h.block(pos, pos, w, w) = kron(identity(sizes[k]), v * d * v.adjoint());
    pos += w;
  }
  h = u * h * u.adjoint();
  const LinMap pi = LinMap::from_function(dom, n, [&](const CMatrix& x) {
    CMatrix y = CMatrix::Zero(n, n);
    int at = 0, in = 0;
    for (std::size_t k = 0; k < sizes.size(); ++k) {
      const int w = sizes[k] * mults[k];
      y.block(at, at, w, w) = kron(x.block(in, in, sizes[k], sizes[k]), identity(mults[k]));
      at += w;
      in += sizes[k];
    }
    return CMatrix(u * y * u.adjoint());
  });
  const LinMap phi = LinMap::from_function(dom, n, [&](const CMatrix& x) { return CMatrix(pi(x) * h); });
  return {pi, h, phi};
}

CMatrix small_unitary(int n, double scale, Rng& rng) { return unitary_exp(scale * rng.hermitian(n)); }

const InstanceParams kIsoFamily[] = {{"full:2", 4, 0}, {"blocks:2,1", 4, 0}, {"diag:3", 4, 0}};
const double kIsoEps[] = {1e-4, 1e-5, 1e-6};

// 1. Polar and projection conjugator bounds.
void polar_projection(std::uint64_t seed, Tally& t) {
  Rng rng = Rng::stream(seed, 101);
  for (int i = 0; i < 5000; ++i) {
    const int n = 2 + static_cast<int>(rng.uniform() * 15);
    const CMatrix g = rng.ginibre(n, n);
    const CMatrix x = identity(n) + 0.95 * rng.uniform() * g / opnorm(g);
    const UnitaryResult r = polar_unitary(x);
    const std::string ctx = "polar " + std::to_string(i);
    t.bound(ctx + " unitarity", opnorm(r.u.adjoint() * r.u - identity(n)), kBoundSlack);
    // u* x is positive for the polar part.
    const CMatrix m = r.u.adjoint() * x;
    t.bound(ctx + " u*x hermitian", opnorm(m - m.adjoint()), kBoundSlack);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(m), Eigen::EigenvaluesOnly);
    t.expect(es.eigenvalues().minCoeff() >= -kBoundSlack, ctx + " u*x not positive");
    t.bound(ctx + " distance", opnorm(r.u - identity(n)), kSqrt2 * opnorm(x - identity(n)) + kBoundSlack);
  }
  for (int i = 0; i < 5000; ++i) {
    const int n = 2 + static_cast<int>(rng.uniform() * 15);
    const int rank = static_cast<int>(rng.uniform() * (n + 1));
    const CMatrix w = rng.unitary(n);
    const CMatrix basis = w.leftCols(rank);
    const CMatrix p = basis * basis.adjoint();
    const CMatrix v = unitary_exp(0.45 * rng.uniform() * rng.hermitian(n));
    const CMatrix q = v * p * v.adjoint();
    const UnitaryResult r = projection_conjugator(p, q);
    const std::string ctx = "projection " + std::to_string(i);
    t.bound(ctx + " unitarity", opnorm(r.u.adjoint() * r.u - identity(n)), kBoundSlack);
    t.bound(ctx + " upu* = q", opnorm(r.u * p * r.u.adjoint() - q), kBoundSlack);
    t.bound(ctx + " distance", opnorm(r.u - identity(n)), kSqrt2 * opnorm(p - q) + kBoundSlack);
  }
}

// 2. Stinespring reconstruction and the defect identity.
void stinespring_dilations(std::uint64_t seed, Tally& t) {
  const std::vector<std::pair<std::vector<int>, int>> profiles = {
      {{2}, 3}, {{3}, 4}, {{2, 1}, 4}, {{1, 1, 1}, 3}, {{2, 2}, 5}};
  Rng rng = Rng::stream(seed, 102);
  for (const auto& [sizes, n] : profiles) {
    const ConcreteAlgebra a = realize(FDAlgebra{sizes});
    for (int i = 0; i < 100; ++i) {
      const LinMap phi = random_ucp(a, n, 1 + i % 3, rng);
      const Stinespring s = stinespring(phi);
      const std::string ctx = "profile " + std::to_string(sizes.size()) + "/" + std::to_string(sizes[0]) +
                              " map " + std::to_string(i);
      const CMatrix& v = s.isometry;
      t.bound(ctx + " isometry", opnorm(v.adjoint() * v - identity(n)), kDilationTol);
      double recon = 0.0;
      for (const auto& x : a.basis()) recon = std::max(recon, opnorm(s.compress(s.pi(x)) - phi(x)));
      t.bound(ctx + " reconstruction", recon, kDilationTol);
      double ident = 0.0;
      const CMatrix off = identity(s.dim()) - v * v.adjoint();
      for (int j = 0; j < 4; ++j) {
        const CMatrix x = random_element(a, rng);
        const CMatrix lhs = phi(x * x.adjoint()) - phi(x) * phi(x.adjoint());
        const CMatrix rhs = v.adjoint() * s.pi(x) * off * s.pi(x).adjoint() * v;
        ident = std::max(ident, opnorm(lhs - rhs));
      }
      t.bound(ctx + " defect identity", ident, kDilationTol);
      t.certificates({verify_stinespring(phi, s, a.basis(), kDilationTol)}, ctx);
    }
  }
}

// 3. Exact diagonals on every profile with total size at most 6.
void exact_diagonals(std::uint64_t, Tally& t) {
  std::vector<int> cur;
  std::vector<std::vector<int>> profiles;
  profiles_up_to(6, 6, cur, profiles);
  for (const auto& prof : profiles) {
    const FDAlgebra f{prof};
    const ConcreteAlgebra a = realize(f);
    const Diagonal d = exact_diagonal(f);
    std::string ctx = "profile";
    for (int k : prof) ctx += " " + std::to_string(k);
    t.bound(ctx + " m(w) = 1", opnorm(d.product() - a.support()), kUnitTol);
    // T(y) commutes with A for every matrix unit y of the ambient.
    const int n = a.ambient_dim();
    double central = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const CMatrix ty = d.sandwich(matrix_unit(n, i, j));
        for (const auto& x : a.basis()) central = std::max(central, opnorm(x * ty - ty * x));
      }
    t.bound(ctx + " centrality", central, kCentralTol);
    t.certificates({verify_diagonal(a, d, kUnitTol, kCentralTol)}, ctx);
  }
}

// 4. Repair of noisy homomorphisms on the paper track.
void repair_noisy(std::uint64_t seed, Tally& t) {
  const ConcreteAlgebra algebras[] = {block_algebra({2, 1}, 3), full_algebra(2)};
  for (int i = 0; i < 50; ++i) {
    Rng rng = Rng::stream(seed, 1000 + i);
    const ConcreteAlgebra& a = algebras[i % 2];
    const double noise = 0.002 + 0.0006 * i;
    const LinMap phi = noisy_homomorphism(a, noise, rng);
    const ImproveResult r = improve_multiplicativity(phi, nullptr, a.basis(), kRepairEps, Track::Paper);
    const std::string ctx = "seed " + std::to_string(i);
    t.bound(ctx + " measured defect", r.gamma, window::repair_defect);
    double defect = 0.0;
    for (const auto& x : a.basis())
      for (const auto& y : {x, CMatrix(x.adjoint())})
        defect = std::max(defect, opnorm(r.psi(y * y.adjoint()) - r.psi(y) * r.psi(y.adjoint())));
    t.bound(ctx + " repaired defect", defect, kRepairEps);
    double dist = 0.0;
    Rng probe = Rng::stream(seed, 2000 + i);
    for (int j = 0; j < 8; ++j) {
      const CMatrix x = random_element(a, probe);
      dist = std::max(dist, opnorm(phi(x) - r.psi(x)));
    }
    t.bound(ctx + " repair distance", dist, 8 * kSqrt2 * std::sqrt(r.gamma));
    t.expect(choi_min_eigenvalue(r.psi) >= -kPsdTol && cp_norm(r.psi) <= 1 + kPsdTol, ctx + " repaired map not cpc");
    t.certificates(r.certificates, ctx);
  }
}

// 5. Intertwining unitaries for exact and approximate homomorphisms.
void intertwiners(std::uint64_t seed, Tally& t) {
  const ConcreteAlgebra a = block_algebra({2, 1}, 3);
  for (int i = 0; i < 100; ++i) {
    const bool exact = i < 50;
    Rng rng = Rng::stream(seed, 3000 + i);
    const LinMap phi1 = conjugation_map(a, rng.unitary(3));
    const CMatrix v = small_unitary(3, 0.002 * (1 + i % 5), rng);
    LinMap phi2 = compose(conjugation_map(full_algebra(3), v.adjoint()), phi1);
    if (!exact) phi2 = phi2.scaled(1.0 - 1e-4 * (1 + i % 5)) + random_ucp(a, 3, 2, rng).scaled(1e-4 * (1 + i % 5));
    const IntertwineResult r = intertwining_unitary(phi1, phi2, nullptr, a.basis(), exact ? kExactIntertwine : 1.0,
                                                    Track::Paper);
    const std::string ctx = (exact ? "exact seed " : "approximate seed ") + std::to_string(i % 50);
    const double du = opnorm(r.u - identity(3));
    t.bound(ctx + " unitarity", opnorm(r.u.adjoint() * r.u - identity(3)), kRoundoff);
    if (exact) {
      double rel = 0.0;
      for (const auto& x : a.basis()) rel = std::max(rel, opnorm(phi1(x) - r.u * phi2(x) * r.u.adjoint()));
      t.bound(ctx + " intertwining residual", rel, kExactIntertwine);
      t.bound(ctx + " distance", du, 2 * kSqrt2 * r.gamma + 5 * kSqrt2 * r.delta + kRoundoff);
      t.bound(ctx + " defect of exact maps", r.delta, kRoundoff);
    } else {
      t.bound(ctx + " distance", du, 2 * kSqrt2 * r.gamma + 5 * kSqrt2 * r.delta);
    }
    t.certificates(r.certificates, ctx);
  }
}

// 6. Close isomorphisms on conjugation instances.
void close_isomorphisms(std::uint64_t seed, Tally& t) {
  for (const auto& family : kIsoFamily)
    for (double eps : kIsoEps)
      for (int s = 0; s < 20; ++s) {
        InstanceParams params = family;
        params.eps = eps;
        const Instance inst = gen_instance(Recipe::Conjugation, params, seed * 1000 + s);
        const DistanceInterval d = kk_distance(inst.a, inst.b, small_spec(inst.seed));
        const IsoResult iso =
            close_isomorphism(inst.a, inst.b, d, inst.a.basis(), inst.b.basis(), experimental_iso(inst.seed));
        const std::string ctx = inst.id;
        t.expect(iso.converged, ctx + " did not converge");
        t.expect(!iso.trace.empty() && iso.trace.back().drift.has_value(), ctx + " no drift recorded");
        if (!iso.trace.empty() && iso.trace.back().drift) t.bound(ctx + " basis drift", *iso.trace.back().drift, kDriftTol);
        t.bound(ctx + " homomorphism defect", homomorphism_defect(iso.map), kHomDefect);
        t.expect(iso.image().dim() == inst.b.dim(), ctx + " not onto B");
        const double dev = max_deviation(iso.map, inst.a.basis());
        t.bound(ctx + " intertwined distance", dev, 8 * std::sqrt(6.0) * std::sqrt(iso.eta) + iso.eta + kMu);
        const double ceiling = 28 * std::sqrt(d.hi);
        t.bound(ctx + " forward", dev, ceiling);
        double back = 0.0;
        for (const auto& y : inst.b.basis()) back = std::max(back, opnorm(iso.preimage(y) - y));
        t.bound(ctx + " inverse", back, ceiling);
        t.certificates(iso.certificates, ctx);
      }
}

// 7. Unitary implementation of the isomorphisms.
void unitary_implementation(std::uint64_t seed, Tally& t) {
  for (int s = 0; s < 20; ++s) {
    InstanceParams params = kIsoFamily[s % 3];
    params.eps = kIsoEps[(s / 3) % 3];
    const Instance inst = gen_instance(Recipe::Conjugation, params, seed * 1000 + 500 + s);
    const DistanceInterval d = kk_distance(inst.a, inst.b, small_spec(inst.seed));
    const IsoResult iso =
        close_isomorphism(inst.a, inst.b, d, inst.a.basis(), inst.b.basis(), experimental_iso(inst.seed));
    const ImplementResult r = implement_unitarily(iso.map, &inst.b, Track::Experimental);
    const std::string ctx = inst.id;
    const int n = inst.a.ambient_dim();
    double conj = 0.0, sub = 0.0;
    for (const auto& x : inst.a.basis()) {
      const CMatrix y = r.u * x * r.u.adjoint();
      conj = std::max(conj, opnorm(y - iso.map(x)));
      sub = std::max(sub, distance_to(inst.b, y));
    }
    for (const auto& y : inst.b.basis()) sub = std::max(sub, distance_to(inst.a, r.u.adjoint() * y * r.u));
    t.bound(ctx + " unitarity", opnorm(r.u.adjoint() * r.u - identity(n)), kRoundoff);
    t.bound(ctx + " conjugation residual", conj, kImplementTol);
    t.bound(ctx + " subspace equality", sub, kImplementTol);
    t.bound(ctx + " distance", opnorm(r.u - identity(n)),
            2 * kSqrt2 * max_deviation(iso.map, inst.a.basis()) + kRoundoff);
    t.certificates(r.certificates, ctx);
  }
}

// 8. Perturbation of order-zero maps.
void order_zero_perturbation(std::uint64_t seed, Tally& t) {
  for (int s = 0; s < 50; ++s) {
    Rng rng = Rng::stream(seed, 4000 + s);
    const OzCase oz = s % 2 == 0 ? order_zero_case({2}, {1 + (s / 2) % 2}, 4, 0.2, rng)
                                 : order_zero_case({1, 1}, {1, 2}, 4, 0.2, rng);
    const ConcreteAlgebra a = generate_algebra(oz.phi.images(), 4);
    const CMatrix u = small_unitary(4, 1e-3 * (1 + s % 5), rng);
    const ConcreteAlgebra b = conjugate(a, u);
    const double gamma = 2 * opnorm(u - identity(4));
    PerturbOptions opt;
    opt.seed = static_cast<std::uint64_t>(s);
    const PerturbResult r = perturb_order_zero(order_zero_from(oz.pi, oz.h), b, gamma, opt);
    const std::string ctx = "seed " + std::to_string(s);
    t.bound(ctx + " cb distance", cb_bracket(oz.phi - r.psi, 16, opt.seed).hi, perturb_ceiling(gamma) + kRoundoff);
    t.expect(choi_min_eigenvalue(r.psi) >= -kPsdTol, ctx + " psi not cp");
    double range = 0.0;
    for (const auto& x : oz.phi.domain().basis()) range = std::max(range, distance_to(b, r.psi(x)));
    t.bound(ctx + " range", range, kPsdTol);
    t.certificates(r.certificates, ctx);
    if (s < 10) {
      const PerturbResult z = perturb_order_zero(order_zero_from(oz.pi, oz.h), a, 0.0, opt);
      double rep = 0.0;
      for (const auto& x : oz.phi.domain().basis()) rep = std::max(rep, opnorm(z.psi(x) - oz.phi(x)));
      t.bound(ctx + " reproduction at gamma = 0", rep, kReproduceTol);
    }
  }
}

// 9. Transfer through decompositions with n = 0 and n = 1 and the resulting embedding.
void nucdim_transfer(std::uint64_t seed, Tally& t) {
  for (int s = 0; s < 20; ++s) {
    Rng rng = Rng::stream(seed, 5000 + s);
    const bool split = s % 2 == 1;
    const ConcreteAlgebra a = conjugate(split ? block_algebra({1, 1, 1}, 4) : block_algebra({2, 1}, 4), rng.unitary(4));
    const CMatrix u = small_unitary(4, 1e-4 * (1 + s % 5), rng);
    const ConcreteAlgebra b = conjugate(a, u);
    const double gamma = 2 * opnorm(u - identity(4));
    const NucDimDecomposition dec =
        split ? split_decomposition(a, {0.25, 0.5, 0.75}) : finite_dimensional_decomposition(a);
    const std::string ctx = std::string(split ? "n = 1" : "n = 0") + " seed " + std::to_string(s);
    t.certificates({verify_nucdim_decomposition(a, a.basis(), 1e-10, dec)}, ctx + " decomposition");
    PerturbOptions po;
    po.seed = static_cast<std::uint64_t>(s);
    const TransferResult tr = nucdim_cpc_transfer(a, dec, std::nullopt, a.basis(), b, gamma, dec.defect, po);
    t.expect(choi_min_eigenvalue(tr.map) >= -kPsdTol && cp_norm(tr.map) <= 1 + kPsdTol, ctx + " transfer not cpc");
    t.bound(ctx + " transfer distance", max_deviation(tr.map, a.basis()),
            transfer_ceiling(dec.n, gamma) + dec.defect + kRoundoff);
    t.certificates(tr.certificates, ctx + " transfer");
    const IsoResult emb = near_embed_nucdim(a, b, gamma, dec, a.basis(), experimental_iso(po.seed));
    const double eta = transfer_ceiling(dec.n, gamma) + dec.defect;
    t.bound(ctx + " embedding distance", max_deviation(emb.map, a.basis()), 20 * std::sqrt(eta));
    t.bound(ctx + " embedding defect", homomorphism_defect(emb.map), kHomDefect);
    double range = 0.0;
    for (const auto& x : a.basis()) range = std::max(range, distance_to(b, emb.map(x)));
    t.bound(ctx + " embedding range", range, kHomDefect);
    t.certificates(emb.certificates, ctx + " embedding");
  }
}

// 10. Negative controls.
void negative_controls(std::uint64_t, Tally& t) {
  const ConcreteAlgebra m2 = full_algebra(2);
  const LinMap transpose = LinMap::from_function(m2, 2, [](const CMatrix& x) { return CMatrix(x.transpose()); });
  t.bound("transpose Choi spectrum", choi_min_eigenvalue(transpose), -0.5);
  t.expect(classify(transpose).flags.cp == Tri::No, "transpose classified as cp");

  {
    const ConcreteAlgebra d = block_algebra({1, 1, 1}, 3);
    NucDimDecomposition dec = split_decomposition(d, {0.5, 0.5, 0.5});
    dec.ups[1] = LinMap::from_function(dec.ups[1].domain(), 3,
                                       [](const CMatrix& y) { return CMatrix(y.trace() / 3.0 * identity(3)); });
    const Certificate c = verify_nucdim_decomposition(d, d.basis(), 1e-10, dec);
    t.expect(!c.passed() && c.note.rfind("up map 1 not order zero", 0) == 0,
             "broken up map reported as '" + c.note + "'");
  }
  {
    NucDimDecomposition dec = finite_dimensional_decomposition(m2);
    dec.down = transpose;
    const Certificate c = verify_nucdim_decomposition(m2, m2.basis(), 1e-10, dec);
    t.expect(!c.passed() && c.note.rfind("down map not cpc", 0) == 0, "broken down map reported as '" + c.note + "'");
  }
  {
    const LinMap depolarize = LinMap::from_function(m2, 2, [](const CMatrix& x) {
      return CMatrix(x.trace() / 2.0 * identity(2));
    });
    const LinMap ext = ucp_extension(depolarize.with_unit(identity(2)), Unitization::Tilde);
    const double gamma = mult_defect(depolarize, diagonal_set(exact_diagonal(ext.domain()))).sup;
    t.expect(gamma > window::repair_defect, "depolarizing defect " + format_double(gamma) + " inside the window");
    bool rejected = false;
    try {
      improve_multiplicativity(depolarize, nullptr, m2.basis(), kRepairEps, Track::Paper);
    } catch (const PreconditionError&) {
      rejected = true;
    }
    t.expect(rejected, "paper track accepted a defect above 1/17");
  }
}

/// Certificates of a small fixed suite serialized to JSON.
std::string certificate_bytes(std::uint64_t seed) {
  Json out = Json::array();
  PipelineOptions po;
  po.samples = small_spec(seed);
  ToleranceBudget budget;
  budget.track = Track::Experimental;
  for (int s = 0; s < 3; ++s) {
    InstanceParams params = kIsoFamily[s];
    params.eps = 1e-5;
    const Instance inst = gen_instance(Recipe::Conjugation, params, seed * 1000 + 900 + s);
    for (Pipeline p : {Pipeline::Dist, Pipeline::Unitary, Pipeline::OzPerturb}) {
      const Report rep = run_pipeline(inst, p, budget, po);
      for (const auto& c : rep.certificates) out.push_back(to_json(c));
    }
  }
  Rng rng = Rng::stream(seed, 6000);
  const OzCase oz = order_zero_case({2}, {2}, 4, 0.2, rng);
  const ConcreteAlgebra a = generate_algebra(oz.phi.images(), 4);
  const PerturbResult r =
      perturb_order_zero(order_zero_from(oz.pi, oz.h), conjugate(a, small_unitary(4, 1e-3, rng)), 4e-3);
  for (const auto& c : r.certificates) out.push_back(to_json(c));
  return dump_json(out);
}

// 11. Byte-identical certificates across reruns.
void determinism(std::uint64_t seed, Tally& t) {
  const std::string first = certificate_bytes(seed);
  const std::string second = certificate_bytes(seed);
  t.expect(!first.empty() && first == second, "certificate bytes differ between runs");
  t.expect(certificate_bytes(seed + 1) != first, "a different seed gave identical certificates");
}

struct Criterion {
  int id;
  const char* title;
  double budget_seconds;
  void (*run)(std::uint64_t, Tally&);
};

const Criterion kCriteria[] = {
    {1, "polar and projection bounds", 30, polar_projection},
    {2, "stinespring dilation", 30, stinespring_dilations},
    {3, "exact diagonals", 10, exact_diagonals},
    {4, "repair of noisy homomorphisms", 120, repair_noisy},
    {5, "intertwining unitaries", 60, intertwiners},
    {6, "close isomorphisms", 180, close_isomorphisms},
    {7, "unitary implementation", 60, unitary_implementation},
    {8, "order-zero perturbation", 120, order_zero_perturbation},
    {9, "nuclear dimension transfer", 180, nucdim_transfer},
    {10, "negative controls", 10, negative_controls},
    {11, "determinism", 60, determinism},
};

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt,
                                            const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<CriterionResult> out;
  for (const auto& c : kCriteria) {
    if (!opt.only.empty() && std::find(opt.only.begin(), opt.only.end(), c.id) == opt.only.end()) continue;
    CriterionResult r;
    r.id = c.id;
    r.title = c.title;
    r.budget_seconds = c.budget_seconds;
    Tally tally;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(opt.seed, tally);
    } catch (const std::exception& e) {
      tally.expect(false, std::string("exception: ") + e.what());
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.passed = tally.failures == 0 && r.seconds < r.budget_seconds;
    r.detail = tally.detail();
    if (r.seconds >= r.budget_seconds) r.detail += "; over the runtime budget";
    if (on_result) on_result(r);
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_line(const CriterionResult& r) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << (r.passed ? "[PASS] " : "[FAIL] ") << r.id << " " << r.title << ": " << r.detail << " (" << r.seconds
     << " s of " << r.budget_seconds << " s)";
  return os.str();
}

}  // namespace nearalg
