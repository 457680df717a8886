#include "nearalg/intertwine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace nearalg {

namespace {

constexpr double kRoundoff = tol::roundoff;

/// Columns are the vectorized images of the domain basis.
CMatrix action_matrix(const LinMap& m) {
  const int n = m.codomain_dim();
  CMatrix out(static_cast<Eigen::Index>(n) * n, static_cast<Eigen::Index>(m.images().size()));
  for (std::size_t i = 0; i < m.images().size(); ++i)
    out.col(static_cast<Eigen::Index>(i)) = Eigen::Map<const CVector>(m.images()[i].data(), n * n);
  return out;
}

/// Z u Z* u {z z*}.
std::vector<CMatrix> stage_set(const std::vector<CMatrix>& z) {
  std::vector<CMatrix> out = z;
  for (const auto& x : z) out.push_back(x.adjoint());
  for (const auto& x : z) out.push_back(x * x.adjoint());
  return out;
}

/// Largest defect of a map as a *-homomorphism over pairs of basis elements.
double homomorphism_defect(const LinMap& m) {
  const auto& basis = m.domain().basis();
  double worst = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    worst = std::max(worst, opnorm(m(basis[i].adjoint()) - m.images()[i].adjoint()));
    for (std::size_t j = 0; j < basis.size(); ++j)
      worst = std::max(worst, opnorm(m(basis[i] * basis[j]) - m.images()[i] * m.images()[j]));
  }
  return worst;
}

double max_deviation(const LinMap& m, const std::vector<CMatrix>& xs) {
  double worst = 0.0;
  for (const auto& x : xs) worst = std::max(worst, opnorm(m(x) - x));
  return worst;
}

std::string block_data(const ConcreteAlgebra& a) {
  std::ostringstream os;
  os << "blocks";
  for (const auto& s : a.structure().summands) os << " " << s.size << "x" << s.multiplicity;
  return os.str();
}

}  // namespace

ConcreteAlgebra IsoResult::image() const { return generate_algebra(map.images(), map.codomain_dim()); }

CMatrix IsoResult::preimage(const CMatrix& y) const {
  const CMatrix act = action_matrix(map);
  const int n = map.codomain_dim();
  const CVector rhs = Eigen::Map<const CVector>(y.data(), static_cast<Eigen::Index>(n) * n);
  const CVector c = act.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(rhs);
  return map.domain().span().combine(c);
}

CpcProducer arveson_producer(const ConcreteAlgebra& a, const ConcreteAlgebra& b) {
  return [a, b](const std::vector<CMatrix>&) {
    return LinMap::from_function(a, b.ambient_dim(), [&](const CMatrix& x) { return b.project(x); }, b.support());
  };
}

IsoResult intertwining_iso(const ConcreteAlgebra& a, const ConcreteAlgebra& b, const std::vector<CMatrix>& xa,
                           const CpcProducer& producer, const IsoOptions& opt) {
  if (a.ambient_dim() != b.ambient_dim()) throw PreconditionError("intertwining_iso: ambient dimension mismatch");
  const int n = a.ambient_dim();
  std::vector<CMatrix> checks = a.basis();
  checks.insert(checks.end(), xa.begin(), xa.end());
  std::vector<CMatrix> z = checks;

  std::optional<LinMap> alpha;
  std::vector<CMatrix> conjugators;
  std::vector<StageRow> trace;
  CMatrix accumulated = identity(n);
  double eta = 0.0;
  int quiet = 0;
  bool converged = false;
  for (int stage = 1; stage <= opt.max_iter && !converged; ++stage) {
    const std::vector<CMatrix> zp = stage_set(z);
    const LinMap phi = producer(zp);
    StageRow row;
    row.stage = stage;
    row.z_size = static_cast<int>(zp.size());
    row.eta = max_deviation(phi, zp);
    eta = std::max(eta, row.eta);
    if (opt.track == Track::Paper && !(row.eta < window::iso_eta)) {
      std::ostringstream os;
      os << "intertwining_iso: stage " << stage << " has eta " << row.eta << " outside the paper-track window";
      throw PreconditionError(os.str());
    }
    ImproveResult imp = improve_multiplicativity(phi, &b, checks, opt.eps, opt.track);
    row.defect = imp.gamma;
    LinMap theta = imp.psi.with_unit(b.support());
    if (!alpha) {
      alpha = theta;
    } else {
      const IntertwineResult iu = intertwining_unitary(*alpha, theta, &b, checks, opt.eps, opt.track);
      LinMap next = compose(conjugation_map(full_algebra(n), iu.u), theta).with_unit(b.support());
      double drift = 0.0;
      for (const auto& x : checks) drift = std::max(drift, opnorm(next(x) - (*alpha)(x)));
      row.drift = drift;
      conjugators.push_back(iu.u);
      accumulated = iu.u * accumulated;
      alpha = std::move(next);
      quiet = drift < opt.conv ? quiet + 1 : 0;
      converged = quiet >= 2;
    }
    trace.push_back(row);
    if (opt.surjective && !converged) {
      // Pull the basis of B back through the accumulated conjugators into A.
      for (const auto& y : b.basis()) {
        CMatrix x = a.project(accumulated.adjoint() * y * accumulated);
        const double nx = opnorm(x);
        if (nx > 1.0) x /= nx;
        if (nx > tol::alg) z.push_back(x);
      }
    }
  }
  if (!converged) {
    std::ostringstream os;
    os << "intertwining_iso: no convergence within " << opt.max_iter << " stages";
    if (!trace.empty() && trace.back().drift) os << "; last drift " << *trace.back().drift;
    throw NumericalError(os.str());
  }

  IsoResult res{*alpha, std::move(conjugators), std::move(trace), {}, eta, 0.0, true};
  const LinMap& m = res.map;
  const Track track = opt.track;
  const double ceiling = 8 * std::sqrt(6.0) * std::sqrt(eta) + eta + opt.mu;
  const std::vector<std::pair<std::string, double>> inputs = {{"eta", eta}, {"mu", opt.mu}};
  res.certificates.push_back(bound_certificate("intertwined distance", "||alpha(x) - x|| <= 8 sqrt(6) eta^(1/2) + eta + mu",
                                               inputs, ceiling + kRoundoff, max_deviation(m, xa), track));
  res.certificates.push_back(bound_certificate("homomorphism defect", "||alpha(xy) - alpha(x)alpha(y)|| <= tol", {},
                                               tol::alg, homomorphism_defect(m), track));
  double retention = 0.0;
  for (const auto& x : checks) retention = std::max(retention, opnorm(x) - opnorm(m(x)));
  res.certificates.push_back(bound_certificate("norm retention", "||x|| - ||alpha(x)|| <= 8 sqrt(6) eta^(1/2) + eta + mu",
                                               inputs, ceiling + kRoundoff, retention, track));
  const CMatrix act = action_matrix(m);
  const RVector sv = act.jacobiSvd().singularValues();
  res.min_singular_value = sv.size() ? sv(sv.size() - 1) : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) rank += sv(i) > tol::rank * std::max(1.0, sv(0));
  res.certificates.push_back(bound_certificate("injectivity", "dim A - rank(alpha) <= 0",
                                               {{"min_singular_value", res.min_singular_value}}, 0.0,
                                               static_cast<double>(a.dim() - rank), track));
  double range = 0.0;
  for (const auto& y : m.images()) range = std::max(range, b.span().residual(y));
  res.certificates.push_back(bound_certificate("range", "alpha(A) inside B", {}, tol::alg, range, track));

  if (opt.surjective) {
    const NearInclusionCert back = near_inclusion(b, a, opt.samples);
    res.certificates.push_back(bound_certificate("reverse near inclusion", "B inside the 1/5-neighbourhood of A",
                                                 {{"gamma_lo", back.gamma_lo}}, window::surjective_gamma,
                                                 back.gamma_hi, track));
    const ConcreteAlgebra img = res.image();
    Certificate c = bound_certificate("surjectivity", "|dim B - dim alpha(A)| <= 0", {}, 0.0,
                                      std::abs(static_cast<double>(b.dim() - img.dim())), track);
    try {
      const NearInclusionCert b_in_img = near_inclusion(b, img, opt.samples);
      c.inputs.push_back({"gamma_b_in_image", b_in_img.gamma_hi});
      equality_criterion(img, b, b_in_img);
    } catch (const CertificateContradiction& e) {
      c.verdict = Verdict::Fail;
      c.note = e.what();
    } catch (const PreconditionError& e) {
      c.note = e.what();
    }
    res.certificates.push_back(c);
  }
  return res;
}

IsoResult close_isomorphism(const ConcreteAlgebra& a, const ConcreteAlgebra& b, const DistanceInterval& dist,
                            const std::vector<CMatrix>& xs, const std::vector<CMatrix>& ys, const IsoOptions& opt) {
  const double gamma = dist.hi;
  if (opt.track == Track::Paper && !(gamma < window::close_gamma))
    throw PreconditionError("close_isomorphism: distance outside the paper-track window");
  std::vector<CMatrix> xa = xs;
  for (const auto& y : ys) xa.push_back(nearest_in_ball(y, a).witness);
  IsoOptions o = opt;
  o.surjective = true;
  IsoResult res = intertwining_iso(a, b, xa, arveson_producer(a, b), o);

  const double ceiling = 28 * std::sqrt(gamma) + kRoundoff;
  res.certificates.push_back(bound_certificate("close isomorphism", "||theta(x) - x|| <= 28 gamma^(1/2)",
                                               {{"gamma", gamma}}, ceiling, max_deviation(res.map, xs), opt.track));
  double inv = 0.0, solve = 0.0;
  for (const auto& y : ys) {
    const CMatrix x = res.preimage(y);
    inv = std::max(inv, opnorm(x - y));
    solve = std::max(solve, opnorm(res.map(x) - y));
  }
  Certificate c = bound_certificate("close isomorphism inverse", "||theta^(-1)(y) - y|| <= 28 gamma^(1/2)",
                                    {{"gamma", gamma}, {"preimage_residual", solve}}, ceiling, inv, opt.track);
  if (solve > tol::alg) {
    c.verdict = Verdict::Fail;
    c.note = "preimage does not solve theta(x) = y";
  }
  res.certificates.push_back(c);
  return res;
}

IsoResult near_embedding_nuclear(const ConcreteAlgebra& a, const ConcreteAlgebra& b, double gamma,
                                 const std::vector<CMatrix>& xs, const IsoOptions& opt) {
  if (opt.track == Track::Paper && !(gamma < window::close_gamma))
    throw PreconditionError("near_embedding_nuclear: constant outside the paper-track window");
  IsoOptions o = opt;
  o.surjective = false;
  IsoResult res = intertwining_iso(a, b, xs, arveson_producer(a, b), o);
  res.certificates.push_back(bound_certificate("near embedding", "||theta(x) - x|| <= 28 gamma^(1/2)",
                                               {{"gamma", gamma}}, 28 * std::sqrt(gamma) + kRoundoff,
                                               max_deviation(res.map, xs), opt.track));
  return res;
}

CMatrix flip_unitary(const ConcreteAlgebra& a) {
  const BlockStructure& s = a.structure();
  if (s.summands.size() != 1) throw PreconditionError("flip_unitary: algebra is not a single matrix block");
  const int k = s.summands[0].size;
  const int n = a.ambient_dim();
  CMatrix v = CMatrix::Zero(n * n, n * n);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) v += kron(s.unit(0, i, j), s.unit(0, j, i));
  return v;
}

HalfFlipResult half_flip_cpc(const ConcreteAlgebra& a, const ConcreteAlgebra& b, double gamma,
                             const std::vector<CMatrix>& xs, Track track) {
  if (a.ambient_dim() != b.ambient_dim()) throw PreconditionError("half_flip_cpc: ambient dimension mismatch");
  if (track == Track::Paper && !(gamma < 0.5)) throw PreconditionError("half_flip_cpc: constant not below 1/2");
  const int n = a.ambient_dim();
  const CMatrix v = flip_unitary(a);
  const CMatrix& ea = a.support();

  const CMatrix near_unit = hermitian_part(nearest_in_ball(ea, b).witness);
  const CMatrix p = spectral_projection(near_unit, 0.5, 2.0);
  const double dp = opnorm(p - ea);
  if (!(dp < 1.0)) throw NumericalError("half_flip_cpc: no projection of B near the unit of A");
  const UnitaryResult conj = projection_conjugator(p, ea);
  const CMatrix& u = conj.u;

  std::vector<CMatrix> gens;
  for (const auto& y : b.basis()) gens.push_back(u * p * y * p * u.adjoint());
  const ConcreteAlgebra b0 = generate_algebra(gens, n);

  Subspace tensor_span(n * n, n * n);
  for (const auto& y : b0.basis())
    for (const auto& x : a.basis()) tensor_span.add(kron(y, x));
  const BlockStructure& s = a.structure();
  const int k = s.summands[0].size;
  CMatrix assembled = CMatrix::Zero(n * n, n * n);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) assembled += kron(nearest_in_ball(s.unit(0, i, j), b0).witness, s.unit(0, j, i));
  NearestOptions o;
  o.warm_starts.push_back(assembled);
  const NearestResult wr = nearest_in_ball(v, tensor_span, o);
  const CMatrix& w = wr.witness;

  // Vector state on A supported on the first minimal projection.
  const CVector xi = range_basis(s.unit(0, 0, 0)).col(0);
  const CMatrix slice = kron(identity(n), CMatrix(xi));
  const CMatrix lifted_unit = ea;
  LinMap phi = LinMap::from_function(
      a, n,
      [&](const CMatrix& x) {
        const CMatrix inner = w * kron(lifted_unit, x) * w.adjoint();
        return CMatrix(u.adjoint() * (slice.adjoint() * inner * slice) * u);
      },
      b.support());

  HalfFlipResult res{phi, p, u, opnorm(v - w), {}};
  const double alpha = (4 * std::sqrt(2.0) + 1) * gamma + 4 * std::sqrt(2.0) * gamma * gamma;
  res.certificates.push_back(bound_certificate(
      "half flip", "||phi(x) - x|| <= 8 alpha + 4 alpha^2 + 4 sqrt(2) gamma, alpha = (4 sqrt(2) + 1) gamma + 4 sqrt(2) gamma^2",
      {{"gamma", gamma}, {"alpha", alpha}, {"flip_distance", res.flip_distance}, {"unit_distance", dp}},
      8 * alpha + 4 * alpha * alpha + 4 * std::sqrt(2.0) * gamma + kRoundoff, max_deviation(phi, xs), track));
  res.certificates.push_back(bound_certificate("unit projection", "||p - e_A|| <= 2 gamma", {{"gamma", gamma}},
                                               2 * gamma + kRoundoff, dp, track));
  double range = 0.0;
  for (const auto& y : phi.images()) range = std::max(range, b.span().residual(y));
  res.certificates.push_back(bound_certificate("range", "phi(A) inside B", {}, tol::alg, range, track));
  const ClassifyReport cr = classify(phi);
  res.certificates.push_back(bound_certificate("contractive", "phi is cpc", {{"min_choi_eigenvalue", cr.min_choi_eigenvalue}},
                                               0.0, cr.flags.cpc == Tri::Yes ? 0.0 : 1.0, track));
  return res;
}

ImplementResult implement_unitarily(const LinMap& alpha, const ConcreteAlgebra* target, Track track) {
  const ConcreteAlgebra& a = alpha.domain();
  const int n = a.ambient_dim();
  if (alpha.codomain_dim() != n) throw PreconditionError("implement_unitarily: ambient dimension mismatch");
  if (homomorphism_defect(alpha) > tol::alg) throw PreconditionError("implement_unitarily: map is not a *-homomorphism");

  IntertwineResult iu;
  try {
    iu = intertwining_unitary(alpha, inclusion_map(a), nullptr, a.basis(), tol::alg, track);
  } catch (const NumericalError&) {
    throw NumericalError("implement_unitarily: no near-identity implementation (" + block_data(a) + ")");
  }
  ImplementResult res;
  res.u = iu.u;
  res.basis_deviation = max_deviation(alpha, a.basis());
  res.diagonal_deviation = iu.gamma;
  for (const auto& x : a.basis())
    res.conjugation_residual = std::max(res.conjugation_residual, opnorm(res.u * x * res.u.adjoint() - alpha(x)));
  const ConcreteAlgebra image = target ? *target : generate_algebra(alpha.images(), n);
  double sub = image.dim() == a.dim() ? 0.0 : 1.0;
  for (const auto& x : a.basis()) sub = std::max(sub, image.span().residual(res.u * x * res.u.adjoint()));
  for (const auto& y : image.basis()) sub = std::max(sub, a.span().residual(res.u.adjoint() * y * res.u));
  res.subspace_residual = sub;

  const double du = opnorm(res.u - identity(n));
  const double r2 = 2 * std::sqrt(2.0);
  res.certificates.push_back(bound_certificate("implementing unitary", "||u - 1|| <= 2 sqrt(2) gamma",
                                               {{"gamma", res.diagonal_deviation}},
                                               r2 * res.diagonal_deviation + kRoundoff, du, track));
  res.certificates.push_back(bound_certificate("implementing unitary on basis",
                                               "||u - 1|| <= 2 sqrt(2) max ||alpha(x) - x|| over the basis",
                                               {{"basis_deviation", res.basis_deviation}},
                                               r2 * res.basis_deviation + kRoundoff, du, track));
  res.certificates.push_back(bound_certificate("conjugation", "||u x u* - alpha(x)|| <= tol", {}, tol::alg,
                                               res.conjugation_residual, track));
  res.certificates.push_back(bound_certificate("subspace equality", "u A u* = B", {}, 10 * tol::alg,
                                               res.subspace_residual, track));
  res.certificates.push_back(bound_certificate("unitarity", "||u* u - 1|| <= 1e-12", {}, tol::exact,
                                               opnorm(res.u.adjoint() * res.u - identity(n)), track));
  return res;
}

UnitaryResult unit_match(const ConcreteAlgebra& a, const ConcreteAlgebra& b, double gamma, Track track) {
  if (a.ambient_dim() != b.ambient_dim()) throw PreconditionError("unit_match: ambient dimension mismatch");
  if (track == Track::Paper && !(gamma < window::unit_match_gamma))
    throw PreconditionError("unit_match: distance not below 1/4");
  UnitaryResult r = projection_conjugator(a.support(), b.support());
  r.certificate = bound_certificate("unit match", "||u - 1|| <= 2 sqrt(2) gamma", {{"gamma", gamma}},
                                    2 * std::sqrt(2.0) * gamma + kRoundoff,
                                    opnorm(r.u - identity(a.ambient_dim())), track);
  return r;
}

}  // namespace nearalg
