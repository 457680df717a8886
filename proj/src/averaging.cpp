#include "nearalg/averaging.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace nearalg {

namespace {

constexpr double kRoundoff = tol::roundoff;

}  // namespace

CMatrix Diagonal::sandwich(const CMatrix& y) const {
  CMatrix out = CMatrix::Zero(y.rows(), y.cols());
  for (std::size_t i = 0; i < terms.size(); ++i) out += weights[i] * (terms[i].adjoint() * y * terms[i]);
  return out;
}

CMatrix Diagonal::product() const {
  if (terms.empty()) return CMatrix();
  CMatrix out = CMatrix::Zero(terms[0].rows(), terms[0].cols());
  for (std::size_t i = 0; i < terms.size(); ++i) out += weights[i] * (terms[i].adjoint() * terms[i]);
  return out;
}

std::vector<CMatrix> weyl_unitaries(int n) {
  CMatrix shift = CMatrix::Zero(n, n);
  CMatrix clock = CMatrix::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    shift((j + 1) % n, j) = 1.0;
    clock(j, j) = std::polar(1.0, 2 * std::numbers::pi * j / n);
  }
  std::vector<CMatrix> out;
  CMatrix xa = identity(n);
  for (int a = 0; a < n; ++a) {
    CMatrix zb = identity(n);
    for (int b = 0; b < n; ++b) {
      out.push_back(xa * zb);
      zb = zb * clock;
    }
    xa = xa * shift;
  }
  return out;
}

Diagonal exact_diagonal(const ConcreteAlgebra& a) {
  Diagonal d;
  if (a.dim() == 0) return d;
  const BlockStructure& st = a.structure();
  const int r = static_cast<int>(st.summands.size());
  const int n = a.ambient_dim();
  std::vector<std::vector<CMatrix>> realized(r);
  std::size_t count = 1;
  for (int k = 0; k < r; ++k) {
    const int nk = st.summands[k].size;
    for (const CMatrix& w : weyl_unitaries(nk)) {
      CMatrix u = CMatrix::Zero(n, n);
      for (int i = 0; i < nk; ++i)
        for (int j = 0; j < nk; ++j)
          if (w(i, j) != cplx(0.0)) u += w(i, j) * st.unit(k, i, j);
      realized[k].push_back(u);
    }
    count *= realized[k].size();
  }
  count *= static_cast<std::size_t>(r);
  if (count > 200000) throw PreconditionError("exact_diagonal: too many terms for this algebra");
  const double weight = 1.0 / static_cast<double>(count);
  std::vector<std::size_t> idx(r, 0);
  for (std::size_t t = 0; t < count / r; ++t) {
    std::size_t rem = t;
    for (int k = 0; k < r; ++k) {
      idx[k] = rem % realized[k].size();
      rem /= realized[k].size();
    }
    for (int c = 0; c < r; ++c) {
      CMatrix u = CMatrix::Zero(n, n);
      for (int k = 0; k < r; ++k)
        u += std::polar(1.0, 2 * std::numbers::pi * c * k / r) * realized[k][idx[k]];
      d.terms.push_back(u);
      d.weights.push_back(weight);
    }
  }
  return d;
}

Diagonal exact_diagonal(const FDAlgebra& f) { return exact_diagonal(realize(f)); }

Certificate verify_diagonal(const ConcreteAlgebra& a, const Diagonal& d, double tol_unit, double tol_central) {
  const double unit_err = d.terms.empty() ? (a.dim() == 0 ? 0.0 : 1.0) : opnorm(d.product() - a.support());
  double central = 0.0;
  const int n = a.ambient_dim();
  for (int i = 0; i < n && !d.terms.empty(); ++i)
    for (int j = 0; j < n; ++j) {
      const CMatrix t = d.sandwich(matrix_unit(n, i, j));
      for (const auto& x : a.basis()) central = std::max(central, opnorm(x * t - t * x));
    }
  Certificate c = bound_certificate("diagonal", "||m(w) - 1|| <= tol_unit and ||x T(y) - T(y) x|| <= tol_central",
                                    {{"unit_error", unit_err}, {"centrality", central}}, 0.0, 0.0);
  c.ceiling = tol_central;
  c.achieved = central;
  const bool ok = unit_err <= tol_unit && central <= tol_central;
  c.verdict = ok ? Verdict::Pass : Verdict::Fail;
  if (!ok) c.note = unit_err > tol_unit ? "m(w) differs from the unit" : "sandwich not central";
  return c;
}

UnitaryResult polar_unitary(const CMatrix& x) {
  if (!is_square(x)) throw PreconditionError("polar_unitary: matrix is not square");
  const double dx = opnorm(x - identity(static_cast<int>(x.rows())));
  if (!(dx < 1.0)) throw PreconditionError("polar_unitary: requires ||x - 1|| < 1");
  UnitaryResult r;
  r.u = polar_part(x);
  const double du = opnorm(r.u - identity(static_cast<int>(x.rows())));
  r.certificate = bound_certificate("polar distance", "||u - 1|| <= sqrt(2) ||x - 1||", {{"x_minus_one", dx}},
                                    std::sqrt(2.0) * dx + kRoundoff, du);
  return r;
}

UnitaryResult projection_conjugator(const CMatrix& p, const CMatrix& q) {
  if (!is_square(p) || p.rows() != q.rows() || p.cols() != q.cols())
    throw PreconditionError("projection_conjugator: shape mismatch");
  const int n = static_cast<int>(p.rows());
  const double dpq = opnorm(p - q);
  if (!(dpq < 1.0)) throw PreconditionError("projection_conjugator: requires ||p - q|| < 1");
  const CMatrix one = identity(n);
  const CMatrix z = q * p + (one - q) * (one - p);
  UnitaryResult r;
  r.u = polar_part(z);
  const double du = opnorm(r.u - one);
  r.certificate = bound_certificate("projection conjugator", "||u - 1|| <= sqrt(2) ||p - q||", {{"p_minus_q", dpq}},
                                    std::sqrt(2.0) * dpq + kRoundoff, du);
  const double conj = opnorm(r.u * p * r.u.adjoint() - q);
  r.certificate.inputs.push_back({"conjugation_residual", conj});
  if (conj > 1e-9) {
    r.certificate.verdict = Verdict::Fail;
    r.certificate.note = "u p u* differs from q";
  }
  return r;
}

std::vector<CMatrix> diagonal_set(const Diagonal& tilde_diag) {
  std::vector<CMatrix> out;
  for (const auto& t : tilde_diag.terms) out.push_back(0.5 * tilde_split(t).first);
  return out;
}

ImproveResult improve_multiplicativity(const LinMap& phi, const ConcreteAlgebra* codomain,
                                       const std::vector<CMatrix>& xs, double eps, Track track,
                                       const std::optional<Diagonal>& diag) {
  const int n = phi.codomain_dim();
  const CMatrix unit = codomain ? codomain->support() : identity(n);
  const ClassifyReport cr = classify(phi);
  if (cr.flags.cpc != Tri::Yes) throw PreconditionError("improve_multiplicativity: map is not cpc");

  const LinMap ext = ucp_extension(phi.with_unit(unit), Unitization::Tilde);
  const ConcreteAlgebra& tilde = ext.domain();
  const Diagonal dg = diag ? *diag : exact_diagonal(tilde);
  const std::vector<CMatrix> ys = diagonal_set(dg);
  const double gamma = mult_defect(phi, ys).sup;
  if (track == Track::Paper && gamma > window::repair_defect)
    throw PreconditionError("improve_multiplicativity: defect above 1/17 on the paper track");

  const Stinespring s = stinespring(ext);
  const CMatrix& p = s.projection;
  CMatrix p0 = CMatrix::Zero(s.dim(), s.dim());
  for (std::size_t i = 0; i < dg.terms.size(); ++i) {
    const CMatrix pa = s.pi(dg.terms[i]);
    p0 += dg.weights[i] * (pa.adjoint() * p * pa);
  }
  p0 = hermitian_part(p0);
  const double dist_p = opnorm(p0 - p);
  const HermitianEigen e = hermitian_eigen(p0);
  for (Eigen::Index i = 0; i < e.values.size(); ++i)
    if (e.values(i) > 0.496 && e.values(i) < 0.504)
      throw NumericalError("improve_multiplicativity: no spectral gap around 1/2");
  const CMatrix q = spectral_projection(p0, 0.5, 2.0);
  const UnitaryResult conj = projection_conjugator(p, q);
  const CMatrix& w = conj.u;

  LinMap psi = LinMap::from_function(
      phi.domain(), n,
      [&](const CMatrix& x) { return s.compress(w.adjoint() * s.pi(tilde_embed(x)) * w); }, unit);

  ImproveResult res{psi, gamma, w, {}};
  const double root = std::sqrt(gamma);
  res.certificates.push_back(bound_certificate("averaged projection", "||p0 - p|| <= 2 gamma^(1/2)",
                                               {{"gamma", gamma}}, 2 * root + kRoundoff, dist_p, track));
  const double via_w = 2 * opnorm(identity(s.dim()) - w);
  const double via_cb = cb_bracket(phi - psi).hi;
  res.certificates.push_back(bound_certificate("repair distance", "||phi - psi|| <= 8 sqrt(2) gamma^(1/2)",
                                               {{"gamma", gamma}, {"via_conjugator", via_w}, {"via_cb", via_cb}},
                                               8 * std::sqrt(2.0) * root + kRoundoff, std::min(via_w, via_cb),
                                               track));
  if (codomain) {
    double worst = 0.0;
    for (const auto& y : psi.images()) worst = std::max(worst, codomain->span().residual(y));
    res.certificates.push_back(bound_certificate("range", "psi(A) inside D", {}, tol::alg, worst, track));
  }
  res.certificates.push_back(bound_certificate("repaired defect", "sup ||psi(xx*) - psi(x)psi(x*)|| <= eps",
                                               {{"eps", eps}}, eps, mult_defect(psi, xs).sup, track));
  return res;
}

IntertwineResult intertwining_unitary(const LinMap& phi1, const LinMap& phi2, const ConcreteAlgebra* codomain,
                                      const std::vector<CMatrix>& xs, double eps, Track track,
                                      const std::optional<Diagonal>& diag) {
  const int n = phi1.codomain_dim();
  const CMatrix unit = codomain ? codomain->support() : identity(n);
  const LinMap e1 = ucp_extension(phi1.with_unit(unit), Unitization::Tilde);
  const LinMap e2 = ucp_extension(phi2.with_unit(unit), Unitization::Tilde);
  const Diagonal dg = diag ? *diag : exact_diagonal(e1.domain());
  const std::vector<CMatrix> ys = diagonal_set(dg);

  IntertwineResult res;
  for (const auto& y : ys) res.gamma = std::max(res.gamma, opnorm(phi1(y) - phi2(y)));
  res.delta = std::max(mult_defect(phi1, ys).sup, mult_defect(phi2, ys).sup);
  if (track == Track::Paper &&
      (res.gamma > window::intertwine_distance || res.delta > window::intertwine_defect))
    throw PreconditionError("intertwining_unitary: hypotheses outside the paper-track window");

  CMatrix s = CMatrix::Zero(n, n);
  for (std::size_t i = 0; i < dg.terms.size(); ++i)
    s += dg.weights[i] * (e1(dg.terms[i].adjoint()) * e2(dg.terms[i]));
  const CMatrix qb = range_basis(unit);
  const CMatrix sc = qb.adjoint() * s * qb;
  const double ds = opnorm(sc - identity(static_cast<int>(sc.rows())));
  if (!(ds < 1.0)) throw NumericalError("intertwining_unitary: ||s - 1|| >= 1, no nearby intertwiner");
  res.u = qb * polar_part(sc) * qb.adjoint() + (identity(n) - unit);

  double rel = 0.0;
  for (const auto& x : xs) {
    const CMatrix a = phi1(x), b = phi2(x);
    res.exactness = std::max(res.exactness, opnorm(s * b - a * s));
    rel = std::max(rel, opnorm(a - res.u * b * res.u.adjoint()));
  }
  const double du = opnorm(res.u - identity(n));
  res.certificates.push_back(bound_certificate(
      "intertwiner distance", "||u - 1|| <= 2 sqrt(2) gamma + 5 sqrt(2) delta",
      {{"gamma", res.gamma}, {"delta", res.delta}, {"s_minus_one", ds}},
      2 * std::sqrt(2.0) * res.gamma + 5 * std::sqrt(2.0) * res.delta + kRoundoff, du, track));
  res.certificates.push_back(bound_certificate("intertwining relation", "||phi1(x) - u phi2(x) u*|| <= eps",
                                               {{"eps", eps}}, eps, rel, track));
  return res;
}

LiftResult commutant_lift(const CMatrix& m, const ConcreteAlgebra& a, const std::vector<CMatrix>& xs, double eps,
                          const std::optional<Diagonal>& diag) {
  CMatrix a0 = a.project(m);
  const double nm = opnorm(m), n0 = opnorm(a0);
  if (n0 > nm && n0 > 0) a0 *= nm / n0;
  const Diagonal dg = diag ? *diag : exact_diagonal(a);
  LiftResult r;
  r.value = dg.sandwich(a0);
  for (const auto& x : xs) r.commutator = std::max(r.commutator, opnorm(r.value * x - x * r.value));
  r.certificates.push_back(
      bound_certificate("commutant lift", "||a x - x a|| <= eps", {{"eps", eps}}, eps, r.commutator));
  r.certificates.push_back(
      bound_certificate("lift norm", "||a|| <= ||m||", {{"norm_m", nm}}, nm + kRoundoff, opnorm(r.value)));
  return r;
}

LiftResult unitary_commutant_lift(const CMatrix& u, const ConcreteAlgebra& a, const std::vector<CMatrix>& xs,
                                  double eps, double alpha, const std::optional<Diagonal>& diag) {
  const int n = static_cast<int>(u.rows());
  const double du = opnorm(u - identity(n));
  if (!(alpha < 2.0) || du > alpha) throw PreconditionError("unitary_commutant_lift: requires ||u - 1|| <= alpha < 2");
  const CMatrix h = hermitian_part(cplx(0.0, -1.0 / std::numbers::pi) * unitary_log(u, 1e-6));
  LiftResult inner = commutant_lift(h, a, xs, eps, diag);
  const CMatrix k = hermitian_part(inner.value);
  LiftResult r;
  r.value = unitary_exp(std::numbers::pi * k);
  for (const auto& x : xs) r.commutator = std::max(r.commutator, opnorm(r.value * x - x * r.value));
  const double dv = opnorm(r.value - identity(n));
  r.certificates.push_back(
      bound_certificate("lift distance", "||v - 1|| <= ||u - 1||", {{"u_minus_one", du}}, du + 1e-9, dv));
  r.certificates.push_back(bound_certificate("lift unitarity", "||v* v - 1|| <= 1e-12", {}, 1e-12,
                                             opnorm(r.value.adjoint() * r.value - identity(n))));
  r.certificates.push_back(
      bound_certificate("commutant lift", "||v x - x v|| <= eps", {{"eps", eps}}, eps, r.commutator));
  return r;
}

}  // namespace nearalg
