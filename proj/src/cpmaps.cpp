#include "nearalg/cpmaps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/SVD>

#include "nearalg/core/rng.hpp"

namespace nearalg {

// ------------------------------------------------------------------ LinMap

LinMap::LinMap(ConcreteAlgebra domain, int codomain_dim, std::vector<CMatrix> images,
               std::optional<CMatrix> codomain_unit)
    : domain_(std::move(domain)), n_(codomain_dim), images_(std::move(images)) {
  if (static_cast<int>(images_.size()) != domain_.dim())
    throw PreconditionError("LinMap: image count does not match domain dimension");
  for (const auto& y : images_)
    if (y.rows() != n_ || y.cols() != n_) throw PreconditionError("LinMap: image shape mismatch");
  unit_ = codomain_unit ? *codomain_unit : identity(n_);
}

LinMap LinMap::from_function(const ConcreteAlgebra& domain, int codomain_dim,
                             const std::function<CMatrix(const CMatrix&)>& f,
                             std::optional<CMatrix> codomain_unit) {
  std::vector<CMatrix> images;
  for (const auto& b : domain.basis()) images.push_back(f(b));
  return LinMap(domain, codomain_dim, std::move(images), std::move(codomain_unit));
}

LinMap LinMap::from_choi(const FDAlgebra& f, int codomain_dim, const std::vector<CMatrix>& choi_blocks) {
  if (choi_blocks.size() != f.block_sizes.size()) throw PreconditionError("from_choi: block count mismatch");
  const ConcreteAlgebra dom = realize(f);
  const int n = codomain_dim;
  std::vector<CMatrix> images;
  // realize() lists matrix units block by block in row-major order.
  for (std::size_t k = 0; k < f.block_sizes.size(); ++k) {
    const int nk = f.block_sizes[k];
    if (choi_blocks[k].rows() != nk * n || choi_blocks[k].cols() != nk * n)
      throw PreconditionError("from_choi: Choi block shape mismatch");
    for (int i = 0; i < nk; ++i)
      for (int j = 0; j < nk; ++j) images.push_back(choi_blocks[k].block(i * n, j * n, n, n));
  }
  return LinMap(dom, n, std::move(images));
}

CMatrix LinMap::operator()(const CMatrix& x) const {
  const CVector c = domain_.span().coords(x);
  CMatrix y = CMatrix::Zero(n_, n_);
  for (Eigen::Index i = 0; i < c.size(); ++i)
    if (c(i) != cplx(0.0)) y += c(i) * images_[i];
  return y;
}

CMatrix LinMap::on_unit(int k, int i, int j) const { return (*this)(domain_.structure().unit(k, i, j)); }

std::vector<CMatrix> LinMap::choi_blocks() const {
  std::vector<CMatrix> out;
  if (domain_.dim() == 0) return out;
  const BlockStructure& st = domain_.structure();
  for (std::size_t k = 0; k < st.summands.size(); ++k) {
    const int nk = st.summands[k].size;
    CMatrix c = CMatrix::Zero(nk * n_, nk * n_);
    for (int i = 0; i < nk; ++i)
      for (int j = 0; j < nk; ++j) c.block(i * n_, j * n_, n_, n_) = on_unit(static_cast<int>(k), i, j);
    out.push_back(c);
  }
  return out;
}

CMatrix LinMap::choi() const { return direct_sum(choi_blocks()); }

LinMap LinMap::operator+(const LinMap& other) const {
  if (other.domain_.dim() != domain_.dim() || other.n_ != n_) throw PreconditionError("LinMap: sum of incompatible maps");
  std::vector<CMatrix> im;
  for (std::size_t i = 0; i < images_.size(); ++i) im.push_back(images_[i] + other.images_[i]);
  return LinMap(domain_, n_, std::move(im), unit_);
}

LinMap LinMap::operator-(const LinMap& other) const { return *this + other.scaled(-1.0); }

LinMap LinMap::scaled(cplx s) const {
  std::vector<CMatrix> im;
  for (const auto& y : images_) im.push_back(s * y);
  return LinMap(domain_, n_, std::move(im), unit_);
}

LinMap LinMap::with_unit(const CMatrix& unit) const {
  LinMap m = *this;
  m.unit_ = unit;
  return m;
}

LinMap compose(const LinMap& g, const LinMap& f) {
  std::vector<CMatrix> im;
  for (const auto& y : f.images()) im.push_back(g(y));
  return LinMap(f.domain(), g.codomain_dim(), std::move(im), g.codomain_unit());
}

LinMap kraus_map(const FDAlgebra& f, int codomain_dim, const std::vector<CMatrix>& kraus) {
  for (const auto& k : kraus)
    if (k.rows() != codomain_dim || k.cols() != f.ambient_dim()) throw PreconditionError("kraus_map: shape mismatch");
  return LinMap::from_function(realize(f), codomain_dim, [&](const CMatrix& x) {
    CMatrix y = CMatrix::Zero(codomain_dim, codomain_dim);
    for (const auto& k : kraus) y += k * x * k.adjoint();
    return y;
  });
}

LinMap conjugation_map(const ConcreteAlgebra& domain, const CMatrix& u) {
  return LinMap::from_function(domain, domain.ambient_dim(),
                               [&](const CMatrix& x) { return CMatrix(u * x * u.adjoint()); });
}

LinMap inclusion_map(const ConcreteAlgebra& domain) {
  return LinMap(domain, domain.ambient_dim(), domain.basis());
}

// ----------------------------------------------------------- classification

ClassifyReport classify(const LinMap& phi, double tau) {
  ClassifyReport r;
  double mn = 0.0;
  bool first = true;
  for (const auto& c : phi.choi_blocks()) {
    const double m = min_hermitian_eigenvalue(c);
    mn = first ? m : std::min(mn, m);
    first = false;
  }
  r.min_choi_eigenvalue = mn;
  const CMatrix one = phi(phi.domain().support());
  r.norm_of_one = opnorm(one);
  r.unit_error = opnorm(one - phi.codomain_unit());
  const bool cp = mn >= -tau;
  r.flags.cp = cp ? Tri::Yes : Tri::No;
  r.flags.cpc = (cp && r.norm_of_one <= 1.0 + tau) ? Tri::Yes : Tri::No;
  r.flags.ucp = (cp && r.unit_error <= tol::alg) ? Tri::Yes : Tri::No;
  return r;
}

LinMap& mark(LinMap& phi, double tau) {
  phi.flags = classify(phi, tau).flags;
  return phi;
}

// ------------------------------------------------------------- Stinespring

CMatrix Stinespring::pi(const CMatrix& x) const {
  const std::vector<CMatrix> xs = domain_structure.coordinates(x);
  std::vector<CMatrix> blocks;
  for (std::size_t k = 0; k < xs.size(); ++k)
    for (int l = 0; l < multiplicities[k]; ++l) blocks.push_back(xs[k]);
  return direct_sum(blocks);
}

Stinespring stinespring(const LinMap& phi, double tau) {
  Stinespring s;
  s.domain_structure = phi.domain().structure();
  const int n = phi.codomain_dim();
  const std::vector<CMatrix> chois = phi.choi_blocks();
  std::vector<CMatrix> rows;
  for (std::size_t k = 0; k < chois.size(); ++k) {
    const int nk = s.domain_structure.summands[k].size;
    const HermitianEigen e = hermitian_eigen(chois[k]);
    if (e.values.size() && e.values.minCoeff() < -tau)
      throw PreconditionError("stinespring: map is not completely positive");
    // Eigenvalues between roundoff and tau still carry the isometry V* V = 1.
    const double cut = e.values.size() ? 1e-14 * std::max(1.0, e.values.maxCoeff()) : 0.0;
    std::vector<CMatrix> kraus;
    for (Eigen::Index l = e.values.size() - 1; l >= 0; --l) {
      if (e.values(l) <= cut) continue;
      const double sq = std::sqrt(e.values(l));
      CMatrix kr(n, nk);
      for (int i = 0; i < nk; ++i)
        for (int a = 0; a < n; ++a) kr(a, i) = sq * e.vectors(i * n + a, l);
      rows.push_back(kr.adjoint());
      kraus.push_back(kr);
    }
    s.multiplicities.push_back(static_cast<int>(kraus.size()));
    s.kraus.push_back(std::move(kraus));
  }
  int k_dim = 0;
  for (const auto& r : rows) k_dim += static_cast<int>(r.rows());
  s.isometry = CMatrix::Zero(k_dim, n);
  int off = 0;
  for (const auto& r : rows) {
    s.isometry.block(off, 0, r.rows(), n) = r;
    off += static_cast<int>(r.rows());
  }
  s.projection = s.isometry * s.isometry.adjoint();
  return s;
}

Certificate verify_stinespring(const LinMap& phi, const Stinespring& s, const std::vector<CMatrix>& xs,
                               double tol) {
  double recon = 0.0, ident = 0.0;
  const CMatrix comp = identity(s.dim()) - s.projection;
  for (const auto& x : xs) {
    const CMatrix px = s.pi(x);
    recon = std::max(recon, opnorm(phi(x) - s.compress(px)));
    const CMatrix lhs = phi(x * x.adjoint()) - phi(x) * phi(x.adjoint());
    const CMatrix rhs = s.compress(px * comp * px.adjoint());
    ident = std::max(ident, opnorm(lhs - rhs));
  }
  Certificate c = bound_certificate("dilation reconstruction",
                                    "max(||phi(x) - V* pi(x) V||, ||defect(x) - V* pi(x)(1-p)pi(x)* V||) <= tol",
                                    {{"reconstruction", recon}, {"defect_identity", ident}}, tol,
                                    std::max(recon, ident));
  if (!c.passed()) c.note = recon > tol ? "reconstruction" : "defect identity";
  return c;
}

DefectReport mult_defect(const LinMap& phi, const std::vector<CMatrix>& xs) {
  DefectReport r;
  auto one = [&](const CMatrix& x) {
    const double d = opnorm(phi(x * x.adjoint()) - phi(x) * phi(x.adjoint()));
    r.per_element.push_back(d);
    r.sup = std::max(r.sup, d);
  };
  for (const auto& x : xs) one(x);
  for (const auto& x : xs) one(CMatrix(x.adjoint()));
  return r;
}

Certificate check_stinespring_inequality(const LinMap& phi, const CMatrix& x, const CMatrix& y, double tau) {
  const double lhs = opnorm(phi(x * y) - phi(x) * phi(y));
  const double d = opnorm(phi(x * x.adjoint()) - phi(x) * phi(x.adjoint()));
  const double rhs = std::sqrt(d) * opnorm(y) + tau;
  return bound_certificate("multiplicative domain inequality",
                           "||phi(xy) - phi(x)phi(y)|| <= ||phi(xx*) - phi(x)phi(x*)||^(1/2) ||y||",
                           {{"defect", d}, {"norm_y", opnorm(y)}}, rhs, lhs);
}

// ------------------------------------------------------ expectations

LinMap compressed_expectation(int n, const ConcreteAlgebra& a) {
  if (a.ambient_dim() != n) throw PreconditionError("conditional expectation: ambient mismatch");
  const ConcreteAlgebra full = full_algebra(n);
  LinMap e = LinMap::from_function(full, n, [&](const CMatrix& x) { return a.project(x); }, a.support());
  return e;
}

LinMap conditional_expectation(int n, const ConcreteAlgebra& a) {
  if (!a.is_unital_in_ambient())
    throw PreconditionError("conditional_expectation: subalgebra is not unital; use compressed_expectation");
  return compressed_expectation(n, a).with_unit(identity(n));
}

ArvesonResult arveson_restrict(const ConcreteAlgebra& a, const ConcreteAlgebra& b, const std::vector<CMatrix>& xs,
                               double gamma, double tau) {
  if (a.ambient_dim() != b.ambient_dim()) throw PreconditionError("arveson_restrict: ambient mismatch");
  LinMap phi = LinMap::from_function(a, b.ambient_dim(), [&](const CMatrix& x) { return b.project(x); },
                                     b.support());
  double worst = 0.0;
  for (const auto& x : xs) worst = std::max(worst, opnorm(phi(x) - x));
  Certificate c = bound_certificate("restricted expectation", "||phi(x) - x|| <= 2 gamma", {{"gamma", gamma}},
                                    2 * gamma + tau, worst);
  return {std::move(phi), std::move(c)};
}

LinMap ucp_extension(const LinMap& phi, Unitization mode) {
  const CMatrix unit = phi.codomain_unit();
  if (mode == Unitization::Dagger) {
    const ConcreteAlgebra& a = phi.domain();
    if (a.dim() > 0 && a.contains(a.support()) &&
        opnorm(phi(a.support()) - unit) <= tol::alg)
      return phi;
    // A unital domain with a non-unital map has no dagger extension; use the tilde form.
  }
  const ConcreteAlgebra tilde = unitize_tilde(phi.domain());
  LinMap ext = LinMap::from_function(
      tilde, phi.codomain_dim(),
      [&](const CMatrix& y) {
        auto [x, lambda] = tilde_split(y);
        return CMatrix(phi(x) + lambda * unit);
      },
      unit);
  return ext;
}

// ------------------------------------------------------------ cb norm

namespace {

/// Haagerup factorization bound from Choi SVDs with balance exponent s.
double factorization_bound(const std::vector<CMatrix>& chois, const BlockStructure& st, int n, double s) {
  CMatrix row = CMatrix::Zero(n, n);
  CMatrix col = CMatrix::Zero(n, n);
  for (std::size_t k = 0; k < chois.size(); ++k) {
    const int nk = st.summands[k].size;
    Eigen::JacobiSVD<CMatrix> svd(chois[k], Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RVector& sv = svd.singularValues();
    for (Eigen::Index l = 0; l < sv.size(); ++l) {
      if (sv(l) <= 1e-15 * std::max(1.0, sv(0))) break;
      CMatrix a(n, nk), bt(nk, n);
      for (int i = 0; i < nk; ++i)
        for (int x = 0; x < n; ++x) {
          a(x, i) = svd.matrixU()(i * n + x, l);
          bt(i, x) = std::conj(svd.matrixV()(i * n + x, l));
        }
      row += std::pow(sv(l), 2 * s) * a * a.adjoint();
      col += std::pow(sv(l), 2 * (1 - s)) * bt.adjoint() * bt;
    }
  }
  return std::sqrt(opnorm(row) * opnorm(col));
}

}  // namespace

CBBracket cb_bracket(const LinMap& phi, int samples, std::uint64_t seed) {
  CBBracket b;
  if (phi.domain().dim() == 0) return b;
  const int n = phi.codomain_dim();
  const ClassifyReport cr = classify(phi);
  if (cr.flags.cp == Tri::Yes) {
    b.lo = b.hi = cr.norm_of_one;
    return b;
  }
  const BlockStructure& st = phi.domain().structure();
  const std::vector<CMatrix> chois = phi.choi_blocks();
  b.hi = std::numeric_limits<double>::infinity();
  for (double s : {0.0, 0.25, 0.5, 0.75, 1.0}) b.hi = std::min(b.hi, factorization_bound(chois, st, n, s));
  if (chois.size() > 1) {
    double sum = 0.0;
    for (std::size_t k = 0; k < chois.size(); ++k) {
      double best = std::numeric_limits<double>::infinity();
      for (double s : {0.25, 0.5, 0.75}) best = std::min(best, factorization_bound({chois[k]}, st, n, s));
      sum += best;
    }
    b.hi = std::min(b.hi, sum);
  }

  // Lower bound: ||(phi (x) id_q)(x)|| over unitaries of M_q(F), q = n.
  const int q = n;
  Rng rng = Rng::stream(seed, 7);
  auto amplified_norm = [&](const std::vector<CMatrix>& us) {
    CMatrix y = CMatrix::Zero(q * n, q * n);
    for (int a = 0; a < q; ++a)
      for (int c = 0; c < q; ++c) {
        CMatrix out = CMatrix::Zero(n, n);
        for (std::size_t k = 0; k < st.summands.size(); ++k) {
          const int nk = st.summands[k].size;
          for (int i = 0; i < nk; ++i)
            for (int j = 0; j < nk; ++j) {
              const cplx v = us[k](a * nk + i, c * nk + j);
              if (v != cplx(0.0)) out += v * chois[k].block(i * n, j * n, n, n);
            }
        }
        y.block(a * n, c * n, n, n) = out;
      }
    return opnorm(y);
  };
  std::vector<CMatrix> ones;
  for (const auto& s : st.summands) ones.push_back(identity(q * s.size));
  b.lo = amplified_norm(ones);
  for (int t = 0; t < samples; ++t) {
    std::vector<CMatrix> us;
    for (const auto& s : st.summands) us.push_back(rng.unitary(q * s.size));
    b.lo = std::max(b.lo, amplified_norm(us));
  }
  return b;
}

}  // namespace nearalg
