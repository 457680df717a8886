#include "nearalg/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/SVD>

#include "nearalg/core/rng.hpp"

namespace nearalg {

namespace {

Eigen::Map<const CVector> vec(const CMatrix& x) { return {x.data(), x.size()}; }

CMatrix unvec(const CVector& v, int rows, int cols) {
  return Eigen::Map<const CMatrix>(v.data(), rows, cols);
}

}  // namespace

// ---------------------------------------------------------------- Subspace

Subspace::Subspace(int rows, int cols) : rows_(rows), cols_(cols), frame_(rows * cols, 0) {}

bool Subspace::add(const CMatrix& x, double rel_tol) {
  if (x.rows() != rows_ || x.cols() != cols_)
    throw PreconditionError("Subspace::add: shape mismatch");
  const double nx = x.norm();
  if (nx == 0.0) return false;
  CVector r = vec(x);
  for (int pass = 0; pass < 2; ++pass)
    for (Eigen::Index i = 0; i < frame_.cols(); ++i) r -= frame_.col(i) * frame_.col(i).dot(r);
  const double nr = r.norm();
  if (nr <= rel_tol * nx) return false;
  r /= nr;
  frame_.conservativeResize(Eigen::NoChange, frame_.cols() + 1);
  frame_.col(frame_.cols() - 1) = r;
  basis_.push_back(unvec(r, rows_, cols_));
  return true;
}

CVector Subspace::coords(const CMatrix& x) const {
  if (basis_.empty()) return CVector(0);
  return frame_.adjoint() * vec(x);
}

CMatrix Subspace::combine(const CVector& c) const {
  if (basis_.empty()) return CMatrix::Zero(rows_, cols_);
  const CVector v = frame_ * c;
  return unvec(v, rows_, cols_);
}

CMatrix Subspace::project(const CMatrix& x) const { return combine(coords(x)); }

double Subspace::residual(const CMatrix& x) const { return (x - project(x)).norm(); }

Subspace Subspace::spanned_by(int rows, int cols, const std::vector<CMatrix>& vectors,
                              double rel_tol) {
  Subspace s(rows, cols);
  for (const auto& v : vectors) s.add(v, rel_tol);
  return s;
}

Subspace Subspace::from_orthonormal(int rows, int cols, const std::vector<CMatrix>& basis, double tol) {
  Subspace s(rows, cols);
  s.frame_.resize(static_cast<Eigen::Index>(rows) * cols, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (basis[i].rows() != rows || basis[i].cols() != cols)
      throw PreconditionError("Subspace::from_orthonormal: shape mismatch");
    s.frame_.col(static_cast<Eigen::Index>(i)) = vec(basis[i]);
  }
  const CMatrix gram = s.frame_.adjoint() * s.frame_;
  if (gram.rows() > 0 && (gram - CMatrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() > tol)
    throw PreconditionError("Subspace::from_orthonormal: basis is not orthonormal");
  s.basis_ = basis;
  return s;
}

// --------------------------------------------------------------- FDAlgebra

int FDAlgebra::dim() const {
  int d = 0;
  for (int n : block_sizes) d += n * n;
  return d;
}

int FDAlgebra::ambient_dim() const {
  return std::accumulate(block_sizes.begin(), block_sizes.end(), 0);
}

int FDAlgebra::offset(int block) const {
  int o = 0;
  for (int k = 0; k < block; ++k) o += block_sizes[k];
  return o;
}

int FDAlgebra::index(int block, int i, int j) const {
  int idx = 0;
  for (int k = 0; k < block; ++k) idx += block_sizes[k] * block_sizes[k];
  return idx + i * block_sizes[block] + j;
}

CMatrix FDAlgebra::unit(int block, int i, int j) const {
  const int o = offset(block);
  return matrix_unit(ambient_dim(), o + i, o + j);
}

CMatrix FDAlgebra::one() const { return identity(ambient_dim()); }

CMatrix FDAlgebra::assemble(const std::vector<CMatrix>& blocks) const {
  return direct_sum(blocks);
}

std::vector<CMatrix> FDAlgebra::split(const CMatrix& x) const {
  std::vector<CMatrix> out;
  int o = 0;
  for (int n : block_sizes) {
    out.push_back(x.block(o, o, n, n));
    o += n;
  }
  return out;
}

// ---------------------------------------------------------- BlockStructure

FDAlgebra BlockStructure::abstract() const {
  FDAlgebra f;
  for (const auto& s : summands) f.block_sizes.push_back(s.size);
  return f;
}

int BlockStructure::dim() const {
  int d = 0;
  for (const auto& s : summands) d += s.size * s.size;
  return d;
}

std::vector<CMatrix> BlockStructure::coordinates(const CMatrix& x) const {
  std::vector<CMatrix> out;
  for (std::size_t k = 0; k < summands.size(); ++k) {
    const int n = summands[k].size;
    const double m = summands[k].multiplicity;
    CMatrix b(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) b(i, j) = hs_inner(unit(k, i, j), x) / m;
    out.push_back(b);
  }
  return out;
}

CMatrix BlockStructure::realize(const std::vector<CMatrix>& blocks) const {
  const int dim = matrix_units.empty() ? 0 : static_cast<int>(matrix_units[0][0].rows());
  CMatrix x = CMatrix::Zero(dim, dim);
  for (std::size_t k = 0; k < summands.size(); ++k) {
    const int n = summands[k].size;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) x += blocks[k](i, j) * unit(k, i, j);
  }
  return x;
}

BlockStructure BlockStructure::conjugated(const CMatrix& u) const {
  BlockStructure s = *this;
  for (auto& p : s.central_projections) p = u * p * u.adjoint();
  for (auto& units : s.matrix_units)
    for (auto& e : units) e = u * e * u.adjoint();
  return s;
}

// --------------------------------------------------------- ConcreteAlgebra

ConcreteAlgebra::ConcreteAlgebra(int ambient_dim)
    : n_(ambient_dim),
      span_(ambient_dim, ambient_dim),
      support_(CMatrix::Zero(ambient_dim, ambient_dim)),
      cache_(std::make_shared<Cache>()) {}

ConcreteAlgebra::ConcreteAlgebra(int ambient_dim, Subspace span,
                                 std::optional<BlockStructure> structure)
    : n_(ambient_dim), span_(std::move(span)), cache_(std::make_shared<Cache>()) {
  if (span_.rows() != n_ || span_.cols() != n_)
    throw PreconditionError("ConcreteAlgebra: basis shape does not match ambient dimension");
  CMatrix s = CMatrix::Zero(n_, n_);
  for (const auto& b : span_.basis()) s += b * b.adjoint();
  support_ = range_projection(s);
  if (structure) std::call_once(cache_->once, [&] { cache_->value = std::move(structure); });
}

bool ConcreteAlgebra::is_unital_in_ambient(double tol) const {
  return dim() > 0 && (support_ - identity(n_)).norm() <= tol;
}

bool ConcreteAlgebra::contains(const CMatrix& x, double tol) const {
  return span_.residual(x) <= tol * std::max(1.0, x.norm());
}

const BlockStructure& ConcreteAlgebra::structure() const {
  std::call_once(cache_->once, [&] { cache_->value = wedderburn_decompose(*this); });
  return *cache_->value;
}

bool ConcreteAlgebra::has_structure() const { return cache_->value.has_value(); }

// -------------------------------------------------------------- generation

ConcreteAlgebra generate_algebra(const std::vector<CMatrix>& generators, int ambient_dim,
                                 double tol) {
  const int n = ambient_dim;
  std::vector<CMatrix> gens;
  for (const auto& g : generators) {
    if (g.rows() != n || g.cols() != n)
      throw PreconditionError("generate_algebra: generator shape mismatch");
    gens.push_back(g);
    gens.push_back(g.adjoint());
  }
  Subspace s(n, n);
  for (const auto& g : gens) s.add(g, tol);
  // Left multiplication by the generators closes the span of words.
  for (int i = 0; i < s.dim(); ++i) {
    const CMatrix b = s.basis()[i];
    for (const auto& g : gens) {
      const CMatrix w = g * b;
      // Products that cancel to roundoff carry no direction.
      if (w.norm() <= tol * g.norm()) continue;
      s.add(w, tol);
      if (s.dim() > n * n)
        throw NumericalError("generate_algebra: dimension failed to stabilize");
    }
  }
  return ConcreteAlgebra(n, std::move(s));
}

CMatrix support_projection(const ConcreteAlgebra& a) { return a.support(); }

Certificate verify_basis(const std::vector<CMatrix>& b, int ambient_dim, double tol) {
  const int d = static_cast<int>(b.size());
  const Subspace span = Subspace::spanned_by(ambient_dim, ambient_dim, b, 1e-12);
  CMatrix s = CMatrix::Zero(ambient_dim, ambient_dim);
  for (const auto& x : b) s += x * x.adjoint();
  const CMatrix e = range_projection(s);
  double star = 0, prod = 0, gram = 0, supp = 0;
  for (int i = 0; i < d; ++i) {
    star = std::max(star, span.residual(b[i].adjoint()));
    for (int j = 0; j < d; ++j) {
      prod = std::max(prod, span.residual(b[i] * b[j]));
      const cplx g = hs_inner(b[i], b[j]);
      gram = std::max(gram, std::abs(g - (i == j ? 1.0 : 0.0)));
    }
    supp = std::max(supp, (e * b[i] - b[i]).norm());
    supp = std::max(supp, (b[i] * e - b[i]).norm());
  }
  supp = std::max(supp, (e * e - e).norm());
  supp = std::max(supp, (e - e.adjoint()).norm());
  const double worst = std::max({star, prod, gram, supp});
  Certificate c = bound_certificate("algebra closure", "max residual of *-closure, products, Gram, support <= tol",
                                    {{"star", star}, {"product", prod}, {"gram", gram}, {"support", supp}},
                                    tol, worst);
  if (!c.passed()) {
    if (star > tol) c.note = "not closed under adjoint";
    else if (prod > tol) c.note = "not closed under products";
    else if (gram > tol) c.note = "basis not orthonormal";
    else c.note = "support projection invariant";
  }
  return c;
}

Certificate verify_algebra(const ConcreteAlgebra& a, double tol) {
  return verify_basis(a.basis(), a.ambient_dim(), tol);
}

// --------------------------------------------------------------- Wedderburn

namespace {

std::vector<CMatrix> random_elements(const ConcreteAlgebra& a, Rng& rng, int count) {
  std::vector<CMatrix> out;
  for (int k = 0; k < count; ++k) {
    CVector c(a.dim());
    for (int i = 0; i < a.dim(); ++i) c(i) = rng.complex_normal();
    out.push_back(a.span().combine(c));
  }
  return out;
}

/// Coefficient vectors (columns) of elements of span(basis) commuting with all of `with`.
Eigen::MatrixXcd commutant_coefficients(const std::vector<CMatrix>& basis,
                                        const std::vector<CMatrix>& with) {
  const int d = static_cast<int>(basis.size());
  const int n = static_cast<int>(basis[0].rows());
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(with.size()) * n * n, d);
  for (int i = 0; i < d; ++i)
    for (std::size_t j = 0; j < with.size(); ++j) {
      const CMatrix c = basis[i] * with[j] - with[j] * basis[i];
      m.block(static_cast<Eigen::Index>(j) * n * n, i, n * n, 1) = vec(c);
    }
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullV);
  const RVector& s = svd.singularValues();
  const double top = s.size() ? s(0) : 0.0;
  std::vector<int> null;
  for (int i = 0; i < d; ++i) {
    const double si = i < s.size() ? s(i) : 0.0;
    if (si <= 1e-8 * std::max(top, 1.0)) null.push_back(i);
  }
  Eigen::MatrixXcd out(d, static_cast<Eigen::Index>(null.size()));
  for (std::size_t k = 0; k < null.size(); ++k) out.col(k) = svd.matrixV().col(null[k]);
  return out;
}

/// Splits the spectrum of positive part of h (eigenvalues above 1/2 after the
/// caller's shift) into clusters separated by gaps larger than rel * spread.
std::vector<CMatrix> cluster_projections(const CMatrix& h, double rel) {
  const HermitianEigen e = hermitian_eigen(h);
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < e.values.size(); ++i)
    if (e.values(i) > 0.5) idx.push_back(i);
  std::vector<CMatrix> out;
  if (idx.empty()) return out;
  const double scale = std::max(1.0, e.values(idx.back()));
  CMatrix cur = CMatrix::Zero(h.rows(), h.cols());
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (k > 0 && e.values(idx[k]) - e.values(idx[k - 1]) > rel * scale) {
      out.push_back(cur);
      cur.setZero();
    }
    cur += e.vectors.col(idx[k]) * e.vectors.col(idx[k]).adjoint();
  }
  out.push_back(cur);
  return out;
}

int first_support_index(const CMatrix& p) {
  for (Eigen::Index i = 0; i < p.rows(); ++i)
    if (std::abs(p(i, i)) > 1e-6) return static_cast<int>(i);
  return static_cast<int>(p.rows());
}

}  // namespace

BlockStructure wedderburn_decompose(const ConcreteAlgebra& a, std::uint64_t seed, int retries) {
  BlockStructure out;
  const int d = a.dim();
  const int n = a.ambient_dim();
  if (d == 0) return out;
  Rng rng(seed);
  const auto& basis = a.basis();

  // Center: commute with a few generic elements, then confirm on the basis.
  Eigen::MatrixXcd zc = commutant_coefficients(basis, random_elements(a, rng, 3));
  auto is_central = [&](const Eigen::MatrixXcd& coeffs) {
    for (Eigen::Index k = 0; k < coeffs.cols(); ++k) {
      const CMatrix z = a.span().combine(coeffs.col(k));
      for (const auto& b : basis)
        if ((z * b - b * z).norm() > 1e-7) return false;
    }
    return true;
  };
  if (!is_central(zc)) zc = commutant_coefficients(basis, basis);
  const int r = static_cast<int>(zc.cols());
  if (r == 0) throw NumericalError("wedderburn_decompose: empty center");

  std::vector<CMatrix> central;
  for (int attempt = 0; attempt <= retries && static_cast<int>(central.size()) != r; ++attempt) {
    CVector g(r);
    for (int k = 0; k < r; ++k) g(k) = rng.normal();
    CMatrix c = hermitian_part(a.span().combine(zc * g));
    c += (opnorm(c) + 1.0) * a.support();
    central = cluster_projections(c, 1e-6);
  }
  if (static_cast<int>(central.size()) != r)
    throw NumericalError("wedderburn_decompose: central spectrum did not separate");
  std::sort(central.begin(), central.end(), [](const CMatrix& x, const CMatrix& y) {
    return first_support_index(x) < first_support_index(y);
  });

  for (const CMatrix& p : central) {
    Subspace reduced(n, n);
    for (const auto& b : basis) {
      const CMatrix w = p * b;
      // Products that cancel to roundoff carry no direction.
      if (w.norm() > 1e-8 * b.norm()) reduced.add(w, 1e-8);
    }
    const int dk = reduced.dim();
    const int nk = static_cast<int>(std::lround(std::sqrt(static_cast<double>(dk))));
    if (nk * nk != dk) throw NumericalError("wedderburn_decompose: summand dimension is not a square");
    const int rank = projection_rank(p);
    if (rank % nk != 0) throw NumericalError("wedderburn_decompose: inconsistent multiplicity");
    const int mk = rank / nk;
    ConcreteAlgebra ak(n, reduced);

    std::vector<CMatrix> minimal;
    if (nk == 1) {
      minimal.push_back(p);
    } else {
      for (int attempt = 0; attempt <= retries && static_cast<int>(minimal.size()) != nk; ++attempt) {
        CMatrix h = hermitian_part(random_elements(ak, rng, 1)[0]);
        h += (opnorm(h) + 1.0) * p;
        minimal = cluster_projections(h, 1e-6);
      }
      if (static_cast<int>(minimal.size()) != nk)
        throw NumericalError("wedderburn_decompose: could not split summand into minimal projections");
    }

    std::vector<CMatrix> first_row(nk);  // e_{1j}
    first_row[0] = minimal[0];
    for (int j = 1; j < nk; ++j) {
      bool ok = false;
      for (int attempt = 0; attempt <= retries && !ok; ++attempt) {
        const CMatrix x = random_elements(ak, rng, 1)[0];
        const CMatrix v = partial_polar_part(minimal[0] * x * minimal[j], 1e-8);
        ok = (v * v.adjoint() - minimal[0]).norm() < 1e-6 && (v.adjoint() * v - minimal[j]).norm() < 1e-6;
        first_row[j] = v;
      }
      if (!ok) throw NumericalError("wedderburn_decompose: matrix unit construction failed");
    }
    std::vector<CMatrix> units(static_cast<std::size_t>(nk) * nk);
    for (int i = 0; i < nk; ++i)
      for (int j = 0; j < nk; ++j) units[i * nk + j] = first_row[i].adjoint() * first_row[j];
    out.summands.push_back({nk, mk});
    out.central_projections.push_back(p);
    out.matrix_units.push_back(std::move(units));
  }
  if (out.dim() != d) throw NumericalError("wedderburn_decompose: summand dimensions do not add up");
  return out;
}

// ------------------------------------------------------------ unitization

ConcreteAlgebra unitize_dagger(const ConcreteAlgebra& a) {
  if (a.dim() == 0 || a.contains(a.support())) return a;
  std::vector<CMatrix> gens = a.basis();
  gens.push_back(a.support());
  return generate_algebra(gens, a.ambient_dim());
}

CMatrix tilde_embed(const CMatrix& x) {
  CMatrix y = CMatrix::Zero(x.rows() + 1, x.cols() + 1);
  y.topLeftCorner(x.rows(), x.cols()) = x;
  return y;
}

std::pair<CMatrix, cplx> tilde_split(const CMatrix& y) {
  const int n = static_cast<int>(y.rows()) - 1;
  const cplx lambda = y(n, n);
  CMatrix x = y.topLeftCorner(n, n) - lambda * identity(n);
  return {x, lambda};
}

ConcreteAlgebra unitize_tilde(const ConcreteAlgebra& a) {
  const int n = a.ambient_dim();
  Subspace s(n + 1, n + 1);
  for (const auto& b : a.basis()) s.add(tilde_embed(b));
  s.add(identity(n + 1));
  BlockStructure st;
  if (a.dim() > 0) {
    const BlockStructure& base = a.structure();
    st.summands = base.summands;
    for (const auto& p : base.central_projections) st.central_projections.push_back(tilde_embed(p));
    for (const auto& units : base.matrix_units) {
      std::vector<CMatrix> u;
      for (const auto& e : units) u.push_back(tilde_embed(e));
      st.matrix_units.push_back(std::move(u));
    }
  }
  CMatrix extra = identity(n + 1) - tilde_embed(a.support());
  st.summands.push_back({1, projection_rank(extra)});
  st.central_projections.push_back(extra);
  st.matrix_units.push_back({extra});
  ConcreteAlgebra out(n + 1, std::move(s), std::move(st));
  out.meta = "tilde unitization";
  return out;
}

// ------------------------------------------------------------- factories

ConcreteAlgebra block_algebra(const std::vector<int>& sizes, int ambient_dim,
                              const std::vector<int>& multiplicities) {
  std::vector<int> mult = multiplicities;
  if (mult.empty()) mult.assign(sizes.size(), 1);
  if (mult.size() != sizes.size()) throw PreconditionError("block_algebra: multiplicity count mismatch");
  int used = 0;
  for (std::size_t k = 0; k < sizes.size(); ++k) used += sizes[k] * mult[k];
  if (used > ambient_dim) throw PreconditionError("block_algebra: blocks exceed ambient dimension");
  const int n = ambient_dim;
  Subspace s(n, n);
  BlockStructure st;
  int off = 0;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    const int nk = sizes[k], mk = mult[k];
    std::vector<CMatrix> units;
    CMatrix p = CMatrix::Zero(n, n);
    for (int i = 0; i < nk; ++i)
      for (int j = 0; j < nk; ++j) {
        CMatrix e = CMatrix::Zero(n, n);
        e.block(off, off, nk * mk, nk * mk) = kron(matrix_unit(nk, i, j), identity(mk));
        if (i == j) p += e;
        units.push_back(e);
        s.add(e / std::sqrt(static_cast<double>(mk)));
      }
    st.summands.push_back({nk, mk});
    st.central_projections.push_back(p);
    st.matrix_units.push_back(std::move(units));
    off += nk * mk;
  }
  ConcreteAlgebra a(n, std::move(s), std::move(st));
  return a;
}

ConcreteAlgebra realize(const FDAlgebra& f) {
  return block_algebra(f.block_sizes, f.ambient_dim());
}

ConcreteAlgebra conjugate(const ConcreteAlgebra& a, const CMatrix& u) {
  Subspace s(a.ambient_dim(), a.ambient_dim());
  for (const auto& b : a.basis()) s.add(u * b * u.adjoint());
  std::optional<BlockStructure> st;
  if (a.has_structure()) st = a.structure().conjugated(u);
  ConcreteAlgebra out(a.ambient_dim(), std::move(s), std::move(st));
  out.meta = a.meta;
  return out;
}

ConcreteAlgebra tensor(const ConcreteAlgebra& a, const ConcreteAlgebra& b) {
  const int n = a.ambient_dim() * b.ambient_dim();
  Subspace s(n, n);
  for (const auto& x : a.basis())
    for (const auto& y : b.basis()) s.add(kron(x, y));
  return ConcreteAlgebra(n, std::move(s));
}

ConcreteAlgebra full_algebra(int n) { return block_algebra({n}, n); }

}  // namespace nearalg
