#include "nearalg/core/linalg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace nearalg {

CMatrix identity(int n) { return CMatrix::Identity(n, n); }

CMatrix matrix_unit(int n, int i, int j) {
  CMatrix e = CMatrix::Zero(n, n);
  e(i, j) = 1.0;
  return e;
}

CMatrix adjoint(const CMatrix& x) { return x.adjoint(); }

CMatrix hermitian_part(const CMatrix& x) { return 0.5 * (x + x.adjoint()); }

double opnorm(const CMatrix& x) {
  if (x.size() == 0) return 0.0;
  // The Gram matrix is smaller when x is rectangular.
  const CMatrix g = x.rows() <= x.cols() ? CMatrix(x * x.adjoint()) : CMatrix(x.adjoint() * x);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(g, Eigen::EigenvaluesOnly);
  const double top = es.eigenvalues().maxCoeff();
  return std::sqrt(std::max(top, 0.0));
}

double hsnorm(const CMatrix& x) { return x.norm(); }

double tracenorm(const CMatrix& x) {
  if (x.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(x);
  return svd.singularValues().sum();
}

cplx hs_inner(const CMatrix& a, const CMatrix& b) {
  return (a.conjugate().cwiseProduct(b)).sum();
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMatrix direct_sum(const std::vector<CMatrix>& blocks) {
  Eigen::Index r = 0, c = 0;
  for (const auto& b : blocks) {
    r += b.rows();
    c += b.cols();
  }
  CMatrix out = CMatrix::Zero(r, c);
  r = c = 0;
  for (const auto& b : blocks) {
    out.block(r, c, b.rows(), b.cols()) = b;
    r += b.rows();
    c += b.cols();
  }
  return out;
}

TopSingularPair top_singular_pair(const CMatrix& x) {
  Eigen::JacobiSVD<CMatrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  TopSingularPair t;
  t.value = svd.singularValues()(0);
  t.left = svd.matrixU().col(0);
  t.right = svd.matrixV().col(0);
  return t;
}

HermitianEigen hermitian_eigen(const CMatrix& x) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(x));
  return {es.eigenvalues(), es.eigenvectors()};
}

double min_hermitian_eigenvalue(const CMatrix& x) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(x), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

CMatrix spectral_projection(const CMatrix& x, double lo, double hi) {
  return hermitian_function(x, [&](double t) { return (t >= lo && t <= hi) ? 1.0 : 0.0; });
}

CMatrix range_projection(const CMatrix& positive, double rel_cut) {
  const HermitianEigen e = hermitian_eigen(positive);
  const double top = e.values.size() ? e.values.cwiseAbs().maxCoeff() : 0.0;
  CMatrix p = CMatrix::Zero(positive.rows(), positive.cols());
  if (top == 0.0) return p;
  for (Eigen::Index i = 0; i < e.values.size(); ++i)
    if (e.values(i) > rel_cut * top) p += e.vectors.col(i) * e.vectors.col(i).adjoint();
  return p;
}

int projection_rank(const CMatrix& p) {
  const HermitianEigen e = hermitian_eigen(p);
  return static_cast<int>((e.values.array() > 0.5).count());
}

CMatrix range_basis(const CMatrix& p) {
  const HermitianEigen e = hermitian_eigen(p);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = e.values.size() - 1; i >= 0; --i)
    if (e.values(i) > 0.5) keep.push_back(i);
  CMatrix q(p.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) q.col(k) = e.vectors.col(keep[k]);
  return q;
}

CMatrix psd_sqrt(const CMatrix& positive) {
  return hermitian_function(positive, [](double t) { return t > 0 ? std::sqrt(t) : 0.0; });
}

CMatrix psd_pinv(const CMatrix& positive, double rel_cut) {
  const HermitianEigen e = hermitian_eigen(positive);
  const double top = e.values.size() ? e.values.cwiseAbs().maxCoeff() : 0.0;
  const double cut = rel_cut * top;
  RVector fv(e.values.size());
  for (Eigen::Index i = 0; i < fv.size(); ++i)
    fv(i) = (top > 0 && e.values(i) > cut) ? 1.0 / e.values(i) : 0.0;
  return e.vectors * fv.cast<cplx>().asDiagonal() * e.vectors.adjoint();
}

CMatrix unitary_exp(const CMatrix& h) {
  const HermitianEigen e = hermitian_eigen(h);
  CVector d(e.values.size());
  for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = std::polar(1.0, e.values(i));
  return e.vectors * d.asDiagonal() * e.vectors.adjoint();
}

CMatrix unitary_log(const CMatrix& u, double guard) {
  Eigen::ComplexSchur<CMatrix> schur(u);
  const CMatrix& t = schur.matrixT();
  const CMatrix& q = schur.matrixU();
  // For a normal matrix the Schur form is diagonal up to rounding.
  CVector d(t.rows());
  for (Eigen::Index i = 0; i < t.rows(); ++i) {
    const cplx z = t(i, i);
    if (std::abs(z + 1.0) <= guard)
      throw PreconditionError("unitary_log: spectrum within guard distance of -1");
    d(i) = cplx(std::log(std::abs(z)), std::arg(z));
  }
  return q * d.asDiagonal() * q.adjoint();
}

CMatrix polar_part(const CMatrix& x) {
  Eigen::JacobiSVD<CMatrix> svd(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

CMatrix partial_polar_part(const CMatrix& x, double rel_cut) {
  Eigen::JacobiSVD<CMatrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector& s = svd.singularValues();
  CMatrix out = CMatrix::Zero(x.rows(), x.cols());
  if (s.size() == 0 || s(0) == 0.0) return out;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_cut * s(0)) out += svd.matrixU().col(i) * svd.matrixV().col(i).adjoint();
  return out;
}

bool is_square(const CMatrix& x) { return x.rows() == x.cols(); }

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace nearalg
