#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace nearalg {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Raised when an input violates a documented precondition.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical construction cannot be completed.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Default tolerances shared across modules.
namespace tol {
inline constexpr double alg = 1e-9;     // algebraic identities
inline constexpr double exact = 1e-12;  // witness recomputation, round trips
inline constexpr double psd = 1e-9;     // positivity of Choi matrices
inline constexpr double rank = 1e-8;    // relative cutoff for pseudo-inverses
inline constexpr double roundoff = 1e-10;  // absolute slack on analytic ceilings
}  // namespace tol

CMatrix identity(int n);
CMatrix matrix_unit(int n, int i, int j);
CMatrix adjoint(const CMatrix& x);
CMatrix hermitian_part(const CMatrix& x);

/// Operator norm (largest singular value).
double opnorm(const CMatrix& x);
/// Hilbert-Schmidt (Frobenius) norm.
double hsnorm(const CMatrix& x);
/// Trace norm (sum of singular values).
double tracenorm(const CMatrix& x);
/// Hilbert-Schmidt inner product tr(a* b).
cplx hs_inner(const CMatrix& a, const CMatrix& b);

/// Kronecker product, row index of a is the slow index.
CMatrix kron(const CMatrix& a, const CMatrix& b);
/// Block-diagonal direct sum.
CMatrix direct_sum(const std::vector<CMatrix>& blocks);

struct TopSingularPair {
  double value = 0.0;
  CVector left;
  CVector right;
};
TopSingularPair top_singular_pair(const CMatrix& x);

/// Eigen-decomposition of the Hermitian part of x, eigenvalues ascending.
struct HermitianEigen {
  RVector values;
  CMatrix vectors;
};
HermitianEigen hermitian_eigen(const CMatrix& x);

double min_hermitian_eigenvalue(const CMatrix& x);

/// f applied to the Hermitian part of x through its spectral decomposition.
template <typename F>
CMatrix hermitian_function(const CMatrix& x, F&& f) {
  const HermitianEigen e = hermitian_eigen(x);
  RVector fv(e.values.size());
  for (Eigen::Index i = 0; i < e.values.size(); ++i) fv(i) = f(e.values(i));
  return e.vectors * fv.cast<cplx>().asDiagonal() * e.vectors.adjoint();
}

/// Spectral projection of a Hermitian matrix onto eigenvalues in [lo, hi].
CMatrix spectral_projection(const CMatrix& x, double lo, double hi);
/// Orthogonal projection onto the range, eigenvalues below rel_cut*max dropped.
CMatrix range_projection(const CMatrix& positive, double rel_cut = tol::rank);
/// Rank of a Hermitian projection-like matrix, counted by eigenvalues above 1/2.
int projection_rank(const CMatrix& p);
/// Orthonormal basis (columns) of the range of a projection.
CMatrix range_basis(const CMatrix& p);

CMatrix psd_sqrt(const CMatrix& positive);
/// Moore-Penrose inverse of a positive matrix with relative cutoff.
CMatrix psd_pinv(const CMatrix& positive, double rel_cut = tol::rank);
/// exp(i * h) for Hermitian h.
CMatrix unitary_exp(const CMatrix& h);
/// Principal logarithm of a unitary via the Schur form; eigenvalues are
/// required to stay at distance > guard from -1.
CMatrix unitary_log(const CMatrix& u, double guard = 1e-6);

/// Unitary polar factor u = U V* from the singular value decomposition.
CMatrix polar_part(const CMatrix& x);
/// Partial isometry polar factor, singular values below rel_cut dropped.
CMatrix partial_polar_part(const CMatrix& x, double rel_cut = 1e-10);

bool is_square(const CMatrix& x);

/// Shortest decimal that round-trips the double.
std::string format_double(double v);

}  // namespace nearalg
