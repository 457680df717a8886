#pragma once

// Test-only oracles. They deliberately avoid the library's own routines so
// that agreement is evidence rather than tautology.

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;

/// Small deterministic LCG, independent of the library generator.
class Lcg {
 public:
  explicit Lcg(std::uint64_t seed) : s_(seed * 2862933555777941757ULL + 3037000493ULL) {}
  double uniform() {
    s_ = s_ * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<double>(s_ >> 11) * 0x1.0p-53;
  }
  double normal() {
    double u1 = uniform();
    while (u1 <= 0) u1 = uniform();
    return std::sqrt(-2 * std::log(u1)) * std::cos(6.283185307179586 * uniform());
  }
  Mat gaussian(int r, int c) {
    Mat m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m(i, j) = cplx(normal(), normal());
    return m;
  }
  Mat hermitian(int n) {
    Mat g = gaussian(n, n);
    return 0.5 * (g + g.adjoint());
  }
  /// Unitary from Gram-Schmidt on a Gaussian matrix.
  Mat unitary(int n) {
    Mat g = gaussian(n, n);
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < j; ++k) g.col(j) -= g.col(k) * g.col(k).dot(g.col(j));
      g.col(j) /= g.col(j).norm();
    }
    return g;
  }

 private:
  std::uint64_t s_;
};

/// Operator norm by power iteration on x* x.
inline double opnorm(const Mat& x, int iters = 2000) {
  if (x.size() == 0) return 0;
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(x.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = cplx(1.0 + 0.1 * i, 0.03 * i);
  v /= v.norm();
  double lam = 0;
  for (int k = 0; k < iters; ++k) {
    Eigen::VectorXcd w = x.adjoint() * (x * v);
    const double n = w.norm();
    if (n == 0) return 0;
    lam = n;
    v = w / n;
  }
  return std::sqrt(lam);
}

/// Kronecker product written entrywise.
inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < out.rows(); ++i)
    for (Eigen::Index j = 0; j < out.cols(); ++j)
      out(i, j) = a(i / b.rows(), j / b.cols()) * b(i % b.rows(), j % b.cols());
  return out;
}

inline Mat unit(int n, int i, int j) {
  Mat e = Mat::Zero(n, n);
  e(i, j) = 1;
  return e;
}

/// Rank of the span of matrices via the rank of their vectorized Gram matrix.
inline int span_rank(const std::vector<Mat>& ms, double tol = 1e-8) {
  if (ms.empty()) return 0;
  Mat g(ms.size(), ms.size());
  for (std::size_t i = 0; i < ms.size(); ++i)
    for (std::size_t j = 0; j < ms.size(); ++j) g(i, j) = (ms[i].adjoint() * ms[j]).trace();
  Eigen::SelfAdjointEigenSolver<Mat> es(g);
  int r = 0;
  const double top = es.eigenvalues().maxCoeff();
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) > tol * top) ++r;
  return r;
}

/// Closed-form rotation projection onto (cos t, sin t).
inline Mat rotated_projection(double t) {
  Mat p(2, 2);
  p << std::cos(t) * std::cos(t), std::cos(t) * std::sin(t), std::cos(t) * std::sin(t), std::sin(t) * std::sin(t);
  return p;
}

/// Trace-preserving conditional expectation onto block-diagonal matrices with
/// the given block sizes: keeps diagonal blocks.
inline Mat block_pinching(const Mat& x, const std::vector<int>& sizes) {
  Mat out = Mat::Zero(x.rows(), x.cols());
  int o = 0;
  for (int n : sizes) {
    out.block(o, o, n, n) = x.block(o, o, n, n);
    o += n;
  }
  return out;
}

}  // namespace oracle
