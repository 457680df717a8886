#include "nearalg/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>

#include <Eigen/SVD>

#include "nearalg/core/rng.hpp"

namespace nearalg {

namespace {

CMatrix clip_to_ball(CMatrix b, double radius) {
  const double nb = opnorm(b);
  if (nb > radius) b *= radius / nb;
  return b;
}

std::uint64_t content_hash(const ConcreteAlgebra& a) {
  std::uint64_t h = mix64(static_cast<std::uint64_t>(a.ambient_dim()) * 1315423911ULL + a.dim());
  for (const auto& b : a.basis())
    for (Eigen::Index i = 0; i < b.size(); ++i) {
      double parts[2] = {b.data()[i].real(), b.data()[i].imag()};
      for (double p : parts) {
        std::uint64_t bits;
        std::memcpy(&bits, &p, sizeof bits);
        h = mix64(h ^ bits);
      }
    }
  return h;
}

}  // namespace

double dual_lower_bound(const CMatrix& x, const Subspace& target, const CMatrix& functional,
                        CMatrix* normalized) {
  const CMatrix w = functional - target.project(functional);
  const double tn = tracenorm(w);
  if (tn <= 1e-300) return 0.0;
  if (normalized) *normalized = w / tn;
  return std::abs(hs_inner(w, x)) / tn;
}

NearestResult nearest_in_ball(const CMatrix& x, const Subspace& target, const NearestOptions& opt) {
  if (x.rows() != target.rows() || x.cols() != target.cols())
    throw PreconditionError("nearest_in_ball: shape mismatch");
  NearestResult res;
  std::vector<CMatrix> starts;
  starts.push_back(clip_to_ball(target.project(x), opt.radius));
  for (const auto& w : opt.warm_starts) starts.push_back(clip_to_ball(target.project(w), opt.radius));
  starts.push_back(CMatrix::Zero(x.rows(), x.cols()));

  CMatrix best = starts[0];
  double fbest = opnorm(x - best);
  for (std::size_t i = 1; i < starts.size(); ++i) {
    const double f = opnorm(x - starts[i]);
    if (f < fbest) {
      fbest = f;
      best = starts[i];
    }
  }

  CMatrix b = best;
  for (int k = 1; k <= opt.iters && fbest > opt.tol && target.dim() > 0; ++k) {
    const TopSingularPair t = top_singular_pair(x - b);
    if (t.value < fbest) {
      fbest = t.value;
      best = b;
      if (fbest <= opt.tol) break;
    }
    const CMatrix g = target.project(t.left * t.right.adjoint());
    const double gn = g.norm();
    if (gn < 1e-15) break;
    const double step = 0.5 * fbest / std::sqrt(static_cast<double>(k));
    b = clip_to_ball(b + (step / gn) * g, opt.radius);
  }
  const double flast = opnorm(x - b);
  if (flast < fbest) {
    fbest = flast;
    best = b;
  }
  res.witness = best;
  res.upper = fbest;

  // Dual certificate from the top singular subspace of the best residual.
  const CMatrix r = x - best;
  Eigen::JacobiSVD<CMatrix> svd(r, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector& s = svd.singularValues();
  double lo = 0.0;
  CMatrix dual;
  if (s.size() > 0 && s(0) > 0) {
    CMatrix w = CMatrix::Zero(r.rows(), r.cols());
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      if (s(i) < s(0) * (1 - 1e-6)) break;
      w += svd.matrixU().col(i) * svd.matrixV().col(i).adjoint();
      CMatrix nd;
      const double l = dual_lower_bound(x, target, w, &nd);
      if (l > lo) {
        lo = l;
        dual = nd;
      }
    }
    CMatrix nd;
    const double l = dual_lower_bound(x, target, r, &nd);
    if (l > lo) {
      lo = l;
      dual = nd;
    }
  }
  res.lower = std::min(lo, res.upper);
  res.dual = dual;
  return res;
}

NearestResult nearest_in_ball(const CMatrix& x, const ConcreteAlgebra& target, const NearestOptions& opt) {
  return nearest_in_ball(x, target.span(), opt);
}

std::vector<CMatrix> unit_ball_samples(const ConcreteAlgebra& a, const SampleSpec& spec) {
  std::vector<CMatrix> out;
  if (a.dim() == 0) return out;
  const int n = a.ambient_dim();
  if (spec.include_basis)
    for (const auto& b : a.basis()) out.push_back(b / opnorm(b));
  Rng rng = Rng::stream(spec.seed, 0);
  auto random_hermitian = [&]() {
    CVector c(a.dim());
    for (int i = 0; i < a.dim(); ++i) c(i) = rng.complex_normal();
    CMatrix h = hermitian_part(a.span().combine(c));
    const double nh = opnorm(h);
    return nh > 0 ? CMatrix(h / nh) : h;
  };
  for (int k = 0; k < spec.random_selfadjoint; ++k) {
    const CMatrix h = 1.5 * random_hermitian();
    out.push_back(hermitian_function(h, [](double t) { return std::clamp(t, -1.0, 1.0); }));
  }
  for (int k = 0; k < spec.random_unitary; ++k) {
    const CMatrix h = std::numbers::pi * rng.uniform() * random_hermitian();
    out.push_back(unitary_exp(h) - (identity(n) - a.support()));
  }
  return out;
}

NearInclusionCert near_inclusion(const std::vector<CMatrix>& xs, const Subspace& b,
                                 const NearestOptions& opt) {
  NearInclusionCert cert;
  for (const auto& x : xs) {
    const NearestResult r = nearest_in_ball(x, b, opt);
    cert.witnesses.push_back({x, r.witness, r.upper, r.lower});
    cert.gamma_hi = std::max(cert.gamma_hi, r.upper);
    cert.gamma_lo = std::max(cert.gamma_lo, r.lower);
  }
  return cert;
}

NearInclusionCert near_inclusion(const ConcreteAlgebra& a, const ConcreteAlgebra& b,
                                 const SampleSpec& spec, double tol) {
  if (a.ambient_dim() != b.ambient_dim()) throw PreconditionError("near_inclusion: ambient mismatch");
  NearestOptions opt;
  opt.iters = spec.iters;
  opt.tol = tol;
  NearInclusionCert cert = near_inclusion(unit_ball_samples(a, spec), b.span(), opt);
  cert.sample_spec = spec;
  return cert;
}

DistanceInterval kk_distance(const ConcreteAlgebra& a, const ConcreteAlgebra& b,
                             const SampleSpec& spec, double tol) {
  // Canonical order makes the result independent of argument order.
  const bool swap = content_hash(b) < content_hash(a);
  const ConcreteAlgebra& first = swap ? b : a;
  const ConcreteAlgebra& second = swap ? a : b;
  SampleSpec s1 = spec, s2 = spec;
  s1.seed = mix64(spec.seed ^ 0x1ULL);
  s2.seed = mix64(spec.seed ^ 0x2ULL);
  const NearInclusionCert c12 = near_inclusion(first, second, s1, tol);
  const NearInclusionCert c21 = near_inclusion(second, first, s2, tol);

  DistanceInterval d;
  auto scan = [&](const NearInclusionCert& c, const char* label) {
    std::size_t arg = 0;
    for (std::size_t i = 0; i < c.witnesses.size(); ++i) {
      const auto& w = c.witnesses[i];
      if (w.lower > d.lo) {
        d.lo = w.lower;
        d.lo_witness = w.sample;
      }
      if (w.upper > c.witnesses[arg].upper) arg = i;
    }
    if (!c.witnesses.empty())
      d.hi_assignment += std::string(d.hi_assignment.empty() ? "" : "; ") + label + " sample " +
                         std::to_string(arg) + " ub " + format_double(c.witnesses[arg].upper);
  };
  d.hi = std::min(2.0, std::max(c12.gamma_hi, c21.gamma_hi));
  scan(c12, "first->second");
  scan(c21, "second->first");
  d.lo = std::min(d.lo, d.hi);
  return d;
}

double recompute_witnesses(const NearInclusionCert& cert) {
  double worst = 0.0;
  for (const auto& w : cert.witnesses) worst = std::max(worst, std::abs(opnorm(w.sample - w.witness) - w.upper));
  return worst;
}

namespace {

/// Entry (j, k) of x in the kron(b, e_jk) convention of A (x) M_n.
CMatrix amplified_entry(const CMatrix& x, int n, int j, int k) {
  const int nb = static_cast<int>(x.rows()) / n;
  CMatrix e(nb, nb);
  for (int a = 0; a < nb; ++a)
    for (int c = 0; c < nb; ++c) e(a, c) = x(a * n + j, c * n + k);
  return e;
}

}  // namespace

NearInclusionCert tensor_lift(const std::vector<CMatrix>& xs, const ConcreteAlgebra& b, int n, double gamma,
                              const NearestOptions& opt) {
  const ConcreteAlgebra amp = tensor(b, full_algebra(n));
  const double target = 2 * gamma + gamma * gamma;
  NearInclusionCert cert;
  for (const auto& x : xs) {
    NearestOptions o = opt;
    o.radius = opnorm(x) + target + 1.0;
    CMatrix assembled = CMatrix::Zero(x.rows(), x.cols());
    NearestOptions eo = opt;
    eo.radius = o.radius;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const CMatrix entry = amplified_entry(x, n, j, k);
        if (entry.norm() == 0.0) continue;
        assembled += kron(nearest_in_ball(entry, b, eo).witness, matrix_unit(n, j, k));
      }
    o.warm_starts.push_back(assembled);
    const NearestResult r = nearest_in_ball(x, amp.span(), o);
    cert.witnesses.push_back({x, r.witness, r.upper, r.lower});
    cert.gamma_hi = std::max(cert.gamma_hi, r.upper);
    cert.gamma_lo = std::max(cert.gamma_lo, r.lower);
  }
  if (cert.gamma_hi > target + opt.tol)
    throw WitnessSearchError("tensor_lift: witness above 2*gamma + gamma^2", cert.gamma_hi);
  return cert;
}

Subspace row_subspace(const ConcreteAlgebra& b, int n, int r) {
  const int nb = b.ambient_dim() * n;
  Subspace s(nb, nb * r);
  for (int c = 0; c < r; ++c)
    for (const auto& y : b.basis())
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          CMatrix z = CMatrix::Zero(nb, nb * r);
          z.block(0, c * nb, nb, nb) = kron(y, matrix_unit(n, j, k));
          s.add(z);
        }
  return s;
}

NearInclusionCert tensor_lift_rect(const std::vector<CMatrix>& xs, const ConcreteAlgebra& b, int n, int r,
                                   double gamma, const NearestOptions& opt) {
  const Subspace rows = row_subspace(b, n, r);
  const double target = 2 * gamma + gamma * gamma;
  NearestOptions o = opt;
  NearInclusionCert cert;
  for (const auto& x : xs) {
    o.radius = opnorm(x) + target + 1.0;
    const NearestResult res = nearest_in_ball(x, rows, o);
    cert.witnesses.push_back({x, res.witness, res.upper, res.lower});
    cert.gamma_hi = std::max(cert.gamma_hi, res.upper);
    cert.gamma_lo = std::max(cert.gamma_lo, res.lower);
  }
  if (cert.gamma_hi > target + opt.tol)
    throw WitnessSearchError("tensor_lift_rect: witness above 2*gamma + gamma^2", cert.gamma_hi);
  return cert;
}

bool equality_criterion(const ConcreteAlgebra& a, const ConcreteAlgebra& b, const NearInclusionCert& b_in_a,
                        double tol) {
  for (const auto& x : a.basis())
    if (!b.contains(x, tol)) throw PreconditionError("equality_criterion: A is not contained in B");
  if (!(b_in_a.gamma_hi < 1.0)) throw PreconditionError("equality_criterion: certificate constant is not below 1");
  if (a.dim() == b.dim()) return true;
  throw CertificateContradiction("equality_criterion: A is a proper subalgebra of B although B is within "
                                 "distance below 1 of A");
}

}  // namespace nearalg
