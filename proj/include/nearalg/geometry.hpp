#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "nearalg/algebra.hpp"

namespace nearalg {

/// Result of a nearest-point search in a ball of a subspace.
struct NearestResult {
  CMatrix witness;
  /// ||x - witness||, an upper bound for the distance.
  double upper = 0.0;
  /// Certified lower bound for the distance from x to the whole subspace.
  double lower = 0.0;
  /// Functional orthogonal to the subspace that certifies `lower`.
  CMatrix dual;
};

struct NearestOptions {
  int iters = 500;
  double tol = 1e-10;
  double radius = 1.0;
  /// Extra starting points besides the Hilbert-Schmidt projection.
  std::vector<CMatrix> warm_starts;
};

/// Minimizes ||x - b|| over b in the subspace with ||b|| <= radius by projected
/// subgradient descent, keeping the best iterate.
NearestResult nearest_in_ball(const CMatrix& x, const Subspace& target, const NearestOptions& opt = {});
NearestResult nearest_in_ball(const CMatrix& x, const ConcreteAlgebra& target,
                              const NearestOptions& opt = {});

/// Lower bound for the distance from x to the subspace from a trial functional.
double dual_lower_bound(const CMatrix& x, const Subspace& target, const CMatrix& functional,
                        CMatrix* normalized = nullptr);

struct SampleSpec {
  int random_selfadjoint = 64;
  int random_unitary = 64;
  bool include_basis = true;
  std::uint64_t seed = 0;
  int iters = 500;
};

struct Witness {
  CMatrix sample;
  CMatrix witness;
  double upper = 0.0;
  double lower = 0.0;
};

/// Sampled evidence for A inside the gamma-neighbourhood of B.
struct NearInclusionCert {
  double gamma_hi = 0.0;
  double gamma_lo = 0.0;
  std::vector<Witness> witnesses;
  SampleSpec sample_spec;
};

struct DistanceInterval {
  double lo = 0.0;
  double hi = 0.0;
  CMatrix lo_witness;
  std::string hi_assignment;
};

/// Unit-ball samples of A: basis elements, clipped self-adjoints, unitaries of A.
std::vector<CMatrix> unit_ball_samples(const ConcreteAlgebra& a, const SampleSpec& spec);

NearInclusionCert near_inclusion(const ConcreteAlgebra& a, const ConcreteAlgebra& b,
                                 const SampleSpec& spec = {}, double tol = 1e-10);
/// Witness search for an explicit family of elements.
NearInclusionCert near_inclusion(const std::vector<CMatrix>& xs, const Subspace& b,
                                 const NearestOptions& opt = {});

/// Symmetrized sampled Kadison-Kastler distance with unit-ball witnesses.
DistanceInterval kk_distance(const ConcreteAlgebra& a, const ConcreteAlgebra& b,
                             const SampleSpec& spec = {}, double tol = 1e-10);

/// Re-checks recorded witnesses; returns the largest discrepancy.
double recompute_witnesses(const NearInclusionCert& cert);

/// Raised when a witness search misses its target bound.
class WitnessSearchError : public NumericalError {
 public:
  WitnessSearchError(const std::string& what, double achieved)
      : NumericalError(what), achieved_bound(achieved) {}
  double achieved_bound;
};

/// Lifts near containment of the entries to B (x) M_n; witnesses are searched in the
/// amplified algebra and must meet 2 gamma + gamma^2.
NearInclusionCert tensor_lift(const std::vector<CMatrix>& xs, const ConcreteAlgebra& b, int n,
                              double gamma, const NearestOptions& opt = {});
/// Row variant: xs are 1 x r rows over the ambient of B (x) M_n.
NearInclusionCert tensor_lift_rect(const std::vector<CMatrix>& xs, const ConcreteAlgebra& b, int n,
                                   int r, double gamma, const NearestOptions& opt = {});
/// Subspace of 1 x r rows with entries in B (x) M_n.
Subspace row_subspace(const ConcreteAlgebra& b, int n, int r);

/// Raised when an equality test contradicts its own certificate.
class CertificateContradiction : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// For A inside B and B within gamma < 1 of A, decides A = B by dimension.
bool equality_criterion(const ConcreteAlgebra& a, const ConcreteAlgebra& b,
                        const NearInclusionCert& b_in_a, double tol = tol::alg);

}  // namespace nearalg
