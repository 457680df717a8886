#pragma once

#include <optional>
#include <vector>

#include "nearalg/cpmaps.hpp"

namespace nearalg {

/// Finite virtual diagonal sum_i lambda_i a_i* (x) a_i.
struct Diagonal {
  std::vector<double> weights;
  std::vector<CMatrix> terms;
  bool exact = true;
  bool unitary_terms = true;

  /// y -> sum_i lambda_i a_i* y a_i.
  CMatrix sandwich(const CMatrix& y) const;
  /// sum_i lambda_i a_i* a_i.
  CMatrix product() const;
};

/// Clock-and-shift unitaries X^a Z^b of M_n, a and b in [0, n).
std::vector<CMatrix> weyl_unitaries(int n);

/// Exact diagonal of a finite-dimensional algebra: the group of products of
/// per-summand Weyl unitaries times cyclic phases on the central projections,
/// with uniform weights.
Diagonal exact_diagonal(const ConcreteAlgebra& a);
Diagonal exact_diagonal(const FDAlgebra& f);

/// Checks m(w) = 1 and that the sandwich lands in the commutant of A for every
/// middle matrix unit of the ambient.
Certificate verify_diagonal(const ConcreteAlgebra& a, const Diagonal& d, double tol_unit = 1e-12,
                            double tol_central = 1e-11);

struct UnitaryResult {
  CMatrix u;
  Certificate certificate;
};

/// Unitary polar part of x with ||u - 1|| <= sqrt(2) ||x - 1||; requires ||x - 1|| < 1.
UnitaryResult polar_unitary(const CMatrix& x);
/// Unitary u with u p u* = q and ||u - 1|| <= sqrt(2) ||p - q||; requires ||p - q|| < 1.
UnitaryResult projection_conjugator(const CMatrix& p, const CMatrix& q);

/// Hypothesis windows used on the paper track.
namespace window {
inline constexpr double repair_defect = 1.0 / 17.0;
inline constexpr double intertwine_distance = 13.0 / 150.0;
inline constexpr double intertwine_defect = 1.0 / 200.0;
}  // namespace window

struct ImproveResult {
  LinMap psi;
  double gamma = 0.0;  // defect of phi on the diagonal set
  CMatrix conjugator;  // w
  std::vector<Certificate> certificates;
};

/// Replaces a cpc map with small defect on the diagonal set by a nearby map that
/// is multiplicative on A. `codomain` is the algebra D containing phi(A); pass
/// nullptr for the full matrix algebra.
ImproveResult improve_multiplicativity(const LinMap& phi, const ConcreteAlgebra* codomain,
                                       const std::vector<CMatrix>& xs, double eps,
                                       Track track = Track::Paper,
                                       const std::optional<Diagonal>& diag = std::nullopt);

/// Elements a_i of A with a~_i = alpha_i 1 + 2 a_i for the tilde diagonal terms.
std::vector<CMatrix> diagonal_set(const Diagonal& tilde_diag);

struct IntertwineResult {
  CMatrix u;
  double gamma = 0.0;  // max ||phi1(y) - phi2(y)|| over the diagonal set
  double delta = 0.0;  // defect of the two maps on the diagonal set
  double exactness = 0.0;  // max ||s phi2(x) - phi1(x) s|| over xs
  std::vector<Certificate> certificates;
};

/// Unitary u in D-dagger (extended by 1 off the support) with phi1 close to Ad(u) phi2.
IntertwineResult intertwining_unitary(const LinMap& phi1, const LinMap& phi2, const ConcreteAlgebra* codomain,
                                      const std::vector<CMatrix>& xs, double eps,
                                      Track track = Track::Paper,
                                      const std::optional<Diagonal>& diag = std::nullopt);

struct LiftResult {
  CMatrix value;
  double commutator = 0.0;
  std::vector<Certificate> certificates;
};

/// Element of A commuting with A and close to the expectation of m.
LiftResult commutant_lift(const CMatrix& m, const ConcreteAlgebra& a, const std::vector<CMatrix>& xs,
                          double eps, const std::optional<Diagonal>& diag = std::nullopt);

/// Unitary v = exp(i pi k) with k central in A and ||v - 1|| <= ||u - 1||.
LiftResult unitary_commutant_lift(const CMatrix& u, const ConcreteAlgebra& a, const std::vector<CMatrix>& xs,
                                  double eps, double alpha,
                                  const std::optional<Diagonal>& diag = std::nullopt);

}  // namespace nearalg
