#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "nearalg/averaging.hpp"
#include "nearalg/geometry.hpp"

namespace nearalg {

/// Hypothesis windows of the intertwining drivers on the paper track.
namespace window {
inline constexpr double iso_eta = 1.0 / 210000.0;
inline constexpr double close_gamma = 1.0 / 420000.0;
inline constexpr double surjective_gamma = 1.0 / 5.0;
inline constexpr double unit_match_gamma = 1.0 / 4.0;
}  // namespace window

/// One stage of the intertwining loop.
struct StageRow {
  int stage = 0;
  int z_size = 0;
  double eta = 0.0;     // max ||phi(z) - z|| over the stage set
  double defect = 0.0;  // defect of phi on the diagonal set before repair
  std::optional<double> drift;  // max ||alpha_n(x) - alpha_(n-1)(x)||, absent at stage 1
};

struct IsoResult {
  LinMap map;
  std::vector<CMatrix> conjugators;
  std::vector<StageRow> trace;
  std::vector<Certificate> certificates;
  double eta = 0.0;
  double min_singular_value = 0.0;
  bool converged = false;

  /// alpha(A) as a concrete algebra.
  ConcreteAlgebra image() const;
  /// Least-squares preimage of y under the map.
  CMatrix preimage(const CMatrix& y) const;
};

/// Supplies a cpc map A -> B close to the inclusion on the requested finite set.
using CpcProducer = std::function<LinMap(const std::vector<CMatrix>& z)>;

/// The conditional expectation onto B restricted to A.
CpcProducer arveson_producer(const ConcreteAlgebra& a, const ConcreteAlgebra& b);

struct IsoOptions {
  double mu = 1e-6;
  int max_iter = 12;
  double conv = 1e-11;
  /// Tolerance for the repaired defect at each stage.
  double eps = 1e-9;
  /// Certify surjectivity through the dimension count.
  bool surjective = false;
  Track track = Track::Paper;
  SampleSpec samples{16, 16, true, 0, 300};
};

/// Builds a *-homomorphism A -> B close to the inclusion by repairing the
/// producer's maps stage by stage and aligning consecutive stages by unitaries.
IsoResult intertwining_iso(const ConcreteAlgebra& a, const ConcreteAlgebra& b, const std::vector<CMatrix>& xa,
                           const CpcProducer& producer, const IsoOptions& opt = {});

/// Isomorphism for a close pair with both directional bounds 28 gamma^(1/2).
IsoResult close_isomorphism(const ConcreteAlgebra& a, const ConcreteAlgebra& b, const DistanceInterval& dist,
                            const std::vector<CMatrix>& xs, const std::vector<CMatrix>& ys,
                            const IsoOptions& opt = {});

/// Injective *-homomorphism A -> B within 28 gamma^(1/2) of the inclusion on xs.
IsoResult near_embedding_nuclear(const ConcreteAlgebra& a, const ConcreteAlgebra& b, double gamma,
                                 const std::vector<CMatrix>& xs, const IsoOptions& opt = {});

struct HalfFlipResult {
  LinMap map;
  CMatrix projection;  // p in B near the unit of A
  CMatrix conjugator;  // u with u p u* = e_A
  double flip_distance = 0.0;  // ||v - w||
  std::vector<Certificate> certificates;
};

/// Swap unitary sum_ij e_ij (x) e_ji of a single full matrix block.
CMatrix flip_unitary(const ConcreteAlgebra& a);

/// cpc map A -> B through a tensor witness of the flip unitary, for A a single
/// full matrix block.
HalfFlipResult half_flip_cpc(const ConcreteAlgebra& a, const ConcreteAlgebra& b, double gamma,
                             const std::vector<CMatrix>& xs, Track track = Track::Experimental);

struct ImplementResult {
  CMatrix u;
  double basis_deviation = 0.0;     // max ||alpha(x) - x|| over the basis of A
  double diagonal_deviation = 0.0;  // the same over the diagonal set
  double conjugation_residual = 0.0;
  double subspace_residual = 0.0;
  std::vector<Certificate> certificates;
};

/// Unitary u with u x u* = alpha(x) on A for a *-homomorphism alpha close to the
/// inclusion; `target` is B = alpha(A) when known.
ImplementResult implement_unitarily(const LinMap& alpha, const ConcreteAlgebra* target = nullptr,
                                    Track track = Track::Experimental);

/// Unitary carrying the support of A onto the support of B.
UnitaryResult unit_match(const ConcreteAlgebra& a, const ConcreteAlgebra& b, double gamma,
                         Track track = Track::Experimental);

}  // namespace nearalg
