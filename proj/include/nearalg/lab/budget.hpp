#pragma once

#include <string>

#include "nearalg/averaging.hpp"
#include "nearalg/intertwine.hpp"

namespace nearalg {

namespace window {
inline constexpr double projection_gamma = 1e-7;
inline constexpr double unitary_gamma = 1e-8;
inline constexpr double spatial_distance = 1e-11;
}  // namespace window

/// Hypotheses of the published constants that the paper track enforces.
enum class Hypothesis {
  RepairDefect,       // gamma <= 1/17
  IntertwineDistance, // gamma <= 13/150
  IsoEta,             // eta < 1/210000
  CloseGamma,         // gamma < 1/420000
  ProjectionGamma,    // gamma < 1e-7
  UnitaryGamma,       // gamma <= 1e-8
  SpatialDistance,    // d < 1e-11
};

struct WindowSpec {
  const char* name;
  const char* parameter;
  double bound;
  bool strict;

  bool admits(double value) const { return strict ? value < bound : value <= bound; }
};

WindowSpec window_of(Hypothesis h);

/// The free constants of one run and the track they are checked on.
struct ToleranceBudget {
  double gamma = 0.0;
  double delta = 0.0;
  double epsilon = 1e-9;
  double mu = 1e-6;
  double nu = 0.0;
  double eta = 0.0;
  Track track = Track::Paper;

  /// Always true on the experimental track.
  bool admits(Hypothesis h, double value) const;
  /// Throws PreconditionError naming the stage when the paper track rejects value.
  void require(Hypothesis h, double value, const std::string& stage) const;
};

}  // namespace nearalg
