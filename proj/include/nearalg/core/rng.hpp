#pragma once

#include <cstdint>
#include <random>

#include "nearalg/core/linalg.hpp"

namespace nearalg {

/// Seeded generator with a platform-independent output sequence.
///
/// The engine is std::mt19937_64, whose sequence is fixed by the standard.
/// Library distributions are implementation-defined, so uniform and normal
/// variates are derived from raw engine output here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0);

  /// Independent stream keyed by (seed, stream index).
  static Rng stream(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal via Box-Muller.
  double normal();
  cplx complex_normal();

  /// Complex Ginibre matrix with entries of unit variance.
  CMatrix ginibre(int rows, int cols);
  /// Random Hermitian matrix scaled to operator norm 1.
  CMatrix hermitian(int n);
  /// Haar-distributed unitary.
  CMatrix unitary(int n);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// splitmix64 finalizer, used to derive stream seeds.
std::uint64_t mix64(std::uint64_t x);

}  // namespace nearalg
