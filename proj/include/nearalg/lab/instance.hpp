#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "nearalg/core/rng.hpp"
#include "nearalg/cpmaps.hpp"

namespace nearalg {

enum class Recipe { Conjugation, ChoiNoise, BlockRotation };

const char* to_string(Recipe r);
Recipe recipe_from_string(const std::string& s);

struct InstanceParams {
  /// full:n, blocks:n1,n2,..., diag:k or amp:nxm (M_n with multiplicity m).
  std::string algebra = "blocks:2,1";
  int dim = 4;
  double eps = 1e-6;
};

/// A pair of close algebras with the data needed to regenerate it.
struct Instance {
  std::string id;
  Recipe recipe = Recipe::Conjugation;
  InstanceParams params;
  std::uint64_t seed = 0;
  ConcreteAlgebra a;
  ConcreteAlgebra b;
  std::optional<CMatrix> true_unitary;
  /// Upper bound 2 ||u - 1|| on d(A, B) when the unitary is known.
  std::optional<double> distance_bound;
};

/// The block-diagonal member of a family inside M_dim.
ConcreteAlgebra algebra_family(const std::string& family, int dim);

/// Recipes: B = e^(i eps h) A e^(-i eps h); B the image algebra of the repaired
/// Choi-noisy inclusion; or e^(i eps h) with h acting on one Wedderburn block
/// and the complement of the support.
Instance gen_instance(Recipe recipe, const InstanceParams& params, std::uint64_t seed);

/// Random ucp map A -> M_N with at least `kraus_count` Kraus operators.
LinMap random_ucp(const ConcreteAlgebra& domain, int codomain_dim, int kraus_count, Rng& rng);

}  // namespace nearalg
