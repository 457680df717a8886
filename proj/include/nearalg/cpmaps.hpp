#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "nearalg/algebra.hpp"

namespace nearalg {

enum class Tri { Unchecked, Yes, No };

struct MapFlags {
  Tri cp = Tri::Unchecked;
  Tri cpc = Tri::Unchecked;
  Tri ucp = Tri::Unchecked;
};

/// Linear map from a concrete algebra into M_N, stored by the images of the
/// domain basis.
class LinMap {
 public:
  LinMap(ConcreteAlgebra domain, int codomain_dim, std::vector<CMatrix> images,
         std::optional<CMatrix> codomain_unit = std::nullopt);

  static LinMap from_function(const ConcreteAlgebra& domain, int codomain_dim,
                              const std::function<CMatrix(const CMatrix&)>& f,
                              std::optional<CMatrix> codomain_unit = std::nullopt);
  /// Map on the block-diagonal realization of F from per-block Choi matrices.
  static LinMap from_choi(const FDAlgebra& f, int codomain_dim, const std::vector<CMatrix>& choi_blocks);

  const ConcreteAlgebra& domain() const { return domain_; }
  int codomain_dim() const { return n_; }
  const CMatrix& codomain_unit() const { return unit_; }
  const std::vector<CMatrix>& images() const { return images_; }

  CMatrix operator()(const CMatrix& x) const;
  /// Image of the (i, j) matrix unit of summand k of the domain.
  CMatrix on_unit(int k, int i, int j) const;
  /// Choi matrices sum_ij e_ij (x) phi(e_ij), one per summand of the domain.
  std::vector<CMatrix> choi_blocks() const;
  CMatrix choi() const;

  LinMap operator+(const LinMap& other) const;
  LinMap operator-(const LinMap& other) const;
  LinMap scaled(cplx s) const;
  LinMap with_unit(const CMatrix& unit) const;

  MapFlags flags;

 private:
  ConcreteAlgebra domain_;
  int n_ = 0;
  std::vector<CMatrix> images_;
  CMatrix unit_;
};

/// g after f; f must map into the domain of g.
LinMap compose(const LinMap& g, const LinMap& f);
/// x -> sum_l K_l x K_l* on the block-diagonal realization of F (K_l is N x ambient(F)).
LinMap kraus_map(const FDAlgebra& f, int codomain_dim, const std::vector<CMatrix>& kraus);
/// x -> u x u* restricted to the domain.
LinMap conjugation_map(const ConcreteAlgebra& domain, const CMatrix& u);
/// The inclusion of the domain into M_N.
LinMap inclusion_map(const ConcreteAlgebra& domain);

struct ClassifyReport {
  MapFlags flags;
  double min_choi_eigenvalue = 0.0;
  double norm_of_one = 0.0;
  double unit_error = 0.0;
};

/// Complete positivity through the Choi spectrum, contractivity and unitality.
ClassifyReport classify(const LinMap& phi, double tau = tol::psd);
/// classify and store the flags on the map.
LinMap& mark(LinMap& phi, double tau = tol::psd);

/// phi(x) = V* pi(x) V with pi a multiple of the identity representation per summand.
struct Stinespring {
  BlockStructure domain_structure;
  std::vector<std::vector<CMatrix>> kraus;  // per summand, N x n_k
  std::vector<int> multiplicities;          // Kraus rank per summand
  CMatrix isometry;                         // V, K x N
  CMatrix projection;                       // p = V V*

  int dim() const { return static_cast<int>(isometry.rows()); }
  CMatrix pi(const CMatrix& x) const;
  CMatrix compress(const CMatrix& y) const { return isometry.adjoint() * y * isometry; }
};

Stinespring stinespring(const LinMap& phi, double tau = tol::psd);

/// Residuals of phi = V* pi V and of the multiplicative defect identity on xs.
Certificate verify_stinespring(const LinMap& phi, const Stinespring& s, const std::vector<CMatrix>& xs,
                               double tol = 1e-10);

struct DefectReport {
  double sup = 0.0;
  std::vector<double> per_element;  // in the order X then X*
};

/// sup over X and X* of ||phi(x x*) - phi(x) phi(x*)||.
DefectReport mult_defect(const LinMap& phi, const std::vector<CMatrix>& xs);

/// ||phi(xy) - phi(x)phi(y)|| <= ||phi(xx*) - phi(x)phi(x*)||^(1/2) ||y|| + tau.
Certificate check_stinespring_inequality(const LinMap& phi, const CMatrix& x, const CMatrix& y,
                                         double tau = tol::alg);

/// Trace-preserving conditional expectation of M_N onto a unital subalgebra.
LinMap conditional_expectation(int n, const ConcreteAlgebra& a);
/// The same projection for a possibly non-unital subalgebra: x -> E(e x e).
LinMap compressed_expectation(int n, const ConcreteAlgebra& a);

/// Conditional expectation onto B restricted to A with the bound 2 gamma on xs.
struct ArvesonResult {
  LinMap map;
  Certificate certificate;
};
ArvesonResult arveson_restrict(const ConcreteAlgebra& a, const ConcreteAlgebra& b,
                               const std::vector<CMatrix>& xs, double gamma, double tau = tol::alg);

enum class Unitization { Dagger, Tilde };

/// Unital extension of a cpc map; the adjoined unit goes to the codomain unit.
LinMap ucp_extension(const LinMap& phi, Unitization mode);

struct CBBracket {
  double lo = 0.0;
  double hi = 0.0;
};

/// Completely bounded norm bracket: Haagerup factorizations of the Choi data
/// from above, sampled amplifications from below.
CBBracket cb_bracket(const LinMap& phi, int samples = 16, std::uint64_t seed = 0);

}  // namespace nearalg
