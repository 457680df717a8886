#pragma once

#include <optional>
#include <vector>

#include "nearalg/averaging.hpp"
#include "nearalg/cpmaps.hpp"
#include "nearalg/geometry.hpp"
#include "nearalg/intertwine.hpp"

namespace nearalg {

/// Order-zero map phi = pi(.) h from a finite-dimensional algebra, with
/// h = phi(1) commuting with the supporting homomorphism pi.
struct OrderZeroMap {
  FDAlgebra domain;
  LinMap map;
  LinMap pi;
  CMatrix h;

  int codomain_dim() const { return map.codomain_dim(); }
  CMatrix operator()(const CMatrix& x) const { return map(x); }
};

/// Residuals of the structure identities on the matrix units of the domain.
struct StructureResiduals {
  double right_factor = 0.0;    // ||phi(x) - pi(x) h||
  double left_factor = 0.0;     // ||phi(x) - h pi(x)||
  double multiplicative = 0.0;  // ||pi(xy) - pi(x) pi(y)||
  double adjoint = 0.0;         // ||pi(x*) - pi(x)*||
  double worst() const;
};

struct StructureResult {
  LinMap pi;
  CMatrix h;
  StructureResiduals residuals;
};

/// h = phi(1) and pi(x) = phi(x) h^+, where the pseudoinverse cuts the spectrum
/// of h below max(1e-8 ||h||, tol). Throws NumericalError when a residual
/// exceeds tol.
StructureResult structure_decompose(const LinMap& phi, double tol = tol::alg);

/// The order-zero map when phi is cpc and its structure residuals are within tol.
std::optional<OrderZeroMap> is_order_zero(const LinMap& phi, double tol = tol::alg);

/// x -> pi(x) h for a homomorphism pi and a positive contraction h in pi(F)'.
OrderZeroMap order_zero_from(const LinMap& pi, const CMatrix& h);

/// f(h) pi(x) for the polynomial f(t) = sum_k coeffs[k] t^k with coeffs[0] = 0.
CMatrix cone_evaluate(const OrderZeroMap& oz, const std::vector<double>& coeffs, const CMatrix& x);
/// ||rho(f (x) x) rho(g (x) y) - rho(fg (x) xy)|| for the cone homomorphism rho.
double cone_product_residual(const OrderZeroMap& oz, const std::vector<double>& f, const std::vector<double>& g,
                             const CMatrix& x, const CMatrix& y);

struct PerturbOptions {
  NearestOptions nearest{};
  int cb_samples = 16;
  std::uint64_t seed = 0;
  Track track = Track::Experimental;
};

struct PerturbResult {
  LinMap psi;
  CMatrix t;  // row contraction over A (x) M_m
  CMatrix u;  // its witness over B (x) M_m
  std::vector<CMatrix> entries;  // the entry set Y of t
  int block_size = 0;            // m
  std::vector<int> kept_blocks;  // summands with nonzero image
  double gamma = 0.0;            // max(gamma_cert, measured entry distance)
  double achieved_cb = 0.0;
  std::vector<Certificate> certificates;
};

/// (2 gamma + gamma^2)(2 + 2 gamma + gamma^2).
double perturb_ceiling(double gamma);

/// cp map F -> B with ||phi - psi||_cb <= (2g + g^2)(2 + 2g + g^2) through a row
/// witness u of t = (h_k^(1/2) (x) 1) s_k over B (x) M_m.
PerturbResult perturb_order_zero(const OrderZeroMap& oz, const ConcreteAlgebra& b, double gamma_cert,
                                 const PerturbOptions& opt = {});

/// A -> F -> A with F = F_0 + ... + F_n and order-zero up maps on the pieces.
struct NucDimDecomposition {
  FDAlgebra f;
  /// groups[i] lists the blocks of F forming F_i.
  std::vector<std::vector<int>> groups;
  LinMap down{ConcreteAlgebra(), 0, {}};  // A -> realize(f)
  std::vector<LinMap> ups;  // realize(F_i) -> M_N
  int n = 0;
  double defect = 0.0;
  bool composite_cpc = false;
};

/// The abstract algebra F_i of one group.
FDAlgebra group_algebra(const NucDimDecomposition& dec, int i);
/// Block coordinates of y in realize(f) restricted to group i, realized in realize(F_i).
CMatrix group_part(const NucDimDecomposition& dec, int i, const CMatrix& y);
/// x -> sum_i psi_i(phi(x)_i).
LinMap composite_map(const NucDimDecomposition& dec);

/// Checks every invariant of the decomposition and sup_X ||psi(phi(x)) - x|| <= eps.
/// A failure names the first broken invariant in the note.
Certificate verify_nucdim_decomposition(const ConcreteAlgebra& a, const std::vector<CMatrix>& xs, double eps,
                                        const NucDimDecomposition& dec);

/// n = 0: F = A through its Wedderburn coordinates.
NucDimDecomposition finite_dimensional_decomposition(const ConcreteAlgebra& a);
/// n = 1: two copies of A weighted per block by weights[k] and 1 - weights[k].
NucDimDecomposition split_decomposition(const ConcreteAlgebra& a, const std::vector<double>& weights);

struct TransferResult {
  LinMap map{ConcreteAlgebra(), 0, {}};
  double gamma = 0.0;
  double cb_norm = 0.0;  // of the map before rescaling
  std::vector<PerturbResult> pieces;
  std::vector<Certificate> certificates;
};

/// 2(n + 1)(2g + g^2)(2 + 2g + g^2).
double transfer_ceiling(int n, double gamma);

/// cpc map D -> B within 2(n+1)(2g+g^2)(2+2g+g^2) + eps of theta on xs, by
/// perturbing each theta o psi_i into B. theta defaults to the identity of D.
TransferResult nucdim_cpc_transfer(const ConcreteAlgebra& d, const NucDimDecomposition& dec,
                                   const std::optional<LinMap>& theta, const std::vector<CMatrix>& xs,
                                   const ConcreteAlgebra& b, double gamma_cert, double eps,
                                   const PerturbOptions& opt = {});

/// Injective *-homomorphism A -> B within 20 eta^(1/2) of the inclusion on xs,
/// eta = 2(n+1)(2g+g^2)(2+2g+g^2) + defect.
IsoResult near_embed_nucdim(const ConcreteAlgebra& a, const ConcreteAlgebra& b, double gamma_cert,
                            const NucDimDecomposition& dec, const std::vector<CMatrix>& xs,
                            const IsoOptions& opt = {});

struct ProjectionResult {
  OrderZeroMap map;
  double fit_residual = 0.0;
  Certificate certificate;  // verdict is always Heuristic
};

/// Numerical fit of an order-zero map to a cp map near one: pi from the
/// normalized map repaired to a homomorphism, h twirled into pi(F)'.
/// The certificate compares cb(psi - phi') with 493 gamma^(1/2) when gamma >= 0.
ProjectionResult order_zero_projection(const LinMap& psi, double gamma = -1.0, double tol = tol::alg);

}  // namespace nearalg
