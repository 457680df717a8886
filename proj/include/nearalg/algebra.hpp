#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "nearalg/core/certificate.hpp"
#include "nearalg/core/linalg.hpp"

namespace nearalg {

/// A subspace of rows x cols matrices with a Hilbert-Schmidt orthonormal basis.
class Subspace {
 public:
  Subspace() = default;
  Subspace(int rows, int cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<CMatrix>& basis() const { return basis_; }

  /// Adds the component of x orthogonal to the span (two Gram-Schmidt passes).
  /// Returns false when that component is below rel_tol * ||x||_HS.
  bool add(const CMatrix& x, double rel_tol = tol::alg);

  /// Coefficients <b_i, x> in the orthonormal basis.
  CVector coords(const CMatrix& x) const;
  CMatrix combine(const CVector& c) const;
  CMatrix project(const CMatrix& x) const;
  /// Hilbert-Schmidt distance from x to the span.
  double residual(const CMatrix& x) const;

  static Subspace spanned_by(int rows, int cols, const std::vector<CMatrix>& vectors,
                             double rel_tol = tol::alg);
  /// Keeps an orthonormal basis bit for bit; throws when the Gram matrix is off by more than tol.
  static Subspace from_orthonormal(int rows, int cols, const std::vector<CMatrix>& basis, double tol = 1e-10);

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<CMatrix> basis_;
  Eigen::MatrixXcd frame_;  // columns are vectorized basis elements
};

/// Abstract direct sum of full matrix algebras, given by its block sizes.
struct FDAlgebra {
  std::vector<int> block_sizes;

  int dim() const;
  /// Size of the block-diagonal realization.
  int ambient_dim() const;
  int offset(int block) const;
  /// Index of e_ij of block k in the canonical basis (blocks in order, row-major).
  int index(int block, int i, int j) const;
  CMatrix unit(int block, int i, int j) const;
  CMatrix one() const;
  /// Block-diagonal matrix from per-block entries.
  CMatrix assemble(const std::vector<CMatrix>& blocks) const;
  std::vector<CMatrix> split(const CMatrix& x) const;
};

/// Wedderburn data of a concrete algebra: summands M_n with multiplicity m.
struct BlockStructure {
  struct Summand {
    int size = 0;
    int multiplicity = 0;
  };
  std::vector<Summand> summands;
  std::vector<CMatrix> central_projections;
  /// matrix_units[k][i * n_k + j] is the (i, j) unit of summand k.
  std::vector<std::vector<CMatrix>> matrix_units;

  const CMatrix& unit(int k, int i, int j) const {
    return matrix_units[k][i * summands[k].size + j];
  }
  FDAlgebra abstract() const;
  int dim() const;
  /// Coordinates of x in the summand: x_k(i, j) = tr(e_ji x) / m_k.
  std::vector<CMatrix> coordinates(const CMatrix& x) const;
  /// Element of the concrete algebra from block coordinates.
  CMatrix realize(const std::vector<CMatrix>& blocks) const;
  BlockStructure conjugated(const CMatrix& u) const;
};

/// A *-subalgebra of M_N stored through an orthonormal basis.
class ConcreteAlgebra {
 public:
  /// The zero subalgebra of M_N.
  explicit ConcreteAlgebra(int ambient_dim = 0);
  /// Wraps a basis that is already orthonormal and spans a *-algebra.
  ConcreteAlgebra(int ambient_dim, Subspace span,
                  std::optional<BlockStructure> structure = std::nullopt);

  int ambient_dim() const { return n_; }
  int dim() const { return span_.dim(); }
  const std::vector<CMatrix>& basis() const { return span_.basis(); }
  const Subspace& span() const { return span_; }
  const CMatrix& support() const { return support_; }
  bool is_unital_in_ambient(double tol = tol::alg) const;
  bool contains(const CMatrix& x, double tol = tol::alg) const;
  CMatrix project(const CMatrix& x) const { return span_.project(x); }

  /// Wedderburn structure, computed once on first use.
  const BlockStructure& structure() const;
  bool has_structure() const;

  std::string meta;

 private:
  struct Cache {
    std::once_flag once;
    std::optional<BlockStructure> value;
  };
  int n_ = 0;
  Subspace span_;
  CMatrix support_;
  std::shared_ptr<Cache> cache_;
};

/// Smallest *-algebra containing the generators.
ConcreteAlgebra generate_algebra(const std::vector<CMatrix>& generators, int ambient_dim,
                                 double tol = tol::alg);

/// Checks *-closure, product closure, orthonormality and support invariants.
Certificate verify_algebra(const ConcreteAlgebra& a, double tol = tol::alg);
/// The same checks for a raw basis that need not be orthonormal.
Certificate verify_basis(const std::vector<CMatrix>& basis, int ambient_dim, double tol = tol::alg);

/// Central decomposition and matrix units.
BlockStructure wedderburn_decompose(const ConcreteAlgebra& a, std::uint64_t seed = 0,
                                    int retries = 3);

CMatrix support_projection(const ConcreteAlgebra& a);

/// C*(A, e_A); equals A whenever A is nonzero.
ConcreteAlgebra unitize_dagger(const ConcreteAlgebra& a);
/// A (+) C 1 realized in M_{N+1} as {x (+) 0} + C I.
ConcreteAlgebra unitize_tilde(const ConcreteAlgebra& a);
/// x (+) 0 in M_{N+1}.
CMatrix tilde_embed(const CMatrix& x);
/// Splits y = (x (+) 0) + lambda I of M_{N+1} into (x, lambda).
std::pair<CMatrix, cplx> tilde_split(const CMatrix& y);

/// (+)_k M_{n_k} (x) I_{m_k} placed block-diagonally from index 0 of M_N.
ConcreteAlgebra block_algebra(const std::vector<int>& sizes, int ambient_dim,
                              const std::vector<int>& multiplicities = {});
/// The canonical block-diagonal realization of an abstract algebra.
ConcreteAlgebra realize(const FDAlgebra& f);
/// u A u* for a unitary u.
ConcreteAlgebra conjugate(const ConcreteAlgebra& a, const CMatrix& u);
/// Spatial tensor product A (x) B inside M_{N_A N_B}.
ConcreteAlgebra tensor(const ConcreteAlgebra& a, const ConcreteAlgebra& b);
/// Full matrix algebra M_n.
ConcreteAlgebra full_algebra(int n);

}  // namespace nearalg
