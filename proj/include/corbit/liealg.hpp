#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "corbit/types.hpp"

namespace corbit {

/// Subspaces of 𝔤 addressable through the projection operators. A/M/Nbar/N
/// refer to 𝔤 = 𝔫̄ ⊕ 𝔪 ⊕ 𝔞 ⊕ 𝔫, ATilde/KTilde to 𝔤 = 𝔨 ⊕ 𝔞 ⊕ 𝔫, and
/// KCartan/VCartan to the Cartan decomposition 𝔤 = 𝔨 ⊕ V.
enum class Subspace { A, M, Nbar, N, ATilde, KTilde, KCartan, VCartan };

struct RestrictedRoot {
  RowVector on_a;    ///< values λ(H_i) on the columns of basis_a
  int multiplicity = 0;
  bool positive = false;
  Matrix space;      ///< dim × multiplicity coordinate basis of 𝔤_λ
};

class RealizedAlgebra;

/// Element of a realized algebra, stored by coordinates in its basis.
struct AlgebraElement {
  const RealizedAlgebra* alg = nullptr;
  Vector coords;

  Matrix matrix() const;
  Real norm() const { return coords.norm(); }
};

AlgebraElement operator+(const AlgebraElement& x, const AlgebraElement& y);
AlgebraElement operator-(const AlgebraElement& x, const AlgebraElement& y);
AlgebraElement operator-(const AlgebraElement& x);
AlgebraElement operator*(Real s, const AlgebraElement& x);

/// A matrix Lie algebra together with its full structural dissection:
/// Cartan involution, Killing form, restricted-root decomposition,
/// Iwasawa/Bruhat subspaces and the associated projection operators.
/// Immutable after construction; all member data is plain value storage.
class RealizedAlgebra {
 public:
  std::string name;
  int dim_matrix = 0;  ///< size of the defining representation
  int dim = 0;         ///< dim 𝔤

  std::vector<Matrix> basis;     ///< defining matrices X_i
  std::vector<Matrix> ad_basis;  ///< ad X_i as dim×dim coordinate matrices
  Matrix killing_matrix;         ///< β(X_i, X_j)
  Matrix theta_matrix;           ///< Cartan involution on coordinates
  Matrix theta_gram;             ///< (X_i, X_j) = −β(X_i, θX_j), positive definite

  Matrix basis_k, basis_V, basis_a, basis_m, basis_n, basis_nbar;
  std::vector<RestrictedRoot> roots;
  RowVector rho_on_a;  ///< ρ(H_i) for the columns of basis_a
  Matrix nbar_onb;     ///< dim × n_nbar, orthonormal (E_i) for (Y,Z) = −β(Y,θZ)
  Vector chamber_a;    ///< a-coordinates of the regular element fixing Δ⁺

  /// Structure constant c[i][j][k] with [X_i, X_j] = Σ_k c[i][j][k] X_k.
  Real structure_constant(int i, int j, int k) const { return ad_basis[i](k, j); }

  int nbar_dim() const { return static_cast<int>(nbar_onb.cols()); }
  int a_dim() const { return static_cast<int>(basis_a.cols()); }
  int m_dim() const { return static_cast<int>(basis_m.cols()); }
  int k_dim() const { return static_cast<int>(basis_k.cols()); }
  int V_dim() const { return static_cast<int>(basis_V.cols()); }

  AlgebraElement element(Vector coords) const;
  AlgebraElement zero() const { return element(Vector::Zero(dim)); }
  /// Element from a defining-representation matrix; residual receives the
  /// reconstruction error when non-null.
  AlgebraElement from_matrix(const Matrix& m, Real* residual = nullptr) const;
  Vector coordinates_of(const Matrix& m) const;
  Matrix matrix_of(const Vector& coords) const;

  const Matrix& projector(Subspace which) const;
  const Matrix& subspace_basis(Subspace which) const;
  /// Coordinates of X in the basis of the given subspace (X is projected first).
  Vector subspace_coordinates(Subspace which, const AlgebraElement& x) const;
  /// The linear map realizing subspace_coordinates, as a (sub_dim × dim) matrix.
  Matrix subspace_coordinate_map(Subspace which) const;

  /// Coordinates of Y ∈ 𝔫̄ in the orthonormal basis (E_i).
  Vector nbar_onb_coordinates(const AlgebraElement& y) const;
  AlgebraElement nbar_from_onb(const Vector& z) const;
  /// The i-th orthonormal basis vector E_i of 𝔫̄.
  AlgebraElement nbar_onb_element(int i) const { return element(nbar_onb.col(i)); }

  /// (X, Y) = −β(X, θY); the positive definite form behind all ONB choices.
  Real theta_inner(const AlgebraElement& x, const AlgebraElement& y) const;

  bool same(const RealizedAlgebra& other) const { return this == &other; }

  // construction helpers, populated by builders
  std::function<Vector(const Matrix&)> exact_coordinates;  ///< optional fast path

  void finalize();  ///< derive projectors, roots, ρ, ONB from the basis data

 private:
  Matrix proj_a_, proj_m_, proj_nbar_, proj_n_, proj_atilde_, proj_ktilde_, proj_kc_, proj_vc_;
  Eigen::CompleteOrthogonalDecomposition<Matrix> vec_solver_;
  Eigen::CompleteOrthogonalDecomposition<Matrix> a_solver_, m_solver_, nbar_solver_, k_solver_,
      V_solver_, n_solver_;
  friend RealizedAlgebra build_sl(int n);
};

/// sl(n,ℝ) with θ(X) = −Xᵀ, 𝔨 = skew, 𝔞 = diagonal traceless, 𝔪 = 0 and the
/// Weyl chamber making 𝔫 the strictly upper triangular matrices.
RealizedAlgebra build_sl(int n);

/// Shared-ownership convenience used by the CLI and test fixtures.
std::shared_ptr<const RealizedAlgebra> make_sl(int n);

AlgebraElement bracket(const AlgebraElement& x, const AlgebraElement& y);
Real killing(const AlgebraElement& x, const AlgebraElement& y);
AlgebraElement theta(const AlgebraElement& x);
AlgebraElement project(const AlgebraElement& x, Subspace which);

/// ρ(H) = ½ Σ_{λ∈Δ⁺} dim 𝔤_λ · λ(H) for H in 𝔞. Throws when H has a
/// component outside 𝔞 above tolerance.
Real rho_of(const AlgebraElement& h, Real tol = 1e-8);

/// ν = β(ξ₁, ·) evaluated on an 𝔞-element.
Real pairing_functional(const AlgebraElement& xi, const AlgebraElement& h);

/// Root values λ(ξ₁) for all restricted roots; used by regularity checks.
std::vector<Real> root_values(const AlgebraElement& xi1);

bool is_regular(const AlgebraElement& xi1, Real tol = 1e-8);

struct Lemma31Report {
  int rank = 0;           ///< rank of ad ξ₁ restricted to V
  int expected_rank = 0;  ///< dim 𝔨 − dim 𝔪
  Real ortho_residual = 0.0;  ///< max |β(ad ξ₁ v, m)| over basis pairs
  bool pass = false;
};

/// Verifies that ad ξ₁(V) is the β-orthogonal complement of 𝔪 in 𝔨.
/// Throws NonRegular when some restricted root vanishes on ξ₁.
Lemma31Report check_lemma_3_1(const AlgebraElement& xi1, Real tol = 1e-9);

namespace detail {
void require_same(const AlgebraElement& x, const AlgebraElement& y);
}

}  // namespace corbit
