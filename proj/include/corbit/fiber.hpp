#pragma once

#include <utility>
#include <vector>

#include "corbit/grp.hpp"
#include "corbit/liealg.hpp"

namespace corbit {

enum class FiberKind { FiniteCharacter, SpinJ };

/// Point φ of the adjoint orbit o(ξ₂) ⊂ 𝔪, stored in the fiber's 𝔪 basis
/// coordinates (empty for the finite-character backends, ℝ³ for spin).
struct OrbitPointFiber {
  Vector m_coords;
};

/// The unitary M-representation σ on E together with the Berezin machinery of
/// the orbit o(ξ₂). Two backends ship: characters of the finite M of sl(n,ℝ)
/// (E = ℂ, orbit = {0}) and the spin-j coherent-state calculus on a sphere,
/// usable standalone for a three-dimensional compact 𝔪.
class FiberRep {
 public:
  /// Character χ(diag ε) = Π_{i ∈ indices} ε_i of the diagonal sign group;
  /// empty indices give the trivial character.
  static FiberRep finite_character(const RealizedAlgebra& alg, std::vector<int> indices = {});

  /// Spin-j representation of 𝔪 ≅ so(3) with invariant form β_m = −κ·(dot).
  /// The orbit radius is solved from the highest-weight constraint, giving
  /// ξ₂ = −(j/κ) e₃ for the torus direction e₃.
  static FiberRep spin(Real j, Real kappa = 1.0);

  FiberKind kind = FiberKind::FiniteCharacter;
  int dim_e = 1;
  int m_dim = 0;
  Real spin_j = 0.0;
  Real kappa = 1.0;
  const RealizedAlgebra* alg = nullptr;  ///< set for finite characters
  std::vector<int> character_indices;

  Vector xi2() const;              ///< orbit base point in 𝔪 coordinates
  Vector torus_direction() const;  ///< the T used by the highest-weight check

  Real beta_m(const Vector& x, const Vector& y) const;
  Vector bracket_m(const Vector& x, const Vector& y) const;

  /// dσ: 𝔪 → anti-Hermitian operators on E.
  CMatrix dsigma(const Vector& x) const;

  /// σ(m) for an element of the finite M (diagonal signs of det 1).
  CMatrix sigma_point(const GroupElement& m) const;

  /// σ(u) for the spin backend; u is an SU(2) matrix (the double cover of the
  /// rotations acting on 𝔪), so the homomorphism property holds for all j.
  CMatrix sigma_su2(const CMatrix& u) const;

  /// The rotation of 𝔪 ≅ ℝ³ covered by u ∈ SU(2).
  Matrix rotation_of_su2(const CMatrix& u) const;

  /// Coherent state v_φ; unit norm, defined up to phase.
  CVector coherent_state(const OrbitPointFiber& phi) const;

  bool compatible_with(const RealizedAlgebra& g) const;

  friend bool operator==(const FiberRep& a, const FiberRep& b) {
    return a.kind == b.kind && a.dim_e == b.dim_e && a.m_dim == b.m_dim &&
           a.spin_j == b.spin_j && a.kappa == b.kappa && a.alg == b.alg &&
           a.character_indices == b.character_indices;
  }
};

/// SU(2) element with the given rotation axis/angle payload (axis·angle ∈ ℝ³).
CMatrix su2_from_rotation_vector(const Vector& w);

/// Deterministic orbit sampling: enumeration point for the character backends,
/// Haar-uniform rotations of ξ₂ for spin.
std::vector<OrbitPointFiber> orbit_sample(const FiberRep& rep, int count, std::uint64_t seed);

/// Covariant Berezin symbol s(B)(φ) = ⟨v_φ, B v_φ⟩ / ⟨v_φ, v_φ⟩.
Complex berezin_symbol(const FiberRep& rep, const CMatrix& b, const OrbitPointFiber& phi);

/// Least-squares inversion of the symbol map from point samples; witnesses the
/// injectivity of B ↦ s(B).
CMatrix berezin_reconstruct(const FiberRep& rep,
                            const std::vector<std::pair<OrbitPointFiber, Complex>>& samples);

/// Kirillov bracket of linear symbols: {ℓ_X, ℓ_Y}₂(φ) = β_m(φ, [X, Y]).
Real kirillov_bracket_linear(const FiberRep& rep, const Vector& x, const Vector& y,
                             const OrbitPointFiber& phi);

}  // namespace corbit
