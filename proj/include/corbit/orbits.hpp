#pragma once

#include "corbit/reps.hpp"
#include "corbit/weyl.hpp"

namespace corbit {

/// Point of the product space N̄ × 𝔫̄ × o(ξ₂).
struct ProductPoint {
  BarNPoint y;
  AlgebraElement z;     ///< in 𝔫̄
  OrbitPointFiber phi;  ///< fiber 𝔪 coordinates
};

/// Point of the coadjoint orbit O(ξ₀) ⊂ 𝔤* ≅ 𝔤.
struct CoadPointG {
  AlgebraElement xi;
};

/// Point of 𝔤₀* ≅ V × 𝔨.
struct CoadPointG0 {
  AlgebraElement w;  ///< V component
  AlgebraElement u;  ///< 𝔨 component
};

/// φ as an element of the ambient 𝔪 ⊂ 𝔤.
AlgebraElement phi_ambient(const PrincipalSeriesParams& params, const OrbitPointFiber& phi);

/// Ψ(y,Z,φ) = Ad(k̃(y))ξ₁ + Ad(y)(φ − θZ).
CoadPointG psi(const PrincipalSeriesParams& params, const ProductPoint& p);

/// Ψ₁(y,Z,φ) = Ad(y)(ξ₁ + φ − θZ).
CoadPointG psi1(const PrincipalSeriesParams& params, const ProductPoint& p);

/// The shift with Ψ(y,Z,φ) = Ψ₁(y, Z + shift, φ): θ(ξ₁ − Ad(ñ(y)⁻¹)ξ₁).
AlgebraElement z_prime_shift(const PrincipalSeriesParams& params, const BarNPoint& y);

/// Ψ₀(y,Z,φ) = (Ad(k̃(y))ξ₁, p^c_𝔨(Ad(y)(φ − θZ))).
CoadPointG0 psi0(const PrincipalSeriesParams& params, const ProductPoint& p);

/// (v,k)·(w,U) = (Ad(k)w, Ad(k)U + [v, Ad(k)w]).
CoadPointG0 coadjoint_g0(const MotionGroupElement& gv, const CoadPointG0& p);

/// ⟨(w,U*), (v,U)⟩ = β(w,v) + β(U*,U).
Real coad_g0_pairing(const CoadPointG0& xi, const AlgebraElement& v, const AlgebraElement& u);

/// Euclidean norm in β-orthonormal coordinates (β on V, −β on 𝔨).
Real coad_g0_norm(const CoadPointG0& xi);

/// f_X with f_X(p) = β(Ψ(p), X), in the restricted symbol class with exact
/// derivative hooks.
PSymbol linear_symbol_g(const PrincipalSeriesParams& params, const AlgebraElement& x);

/// f_{(v,U)} with f_{(v,U)}(p) = ⟨Ψ₀(p), (v,U)⟩.
PSymbol linear_symbol_g0(const PrincipalSeriesParams& params, const AlgebraElement& v,
                         const AlgebraElement& u);

/// max over sample and basis pairs of |{f_X, f_Y}_p − f_{[X,Y]}| (the
/// computable content of the symplectomorphism property of Ψ).
Real check_symplecto_g(const PrincipalSeriesParams& params,
                       const std::vector<ProductPoint>& sample);

/// Same over the 𝔤₀ basis with the motion-group bracket.
Real check_symplecto_g0(const PrincipalSeriesParams& params,
                        const std::vector<ProductPoint>& sample);

/// Inverts Ψ₀ on ξ = (v,k)·(ξ₁,ξ₂): y from the K-factor equation, φ from the
/// M conjugation, Z from the linear system of the remaining 𝔨 component.
/// The witness (v,k) must have k in the big cell.
ProductPoint psi0_invert(const PrincipalSeriesParams& params, const CoadPointG0& xi,
                         const MotionGroupElement& witness);

/// max over probes and basis X of ‖W(f_X)φ(y) − (−i dπ(X)φ)(y)‖.
Real check_adapted_g(const PrincipalSeriesParams& params,
                     const std::vector<std::pair<TestFunction, BarNPoint>>& probes);

/// max over probes and the 𝔤₀ basis of ‖W(f_{(v,U)})φ(y) − (−i dπ₀(v,U)φ)(y)‖.
Real check_adapted_g0(const PrincipalSeriesParams& params,
                      const std::vector<std::pair<TestFunction, BarNPoint>>& probes);

}  // namespace corbit
