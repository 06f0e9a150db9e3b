#pragma once

#include "corbit/fiber.hpp"
#include "corbit/grp.hpp"
#include "corbit/weyl.hpp"

namespace corbit {

/// Parameters of the principal series realization on E-valued functions of N̄:
/// a regular ξ₁ ∈ 𝔞 (giving ν = β(ξ₁,·)), ξ₂ ∈ 𝔪 and the fiber representation
/// σ associated with o(ξ₂).
class PrincipalSeriesParams {
 public:
  PrincipalSeriesParams(const RealizedAlgebra& alg, AlgebraElement xi1, AlgebraElement xi2,
                        FiberRep fiber);

  const RealizedAlgebra& algebra() const { return *alg_; }
  const AlgebraElement& xi1() const { return xi1_; }
  const AlgebraElement& xi2() const { return xi2_; }
  const FiberRep& fiber() const { return fiber_; }

  /// ν(H) = β(ξ₁, H).
  Real nu(const AlgebraElement& h) const { return killing(xi1_, h); }

  /// Parameters with ξ₁ replaced by (1/r)ξ₁ (the ξ_r family of the contraction).
  PrincipalSeriesParams rescaled(Real inverse_scale) const;

 private:
  const RealizedAlgebra* alg_;
  AlgebraElement xi1_, xi2_;
  FiberRep fiber_;
};

/// Point (v, k) of the Cartan motion group V ⋊ K.
struct MotionGroupElement {
  AlgebraElement v;
  GroupElement k;
};

MotionGroupElement motion_identity(const RealizedAlgebra& alg);
/// Validates v ∈ V and k ∈ K.
MotionGroupElement motion_element(AlgebraElement v, GroupElement k, Real tol = 1e-8);
/// (v, k)·(v', k') = (v + Ad(k)v', kk').
MotionGroupElement motion_product(const MotionGroupElement& a, const MotionGroupElement& b);
MotionGroupElement motion_inverse(const MotionGroupElement& a);

/// (π(g)φ)(y): phase in ν, density e^{−ρ(log a(g⁻¹y))}, fiber rotation
/// σ(m(g⁻¹y))⁻¹ and the pullback to n̄(g⁻¹y). Throws NotInBigCell when g⁻¹y
/// misses the dense cell.
CVector pi_apply(const PrincipalSeriesParams& params, const GroupElement& g,
                 const SmoothEFunction& phi, const BarNPoint& y);
CVector pi_apply(const PrincipalSeriesParams& params, const GroupElement& g,
                 const TestFunction& phi, const BarNPoint& y);

/// (π₀(v,k)φ)(y) for the Cartan motion group.
CVector pi0_apply(const PrincipalSeriesParams& params, const MotionGroupElement& gv,
                  const SmoothEFunction& phi, const BarNPoint& y);
CVector pi0_apply(const PrincipalSeriesParams& params, const MotionGroupElement& gv,
                  const TestFunction& phi, const BarNPoint& y);

/// (dπ(X)φ)(y), the four-term closed form.
CVector dpi_apply(const PrincipalSeriesParams& params, const AlgebraElement& x,
                  const SmoothEFunction& phi, const BarNPoint& y);
CVector dpi_apply(const PrincipalSeriesParams& params, const AlgebraElement& x,
                  const TestFunction& phi, const BarNPoint& y);

/// (dπ₀(v,U)φ)(y) for v ∈ V, u ∈ 𝔨.
CVector dpi0_apply(const PrincipalSeriesParams& params, const AlgebraElement& v,
                   const AlgebraElement& u, const SmoothEFunction& phi, const BarNPoint& y);
CVector dpi0_apply(const PrincipalSeriesParams& params, const AlgebraElement& v,
                   const AlgebraElement& u, const TestFunction& phi, const BarNPoint& y);

/// Bracket of 𝔤₀ = V ⋊ 𝔨: [(w,U),(w',U')]₀ = ([U,w'] − [U',w], [U,U']).
std::pair<AlgebraElement, AlgebraElement> motion_bracket(const AlgebraElement& w,
                                                         const AlgebraElement& u,
                                                         const AlgebraElement& w2,
                                                         const AlgebraElement& u2);

}  // namespace corbit
