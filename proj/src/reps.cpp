#include "corbit/reps.hpp"

#include <cmath>

namespace corbit {

PrincipalSeriesParams::PrincipalSeriesParams(const RealizedAlgebra& alg, AlgebraElement xi1,
                                             AlgebraElement xi2, FiberRep fiber)
    : alg_(&alg), xi1_(std::move(xi1)), xi2_(std::move(xi2)), fiber_(std::move(fiber)) {
  if (xi1_.alg != &alg || xi2_.alg != &alg)
    throw RealizationMismatch("params: elements of a different realization");
  if ((xi1_.coords - alg.projector(Subspace::A) * xi1_.coords).norm() >
      1e-8 * (1.0 + xi1_.coords.norm()))
    throw std::invalid_argument("params: ξ₁ must lie in 𝔞");
  if (!is_regular(xi1_)) throw NonRegular("params: ξ₁ is not regular");
  if ((xi2_.coords - alg.projector(Subspace::M) * xi2_.coords).norm() >
      1e-8 * (1.0 + xi2_.coords.norm()))
    throw std::invalid_argument("params: ξ₂ must lie in 𝔪");
  if (!fiber_.compatible_with(alg))
    throw std::invalid_argument("params: fiber representation incompatible with the realization");
  const Vector fiber_xi2 = alg.subspace_coordinates(Subspace::M, xi2_);
  if ((fiber_xi2 - fiber_.xi2()).norm() > 1e-8)
    throw std::invalid_argument("params: fiber ξ₂ does not match the 𝔪 component");
}

PrincipalSeriesParams PrincipalSeriesParams::rescaled(Real inverse_scale) const {
  return PrincipalSeriesParams(*alg_, inverse_scale * xi1_, xi2_, fiber_);
}

MotionGroupElement motion_identity(const RealizedAlgebra& alg) {
  return {alg.zero(), group_identity(alg)};
}

MotionGroupElement motion_element(AlgebraElement v, GroupElement k, Real tol) {
  if (v.alg != k.alg) throw RealizationMismatch("motion element: mixed realizations");
  if ((v.coords - v.alg->projector(Subspace::VCartan) * v.coords).norm() >
      tol * (1.0 + v.coords.norm()))
    throw std::invalid_argument("motion element: v must lie in V");
  if (!in_maximal_compact(k, tol))
    throw std::invalid_argument("motion element: k must lie in K");
  return {std::move(v), std::move(k)};
}

MotionGroupElement motion_product(const MotionGroupElement& a, const MotionGroupElement& b) {
  return {a.v + adjoint(a.k, b.v), a.k * b.k};
}

MotionGroupElement motion_inverse(const MotionGroupElement& a) {
  const GroupElement k_inv = inverse(a.k);
  return {-1.0 * adjoint(k_inv, a.v), k_inv};
}

namespace {

// σ(m)⁻¹ for the Bruhat M-factor. Characters are unitary, so the inverse is
// the adjoint.
CMatrix sigma_factor_inverse(const PrincipalSeriesParams& params, const GroupElement& m) {
  if (params.fiber().kind != FiberKind::FiniteCharacter)
    throw std::logic_error("no group-level σ backend for this fiber kind");
  return params.fiber().sigma_point(m).adjoint();
}

}  // namespace

CVector pi_apply(const PrincipalSeriesParams& params, const GroupElement& g,
                 const SmoothEFunction& phi, const BarNPoint& y) {
  const GroupElement w = inverse(g) * y.group();
  const BruhatFactors bf = bruhat(w);
  const IwasawaFactors iy = iwasawa(y);
  const IwasawaFactors iw = iwasawa(w);

  const Real phase = params.nu(iy.log_atilde) - params.nu(iw.log_atilde);
  const Complex scalar =
      std::exp(Complex(-rho_of(bf.log_a), phase));
  return scalar * (sigma_factor_inverse(params, bf.m) * phi.eval(bf.nbar));
}

CVector pi_apply(const PrincipalSeriesParams& params, const GroupElement& g,
                 const TestFunction& phi, const BarNPoint& y) {
  return pi_apply(params, g, as_function(phi), y);
}

CVector pi0_apply(const PrincipalSeriesParams& params, const MotionGroupElement& gv,
                  const SmoothEFunction& phi, const BarNPoint& y) {
  const GroupElement w = inverse(gv.k) * y.group();
  const BruhatFactors bf = bruhat(w);
  const IwasawaFactors iy = iwasawa(y);

  const Real phase = killing(adjoint(iy.ktilde, params.xi1()), gv.v);
  const Complex scalar = std::exp(Complex(-rho_of(bf.log_a), phase));
  return scalar * (sigma_factor_inverse(params, bf.m) * phi.eval(bf.nbar));
}

CVector pi0_apply(const PrincipalSeriesParams& params, const MotionGroupElement& gv,
                  const TestFunction& phi, const BarNPoint& y) {
  return pi0_apply(params, gv, as_function(phi), y);
}

CVector dpi_apply(const PrincipalSeriesParams& params, const AlgebraElement& x,
                  const SmoothEFunction& phi, const BarNPoint& y) {
  const IwasawaFactors iy = iwasawa(y);
  const AlgebraElement via_k = adjoint(inverse(iy.ktilde), x);
  const AlgebraElement via_y = adjoint(inverse(y.group()), x);

  const Complex nu_term = kImag * params.nu(project(via_k, Subspace::ATilde));
  const Real rho_term = rho_of(project(via_y, Subspace::A));
  const CMatrix dsig =
      params.fiber().dsigma(params.algebra().subspace_coordinates(Subspace::M, via_y));

  const CVector value = phi.eval(y);
  return (nu_term + rho_term) * value + dsig * value -
         phi.dir_or_fd(y, project(via_y, Subspace::Nbar));
}

CVector dpi_apply(const PrincipalSeriesParams& params, const AlgebraElement& x,
                  const TestFunction& phi, const BarNPoint& y) {
  return dpi_apply(params, x, as_function(phi), y);
}

CVector dpi0_apply(const PrincipalSeriesParams& params, const AlgebraElement& v,
                   const AlgebraElement& u, const SmoothEFunction& phi, const BarNPoint& y) {
  const IwasawaFactors iy = iwasawa(y);
  const AlgebraElement via_y = adjoint(inverse(y.group()), u);

  const Complex phase = kImag * killing(adjoint(iy.ktilde, params.xi1()), v);
  const Real rho_term = rho_of(project(via_y, Subspace::A));
  const CMatrix dsig =
      params.fiber().dsigma(params.algebra().subspace_coordinates(Subspace::M, via_y));

  const CVector value = phi.eval(y);
  return (phase + rho_term) * value + dsig * value -
         phi.dir_or_fd(y, project(via_y, Subspace::Nbar));
}

CVector dpi0_apply(const PrincipalSeriesParams& params, const AlgebraElement& v,
                   const AlgebraElement& u, const TestFunction& phi, const BarNPoint& y) {
  return dpi0_apply(params, v, u, as_function(phi), y);
}

std::pair<AlgebraElement, AlgebraElement> motion_bracket(const AlgebraElement& w,
                                                         const AlgebraElement& u,
                                                         const AlgebraElement& w2,
                                                         const AlgebraElement& u2) {
  return {bracket(u, w2) - bracket(u2, w), bracket(u, u2)};
}

}  // namespace corbit
