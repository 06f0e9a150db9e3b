#include "corbit/orbits.hpp"

#include <Eigen/SVD>

#include <cmath>

namespace corbit {

AlgebraElement phi_ambient(const PrincipalSeriesParams& params, const OrbitPointFiber& phi) {
  const RealizedAlgebra& g = params.algebra();
  if (phi.m_coords.size() != g.m_dim())
    throw std::invalid_argument("orbit point does not match the realization's 𝔪");
  return g.element(g.basis_m * phi.m_coords);
}

CoadPointG psi(const PrincipalSeriesParams& params, const ProductPoint& p) {
  const AlgebraElement inner = phi_ambient(params, p.phi) - theta(p.z);
  return {adjoint(iwasawa(p.y).ktilde, params.xi1()) + adjoint(p.y, inner)};
}

CoadPointG psi1(const PrincipalSeriesParams& params, const ProductPoint& p) {
  const AlgebraElement inner = params.xi1() + phi_ambient(params, p.phi) - theta(p.z);
  return {adjoint(p.y, inner)};
}

AlgebraElement z_prime_shift(const PrincipalSeriesParams& params, const BarNPoint& y) {
  // Substituting θZ' = θZ − (Ad(ñ(y)⁻¹)ξ₁ − ξ₁) into Ψ₁ makes the Ad(ã)ξ₁
  // invariance cancel the Iwasawa factors, so Ψ(y,Z,φ) = Ψ₁(y,Z',φ).
  const GroupElement ntilde = iwasawa(y).ntilde;
  return theta(params.xi1() - adjoint(inverse(ntilde), params.xi1()));
}

CoadPointG0 psi0(const PrincipalSeriesParams& params, const ProductPoint& p) {
  const AlgebraElement inner = phi_ambient(params, p.phi) - theta(p.z);
  return {adjoint(iwasawa(p.y).ktilde, params.xi1()),
          project(adjoint(p.y, inner), Subspace::KCartan)};
}

CoadPointG0 coadjoint_g0(const MotionGroupElement& gv, const CoadPointG0& p) {
  const AlgebraElement moved_w = adjoint(gv.k, p.w);
  return {moved_w, adjoint(gv.k, p.u) + bracket(gv.v, moved_w)};
}

Real coad_g0_pairing(const CoadPointG0& xi, const AlgebraElement& v, const AlgebraElement& u) {
  return killing(xi.w, v) + killing(xi.u, u);
}

Real coad_g0_norm(const CoadPointG0& xi) {
  const RealizedAlgebra& g = *xi.w.alg;
  return std::sqrt(g.theta_inner(xi.w, xi.w) + g.theta_inner(xi.u, xi.u));
}

namespace {

// Shared construction of the restricted-class linear symbol with the ν-phase
// carried by `phase_of` and the z/orbit parts by `body_of`.
PSymbol build_linear_symbol(const PrincipalSeriesParams& params, const AlgebraElement& phase_of,
                            const AlgebraElement& body_of) {
  const RealizedAlgebra& g = params.algebra();
  RestrictedSymbol parts;

  // ν(p̃_𝔞(Ad(k̃(y)⁻¹)X)) = β(ξ₁, Ad(k̃(y)⁻¹)X): the ν functional kills 𝔨 and 𝔫
  const RowVector nu_row = (g.killing_matrix * params.xi1().coords).transpose();
  parts.u = iwasawa_functional_coeff(g, nu_row, phase_of);

  parts.w.resize(g.nbar_dim());
  for (int k = 0; k < g.nbar_dim(); ++k) {
    const RowVector lk = (g.theta_gram * g.nbar_onb.col(k)).transpose();
    parts.w[k] = adjoint_functional_coeff(g, lk, body_of);
  }

  parts.v.resize(params.fiber().m_dim);
  const Matrix m_map = g.subspace_coordinate_map(Subspace::M);
  for (int a = 0; a < params.fiber().m_dim; ++a)
    parts.v[a] = adjoint_functional_coeff(g, m_map.row(a), body_of);

  return PSymbol::from_restricted(g, params.fiber(), std::move(parts));
}

}  // namespace

PSymbol linear_symbol_g(const PrincipalSeriesParams& params, const AlgebraElement& x) {
  return build_linear_symbol(params, x, x);
}

PSymbol linear_symbol_g0(const PrincipalSeriesParams& params, const AlgebraElement& v,
                         const AlgebraElement& u) {
  return build_linear_symbol(params, v, u);
}

namespace {

Real symplecto_residual(const PrincipalSeriesParams& params,
                        const std::vector<PSymbol>& symbols,
                        const std::vector<PSymbol>& bracket_symbols,
                        const std::vector<ProductPoint>& sample) {
  Real worst = 0.0;
  const std::size_t count = symbols.size();
  std::size_t pair_index = 0;
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = i + 1; j < count; ++j, ++pair_index) {
      const PSymbol br = poisson_p(symbols[i], symbols[j]);
      for (const ProductPoint& p : sample) {
        const Complex lhs = symbol_eval(br, p.y, p.z, p.phi);
        const Complex rhs = symbol_eval(bracket_symbols[pair_index], p.y, p.z, p.phi);
        worst = std::max(worst, std::abs(lhs - rhs));
      }
    }
  return worst;
}

}  // namespace

Real check_symplecto_g(const PrincipalSeriesParams& params,
                       const std::vector<ProductPoint>& sample) {
  const RealizedAlgebra& g = params.algebra();
  std::vector<PSymbol> symbols, brackets;
  for (int i = 0; i < g.dim; ++i)
    symbols.push_back(linear_symbol_g(params, g.element(Vector::Unit(g.dim, i))));
  for (int i = 0; i < g.dim; ++i)
    for (int j = i + 1; j < g.dim; ++j)
      brackets.push_back(linear_symbol_g(
          params, bracket(g.element(Vector::Unit(g.dim, i)), g.element(Vector::Unit(g.dim, j)))));
  return symplecto_residual(params, symbols, brackets, sample);
}

Real check_symplecto_g0(const PrincipalSeriesParams& params,
                        const std::vector<ProductPoint>& sample) {
  const RealizedAlgebra& g = params.algebra();
  // basis of 𝔤₀ = V × 𝔨 as (v, u) pairs
  std::vector<std::pair<AlgebraElement, AlgebraElement>> basis;
  for (int i = 0; i < g.V_dim(); ++i)
    basis.emplace_back(g.element(g.basis_V.col(i)), g.zero());
  for (int i = 0; i < g.k_dim(); ++i)
    basis.emplace_back(g.zero(), g.element(g.basis_k.col(i)));

  std::vector<PSymbol> symbols, brackets;
  for (const auto& [v, u] : basis) symbols.push_back(linear_symbol_g0(params, v, u));
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i + 1; j < basis.size(); ++j) {
      const auto [bv, bu] =
          motion_bracket(basis[i].first, basis[i].second, basis[j].first, basis[j].second);
      brackets.push_back(linear_symbol_g0(params, bv, bu));
    }
  return symplecto_residual(params, symbols, brackets, sample);
}

ProductPoint psi0_invert(const PrincipalSeriesParams& params, const CoadPointG0& xi,
                         const MotionGroupElement& witness) {
  const RealizedAlgebra& g = params.algebra();
  const BruhatFactors kf = bruhat(witness.k);  // throws NotInBigCell off the cell
  const BarNPoint y = kf.nbar;

  const IwasawaFactors iy = iwasawa(y);
  const GroupElement m{&g, Matrix(witness.k.m.inverse() * iy.ktilde.m)};

  // the M conjugation pins the orbit point: φ = Ad(m⁻¹)ξ₂
  const AlgebraElement phi_alg = adjoint(inverse(m), params.xi2());
  const Vector phi_coords = g.subspace_coordinates(Subspace::M, phi_alg);

  // remaining 𝔨 component, linear in Z: p^c_𝔨(Y − Ad(n'(y) ã(y) m) θZ) = [Ad(k⁻¹)v, ξ₁]
  // with n'(y) = m ã(y) ñ(y) ã(y)⁻¹ m⁻¹ and Y = Ad(n'(y))ξ₂ − ξ₂.
  const Matrix nprime =
      m.m * iy.atilde.m * iy.ntilde.m * iy.atilde.m.inverse() * m.m.inverse();
  const AlgebraElement y_term =
      g.from_matrix(nprime * params.xi2().matrix() * nprime.inverse()) - params.xi2();
  const AlgebraElement rhs_bracket =
      bracket(adjoint(inverse(witness.k), witness.v), params.xi1());
  const AlgebraElement target = project(y_term, Subspace::KCartan) -
                                project(rhs_bracket, Subspace::KCartan);

  const Matrix conj = nprime * iy.atilde.m * m.m;
  const Matrix conj_inv = conj.inverse();
  const Matrix k_map = g.subspace_coordinate_map(Subspace::KCartan);
  Matrix system(g.k_dim(), g.nbar_dim());
  for (int l = 0; l < g.nbar_dim(); ++l) {
    const AlgebraElement theta_el = theta(g.nbar_onb_element(l));
    const AlgebraElement image = g.from_matrix(conj * theta_el.matrix() * conj_inv);
    system.col(l) = k_map * image.coords;
  }
  Eigen::JacobiSVD<Matrix> svd(system, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv[sv.size() - 1] <= 0 || sv[0] / sv[sv.size() - 1] > 1e10)
    throw SingularSystem("psi0_invert: the Z system is numerically singular");
  const Vector z_onb = svd.solve(k_map * target.coords);

  return {y, g.nbar_from_onb(z_onb), OrbitPointFiber{phi_coords}};
}

namespace {

Real adapted_residual(const PrincipalSeriesParams& params,
                      const std::vector<std::pair<TestFunction, BarNPoint>>& probes,
                      const std::vector<PSymbol>& symbols,
                      const std::function<CVector(std::size_t, const SmoothEFunction&,
                                                  const BarNPoint&)>& derived_op) {
  Real worst = 0.0;
  for (const auto& [tf, y] : probes) {
    const SmoothEFunction phi = as_function(tf);
    for (std::size_t i = 0; i < symbols.size(); ++i) {
      const CVector lhs = weyl_apply(symbols[i], phi, y);
      const CVector rhs = Complex(0, -1) * derived_op(i, phi, y);
      worst = std::max(worst, (lhs - rhs).norm());
    }
  }
  return worst;
}

}  // namespace

Real check_adapted_g(const PrincipalSeriesParams& params,
                     const std::vector<std::pair<TestFunction, BarNPoint>>& probes) {
  const RealizedAlgebra& g = params.algebra();
  std::vector<PSymbol> symbols;
  std::vector<AlgebraElement> basis;
  for (int i = 0; i < g.dim; ++i) {
    basis.push_back(g.element(Vector::Unit(g.dim, i)));
    symbols.push_back(linear_symbol_g(params, basis.back()));
  }
  return adapted_residual(params, probes, symbols,
                          [&](std::size_t i, const SmoothEFunction& phi, const BarNPoint& y) {
                            return dpi_apply(params, basis[i], phi, y);
                          });
}

Real check_adapted_g0(const PrincipalSeriesParams& params,
                      const std::vector<std::pair<TestFunction, BarNPoint>>& probes) {
  const RealizedAlgebra& g = params.algebra();
  std::vector<PSymbol> symbols;
  std::vector<std::pair<AlgebraElement, AlgebraElement>> basis;
  for (int i = 0; i < g.V_dim(); ++i) {
    basis.emplace_back(g.element(g.basis_V.col(i)), g.zero());
    symbols.push_back(linear_symbol_g0(params, basis.back().first, basis.back().second));
  }
  for (int i = 0; i < g.k_dim(); ++i) {
    basis.emplace_back(g.zero(), g.element(g.basis_k.col(i)));
    symbols.push_back(linear_symbol_g0(params, basis.back().first, basis.back().second));
  }
  return adapted_residual(params, probes, symbols,
                          [&](std::size_t i, const SmoothEFunction& phi, const BarNPoint& y) {
                            return dpi0_apply(params, basis[i].first, basis[i].second, phi, y);
                          });
}

}  // namespace corbit
