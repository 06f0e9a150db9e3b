#include "doctest.h"

#include "support.hpp"

#include "corbit/contract.hpp"

using namespace corbit;
using namespace testsupport;

namespace {

struct Setup {
  RealizedAlgebra g;
  FiberRep fiber;
  PrincipalSeriesParams params;
  explicit Setup(int n)
      : g(build_sl(n)),
        fiber(FiberRep::finite_character(g)),
        params(g, default_xi1(g), g.zero(), fiber) {}

  static AlgebraElement default_xi1(const RealizedAlgebra& g) {
    Vector d(g.dim_matrix);
    for (int i = 0; i < g.dim_matrix; ++i) d[i] = g.dim_matrix - i;
    d.array() -= d.mean();
    Matrix m = Matrix::Zero(g.dim_matrix, g.dim_matrix);
    m.diagonal() = d;
    return g.from_matrix(m);
  }
};

MotionGroupElement random_motion(Rng& rng, const RealizedAlgebra& g, Real scale = 0.5) {
  return motion_element(random_in(rng, g, Subspace::VCartan, -scale, scale),
                        random_compact(rng, g, scale));
}

}  // namespace

TEST_CASE("c_r basics: boundary values, domain, polar inverse") {
  Rng rng(71);
  const Setup s(2);

  const MotionGroupElement pure_k{s.g.zero(), random_compact(rng, s.g)};
  CHECK((c_r_apply(1.0, pure_k).m - pure_k.k.m).norm() == 0.0);
  CHECK_THROWS_AS(c_r_apply(0.0, pure_k), std::invalid_argument);
  CHECK_THROWS_AS(c_r_apply(1.5, pure_k), std::invalid_argument);

  for (int n : {2, 3}) {
    const Setup t(n);
    for (int trial = 0; trial < 10; ++trial) {
      const MotionGroupElement gv = random_motion(rng, t.g);
      for (Real r : {1.0, 0.25}) {
        const MotionGroupElement back = c_r_invert(r, c_r_apply(r, gv));
        CHECK((back.v - gv.v).norm() <= 1e-10);
        CHECK((back.k.m - gv.k.m).norm() <= 1e-10);
      }
    }
  }
}

TEST_CASE("group contraction law: c_r^{-1}(c_r(g) c_r(g')) -> g g'") {
  Rng rng(72);
  const Setup s(2);
  std::vector<std::pair<MotionGroupElement, MotionGroupElement>> pairs;
  for (int i = 0; i < 10; ++i)
    pairs.emplace_back(random_motion(rng, s.g), random_motion(rng, s.g));

  std::vector<Real> errors;
  for (Real r : ContractionScenario::default_grid()) {
    Real err = 0.0;
    for (const auto& [a, b] : pairs) {
      const MotionGroupElement approx =
          c_r_invert(r, GroupElement{&s.g, c_r_apply(r, a).m * c_r_apply(r, b).m});
      const MotionGroupElement exact = motion_product(a, b);
      err = std::max(err, (approx.v - exact.v).norm() + (approx.k.m - exact.k.m).norm());
    }
    errors.push_back(err);
  }
  for (std::size_t i = 1; i < errors.size(); ++i) CHECK(errors[i] <= 1.05 * errors[i - 1]);
  CHECK(errors.back() <= 1e-3 * errors.front());
}

TEST_CASE("algebra contraction law and the dual map") {
  Rng rng(73);
  for (int n : {2, 3}) {
    const Setup s(n);

    // C_1 is the identity on Cartan components; C_1* splits exactly
    const AlgebraElement v = random_in(rng, s.g, Subspace::VCartan);
    const AlgebraElement u = random_in(rng, s.g, Subspace::KCartan);
    CHECK((contraction_map(1.0, v, u) - (v + u)).norm() == 0.0);
    const AlgebraElement x = random_element(rng, s.g);
    const CoadPointG0 split = contraction_dual(1.0, {x});
    CHECK((split.w - project(x, Subspace::VCartan)).norm() <= 1e-14);
    CHECK((split.u - project(x, Subspace::KCartan)).norm() <= 1e-14);

    // duality: <C_r* xi, (v,U)> = beta(xi, C_r(v,U))
    Real worst_dual = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const Real r = rng.uniform(0.05, 1.0);
      const AlgebraElement xi = random_element(rng, s.g);
      const AlgebraElement vv = random_in(rng, s.g, Subspace::VCartan);
      const AlgebraElement uu = random_in(rng, s.g, Subspace::KCartan);
      const Real lhs = coad_g0_pairing(contraction_dual(r, {xi}), vv, uu);
      const Real rhs = killing(xi, contraction_map(r, vv, uu));
      worst_dual = std::max(worst_dual, std::abs(lhs - rhs));
    }
    CHECK(worst_dual <= 1e-12);

    // C_r^{-1}[C_r(X), C_r(Y)] -> [X,Y]_0
    std::vector<Real> errors;
    for (Real r : ContractionScenario::default_grid()) {
      Real err = 0.0;
      for (int trial = 0; trial < 10; ++trial) {
        const AlgebraElement v1 = random_in(rng, s.g, Subspace::VCartan);
        const AlgebraElement u1 = random_in(rng, s.g, Subspace::KCartan);
        const AlgebraElement v2 = random_in(rng, s.g, Subspace::VCartan);
        const AlgebraElement u2 = random_in(rng, s.g, Subspace::KCartan);
        const AlgebraElement big =
            bracket(contraction_map(r, v1, u1), contraction_map(r, v2, u2));
        const auto [cv, cu] = contraction_map_inverse(r, big);
        const auto [bv, bu] = motion_bracket(v1, u1, v2, u2);
        err = std::max(err, (cv - bv).norm() + (cu - bu).norm());
      }
      errors.push_back(err);
    }
    CHECK(errors.back() <= 1e-3 * errors.front());
  }
}

TEST_CASE("prop 7.1 sweep: trivial probe, default scenario, pure rotations") {
  const Setup s(2);
  ContractionScenario sc = ContractionScenario::standard(s.params, 7);

  // (v,k) = (0,e): both sides are the identity operator at every r
  {
    ContractionScenario trivial = sc;
    Rng rng(74);
    trivial.probes.clear();
    trivial.probes.push_back({s.g.zero(), group_identity(s.g), s.g.zero(),
                              TestFunction::random(rng, s.g, 1), random_bar_n(rng, s.g)});
    const SweepReport rep = check_prop_7_1(trivial);
    for (const auto& row : rep.rows) CHECK(row.max_error <= 1e-12);
  }

  const SweepReport rep = check_prop_7_1(sc);
  CHECK(rep.rows.size() == sc.r_grid.size());
  CHECK(rep.monotone);
  CHECK(rep.final_ratio <= 1e-3);
  REQUIRE(rep.slope.has_value());
  CHECK(*rep.slope >= 0.7);
  CHECK(*rep.slope <= 1.3);

  // pure rotations: the nu_r phase cancels identically, so the error is
  // rounding-level at every r
  {
    ContractionScenario rotation = sc;
    Rng rng(75);
    rotation.probes.clear();
    rotation.probes.push_back({s.g.zero(), random_compact(rng, s.g), s.g.zero(),
                               TestFunction::random(rng, s.g, 1), random_bar_n(rng, s.g, 0.4)});
    const SweepReport rot = check_prop_7_1(rotation);
    for (const auto& row : rot.rows) CHECK(row.max_error <= 1e-9);
  }
}

TEST_CASE("prop 8.1 sweep: trivial point, default scenario, exact k-component") {
  const Setup s(2);
  ContractionScenario sc = ContractionScenario::standard(s.params, 8);

  {
    ContractionScenario trivial = sc;
    trivial.sample.clear();
    trivial.sample.push_back(
        {BarNPoint::identity(s.g), s.g.zero(), OrbitPointFiber{s.fiber.xi2()}});
    const SweepReport rep = check_prop_8_1(trivial);
    for (const auto& row : rep.rows) CHECK(row.max_error <= 1e-12);
  }

  const SweepReport rep = check_prop_8_1(sc);
  CHECK(rep.monotone);
  CHECK(rep.final_ratio <= 1e-3);
  REQUIRE(rep.slope.has_value());
  CHECK(*rep.slope >= 0.7);
  CHECK(*rep.slope <= 1.3);
  REQUIRE(rep.aux_residual.has_value());
  CHECK(*rep.aux_residual <= 1e-10);

  const SweepReport rep3 = check_prop_8_1(ContractionScenario::standard(Setup(3).params, 9));
  CHECK(rep3.monotone);
  CHECK(rep3.final_ratio <= 1e-3);
  CHECK(*rep3.aux_residual <= 1e-10);
}

TEST_CASE("coefficient extraction of degree <= 1 symbols") {
  Rng rng(76);
  const Setup s(2);

  // constant symbol
  {
    RestrictedSymbol parts;
    parts.u = constant_coeff(Complex(2.5, -0.5));
    const PSymbol f = PSymbol::from_restricted(s.g, s.fiber, std::move(parts));
    const auto table = extract_coefficients(f, random_bar_n(rng, s.g));
    CHECK(std::abs(table[0](0, 0) - Complex(2.5, -0.5)) == 0.0);
    CHECK(table[1].norm() == 0.0);
  }

  // f_{(v,0)}: u_0(y) = beta(Ad(ktilde(y)) xi1, v), u_k = 0
  {
    const AlgebraElement v = random_in(rng, s.g, Subspace::VCartan);
    const PSymbol f = linear_symbol_g0(s.params, v, s.g.zero());
    for (int trial = 0; trial < 5; ++trial) {
      const BarNPoint y = random_bar_n(rng, s.g);
      const auto table = extract_coefficients(f, y);
      const Real expected = killing(adjoint(iwasawa(y).ktilde, s.params.xi1()), v);
      CHECK(std::abs(table[0](0, 0) - expected) <= 1e-10);
      CHECK(table[1].norm() <= 1e-14);
    }
  }

  // coefficients of f_X match linear interpolation of symbol values
  {
    const AlgebraElement x = random_element(rng, s.g);
    const PSymbol f = linear_symbol_g(s.params, x);
    const OrbitPointFiber phi{Vector(0)};
    for (int trial = 0; trial < 5; ++trial) {
      const BarNPoint y = random_bar_n(rng, s.g);
      const auto table = extract_coefficients(f, y);
      const Complex at_zero = symbol_eval(f, y, s.g.zero(), phi);
      CHECK(std::abs(table[0](0, 0) - at_zero) <= 1e-12);
      const Complex at_one = symbol_eval(f, y, s.g.nbar_onb_element(0), phi);
      CHECK(std::abs(table[1](0, 0) - (at_one - at_zero)) <= 1e-12);
    }
  }

  // degree 2 is rejected
  {
    std::vector<PSymbolTerm> terms;
    terms.push_back({{2}, constant_matrix_coeff(CMatrix::Identity(1, 1))});
    const PSymbol quad(s.g, s.fiber, std::move(terms));
    CHECK_THROWS_AS(symbol_coefficients(quad), DegreeTooHigh);
  }
}

TEST_CASE("prop 8.3 sweep: trivial probe, default scenario, U-only coefficients") {
  const Setup s(2);
  ContractionScenario sc = ContractionScenario::standard(s.params, 10);

  {
    ContractionScenario trivial = sc;
    Rng rng(77);
    trivial.probes.clear();
    trivial.probes.push_back({s.g.zero(), group_identity(s.g), s.g.zero(),
                              TestFunction::random(rng, s.g, 1), random_bar_n(rng, s.g)});
    const Prop83Report rep = check_prop_8_3(trivial);
    for (const auto& row : rep.coefficients.rows) CHECK(row.max_error <= 1e-10);
    for (const auto& row : rep.operators.rows) CHECK(row.max_error <= 1e-12);
  }

  const Prop83Report rep = check_prop_8_3(sc);
  CHECK(rep.coefficients.monotone);
  CHECK(rep.coefficients.final_ratio <= 1e-3);
  REQUIRE(rep.coefficients.slope.has_value());
  CHECK(*rep.coefficients.slope >= 0.7);
  CHECK(*rep.coefficients.slope <= 1.3);
  CHECK(rep.operators.monotone);
  CHECK(rep.operators.final_ratio <= 1e-3);
  REQUIRE(rep.operators.slope.has_value());
  CHECK(*rep.operators.slope >= 0.7);
  CHECK(*rep.operators.slope <= 1.3);

  // U-only probe: the z-coefficients of both sides coincide exactly at every
  // r, so the part-1 error reduces to nu-phase rounding noise
  {
    Rng rng(78);
    const AlgebraElement u = random_in(rng, s.g, Subspace::KCartan);
    for (Real r : {1.0, 1.0 / 1024.0}) {
      const PSymbol fr =
          linear_symbol_g(s.params.rescaled(1.0 / r), contraction_map(r, s.g.zero(), u));
      const PSymbol f0 = linear_symbol_g0(s.params, s.g.zero(), u);
      for (int trial = 0; trial < 3; ++trial) {
        const BarNPoint y = random_bar_n(rng, s.g);
        const auto tr = extract_coefficients(fr, y);
        const auto t0 = extract_coefficients(f0, y);
        for (std::size_t k = 1; k < tr.size(); ++k)
          CHECK((tr[k] - t0[k]).norm() <= 1e-12);
      }
    }
    ContractionScenario uonly = sc;
    uonly.probes.clear();
    uonly.probes.push_back({s.g.zero(), group_identity(s.g), u,
                            TestFunction::random(rng, s.g, 1), random_bar_n(rng, s.g, 0.5)});
    const Prop83Report urep = check_prop_8_3(uonly);
    for (const auto& row : urep.coefficients.rows) CHECK(row.max_error <= 1e-4);
    for (const auto& row : urep.operators.rows) CHECK(row.max_error <= 1e-10);
  }
}
