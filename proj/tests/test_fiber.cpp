#include "doctest.h"

#include "support.hpp"

#include "corbit/fiber.hpp"

#include <complex>

using namespace corbit;
using namespace testsupport;

namespace {

CMatrix random_operator(Rng& rng, int d) {
  CMatrix b(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) b(i, j) = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
  return b;
}

CMatrix random_su2(Rng& rng) {
  Vector w(3);
  for (int i = 0; i < 3; ++i) w[i] = rng.uniform(-3.0, 3.0);
  return su2_from_rotation_vector(w);
}

// All diagonal sign matrices of determinant one.
std::vector<GroupElement> enumerate_m(const RealizedAlgebra& g) {
  std::vector<GroupElement> out;
  const int n = g.dim_matrix;
  for (int mask = 0; mask < (1 << n); ++mask) {
    Matrix m = Matrix::Identity(n, n);
    int negatives = 0;
    for (int i = 0; i < n; ++i)
      if (mask & (1 << i)) {
        m(i, i) = -1.0;
        ++negatives;
      }
    if (negatives % 2 == 0) out.push_back({&g, m});
  }
  return out;
}

}  // namespace

TEST_CASE("finite characters: orbit, symbol, homomorphism") {
  const RealizedAlgebra sl2 = build_sl(2);
  const RealizedAlgebra sl3 = build_sl(3);

  const FiberRep trivial = FiberRep::finite_character(sl2);
  const FiberRep sign2 = FiberRep::finite_character(sl2, {0});
  const FiberRep sign3 = FiberRep::finite_character(sl3, {0});

  for (const auto& phi : orbit_sample(trivial, 6, 7)) CHECK(phi.m_coords.size() == 0);

  Rng rng(31);
  const CMatrix b = random_operator(rng, 1);
  CHECK(berezin_symbol(trivial, b, {Vector(0)}) == b(0, 0));

  for (const FiberRep* rep : {&trivial, &sign2}) {
    for (const auto& m1 : enumerate_m(sl2))
      for (const auto& m2 : enumerate_m(sl2)) {
        const Complex lhs = rep->sigma_point(m1)(0, 0) * rep->sigma_point(m2)(0, 0);
        const Complex rhs = rep->sigma_point(m1 * m2)(0, 0);
        CHECK(std::abs(lhs - rhs) == 0.0);
      }
  }
  CHECK(enumerate_m(sl3).size() == 4);
  for (const auto& m1 : enumerate_m(sl3))
    for (const auto& m2 : enumerate_m(sl3))
      CHECK(std::abs(sign3.sigma_point(m1)(0, 0) * sign3.sigma_point(m2)(0, 0) -
                     sign3.sigma_point(m1 * m2)(0, 0)) == 0.0);

  // the sign character is nontrivial on sl(2): χ(−I) = −1
  CHECK(sign2.sigma_point({&sl2, -Matrix::Identity(2, 2)})(0, 0) == Complex(-1.0));
  CHECK(trivial.sigma_point({&sl2, -Matrix::Identity(2, 2)})(0, 0) == Complex(1.0));

  CHECK(trivial.dsigma(Vector(0)).norm() == 0.0);
}

TEST_CASE("spin backend: derived representation and group homomorphism") {
  Rng rng(32);
  for (Real j : {0.5, 1.0, 1.5}) {
    const FiberRep rep = FiberRep::spin(j);
    CHECK(rep.dim_e == static_cast<int>(std::lround(2 * j)) + 1);

    for (int a = 0; a < 3; ++a) {
      const CMatrix d = rep.dsigma(Vector::Unit(3, a));
      CHECK((d.adjoint() + d).norm() <= 1e-14);
    }

    Real worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      Vector x = rng.uniform_vector(3, -1, 1), y = rng.uniform_vector(3, -1, 1);
      const CMatrix lhs = rep.dsigma(rep.bracket_m(x, y));
      const CMatrix rhs = rep.dsigma(x) * rep.dsigma(y) - rep.dsigma(y) * rep.dsigma(x);
      worst = std::max(worst, (lhs - rhs).norm());
    }
    CHECK(worst <= 1e-10);

    Real worst_hom = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const CMatrix u1 = random_su2(rng), u2 = random_su2(rng);
      const CMatrix s1 = rep.sigma_su2(u1), s2 = rep.sigma_su2(u2);
      CHECK((s1 * s1.adjoint() - CMatrix::Identity(rep.dim_e, rep.dim_e)).norm() <= 1e-12);
      worst_hom = std::max(worst_hom, (s1 * s2 - rep.sigma_su2(CMatrix(u1 * u2))).norm());
    }
    CHECK(worst_hom <= 1e-10);

    // the double cover is faithful for half-integer spin: σ(−I) = (−1)^{2j} I
    const CMatrix minus = rep.sigma_su2(CMatrix(-CMatrix::Identity(2, 2)));
    const Real parity = std::lround(2 * j) % 2 == 0 ? 1.0 : -1.0;
    CHECK((minus - parity * CMatrix::Identity(rep.dim_e, rep.dim_e)).norm() <= 1e-12);
  }
}

TEST_CASE("spin backend: highest-weight compatibility for several scales") {
  for (Real j : {0.5, 1.0, 1.5})
    for (Real kappa : {1.0, 2.5}) {
      const FiberRep rep = FiberRep::spin(j, kappa);
      const Vector t = rep.torus_direction();
      const CMatrix op = Complex(0, -1) * rep.dsigma(t);
      Eigen::SelfAdjointEigenSolver<CMatrix> es(op);
      const Real max_eig = es.eigenvalues().maxCoeff();
      CHECK(std::abs(max_eig - rep.beta_m(rep.xi2(), t)) <= 1e-8);
      CHECK(std::abs(rep.beta_m(rep.xi2(), rep.xi2()) + j * j / kappa) <= 1e-12);
    }
}

TEST_CASE("orbit sampling: determinism and norm invariance") {
  const FiberRep rep = FiberRep::spin(1.0);
  const auto pts = orbit_sample(rep, 4, 7);
  CHECK(pts.size() == 4);
  const Real base_norm = rep.beta_m(rep.xi2(), rep.xi2());
  for (const auto& p : pts)
    CHECK(std::abs(rep.beta_m(p.m_coords, p.m_coords) - base_norm) <= 1e-12);

  const auto again = orbit_sample(rep, 4, 7);
  for (int i = 0; i < 4; ++i) CHECK((pts[i].m_coords - again[i].m_coords).norm() == 0.0);
  const auto other = orbit_sample(rep, 4, 8);
  CHECK((pts[0].m_coords - other[0].m_coords).norm() > 0.0);
}

TEST_CASE("berezin symbol properties across backends") {
  Rng rng(33);
  const RealizedAlgebra sl2 = build_sl(2);
  std::vector<FiberRep> reps;
  reps.push_back(FiberRep::finite_character(sl2));
  for (Real j : {0.5, 1.0, 1.5}) reps.push_back(FiberRep::spin(j));

  for (const FiberRep& rep : reps) {
    const auto points = orbit_sample(rep, 20, 99);

    // (2) conjugate symbols and the normalized identity
    Real worst_conj = 0.0, worst_id = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      const CMatrix b = random_operator(rng, rep.dim_e);
      for (const auto& phi : points) {
        worst_conj =
            std::max(worst_conj, std::abs(berezin_symbol(rep, CMatrix(b.adjoint()), phi) -
                                          std::conj(berezin_symbol(rep, b, phi))));
        worst_id = std::max(
            worst_id, std::abs(berezin_symbol(rep, CMatrix::Identity(rep.dim_e, rep.dim_e), phi) -
                               Complex(1.0)));
      }
    }
    CHECK(worst_conj <= 1e-12);
    CHECK(worst_id <= 1e-12);

    if (rep.m_dim > 0) {
      // (4) linear symbols of the derived representation
      Real worst_lin = 0.0;
      for (int a = 0; a < rep.m_dim; ++a) {
        const Vector x = Vector::Unit(rep.m_dim, a);
        for (const auto& phi : points) {
          const Complex expected = Complex(0, 1) * rep.beta_m(phi.m_coords, x);
          worst_lin =
              std::max(worst_lin, std::abs(berezin_symbol(rep, rep.dsigma(x), phi) - expected));
        }
      }
      CHECK(worst_lin <= 1e-10);

      // (3) equivariance under the M action
      Real worst_eq = 0.0;
      for (int trial = 0; trial < 10; ++trial) {
        const CMatrix u = random_su2(rng);
        const CMatrix s = rep.sigma_su2(u);
        const Matrix r = rep.rotation_of_su2(u);
        const CMatrix b = random_operator(rng, rep.dim_e);
        for (const auto& phi : points) {
          const OrbitPointFiber moved{r * phi.m_coords};
          const Complex lhs = berezin_symbol(rep, b, moved);
          const Complex rhs = berezin_symbol(rep, CMatrix(s.adjoint() * b * s), phi);
          worst_eq = std::max(worst_eq, std::abs(lhs - rhs));
        }
      }
      CHECK(worst_eq <= 1e-10);
    }
  }
}

TEST_CASE("berezin reconstruction witnesses injectivity") {
  Rng rng(34);
  const FiberRep rep = FiberRep::spin(0.5);

  // zero symbol data reconstructs the zero operator
  auto zero_pts = orbit_sample(rep, 8, 5);
  std::vector<std::pair<OrbitPointFiber, Complex>> zero_samples;
  for (const auto& p : zero_pts) zero_samples.emplace_back(p, Complex(0));
  CHECK(berezin_reconstruct(rep, zero_samples).norm() <= 1e-12);

  for (int trial = 0; trial < 5; ++trial) {
    CMatrix b0 = random_operator(rng, 2);
    if (trial % 2 == 0) b0 = CMatrix(0.5 * (b0 + b0.adjoint()));  // Hermitian case
    std::vector<std::pair<OrbitPointFiber, Complex>> samples;
    for (const auto& p : orbit_sample(rep, 8, 100 + trial))
      samples.emplace_back(p, berezin_symbol(rep, b0, p));
    const CMatrix rec = berezin_reconstruct(rep, samples);
    CHECK((rec - b0).norm() <= 1e-8);
  }

  // spin-1: dim E² = 9 unknowns need 9+ well-spread samples
  const FiberRep rep1 = FiberRep::spin(1.0);
  const CMatrix b1 = random_operator(rng, 3);
  std::vector<std::pair<OrbitPointFiber, Complex>> samples1;
  for (const auto& p : orbit_sample(rep1, 14, 42))
    samples1.emplace_back(p, berezin_symbol(rep1, b1, p));
  CHECK((berezin_reconstruct(rep1, samples1) - b1).norm() <= 1e-8);

  // degenerate sampling: one point repeated
  std::vector<std::pair<OrbitPointFiber, Complex>> degenerate(
      8, {OrbitPointFiber{rep.xi2()}, Complex(1.0)});
  CHECK_THROWS_AS(berezin_reconstruct(rep, degenerate), RankDeficient);
  CHECK_THROWS_AS(berezin_reconstruct(rep, {}), std::invalid_argument);
}

TEST_CASE("kirillov bracket agrees with the commutator route") {
  Rng rng(35);
  for (Real j : {0.5, 1.0, 1.5}) {
    const FiberRep rep = FiberRep::spin(j);
    Real worst = 0.0;
    const auto points = orbit_sample(rep, 10, 3);
    for (int trial = 0; trial < 10; ++trial) {
      const Vector x = rng.uniform_vector(3, -1, 1), y = rng.uniform_vector(3, -1, 1);
      const CMatrix comm = rep.dsigma(x) * rep.dsigma(y) - rep.dsigma(y) * rep.dsigma(x);
      for (const auto& phi : points) {
        const Complex via_symbol = berezin_symbol(rep, comm, phi);
        const Complex via_bracket = Complex(0, 1) * rep.beta_m(phi.m_coords, rep.bracket_m(x, y));
        worst = std::max(worst, std::abs(via_symbol - via_bracket));
        worst = std::max(worst, std::abs(kirillov_bracket_linear(rep, x, y, phi) -
                                         rep.beta_m(phi.m_coords, rep.bracket_m(x, y))));
      }
    }
    CHECK(worst <= 1e-9);
  }
}
