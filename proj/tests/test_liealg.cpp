#include "doctest.h"

#include "support.hpp"

#include "corbit/liealg.hpp"

using namespace corbit;
using namespace testsupport;

namespace {

struct Sl2 {
  RealizedAlgebra g = build_sl(2);
  AlgebraElement H, E, F;
  Sl2() {
    Matrix h(2, 2), e(2, 2), f(2, 2);
    h << 1, 0, 0, -1;
    e << 0, 1, 0, 0;
    f << 0, 0, 1, 0;
    H = g.from_matrix(h);
    E = g.from_matrix(e);
    F = g.from_matrix(f);
  }
};

}  // namespace

TEST_CASE("build_sl rejects n < 2") { CHECK_THROWS_AS(build_sl(1), std::invalid_argument); }

TEST_CASE("sl(n) dimensions and root structure match the eigenvalue scan") {
  for (int n : {2, 3, 4}) {
    const RealizedAlgebra g = build_sl(n);
    CHECK(g.dim == n * n - 1);

    Matrix h_gen = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) h_gen(i, i) = std::pow(0.5, i + 1);
    h_gen.diagonal().array() -= h_gen.trace() / n;
    const RootScan scan = oracle_root_scan(g, h_gen);

    CHECK(static_cast<int>(g.roots.size()) == scan.distinct_roots);
    CHECK(g.nbar_dim() == scan.negative_dim);
    CHECK(g.m_dim() == scan.zero_dim - g.a_dim());
    for (const auto& r : g.roots) CHECK(r.multiplicity == 1);
  }
  const RealizedAlgebra sl2 = build_sl(2);
  CHECK(sl2.dim == 3);
  CHECK(sl2.nbar_dim() == 1);
  CHECK(sl2.m_dim() == 0);
  CHECK(sl2.roots.size() == 2);
  CHECK(build_sl(3).roots.size() == 6);
}

TEST_CASE("killing form values and oracle agreement") {
  Sl2 s;
  CHECK(killing(s.H, s.H) == doctest::Approx(8.0).epsilon(1e-14));
  CHECK(killing(s.H, s.H) ==
        doctest::Approx(oracle_killing_sl(2, s.H.matrix(), s.H.matrix())).epsilon(1e-14));
  CHECK(killing(s.H, s.H) ==
        doctest::Approx(oracle_killing_ad(s.g, s.H.matrix(), s.H.matrix())).epsilon(1e-12));

  const AlgebraElement emf = s.E - s.F;  // in 𝔨: β negative there
  CHECK(killing(emf, emf) == doctest::Approx(-8.0).epsilon(1e-14));

  CHECK(killing(s.H, s.g.zero()) == 0.0);

  Rng rng(11);
  for (int n : {2, 3}) {
    const RealizedAlgebra g = build_sl(n);
    for (int trial = 0; trial < 20; ++trial) {
      const AlgebraElement x = random_element(rng, g), y = random_element(rng, g);
      const Real ref = oracle_killing_sl(n, x.matrix(), y.matrix());
      CHECK(std::abs(killing(x, y) - ref) <= 1e-12 * (1.0 + std::abs(ref)));
      CHECK(std::abs(killing(x, y) - oracle_killing_ad(g, x.matrix(), y.matrix())) <= 1e-10);
    }
  }
}

TEST_CASE("bracket: antisymmetry, sl(2) values, structure constants") {
  Sl2 s;
  CHECK(bracket(s.H, s.H).norm() == 0.0);

  // direct 2x2 products pin the expected coordinates
  const Matrix he = s.H.matrix() * s.E.matrix() - s.E.matrix() * s.H.matrix();
  CHECK((he - 2.0 * s.E.matrix()).norm() == 0.0);
  CHECK((bracket(s.H, s.E) - 2.0 * s.E).norm() <= 1e-14);
  CHECK((bracket(s.E, s.F) - s.H).norm() <= 1e-14);

  Rng rng(12);
  for (int n : {2, 3}) {
    const RealizedAlgebra g = build_sl(n);
    for (int trial = 0; trial < 10; ++trial) {
      const AlgebraElement x = random_element(rng, g), y = random_element(rng, g);
      // structure-constant route
      Vector via_sc = Vector::Zero(g.dim);
      for (int i = 0; i < g.dim; ++i) via_sc += x.coords[i] * (g.ad_basis[i] * y.coords);
      CHECK((bracket(x, y).coords - via_sc).norm() <= 1e-12);
    }
  }

  const RealizedAlgebra other = build_sl(2);
  CHECK_THROWS_AS(bracket(s.H, other.from_matrix(s.E.matrix())), RealizationMismatch);
  CHECK_THROWS_AS(killing(s.H, other.from_matrix(s.E.matrix())), RealizationMismatch);
}

TEST_CASE("theta is an involution with the right eigenspaces and definiteness") {
  for (int n : {2, 3, 4}) {
    const RealizedAlgebra g = build_sl(n);
    CHECK((g.theta_matrix * g.theta_matrix - Matrix::Identity(g.dim, g.dim)).norm() <= 1e-14);
    CHECK((g.theta_matrix * g.basis_k - g.basis_k).norm() <= 1e-14);
    CHECK((g.theta_matrix * g.basis_V + g.basis_V).norm() <= 1e-14);

    const Matrix gram_k = g.basis_k.transpose() * g.killing_matrix * g.basis_k;
    const Matrix gram_v = g.basis_V.transpose() * g.killing_matrix * g.basis_V;
    Eigen::SelfAdjointEigenSolver<Matrix> ek(gram_k), ev(gram_v);
    CHECK(ek.eigenvalues().maxCoeff() < 0.0);
    CHECK(ev.eigenvalues().minCoeff() > 0.0);
  }
}

TEST_CASE("killing form is ad-invariant on basis triples") {
  for (int n : {2, 3, 4}) {
    const RealizedAlgebra g = build_sl(n);
    Real worst = 0.0;
    for (int i = 0; i < g.dim; ++i) {
      const AlgebraElement xi = g.element(Vector::Unit(g.dim, i));
      for (int j = 0; j < g.dim; ++j) {
        const AlgebraElement xj = g.element(Vector::Unit(g.dim, j));
        for (int k = 0; k < g.dim; ++k) {
          const AlgebraElement xk = g.element(Vector::Unit(g.dim, k));
          worst = std::max(worst, std::abs(killing(bracket(xi, xj), xk) +
                                           killing(xj, bracket(xi, xk))));
        }
      }
    }
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("jacobi identity residual on all basis triples") {
  for (int n : {2, 3, 4}) {
    const RealizedAlgebra g = build_sl(n);
    Real worst = 0.0;
    for (int i = 0; i < g.dim; ++i)
      for (int j = i + 1; j < g.dim; ++j)
        for (int k = j + 1; k < g.dim; ++k) {
          const AlgebraElement xi = g.element(Vector::Unit(g.dim, i));
          const AlgebraElement xj = g.element(Vector::Unit(g.dim, j));
          const AlgebraElement xk = g.element(Vector::Unit(g.dim, k));
          const AlgebraElement total = bracket(xi, bracket(xj, xk)) +
                                       bracket(xj, bracket(xk, xi)) +
                                       bracket(xk, bracket(xi, xj));
          worst = std::max(worst, total.norm());
        }
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("root space brackets satisfy [g_l, g_m] in g_{l+m}") {
  for (int n : {2, 3, 4}) {
    const RealizedAlgebra g = build_sl(n);
    Real worst = 0.0;
    for (const auto& ra : g.roots)
      for (const auto& rb : g.roots) {
        const RowVector sum = ra.on_a + rb.on_a;
        for (int ca = 0; ca < ra.space.cols(); ++ca)
          for (int cb = 0; cb < rb.space.cols(); ++cb) {
            const AlgebraElement br =
                bracket(g.element(ra.space.col(ca)), g.element(rb.space.col(cb)));
            Vector residual = br.coords;
            if (sum.cwiseAbs().maxCoeff() <= 1e-8) {
              residual -= g.projector(Subspace::A) * br.coords;
              residual -= g.projector(Subspace::M) * br.coords;
            } else {
              for (const auto& rc : g.roots)
                if ((rc.on_a - sum).cwiseAbs().maxCoeff() <= 1e-8) {
                  // orthogonal projection onto the root space (ONB within it)
                  const Matrix onb = rc.space;
                  residual -= onb * (onb.transpose() * g.theta_gram * br.coords);
                }
            }
            worst = std::max(worst, residual.norm());
          }
      }
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("decompositions span with the right dimensions") {
  for (int n : {2, 3, 4}) {
    const RealizedAlgebra g = build_sl(n);
    CHECK(g.nbar_dim() + g.m_dim() + g.a_dim() + static_cast<int>(g.basis_n.cols()) == g.dim);
    CHECK(g.k_dim() + g.a_dim() + static_cast<int>(g.basis_n.cols()) == g.dim);
    CHECK(g.k_dim() + g.V_dim() == g.dim);

    Matrix all(g.dim, g.dim);
    all << g.basis_nbar, g.basis_m, g.basis_a, g.basis_n;
    CHECK(all.colPivHouseholderQr().rank() == g.dim);
    Matrix iwa(g.dim, g.dim);
    iwa << g.basis_k, g.basis_a, g.basis_n;
    CHECK(iwa.colPivHouseholderQr().rank() == g.dim);

    // (E_i, E_j) = δ_ij for the θ-inner product
    const Matrix gram = g.nbar_onb.transpose() * g.theta_gram * g.nbar_onb;
    CHECK((gram - Matrix::Identity(g.nbar_dim(), g.nbar_dim())).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("projections: idempotence, subspace fixed points, named values") {
  Sl2 s;
  for (Subspace sub : {Subspace::A, Subspace::M, Subspace::Nbar, Subspace::N, Subspace::ATilde,
                       Subspace::KTilde, Subspace::KCartan, Subspace::VCartan}) {
    const Matrix& p = s.g.projector(sub);
    CHECK((p * p - p).cwiseAbs().maxCoeff() <= 1e-12);
  }

  CHECK((project(s.H, Subspace::A) - s.H).norm() <= 1e-14);
  CHECK(project(s.H, Subspace::M).norm() == 0.0);

  // oracle: solve against the 𝔨 ⊕ V basis directly
  {
    Matrix kv(s.g.dim, s.g.dim);
    kv << s.g.basis_k, s.g.basis_V;
    const Vector comps = kv.colPivHouseholderQr().solve(s.E.coords);
    const Vector k_part = s.g.basis_k * comps.head(s.g.k_dim());
    const AlgebraElement expected = 0.5 * (s.E - s.F);
    CHECK((k_part - expected.coords).norm() <= 1e-13);
    CHECK((project(s.E, Subspace::KCartan) - expected).norm() <= 1e-13);
  }

  // oracle: decompose F against 𝔨 ⊕ 𝔞 ⊕ 𝔫; its 𝔞 component vanishes
  {
    Matrix kan(s.g.dim, s.g.dim);
    kan << s.g.basis_k, s.g.basis_a, s.g.basis_n;
    const Vector comps = kan.colPivHouseholderQr().solve(s.F.coords);
    const Vector a_part = s.g.basis_a * comps.segment(s.g.k_dim(), s.g.a_dim());
    CHECK(a_part.norm() <= 1e-13);
    CHECK(project(s.F, Subspace::ATilde).norm() <= 1e-13);
  }

  Rng rng(13);
  for (int n : {2, 3}) {
    const RealizedAlgebra g = build_sl(n);
    for (int trial = 0; trial < 100; ++trial) {
      const AlgebraElement x = random_element(rng, g);
      const AlgebraElement sum = project(x, Subspace::Nbar) + project(x, Subspace::M) +
                                 project(x, Subspace::A);
      const AlgebraElement rem = x - sum;
      CHECK((project(rem, Subspace::N) - rem).norm() <= 1e-10);
    }
  }
}

TEST_CASE("rho: values, half-sum oracle, domain error") {
  const RealizedAlgebra sl2 = build_sl(2);
  const RealizedAlgebra sl3 = build_sl(3);
  CHECK(rho_of(sl2.zero()) == 0.0);

  Vector d2(2);
  d2 << 1, -1;
  CHECK(rho_of(diag_element(sl2, d2)) == doctest::Approx(1.0).epsilon(1e-14));

  Vector d3(3);
  d3 << 1, 0, -1;
  CHECK(rho_of(diag_element(sl3, d3)) == doctest::Approx(2.0).epsilon(1e-14));

  // oracle: ½ Σ_{i<j} (d_i − d_j) is the trace of ad H on the upper triangle
  Rng rng(14);
  for (int n : {2, 3, 4}) {
    const RealizedAlgebra g = build_sl(n);
    for (int trial = 0; trial < 10; ++trial) {
      Vector d = rng.uniform_vector(n, -1.0, 1.0);
      d.array() -= d.mean();
      Real expected = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) expected += 0.5 * (d[i] - d[j]);
      CHECK(std::abs(rho_of(diag_element(g, d)) - expected) <= 1e-10);
    }
  }

  CHECK_THROWS_AS(rho_of(sl2.from_matrix((Matrix(2, 2) << 0, 1, 0, 0).finished())),
                  std::invalid_argument);
}

TEST_CASE("lemma 3.1: ad xi1(V) is the orthocomplement of m in k") {
  Sl2 s;
  const Lemma31Report r2 = check_lemma_3_1(s.H);
  CHECK(r2.rank == 1);
  CHECK(r2.expected_rank == 1);
  CHECK(r2.ortho_residual == 0.0);
  CHECK(r2.pass);

  const RealizedAlgebra sl3 = build_sl(3);
  Vector d(3);
  d << 2, 1, -3;
  const Lemma31Report r3 = check_lemma_3_1(diag_element(sl3, d));
  CHECK(r3.rank == 3);
  CHECK(r3.expected_rank == 3);
  CHECK(r3.pass);

  CHECK_THROWS_AS(check_lemma_3_1(s.g.zero()), NonRegular);

  Rng rng(15);
  for (int n : {2, 3}) {
    const RealizedAlgebra g = build_sl(n);
    int accepted = 0;
    while (accepted < 5) {
      const AlgebraElement xi = random_in(rng, g, Subspace::A, -1.0, 1.0);
      if (!is_regular(xi)) continue;
      ++accepted;
      const Lemma31Report rep = check_lemma_3_1(xi);
      CHECK(rep.pass);
      CHECK(rep.ortho_residual <= 1e-9);
    }
  }
}

TEST_CASE("regularity detection uses all restricted roots") {
  const RealizedAlgebra sl3 = build_sl(3);
  Vector d(3);
  d << 1.0, 1.0, -2.0;  // e1 − e2 vanishes
  CHECK_FALSE(is_regular(diag_element(sl3, d)));
  Vector d2(3);
  d2 << 2.0, 1.0, -3.0;
  CHECK(is_regular(diag_element(sl3, d2)));
}
