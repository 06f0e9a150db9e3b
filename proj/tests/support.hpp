#pragma once

// Test-side oracles and helpers. Everything here recomputes quantities through
// routes independent of the library's cached data (its solvers, structure
// constants and projectors), so that agreement is meaningful.

#include <Eigen/Eigenvalues>

#include <cmath>
#include <map>
#include <vector>

#include "corbit/grp.hpp"
#include "corbit/liealg.hpp"
#include "corbit/types.hpp"

namespace testsupport {

using corbit::AlgebraElement;
using corbit::BarNPoint;
using corbit::GroupElement;
using corbit::Matrix;
using corbit::RealizedAlgebra;
using corbit::Real;
using corbit::Rng;
using corbit::Subspace;
using corbit::Vector;

// Least-squares coordinatization straight from the defining matrices.
inline Vector lsq_coordinates(const std::vector<Matrix>& basis, const Matrix& m) {
  const int dim = static_cast<int>(basis.size());
  Matrix a(m.size(), dim);
  for (int i = 0; i < dim; ++i)
    a.col(i) = Eigen::Map<const Vector>(basis[i].data(), basis[i].size());
  return a.colPivHouseholderQr().solve(Eigen::Map<const Vector>(m.data(), m.size()));
}

// ad X as a dim×dim matrix, rebuilt from matrix commutators.
inline Matrix oracle_ad(const RealizedAlgebra& g, const Matrix& x) {
  Matrix ad(g.dim, g.dim);
  for (int j = 0; j < g.dim; ++j)
    ad.col(j) = lsq_coordinates(g.basis, x * g.basis[j] - g.basis[j] * x);
  return ad;
}

// β(X, Y) = Tr(ad X ad Y) through the adjoint representation.
inline Real oracle_killing_ad(const RealizedAlgebra& g, const Matrix& x, const Matrix& y) {
  return (oracle_ad(g, x) * oracle_ad(g, y)).trace();
}

// Closed form for sl(n, R): β(X, Y) = 2n Tr(XY).
inline Real oracle_killing_sl(int n, const Matrix& x, const Matrix& y) {
  return 2.0 * n * (x * y).trace();
}

struct RootScan {
  int distinct_roots = 0;  // distinct nonzero ad-eigenvalues of a generic Cartan element
  int negative_dim = 0;    // dim 𝔫̄, eigenvalue multiplicities counted
  int zero_dim = 0;        // dim(𝔞 ⊕ 𝔪)
  std::map<double, int> multiplicities;  // eigenvalue -> dim 𝔤_λ
};

// Dense eigenvalue scan of ad(H) for a generic diagonal H. The chamber element
// separates all restricted roots for the shipped realizations.
inline RootScan oracle_root_scan(const RealizedAlgebra& g, const Matrix& h_generic) {
  const Matrix ad = oracle_ad(g, h_generic);
  Eigen::EigenSolver<Matrix> es(ad);
  RootScan scan;
  std::vector<double> vals;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const auto ev = es.eigenvalues()[i];
    REQUIRE(std::abs(ev.imag()) < 1e-9);
    vals.push_back(ev.real());
  }
  for (double v : vals) {
    if (std::abs(v) < 1e-7) {
      ++scan.zero_dim;
      continue;
    }
    if (v < 0) ++scan.negative_dim;
    bool found = false;
    for (auto& [key, mult] : scan.multiplicities)
      if (std::abs(key - v) < 1e-7) {
        ++mult;
        found = true;
        break;
      }
    if (!found) scan.multiplicities[v] = 1;
  }
  scan.distinct_roots = static_cast<int>(scan.multiplicities.size());
  return scan;
}

// Central difference with one Richardson level; works for any vector-space-like
// value (double, complex, Eigen vectors/matrices). Results are materialized to
// the callable's value type so no Eigen expression outlives its operands.
template <class F>
auto richardson_d1(F&& f, double h) {
  using Value = std::decay_t<decltype(f(0.0))>;
  auto d = [&](double hh) -> Value { return (f(hh) - f(-hh)) * (0.5 / hh); };
  return Value((4.0 * d(h / 2) - d(h)) * (1.0 / 3.0));
}

// Second derivative at 0, central stencil with one Richardson level.
template <class F>
auto richardson_d2(F&& f, double h) {
  using Value = std::decay_t<decltype(f(0.0))>;
  auto d = [&](double hh) -> Value {
    return (f(hh) - 2.0 * f(0.0) + f(-hh)) * (1.0 / (hh * hh));
  };
  return Value((16.0 * d(h / 2) - d(h)) * (1.0 / 15.0));
}

inline AlgebraElement random_element(Rng& rng, const RealizedAlgebra& g, double lo = -0.8,
                                     double hi = 0.8) {
  return g.element(rng.uniform_vector(g.dim, lo, hi));
}

inline AlgebraElement random_in(Rng& rng, const RealizedAlgebra& g, Subspace s, double lo = -0.8,
                                double hi = 0.8) {
  const Matrix& b = g.subspace_basis(s);
  return g.element(b * rng.uniform_vector(static_cast<int>(b.cols()), lo, hi));
}

inline AlgebraElement diag_element(const RealizedAlgebra& g, const Vector& d) {
  Matrix m = Matrix::Zero(g.dim_matrix, g.dim_matrix);
  m.diagonal() = d;
  return g.from_matrix(m);
}

inline GroupElement random_group(Rng& rng, const RealizedAlgebra& g, double scale = 0.8) {
  return corbit::exp_group(random_element(rng, g, -scale, scale));
}

inline GroupElement random_compact(Rng& rng, const RealizedAlgebra& g, double scale = 0.8) {
  return corbit::exp_group(random_in(rng, g, Subspace::KCartan, -scale, scale));
}

inline BarNPoint random_bar_n(Rng& rng, const RealizedAlgebra& g, double scale = 0.8) {
  return BarNPoint(random_in(rng, g, Subspace::Nbar, -scale, scale));
}

}  // namespace testsupport
