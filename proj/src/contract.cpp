#include "corbit/contract.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace corbit {

namespace {

void require_r(Real r) {
  if (!(r > 0.0 && r <= 1.0)) throw std::invalid_argument("contraction parameter r must be in (0,1]");
}

}  // namespace

GroupElement c_r_apply(Real r, const MotionGroupElement& gv) {
  require_r(r);
  return exp_group(r * gv.v) * gv.k;
}

MotionGroupElement c_r_invert(Real r, const GroupElement& g) {
  require_r(r);
  // polar decomposition g = exp(s)·o with s symmetric traceless, o ∈ K
  const Matrix gram = g.m * g.m.transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
  const Vector log_eigs = es.eigenvalues().array().log() * 0.5;
  const Matrix s = es.eigenvectors() * log_eigs.asDiagonal() * es.eigenvectors().transpose();
  const Matrix p_inv =
      es.eigenvectors() * (-log_eigs).array().exp().matrix().asDiagonal() *
      es.eigenvectors().transpose();
  const AlgebraElement v = g.alg->from_matrix(s);
  return {(1.0 / r) * v, GroupElement{g.alg, p_inv * g.m}};
}

AlgebraElement contraction_map(Real r, const AlgebraElement& v, const AlgebraElement& u) {
  require_r(r);
  return r * v + u;
}

std::pair<AlgebraElement, AlgebraElement> contraction_map_inverse(Real r,
                                                                  const AlgebraElement& x) {
  require_r(r);
  return {(1.0 / r) * project(x, Subspace::VCartan), project(x, Subspace::KCartan)};
}

CoadPointG0 contraction_dual(Real r, const CoadPointG& xi) {
  require_r(r);
  return {r * project(xi.xi, Subspace::VCartan), project(xi.xi, Subspace::KCartan)};
}

std::vector<Real> ContractionScenario::default_grid() {
  std::vector<Real> grid;
  for (int k = 0; k <= 10; ++k) grid.push_back(std::pow(2.0, -k));
  return grid;
}

void ContractionScenario::validate() const {
  if (r_grid.empty()) throw std::invalid_argument("scenario: empty r grid");
  Real prev = 2.0;
  for (Real r : r_grid) {
    require_r(r);
    if (r >= prev) throw std::invalid_argument("scenario: r grid must be strictly decreasing");
    prev = r;
  }
}

ContractionScenario ContractionScenario::standard(const PrincipalSeriesParams& params,
                                                  std::uint64_t seed, int probe_count,
                                                  int sample_count) {
  const RealizedAlgebra& g = params.algebra();
  Rng rng(seed ? seed : 1);
  ContractionScenario sc{params, default_grid(), {}, {}, {}, 2, seed};

  // Operator probes, resampled until every grid r stays inside the big cell
  // and the group-level error already halves cleanly over the first decade
  // (keeps the pinned 2⁰…2⁻¹⁰ grid inside the first-order regime).
  while (static_cast<int>(sc.probes.size()) < probe_count) {
    ContractionProbe probe{g.element(g.basis_V * rng.uniform_vector(g.V_dim(), -0.35, 0.35)),
                           exp_group(g.element(g.basis_k * rng.uniform_vector(g.k_dim(), -0.35, 0.35))),
                           g.element(g.basis_k * rng.uniform_vector(g.k_dim(), -0.5, 0.5)),
                           TestFunction::random(rng, g, params.fiber().dim_e),
                           BarNPoint(g.element(g.basis_nbar *
                                               rng.uniform_vector(g.nbar_dim(), -0.6, 0.6)))};
    bool usable = true;
    for (Real r : sc.r_grid) {
      try {
        const GroupElement cr = c_r_apply(r, {probe.v, probe.k});
        bruhat(inverse(cr) * probe.y.group());
        bruhat(inverse(probe.k) * probe.y.group());
      } catch (const NotInBigCell&) {
        usable = false;
        break;
      }
    }
    if (usable) {
      const MotionGroupElement gv{probe.v, probe.k};
      auto op_error = [&](Real r) {
        return (pi_apply(params.rescaled(1.0 / r), c_r_apply(r, gv), probe.tf, probe.y) -
                pi0_apply(params, gv, probe.tf, probe.y))
            .norm();
      };
      const Real e1 = op_error(1.0);
      if (e1 > 1e-12) {
        const Real e_half = op_error(0.5), e_quarter = op_error(0.25);
        if (std::abs(e_half / e1 - 0.5) > 0.004 ||
            std::abs(e_quarter / e_half - 0.5) > 0.004)
          usable = false;
      }
    }
    if (usable) sc.probes.push_back(std::move(probe));
  }

  for (int i = 0; i < sample_count; ++i)
    sc.sample.push_back(
        {BarNPoint(g.element(g.basis_nbar * rng.uniform_vector(g.nbar_dim(), -0.6, 0.6))),
         g.element(g.basis_nbar * rng.uniform_vector(g.nbar_dim(), -0.6, 0.6)),
         OrbitPointFiber{params.fiber().xi2()}});

  // compact y-grid: tensor box in log coordinates
  const int n = g.nbar_dim();
  const std::vector<Real> ticks{-0.7, 0.0, 0.7};
  std::vector<Vector> corners{Vector::Zero(n)};
  for (int axis = 0; axis < n; ++axis) {
    std::vector<Vector> grown;
    for (const Vector& base : corners)
      for (Real t : ticks) {
        Vector next = base;
        next[axis] = t;
        grown.push_back(next);
      }
    corners = std::move(grown);
  }
  for (const Vector& z : corners) sc.coeff_grid.push_back(BarNPoint(g.nbar_from_onb(z)));

  sc.validate();
  return sc;
}

void SweepReport::finalize_statistics() {
  monotone = true;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const Real prev = rows[i - 1].max_error, cur = rows[i].max_error;
    if (cur > 1.05 * prev && cur > 1e-12) monotone = false;
  }
  final_ratio = rows.empty() || rows.front().max_error == 0.0
                    ? 0.0
                    : rows.back().max_error / rows.front().max_error;

  std::vector<std::pair<Real, Real>> pts;
  for (const auto& row : rows)
    if (row.max_error > 1e-12) pts.emplace_back(std::log(row.r), std::log(row.max_error));
  if (pts.size() >= 4) {
    Real mx = 0, my = 0;
    for (auto& [x, yv] : pts) {
      mx += x;
      my += yv;
    }
    mx /= pts.size();
    my /= pts.size();
    Real sxx = 0, sxy = 0;
    for (auto& [x, yv] : pts) {
      sxx += (x - mx) * (x - mx);
      sxy += (x - mx) * (yv - my);
    }
    const Real fitted = sxy / sxx;
    Real rss = 0;
    for (auto& [x, yv] : pts) {
      const Real pred = my + fitted * (x - mx);
      rss += (yv - pred) * (yv - pred);
    }
    slope = fitted;
    slope_residual = std::sqrt(rss / pts.size());
  }
}

bool sweep_ok(const SweepReport& report, Real ratio_bound, Real slope_lo, Real slope_hi) {
  if (!report.monotone) return false;
  if (report.final_ratio > ratio_bound) return false;
  if (report.slope && (*report.slope < slope_lo || *report.slope > slope_hi)) return false;
  return true;
}

SweepReport check_prop_7_1(const ContractionScenario& scenario) {
  scenario.validate();
  SweepReport report;
  report.check_id = "prop71";
  report.seed = scenario.seed;
  for (Real r : scenario.r_grid) {
    const PrincipalSeriesParams params_r = scenario.params.rescaled(1.0 / r);
    Real err = 0.0;
    for (const auto& probe : scenario.probes) {
      const MotionGroupElement gv{probe.v, probe.k};
      const CVector lhs = pi_apply(params_r, c_r_apply(r, gv), probe.tf, probe.y);
      const CVector rhs = pi0_apply(scenario.params, gv, probe.tf, probe.y);
      err = std::max(err, (lhs - rhs).norm());
    }
    report.rows.push_back({r, err, static_cast<int>(scenario.probes.size())});
  }
  report.finalize_statistics();
  return report;
}

SweepReport check_prop_8_1(const ContractionScenario& scenario) {
  scenario.validate();
  SweepReport report;
  report.check_id = "prop81";
  report.seed = scenario.seed;
  Real aux = 0.0;
  for (Real r : scenario.r_grid) {
    const PrincipalSeriesParams params_r = scenario.params.rescaled(1.0 / r);
    Real err = 0.0;
    for (const auto& p : scenario.sample) {
      const CoadPointG0 pulled = contraction_dual(r, psi(params_r, p));
      const CoadPointG0 limit = psi0(scenario.params, p);
      err = std::max(err, coad_g0_norm({pulled.w - limit.w, pulled.u - limit.u}));
      // the 𝔨 component of C_r*Ψ_r is r-free: p^c_𝔨(Ad(y)(φ − θZ)) exactly
      const AlgebraElement direct = project(
          adjoint(p.y, phi_ambient(scenario.params, p.phi) - theta(p.z)), Subspace::KCartan);
      aux = std::max(aux, (pulled.u - direct).norm());
    }
    report.rows.push_back({r, err, static_cast<int>(scenario.sample.size())});
  }
  report.aux_residual = aux;
  report.aux_label = "k-component r-independence";
  report.finalize_statistics();
  return report;
}

std::vector<MatrixCoeffPtr> symbol_coefficients(const PSymbol& f) {
  const int n = f.algebra().nbar_dim();
  if (f.degree() > 1) throw DegreeTooHigh("symbol_coefficients expects degree <= 1");
  std::vector<MatrixCoeffPtr> slots(
      n + 1, constant_matrix_coeff(CMatrix::Zero(f.fiber().dim_e, f.fiber().dim_e)));
  for (const auto& term : f.terms()) {
    int total = 0, which = -1;
    for (int k = 0; k < n; ++k) {
      total += term.alpha[k];
      if (term.alpha[k] > 0) which = k;
    }
    const int slot = total == 0 ? 0 : which + 1;
    slots[slot] = matrix_coeff_sum(slots[slot], term.coeff);
  }
  return slots;
}

std::vector<CMatrix> extract_coefficients(const PSymbol& f, const BarNPoint& y) {
  std::vector<CMatrix> table;
  for (const auto& c : symbol_coefficients(f)) table.push_back(c->eval(y));
  return table;
}

MatrixCoeffPtr iterated_derivative(MatrixCoeffPtr coeff, const std::vector<int>& gamma) {
  // (d/dt₁)^{γ₁}…(d/dtₙ)^{γₙ} along y exp(t₁E₁)…exp(tₙEₙ) composes the E_k
  // derivatives with the innermost (largest k) applied first.
  for (int k = static_cast<int>(gamma.size()) - 1; k >= 0; --k)
    for (int rep = 0; rep < gamma[k]; ++rep) coeff = coeff->derivative(k);
  return coeff;
}

namespace {

std::vector<std::vector<int>> gamma_indices(int n, int max_order) {
  std::vector<std::vector<int>> out;
  std::vector<int> current(n, 0);
  // multi-indices with |γ| ≤ max_order, enumerated lexicographically
  std::function<void(int, int)> rec = [&](int pos, int remaining) {
    if (pos == n) {
      out.push_back(current);
      return;
    }
    for (int use = 0; use <= remaining; ++use) {
      current[pos] = use;
      rec(pos + 1, remaining - use);
    }
    current[pos] = 0;
  };
  rec(0, max_order);
  return out;
}

}  // namespace

Prop83Report check_prop_8_3(const ContractionScenario& scenario) {
  scenario.validate();
  Prop83Report out;
  out.coefficients.check_id = "prop83-coefficients";
  out.operators.check_id = "prop83-operators";
  out.coefficients.seed = out.operators.seed = scenario.seed;

  const RealizedAlgebra& g = scenario.params.algebra();
  const auto gammas = gamma_indices(g.nbar_dim(), scenario.gamma_order);

  // limit coefficient trees per probe, with all requested ∂_γ applied
  std::vector<std::vector<MatrixCoeffPtr>> limit_tables;
  for (const auto& probe : scenario.probes) {
    const PSymbol f0 = linear_symbol_g0(scenario.params, probe.v, probe.u);
    std::vector<MatrixCoeffPtr> derived;
    for (const auto& slot : symbol_coefficients(f0))
      for (const auto& gamma : gammas) derived.push_back(iterated_derivative(slot, gamma));
    limit_tables.push_back(std::move(derived));
  }

  for (Real r : scenario.r_grid) {
    const PrincipalSeriesParams params_r = scenario.params.rescaled(1.0 / r);
    Real coeff_err = 0.0, op_err = 0.0;
    for (std::size_t pi = 0; pi < scenario.probes.size(); ++pi) {
      const auto& probe = scenario.probes[pi];
      const AlgebraElement moved = contraction_map(r, probe.v, probe.u);

      const PSymbol fr = linear_symbol_g(params_r, moved);
      std::size_t slot_index = 0;
      for (const auto& slot : symbol_coefficients(fr))
        for (const auto& gamma : gammas) {
          const MatrixCoeffPtr dr = iterated_derivative(slot, gamma);
          const MatrixCoeffPtr& d0 = limit_tables[pi][slot_index++];
          for (const BarNPoint& y : scenario.coeff_grid)
            coeff_err = std::max(coeff_err, (dr->eval(y) - d0->eval(y)).norm());
        }

      const CVector lhs = dpi_apply(params_r, moved, probe.tf, probe.y);
      const CVector rhs = dpi0_apply(scenario.params, probe.v, probe.u, probe.tf, probe.y);
      op_err = std::max(op_err, (lhs - rhs).norm());
    }
    out.coefficients.rows.push_back({r, coeff_err, static_cast<int>(scenario.probes.size())});
    out.operators.rows.push_back({r, op_err, static_cast<int>(scenario.probes.size())});
  }
  out.coefficients.finalize_statistics();
  out.operators.finalize_statistics();
  return out;
}

}  // namespace corbit
