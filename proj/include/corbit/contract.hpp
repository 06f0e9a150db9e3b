#pragma once

#include <optional>
#include <string>

#include "corbit/orbits.hpp"

namespace corbit {

/// c_r(v,k) = exp(r v) k, the group-level contraction map, r ∈ (0,1].
GroupElement c_r_apply(Real r, const MotionGroupElement& gv);

/// Inverse through the global polar decomposition g = exp(s)·o with s ∈ V.
MotionGroupElement c_r_invert(Real r, const GroupElement& g);

/// C_r(v,U) = r v + U, the differential of c_r at the identity.
AlgebraElement contraction_map(Real r, const AlgebraElement& v, const AlgebraElement& u);

/// C_r⁻¹ as a linear map on the Cartan components.
std::pair<AlgebraElement, AlgebraElement> contraction_map_inverse(Real r,
                                                                  const AlgebraElement& x);

/// C_r*(ξ) = (r p^c_V ξ, p^c_𝔨 ξ), the dual map on coadjoint data.
CoadPointG0 contraction_dual(Real r, const CoadPointG& xi);

/// Operator-level probe: a motion-group point (v, k) (with the 𝔨 companion u
/// for the derived checks) applied to a test function at a base point.
struct ContractionProbe {
  AlgebraElement v;
  GroupElement k;
  AlgebraElement u;
  TestFunction tf;
  BarNPoint y;
};

/// Scenario bundle: parameters, decreasing r-grid in (0,1], operator probes,
/// product-point sample for the orbit sweep and the compact coefficient grid
/// with derivative orders |γ| ≤ gamma_order for the symbol sweep.
struct ContractionScenario {
  PrincipalSeriesParams params;
  std::vector<Real> r_grid;
  std::vector<ContractionProbe> probes;
  std::vector<ProductPoint> sample;
  std::vector<BarNPoint> coeff_grid;
  int gamma_order = 2;
  std::uint64_t seed = 0;

  static std::vector<Real> default_grid();  // 1, 2⁻¹, …, 2⁻¹⁰

  /// Deterministic scenario with probes resampled so that every grid r keeps
  /// them inside the big cell.
  static ContractionScenario standard(const PrincipalSeriesParams& params, std::uint64_t seed,
                                      int probe_count = 3, int sample_count = 8);

  void validate() const;
};

struct SweepRow {
  Real r = 0.0;
  Real max_error = 0.0;
  int probe_count = 0;
};

struct SweepReport {
  std::string check_id;
  std::vector<SweepRow> rows;
  std::optional<Real> slope;           ///< log-log fit over rows with error > 1e−12
  std::optional<Real> slope_residual;  ///< rms deviation of the fit
  bool monotone = false;               ///< nonincreasing, 5% uptick allowance
  Real final_ratio = 0.0;              ///< e(r_min) / e(r_max), 0 when e(r_max) = 0
  std::optional<Real> aux_residual;    ///< extra r-independent identity, when any
  std::string aux_label;
  std::uint64_t seed = 0;

  void finalize_statistics();  ///< fills slope, monotone and final_ratio from rows
};

bool sweep_ok(const SweepReport& report, Real ratio_bound, Real slope_lo, Real slope_hi);

/// lim_{r→0} π_r(c_r(v,k))φ(y) = π₀(v,k)φ(y), error per grid r.
SweepReport check_prop_7_1(const ContractionScenario& scenario);

/// lim_{r→0} C_r*(Ψ_r(p)) = Ψ₀(p); also asserts the r-independent identity of
/// the 𝔨 component (aux_residual).
SweepReport check_prop_8_1(const ContractionScenario& scenario);

/// Coefficient evaluators u_α of a degree ≤ 1 symbol: slot 0 is u_0, slot k
/// is the z_k coefficient (exact for the linear-symbol constructors).
std::vector<MatrixCoeffPtr> symbol_coefficients(const PSymbol& f);

/// The table u_α(y).
std::vector<CMatrix> extract_coefficients(const PSymbol& f, const BarNPoint& y);

/// ∂_γ v = (d/dt₁)^{γ₁}…(d/dtₙ)^{γₙ} v(y exp(t₁E₁)…exp(tₙEₙ))|₀ as a
/// coefficient tree (compositions of the E_k derivatives).
MatrixCoeffPtr iterated_derivative(MatrixCoeffPtr coeff, const std::vector<int>& gamma);

struct Prop83Report {
  SweepReport coefficients;  ///< part 1: sup of |∂_γ(u_α^r − u_α)| over the grid
  SweepReport operators;     ///< part 2: derived-representation convergence
};

/// Part 1 establishes that (C_r(v,U))~ approximates (v,U)~; part 2 measures
/// dπ_r(C_r(v,U))φ(y) → dπ₀(v,U)φ(y).
Prop83Report check_prop_8_3(const ContractionScenario& scenario);

}  // namespace corbit
