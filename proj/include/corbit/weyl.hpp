#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "corbit/fiber.hpp"
#include "corbit/grp.hpp"

namespace corbit {

/// y · exp(t W) for W ∈ 𝔫̄, staying in log coordinates.
BarNPoint translate(const BarNPoint& y, const AlgebraElement& w, Real t);

// ---------------------------------------------------------------------------
// Coefficient evaluators on N̄. Coefficients form small expression trees so
// that the directional derivatives E_k(·) along t ↦ y·exp(tE_k) are exact
// whenever a closed form exists; the generic fallback is Richardson finite
// differences with step 1e−3.
// ---------------------------------------------------------------------------

class ScalarCoeff;
using ScalarCoeffPtr = std::shared_ptr<const ScalarCoeff>;

class ScalarCoeff : public std::enable_shared_from_this<ScalarCoeff> {
 public:
  virtual ~ScalarCoeff() = default;
  virtual Complex eval(const BarNPoint& y) const = 0;
  /// Coefficient of d/dt at 0 along t ↦ y·exp(t E_k).
  virtual ScalarCoeffPtr derivative(int k) const;
};

ScalarCoeffPtr constant_coeff(Complex c);
ScalarCoeffPtr lambda_coeff(const RealizedAlgebra& alg,
                            std::function<Complex(const BarNPoint&)> fn);
ScalarCoeffPtr coeff_sum(ScalarCoeffPtr a, ScalarCoeffPtr b);
ScalarCoeffPtr coeff_product(ScalarCoeffPtr a, ScalarCoeffPtr b);
ScalarCoeffPtr coeff_scale(Complex s, ScalarCoeffPtr a);

/// y ↦ L(Ad(y⁻¹)X) for a linear functional L on coordinates. The family is
/// closed under E_k: the derivative is −L ∘ ad(E_k) applied the same way.
ScalarCoeffPtr adjoint_functional_coeff(const RealizedAlgebra& alg, RowVector functional,
                                        AlgebraElement x);

/// y ↦ L(Ad(k̃(y)⁻¹)X); exact first derivative through the Iwasawa K-factor
/// derivative, finite differences beyond that.
ScalarCoeffPtr iwasawa_functional_coeff(const RealizedAlgebra& alg, RowVector functional,
                                        AlgebraElement x);

class MatrixCoeff;
using MatrixCoeffPtr = std::shared_ptr<const MatrixCoeff>;

class MatrixCoeff : public std::enable_shared_from_this<MatrixCoeff> {
 public:
  virtual ~MatrixCoeff() = default;
  virtual CMatrix eval(const BarNPoint& y) const = 0;
  virtual int rows() const = 0;
  virtual MatrixCoeffPtr derivative(int k) const;
};

MatrixCoeffPtr constant_matrix_coeff(CMatrix m);
MatrixCoeffPtr scalar_identity_coeff(ScalarCoeffPtr s, int dim);
MatrixCoeffPtr matrix_coeff_sum(MatrixCoeffPtr a, MatrixCoeffPtr b);
MatrixCoeffPtr matrix_coeff_scale(Complex s, MatrixCoeffPtr a);
/// dσ(v(y)) extended ℂ-linearly over the fiber 𝔪 components of v.
MatrixCoeffPtr dsigma_coeff(const FiberRep& fiber, std::vector<ScalarCoeffPtr> v);

// ---------------------------------------------------------------------------
// Symbols
// ---------------------------------------------------------------------------

/// The restricted bracket class u(y) + β_m(v(y), φ) + Σ_k w_k(y) z_k. Null entries are
/// zero coefficients; v has one component per fiber 𝔪 direction.
struct RestrictedSymbol {
  ScalarCoeffPtr u;
  std::vector<ScalarCoeffPtr> v;
  std::vector<ScalarCoeffPtr> w;
};

struct PSymbolTerm {
  std::vector<int> alpha;  ///< multi-index over the 𝔫̄ basis (E_i)
  MatrixCoeffPtr coeff;    ///< End(E)-valued evaluator
};

/// Polynomial symbol on N̄ × 𝔫̄ × o(ξ₂): f(y,Z,φ) = Σ s(coeff(y))(φ)·Z^α.
class PSymbol {
 public:
  static constexpr int kDegreeCap = 4;

  PSymbol(const RealizedAlgebra& alg, const FiberRep& fiber, std::vector<PSymbolTerm> terms);
  static PSymbol from_restricted(const RealizedAlgebra& alg, const FiberRep& fiber,
                                 RestrictedSymbol parts);

  const RealizedAlgebra& algebra() const { return *alg_; }
  const FiberRep& fiber() const { return fiber_; }
  const std::vector<PSymbolTerm>& terms() const { return terms_; }
  const std::optional<RestrictedSymbol>& restricted() const { return restricted_; }
  int degree() const { return degree_; }

 private:
  const RealizedAlgebra* alg_;
  FiberRep fiber_;  // by value: symbols outlive the params they came from
  std::vector<PSymbolTerm> terms_;
  std::optional<RestrictedSymbol> restricted_;
  int degree_ = 0;
};

// ---------------------------------------------------------------------------
// Test functions φ(y) = p(Y) exp(−c‖Y‖²) u in the orthonormal log coordinates
// ---------------------------------------------------------------------------

/// Real polynomial of degree ≤ 3 in the 𝔫̄ coordinates, sparse multi-index map.
using Polynomial = std::map<std::vector<int>, Real>;

class TestFunction {
 public:
  TestFunction(const RealizedAlgebra& alg, Polynomial p, Real gaussian_rate, CVector u);

  static TestFunction random(Rng& rng, const RealizedAlgebra& alg, int dim_e,
                             int poly_degree = 2);

  CVector eval(const BarNPoint& y) const;
  /// d/dt φ(y·exp(tW))|₀, exact via the chain rule on the stored parameters
  /// (W is projected to 𝔫̄).
  CVector dir_deriv(const BarNPoint& y, const AlgebraElement& w) const;

  const RealizedAlgebra& algebra() const { return *alg_; }
  int dim_e() const { return static_cast<int>(u_.size()); }

 private:
  const RealizedAlgebra* alg_;
  Polynomial poly_;
  Real rate_;
  CVector u_;
};

/// E-valued function on N̄ presented through evaluators; dir falls back to
/// Richardson finite differences when no exact hook is supplied.
struct SmoothEFunction {
  int dim_e = 1;
  std::function<CVector(const BarNPoint&)> eval;
  std::function<CVector(const BarNPoint&, const AlgebraElement&)> dir;  // optional

  CVector dir_or_fd(const BarNPoint& y, const AlgebraElement& w) const;
};

SmoothEFunction as_function(const TestFunction& tf);

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

Complex symbol_eval(const PSymbol& f, const BarNPoint& y, const AlgebraElement& z,
                    const OrbitPointFiber& phi);

/// (W(f)φ)(y). Degree-0/1 terms use the closed forms; higher terms are
/// evaluated by polynomial jets (central differences + Richardson).
CVector weyl_apply(const PSymbol& f, const SmoothEFunction& phi, const BarNPoint& y);
CVector weyl_apply(const PSymbol& f, const TestFunction& phi, const BarNPoint& y);

/// Jet route for every term regardless of degree; cross-validates the
/// degree-0/1 closed forms.
CVector weyl_apply_jets(const PSymbol& f, const SmoothEFunction& phi, const BarNPoint& y);

/// {f, g}_p on the restricted class, assembled term by term from the closed
/// forms: base derivatives E_k(·), the fiber bracket {z_k, z_l} = β(θZ,[E_k,E_l])
/// and the Kirillov bracket on the orbit.
PSymbol poisson_p(const PSymbol& f, const PSymbol& g);

/// max over probes of ‖([W(f),W(g)] + i W({f,g}_p)) φ (y)‖.
Real check_lemma_4_3(const PSymbol& f, const PSymbol& g,
                     const std::vector<std::pair<TestFunction, BarNPoint>>& probes);

/// Tr_𝔫̄(p_𝔫̄ ∘ ad Y); equals −2ρ(p_𝔞 Y) for every Y.
Real nbar_trace_of_ad(const RealizedAlgebra& alg, const AlgebraElement& y);

/// Velocity of t ↦ log(y·exp(tW)) at t = 0 in the (E_i) coordinates.
Vector log_curve_velocity(const RealizedAlgebra& alg, const AlgebraElement& log_y,
                          const AlgebraElement& w);

}  // namespace corbit
