#pragma once

#include "corbit/liealg.hpp"

namespace corbit {

/// Group point in the defining matrix representation.
struct GroupElement {
  const RealizedAlgebra* alg = nullptr;
  Matrix m;
};

GroupElement group_identity(const RealizedAlgebra& g);
/// Wraps a matrix as a group point, enforcing the realization's determinant
/// constraint (det = 1 for SL(n,ℝ)) within tolerance.
GroupElement group_element(const RealizedAlgebra& g, Matrix m, Real tol = 1e-8);
GroupElement operator*(const GroupElement& a, const GroupElement& b);
GroupElement inverse(const GroupElement& g);
bool in_maximal_compact(const GroupElement& g, Real tol = 1e-8);

/// Point of N̄, canonically stored by its logarithm in 𝔫̄. The group matrix is
/// derived on demand (exp is a diffeomorphism of 𝔫̄ onto N̄).
class BarNPoint {
 public:
  explicit BarNPoint(AlgebraElement log_coord, Real tol = 1e-10);
  static BarNPoint identity(const RealizedAlgebra& g);

  const AlgebraElement& log() const { return log_; }
  const RealizedAlgebra& algebra() const { return *log_.alg; }
  Matrix matrix() const;
  GroupElement group() const { return {log_.alg, matrix()}; }

 private:
  AlgebraElement log_;
};

struct IwasawaFactors {
  GroupElement ktilde, atilde, ntilde;
  AlgebraElement log_atilde;  ///< in 𝔞
};

struct BruhatFactors {
  BarNPoint nbar;
  GroupElement m, a, n;
  AlgebraElement log_a;  ///< in 𝔞
};

/// Per-realization factorization strategy (QR/LU for sl(n,ℝ); other
/// realizations can register their own backend).
class FactorizationBackend {
 public:
  virtual ~FactorizationBackend() = default;
  virtual IwasawaFactors iwasawa(const GroupElement& g) const = 0;
  virtual BruhatFactors bruhat(const GroupElement& g) const = 0;
};

const FactorizationBackend& factorization_backend(const RealizedAlgebra& g);

/// exp: 𝔤 → G by scaling and squaring with a truncated series.
GroupElement exp_group(const AlgebraElement& x);

/// Finite nilpotent logarithm of a unipotent element of N̄.
/// Rejects inputs that are not unipotent or whose log leaves 𝔫̄.
AlgebraElement log_nbar(const GroupElement& y);

/// Ad(g) X = g X g⁻¹ re-expressed in coordinates.
AlgebraElement adjoint(const GroupElement& g, const AlgebraElement& x);
/// Ad of a BarNPoint without materializing the group element twice.
AlgebraElement adjoint(const BarNPoint& y, const AlgebraElement& x);

/// g = k̃(g) ã(g) ñ(g).
IwasawaFactors iwasawa(const GroupElement& g);
IwasawaFactors iwasawa(const BarNPoint& y);

/// g = n̄(g) m(g) a(g) n(g) on the dense cell; throws NotInBigCell otherwise.
BruhatFactors bruhat(const GroupElement& g);

/// k · y = n̄(ky) for k in K.
BarNPoint dot_action(const GroupElement& k, const BarNPoint& y);

/// Closed forms for the derivatives of the factor maps along t ↦ exp(tX) y.
/// dnbar_direction is the 𝔫̄ vector Y₀ with curve t ↦ y·exp(tY₀).
struct Lemma21Derivatives {
  AlgebraElement da;               ///< p_𝔞(Ad(y⁻¹)X)
  AlgebraElement dm;               ///< p_𝔪(Ad(y⁻¹)X)
  AlgebraElement dnbar_direction;  ///< p_𝔫̄(Ad(y⁻¹)X)
  AlgebraElement datilde;          ///< p̃_𝔞(Ad(k̃(y)⁻¹)X)
};

Lemma21Derivatives lemma21_derivatives(const AlgebraElement& x, const BarNPoint& y);

}  // namespace corbit
