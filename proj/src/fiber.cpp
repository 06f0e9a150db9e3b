#include "corbit/fiber.hpp"

#include <Eigen/SVD>

#include <cmath>

namespace corbit {

namespace {

CMatrix cexpm(const CMatrix& m) {
  const int n = static_cast<int>(m.rows());
  const Real norm = m.norm();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const CMatrix scaled = m / std::pow(2.0, squarings);
  CMatrix sum = CMatrix::Identity(n, n);
  CMatrix term = CMatrix::Identity(n, n);
  for (int k = 1; k <= 40; ++k) {
    term = term * scaled / static_cast<Real>(k);
    sum += term;
    if (term.norm() <= 1e-18 * sum.norm()) break;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

// Spin-j angular momentum matrices in the |j,m⟩ basis, m = j..−j.
struct SpinMatrices {
  CMatrix j1, j2, j3;
};

SpinMatrices spin_matrices(Real j) {
  const int d = static_cast<int>(std::lround(2 * j)) + 1;
  CMatrix j3 = CMatrix::Zero(d, d), jp = CMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i) j3(i, i) = j - i;
  for (int i = 1; i < d; ++i) {
    const Real m = j - i;
    jp(i - 1, i) = std::sqrt(j * (j + 1) - m * (m + 1));
  }
  const CMatrix jm = jp.adjoint();
  return {0.5 * (jp + jm), Complex(0, -0.5) * (jp - jm), j3};
}

Matrix rotation_from_vector(const Vector& w) {
  const Real angle = w.norm();
  Matrix r = Matrix::Identity(3, 3);
  if (angle < 1e-300) return r;
  const Vector n = w / angle;
  Matrix hat(3, 3);
  hat << 0, -n[2], n[1], n[2], 0, -n[0], -n[1], n[0], 0;
  return Matrix::Identity(3, 3) + std::sin(angle) * hat + (1 - std::cos(angle)) * hat * hat;
}

Vector cross3(const Vector& a, const Vector& b) {
  Vector c(3);
  c << a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0];
  return c;
}

}  // namespace

FiberRep FiberRep::finite_character(const RealizedAlgebra& alg, std::vector<int> indices) {
  if (alg.m_dim() != 0)
    throw std::invalid_argument("finite_character requires a realization with 𝔪 = 0");
  for (int i : indices)
    if (i < 0 || i >= alg.dim_matrix)
      throw std::invalid_argument("character index outside the diagonal range");
  FiberRep rep;
  rep.kind = FiberKind::FiniteCharacter;
  rep.dim_e = 1;
  rep.m_dim = 0;
  rep.alg = &alg;
  rep.character_indices = std::move(indices);
  return rep;
}

FiberRep FiberRep::spin(Real j, Real kappa) {
  const Real twice = 2 * j;
  if (j < 0 || std::abs(twice - std::lround(twice)) > 1e-12)
    throw std::invalid_argument("spin requires half-integer j >= 0");
  if (kappa <= 0) throw std::invalid_argument("spin requires kappa > 0");
  FiberRep rep;
  rep.kind = FiberKind::SpinJ;
  rep.dim_e = static_cast<int>(std::lround(twice)) + 1;
  rep.m_dim = 3;
  rep.spin_j = j;
  rep.kappa = kappa;
  return rep;
}

Vector FiberRep::xi2() const {
  if (kind == FiberKind::FiniteCharacter) return Vector(0);
  Vector v = Vector::Zero(3);
  v[2] = -spin_j / kappa;
  return v;
}

Vector FiberRep::torus_direction() const {
  if (kind == FiberKind::FiniteCharacter) return Vector(0);
  return Vector::Unit(3, 2);
}

Real FiberRep::beta_m(const Vector& x, const Vector& y) const { return -kappa * x.dot(y); }

Vector FiberRep::bracket_m(const Vector& x, const Vector& y) const {
  if (kind == FiberKind::FiniteCharacter) return Vector(0);
  return cross3(x, y);
}

CMatrix FiberRep::dsigma(const Vector& x) const {
  if (kind == FiberKind::FiniteCharacter) return CMatrix::Zero(1, 1);
  const SpinMatrices j = spin_matrices(spin_j);
  return Complex(0, -1) * (x[0] * j.j1 + x[1] * j.j2 + x[2] * j.j3);
}

CMatrix FiberRep::sigma_point(const GroupElement& m) const {
  if (kind != FiberKind::FiniteCharacter)
    throw std::invalid_argument("sigma_point is the finite-character entry point");
  const int n = static_cast<int>(m.m.rows());
  if ((m.m.cwiseAbs() - Matrix::Identity(n, n)).norm() > 1e-8)
    throw std::invalid_argument("sigma_point: element is not a diagonal sign matrix");
  Real chi = 1.0;
  for (int i : character_indices) chi *= m.m(i, i) > 0 ? 1.0 : -1.0;
  CMatrix out(1, 1);
  out(0, 0) = chi;
  return out;
}

namespace {

// Axis-angle payload of u = cos(θ/2) I − i sin(θ/2) n·σ with θ ∈ [0, 2π].
Vector su2_rotation_vector(const CMatrix& u) {
  const Real c = 0.5 * (u(0, 0) + u(1, 1)).real();
  Vector w(3);
  w << -u(0, 1).imag(), -u(0, 1).real(), -u(0, 0).imag();
  const Real s = w.norm();
  const Real angle = 2.0 * std::atan2(s, c);
  const Vector axis = s > 1e-14 ? Vector(w / s) : Vector::Unit(3, 2);
  return angle * axis;
}

}  // namespace

CMatrix FiberRep::sigma_su2(const CMatrix& u) const {
  if (kind != FiberKind::SpinJ) throw std::invalid_argument("sigma_su2 is spin-only");
  return cexpm(dsigma(su2_rotation_vector(u)));
}

Matrix FiberRep::rotation_of_su2(const CMatrix& u) const {
  return rotation_from_vector(su2_rotation_vector(u));
}

CVector FiberRep::coherent_state(const OrbitPointFiber& phi) const {
  if (kind == FiberKind::FiniteCharacter) return CVector::Ones(1);
  const Vector base = xi2();
  const Real radius = base.norm();
  if (std::abs(phi.m_coords.norm() - radius) > 1e-8 * (1.0 + radius))
    throw std::invalid_argument("coherent_state: point is not on the orbit sphere");

  CVector lowest = CVector::Zero(dim_e);
  lowest[dim_e - 1] = 1.0;  // the J₃ = −j weight vector sits over ξ₂ = −(j/κ)e₃
  if (radius < 1e-300) return lowest;

  const Vector u0 = base / radius;
  const Vector u1 = phi.m_coords / phi.m_coords.norm();
  const Real cosang = std::min(1.0, std::max(-1.0, u0.dot(u1)));
  Vector axis = cross3(u0, u1);
  const Real sinang = axis.norm();
  if (sinang < 1e-14) {
    if (cosang > 0) return lowest;  // φ = ξ₂
    axis = Vector::Unit(3, 0);      // antipodal: any orthogonal axis works
  } else {
    axis /= sinang;
  }
  const Real angle = std::atan2(sinang, cosang);
  return cexpm(dsigma(angle * axis)) * lowest;
}

bool FiberRep::compatible_with(const RealizedAlgebra& g) const {
  if (kind == FiberKind::FiniteCharacter) return alg == &g;
  return g.m_dim() == 3;
}

CMatrix su2_from_rotation_vector(const Vector& w) {
  const Real angle = w.norm();
  CMatrix u = CMatrix::Identity(2, 2);
  if (angle < 1e-300) return u;
  const Vector n = w / angle;
  CMatrix nsigma(2, 2);
  nsigma << n[2], Complex(n[0], -n[1]), Complex(n[0], n[1]), -n[2];
  return std::cos(angle / 2) * CMatrix::Identity(2, 2) -
         Complex(0, std::sin(angle / 2)) * nsigma;
}

std::vector<OrbitPointFiber> orbit_sample(const FiberRep& rep, int count, std::uint64_t seed) {
  std::vector<OrbitPointFiber> points;
  points.reserve(count);
  if (rep.kind == FiberKind::FiniteCharacter) {
    for (int i = 0; i < count; ++i) points.push_back({Vector(0)});
    return points;
  }
  Rng rng(seed);
  for (int i = 0; i < count; ++i) {
    // Haar-uniform rotation via a normalized quaternion.
    Vector q(4);
    for (int k = 0; k < 4; ++k) q[k] = rng.normal();
    q.normalize();
    Matrix r(3, 3);
    const Real w = q[0], x = q[1], y = q[2], z = q[3];
    r << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
      2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
      2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
    points.push_back({r * rep.xi2()});
  }
  return points;
}

Complex berezin_symbol(const FiberRep& rep, const CMatrix& b, const OrbitPointFiber& phi) {
  if (b.rows() != rep.dim_e || b.cols() != rep.dim_e)
    throw std::invalid_argument("berezin_symbol: operator size mismatch");
  if (rep.kind == FiberKind::FiniteCharacter) return b(0, 0);
  const CVector v = rep.coherent_state(phi);
  return v.dot(b * v) / v.squaredNorm();
}

CMatrix berezin_reconstruct(const FiberRep& rep,
                            const std::vector<std::pair<OrbitPointFiber, Complex>>& samples) {
  const int d = rep.dim_e;
  const int unknowns = d * d;
  if (static_cast<int>(samples.size()) < unknowns)
    throw std::invalid_argument("berezin_reconstruct needs at least dim(E)^2 samples");

  CMatrix a(samples.size(), unknowns);
  CVector rhs(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    CVector v = rep.kind == FiberKind::FiniteCharacter ? CVector::Ones(1)
                                                       : rep.coherent_state(samples[i].first);
    v /= v.norm();
    for (int q = 0; q < d; ++q)
      for (int p = 0; p < d; ++p) a(i, p + q * d) = std::conj(v[p]) * v[q];
    rhs[i] = samples[i].second;
  }

  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv[sv.size() - 1] <= 0 || sv[0] / sv[sv.size() - 1] > 1e10)
    throw RankDeficient("berezin_reconstruct: degenerate sampling");
  const CVector sol = svd.solve(rhs);
  return Eigen::Map<const CMatrix>(sol.data(), d, d);
}

Real kirillov_bracket_linear(const FiberRep& rep, const Vector& x, const Vector& y,
                             const OrbitPointFiber& phi) {
  if (rep.m_dim == 0) return 0.0;
  return rep.beta_m(phi.m_coords, rep.bracket_m(x, y));
}

}  // namespace corbit
