#include "corbit/grp.hpp"

#include <Eigen/QR>

#include <cmath>

namespace corbit {

namespace {

void require_same_group(const GroupElement& a, const GroupElement& b) {
  if (a.alg == nullptr || b.alg == nullptr || !a.alg->same(*b.alg))
    throw RealizationMismatch("group elements belong to different realizations");
}

}  // namespace

GroupElement group_identity(const RealizedAlgebra& g) {
  return {&g, Matrix::Identity(g.dim_matrix, g.dim_matrix)};
}

GroupElement group_element(const RealizedAlgebra& g, Matrix m, Real tol) {
  if (m.rows() != g.dim_matrix || m.cols() != g.dim_matrix)
    throw std::invalid_argument("group matrix has the wrong size");
  if (std::abs(m.determinant() - 1.0) > tol * (1.0 + m.norm()))
    throw std::invalid_argument("matrix violates the det = 1 constraint");
  return {&g, std::move(m)};
}

GroupElement operator*(const GroupElement& a, const GroupElement& b) {
  require_same_group(a, b);
  return {a.alg, a.m * b.m};
}

GroupElement inverse(const GroupElement& g) { return {g.alg, g.m.inverse()}; }

bool in_maximal_compact(const GroupElement& g, Real tol) {
  return (g.m.transpose() * g.m - Matrix::Identity(g.m.rows(), g.m.cols())).norm() <= tol;
}

BarNPoint::BarNPoint(AlgebraElement log_coord, Real tol) : log_(std::move(log_coord)) {
  const Vector residual = log_.coords - log_.alg->projector(Subspace::Nbar) * log_.coords;
  if (residual.norm() > tol * (1.0 + log_.coords.norm()))
    throw std::invalid_argument("BarNPoint log-coordinates leave 𝔫̄");
}

BarNPoint BarNPoint::identity(const RealizedAlgebra& g) { return BarNPoint(g.zero()); }

Matrix BarNPoint::matrix() const {
  // Y is nilpotent, so the series terminates.
  const Matrix y = log_.matrix();
  const int n = static_cast<int>(y.rows());
  Matrix sum = Matrix::Identity(n, n);
  Matrix term = Matrix::Identity(n, n);
  for (int k = 1; k < n; ++k) {
    term = term * y / k;
    sum += term;
  }
  return sum;
}

GroupElement exp_group(const AlgebraElement& x) {
  const Matrix m = x.matrix();
  const int n = static_cast<int>(m.rows());
  const Real norm = m.norm();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Matrix scaled = m / std::pow(2.0, squarings);

  Matrix sum = Matrix::Identity(n, n);
  Matrix term = Matrix::Identity(n, n);
  for (int k = 1; k <= 40; ++k) {
    term = term * scaled / k;
    sum += term;
    if (term.norm() <= 1e-18 * sum.norm()) break;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return {x.alg, std::move(sum)};
}

AlgebraElement log_nbar(const GroupElement& y) {
  const int n = static_cast<int>(y.m.rows());
  const Matrix nil = y.m - Matrix::Identity(n, n);
  Matrix power = nil;
  for (int k = 1; k < n; ++k) power = power * nil;
  if (power.norm() > 1e-8 * (1.0 + y.m.norm()))
    throw std::invalid_argument("log_nbar: element is not unipotent");

  Matrix sum = Matrix::Zero(n, n);
  Matrix term = Matrix::Identity(n, n);
  for (int k = 1; k < n; ++k) {
    term = term * nil;
    sum += (k % 2 == 1 ? 1.0 : -1.0) / k * term;
  }
  Real residual = 0.0;
  AlgebraElement log = y.alg->from_matrix(sum, &residual);
  const Vector off = log.coords - y.alg->projector(Subspace::Nbar) * log.coords;
  if (off.norm() > 1e-8 * (1.0 + log.coords.norm()))
    throw std::invalid_argument("log_nbar: logarithm leaves 𝔫̄");
  return log;
}

AlgebraElement adjoint(const GroupElement& g, const AlgebraElement& x) {
  if (!g.alg->same(*x.alg)) throw RealizationMismatch("adjoint: mixed realizations");
  return g.alg->from_matrix(g.m * x.matrix() * g.m.inverse());
}

AlgebraElement adjoint(const BarNPoint& y, const AlgebraElement& x) {
  return adjoint(y.group(), x);
}

namespace {

/// QR/LU factorizations for the sl(n,ℝ) realizations: K = SO(n), A = positive
/// diagonal, N upper unit triangular, M the diagonal sign matrices of det 1.
class SlFactorization final : public FactorizationBackend {
 public:
  IwasawaFactors iwasawa(const GroupElement& g) const override {
    const auto& alg = *g.alg;
    const int n = alg.dim_matrix;
    if (g.m.fullPivLu().rank() < n) throw SingularSystem("iwasawa: singular matrix");
    Eigen::HouseholderQR<Matrix> qr(g.m);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < n; ++i)
      if (r(i, i) < 0) {
        r.row(i) = -r.row(i);
        q.col(i) = -q.col(i);
      }
    const Vector diag = r.diagonal();
    Matrix a = Matrix::Zero(n, n);
    a.diagonal() = diag;
    Matrix nu = r;
    for (int i = 0; i < n; ++i) nu.row(i) /= diag[i];

    IwasawaFactors f{{&alg, q}, {&alg, a}, {&alg, nu}, alg.zero()};
    Matrix log_a = Matrix::Zero(n, n);
    log_a.diagonal() = diag.array().log();
    f.log_atilde = alg.from_matrix(log_a);
    return f;
  }

  BruhatFactors bruhat(const GroupElement& g) const override {
    const auto& alg = *g.alg;
    const int n = alg.dim_matrix;
    // Doolittle elimination without pivoting; the leading principal minors
    // are the running pivot products and flag exits from the big cell.
    Matrix u = g.m;
    Matrix l = Matrix::Identity(n, n);
    Real minor = 1.0;
    for (int k = 0; k < n; ++k) {
      minor *= u(k, k);
      if (std::abs(minor) < 1e-10) throw NotInBigCell("bruhat: leading principal minor vanishes");
      for (int i = k + 1; i < n; ++i) {
        const Real mult = u(i, k) / u(k, k);
        l(i, k) = mult;
        u.row(i) -= mult * u.row(k);
      }
    }
    const Vector diag = u.diagonal();
    Matrix a = Matrix::Zero(n, n), sign = Matrix::Zero(n, n);
    a.diagonal() = diag.cwiseAbs();
    sign.diagonal() = diag.array().sign();
    Matrix nu = u;
    for (int i = 0; i < n; ++i) nu.row(i) /= diag[i];

    Matrix log_a = Matrix::Zero(n, n);
    log_a.diagonal() = diag.array().abs().log();
    return BruhatFactors{BarNPoint(log_nbar({&alg, l})),
                         {&alg, sign},
                         {&alg, a},
                         {&alg, nu},
                         alg.from_matrix(log_a)};
  }
};

}  // namespace

const FactorizationBackend& factorization_backend(const RealizedAlgebra& g) {
  static const SlFactorization sl;
  if (g.name.rfind("sl", 0) == 0) return sl;
  throw std::logic_error("no factorization backend registered for " + g.name);
}

IwasawaFactors iwasawa(const GroupElement& g) { return factorization_backend(*g.alg).iwasawa(g); }

IwasawaFactors iwasawa(const BarNPoint& y) { return iwasawa(y.group()); }

BruhatFactors bruhat(const GroupElement& g) { return factorization_backend(*g.alg).bruhat(g); }

BarNPoint dot_action(const GroupElement& k, const BarNPoint& y) {
  return bruhat(GroupElement{k.alg, k.m * y.matrix()}).nbar;
}

Lemma21Derivatives lemma21_derivatives(const AlgebraElement& x, const BarNPoint& y) {
  const Matrix ym = y.matrix();
  const AlgebraElement w = x.alg->from_matrix(ym.inverse() * x.matrix() * ym);
  const IwasawaFactors iw = iwasawa(y);
  const AlgebraElement wk = adjoint(inverse(iw.ktilde), x);
  return {project(w, Subspace::A), project(w, Subspace::M), project(w, Subspace::Nbar),
          project(wk, Subspace::ATilde)};
}

}  // namespace corbit
