#include "corbit/weyl.hpp"

#include <cmath>

namespace corbit {

namespace {

constexpr Real kFdStep = 1e-3;

template <class F>
auto central_richardson(F&& f, Real h) {
  using Value = std::decay_t<decltype(f(0.0))>;
  auto d = [&](Real hh) -> Value { return (f(hh) - f(-hh)) * (0.5 / hh); };
  return Value((4.0 * d(h / 2) - d(h)) * (1.0 / 3.0));
}

}  // namespace

BarNPoint translate(const BarNPoint& y, const AlgebraElement& w, Real t) {
  const GroupElement step = exp_group(t * w);
  return BarNPoint(log_nbar({w.alg, y.matrix() * step.m}));
}

// ---------------------------------------------------------------------------
// Scalar coefficients
// ---------------------------------------------------------------------------

namespace {

class ConstantCoeffImpl final : public ScalarCoeff {
 public:
  explicit ConstantCoeffImpl(Complex c) : c_(c) {}
  Complex eval(const BarNPoint&) const override { return c_; }
  ScalarCoeffPtr derivative(int) const override {
    return std::make_shared<ConstantCoeffImpl>(Complex(0));
  }

 private:
  Complex c_;
};

class FdScalarDeriv final : public ScalarCoeff {
 public:
  FdScalarDeriv(const RealizedAlgebra& alg, ScalarCoeffPtr inner, int k)
      : alg_(&alg), inner_(std::move(inner)), k_(k) {}
  Complex eval(const BarNPoint& y) const override {
    const AlgebraElement ek = alg_->nbar_onb_element(k_);
    return central_richardson([&](Real t) { return inner_->eval(translate(y, ek, t)); }, kFdStep);
  }
  ScalarCoeffPtr derivative(int k) const override {
    return std::make_shared<FdScalarDeriv>(*alg_, shared_from_this(), k);
  }

 private:
  const RealizedAlgebra* alg_;
  ScalarCoeffPtr inner_;
  int k_;
};

class LambdaCoeffImpl final : public ScalarCoeff {
 public:
  LambdaCoeffImpl(const RealizedAlgebra* alg, std::function<Complex(const BarNPoint&)> fn)
      : alg_(alg), fn_(std::move(fn)) {}
  Complex eval(const BarNPoint& y) const override { return fn_(y); }
  ScalarCoeffPtr derivative(int k) const override {
    if (!alg_) throw std::logic_error("coefficient has no algebra for FD derivatives");
    return std::make_shared<FdScalarDeriv>(*alg_, shared_from_this(), k);
  }

 private:
  const RealizedAlgebra* alg_;
  std::function<Complex(const BarNPoint&)> fn_;
};

class SumCoeffImpl final : public ScalarCoeff {
 public:
  SumCoeffImpl(ScalarCoeffPtr a, ScalarCoeffPtr b) : a_(std::move(a)), b_(std::move(b)) {}
  Complex eval(const BarNPoint& y) const override { return a_->eval(y) + b_->eval(y); }
  ScalarCoeffPtr derivative(int k) const override {
    return std::make_shared<SumCoeffImpl>(a_->derivative(k), b_->derivative(k));
  }

 private:
  ScalarCoeffPtr a_, b_;
};

class ProductCoeffImpl final : public ScalarCoeff {
 public:
  ProductCoeffImpl(ScalarCoeffPtr a, ScalarCoeffPtr b) : a_(std::move(a)), b_(std::move(b)) {}
  Complex eval(const BarNPoint& y) const override { return a_->eval(y) * b_->eval(y); }
  ScalarCoeffPtr derivative(int k) const override {
    return std::make_shared<SumCoeffImpl>(
        std::make_shared<ProductCoeffImpl>(a_->derivative(k), b_),
        std::make_shared<ProductCoeffImpl>(a_, b_->derivative(k)));
  }

 private:
  ScalarCoeffPtr a_, b_;
};

class ScaleCoeffImpl final : public ScalarCoeff {
 public:
  ScaleCoeffImpl(Complex s, ScalarCoeffPtr a) : s_(s), a_(std::move(a)) {}
  Complex eval(const BarNPoint& y) const override { return s_ * a_->eval(y); }
  ScalarCoeffPtr derivative(int k) const override {
    return std::make_shared<ScaleCoeffImpl>(s_, a_->derivative(k));
  }

 private:
  Complex s_;
  ScalarCoeffPtr a_;
};

// y -> L(Ad(y^-1)X). Closed under E_k: the derivative composes L with -ad(E_k).
class AdjointFunctionalCoeffImpl final : public ScalarCoeff {
 public:
  AdjointFunctionalCoeffImpl(const RealizedAlgebra& alg, RowVector functional, AlgebraElement x)
      : alg_(&alg), l_(std::move(functional)), x_(std::move(x)) {}
  Complex eval(const BarNPoint& y) const override {
    const Matrix ym = y.matrix();
    return l_.dot(alg_->coordinates_of(ym.inverse() * x_.matrix() * ym));
  }
  ScalarCoeffPtr derivative(int k) const override {
    Matrix ad_ek = Matrix::Zero(alg_->dim, alg_->dim);
    const Vector ek = alg_->nbar_onb.col(k);
    for (int i = 0; i < alg_->dim; ++i)
      if (ek[i] != 0.0) ad_ek += ek[i] * alg_->ad_basis[i];
    return std::make_shared<AdjointFunctionalCoeffImpl>(*alg_, RowVector(-l_ * ad_ek), x_);
  }

 private:
  const RealizedAlgebra* alg_;
  RowVector l_;
  AlgebraElement x_;
};

// y -> L(Ad(ktilde(y)^-1)X).
class IwasawaFunctionalCoeffImpl final : public ScalarCoeff {
 public:
  IwasawaFunctionalCoeffImpl(const RealizedAlgebra& alg, RowVector functional, AlgebraElement x)
      : alg_(&alg), l_(std::move(functional)), x_(std::move(x)) {}
  Complex eval(const BarNPoint& y) const override {
    const GroupElement kt = iwasawa(y).ktilde;
    return l_.dot(adjoint(inverse(kt), x_).coords);
  }
  ScalarCoeffPtr derivative(int k) const override;

 private:
  const RealizedAlgebra* alg_;
  RowVector l_;
  AlgebraElement x_;
};

// E_k of the above: -L([U_k(y), Ad(ktilde(y)^-1)X]) with
// U_k(y) the Iwasawa K-projection of Ad(ktilde(y)^-1) Ad(y) E_k.
class IwasawaFunctionalDerivImpl final : public ScalarCoeff {
 public:
  IwasawaFunctionalDerivImpl(const RealizedAlgebra& alg, RowVector functional, AlgebraElement x,
                             int k)
      : alg_(&alg), l_(std::move(functional)), x_(std::move(x)), k_(k) {}
  Complex eval(const BarNPoint& y) const override {
    const GroupElement kt_inv = inverse(iwasawa(y).ktilde);
    const AlgebraElement w1 = adjoint(kt_inv, x_);
    const AlgebraElement moved = adjoint(kt_inv, adjoint(y.group(), alg_->nbar_onb_element(k_)));
    const AlgebraElement u = project(moved, Subspace::KTilde);
    return -l_.dot(bracket(u, w1).coords);
  }
  ScalarCoeffPtr derivative(int k) const override {
    return std::make_shared<FdScalarDeriv>(*alg_, shared_from_this(), k);
  }

 private:
  const RealizedAlgebra* alg_;
  RowVector l_;
  AlgebraElement x_;
  int k_;
};

ScalarCoeffPtr IwasawaFunctionalCoeffImpl::derivative(int k) const {
  return std::make_shared<IwasawaFunctionalDerivImpl>(*alg_, l_, x_, k);
}

}  // namespace

ScalarCoeffPtr ScalarCoeff::derivative(int) const {
  throw std::logic_error("coefficient does not support derivatives");
}

ScalarCoeffPtr constant_coeff(Complex c) { return std::make_shared<ConstantCoeffImpl>(c); }

ScalarCoeffPtr lambda_coeff(const RealizedAlgebra& alg,
                            std::function<Complex(const BarNPoint&)> fn) {
  return std::make_shared<LambdaCoeffImpl>(&alg, std::move(fn));
}

ScalarCoeffPtr coeff_sum(ScalarCoeffPtr a, ScalarCoeffPtr b) {
  return std::make_shared<SumCoeffImpl>(std::move(a), std::move(b));
}

ScalarCoeffPtr coeff_product(ScalarCoeffPtr a, ScalarCoeffPtr b) {
  return std::make_shared<ProductCoeffImpl>(std::move(a), std::move(b));
}

ScalarCoeffPtr coeff_scale(Complex s, ScalarCoeffPtr a) {
  return std::make_shared<ScaleCoeffImpl>(s, std::move(a));
}

ScalarCoeffPtr adjoint_functional_coeff(const RealizedAlgebra& alg, RowVector functional,
                                        AlgebraElement x) {
  return std::make_shared<AdjointFunctionalCoeffImpl>(alg, std::move(functional), std::move(x));
}

ScalarCoeffPtr iwasawa_functional_coeff(const RealizedAlgebra& alg, RowVector functional,
                                        AlgebraElement x) {
  return std::make_shared<IwasawaFunctionalCoeffImpl>(alg, std::move(functional), std::move(x));
}

// ---------------------------------------------------------------------------
// Matrix coefficients
// ---------------------------------------------------------------------------

namespace {

class ConstantMatrixCoeffImpl final : public MatrixCoeff {
 public:
  explicit ConstantMatrixCoeffImpl(CMatrix m) : m_(std::move(m)) {}
  CMatrix eval(const BarNPoint&) const override { return m_; }
  int rows() const override { return static_cast<int>(m_.rows()); }
  MatrixCoeffPtr derivative(int) const override {
    return std::make_shared<ConstantMatrixCoeffImpl>(CMatrix::Zero(m_.rows(), m_.cols()));
  }

 private:
  CMatrix m_;
};

class ScalarIdentityCoeffImpl final : public MatrixCoeff {
 public:
  ScalarIdentityCoeffImpl(ScalarCoeffPtr s, int dim) : s_(std::move(s)), dim_(dim) {}
  CMatrix eval(const BarNPoint& y) const override {
    return s_->eval(y) * CMatrix::Identity(dim_, dim_);
  }
  int rows() const override { return dim_; }
  MatrixCoeffPtr derivative(int k) const override {
    return std::make_shared<ScalarIdentityCoeffImpl>(s_->derivative(k), dim_);
  }

 private:
  ScalarCoeffPtr s_;
  int dim_;
};

class MatrixSumCoeffImpl final : public MatrixCoeff {
 public:
  MatrixSumCoeffImpl(MatrixCoeffPtr a, MatrixCoeffPtr b) : a_(std::move(a)), b_(std::move(b)) {}
  CMatrix eval(const BarNPoint& y) const override { return a_->eval(y) + b_->eval(y); }
  int rows() const override { return a_->rows(); }
  MatrixCoeffPtr derivative(int k) const override {
    return std::make_shared<MatrixSumCoeffImpl>(a_->derivative(k), b_->derivative(k));
  }

 private:
  MatrixCoeffPtr a_, b_;
};

class MatrixScaleCoeffImpl final : public MatrixCoeff {
 public:
  MatrixScaleCoeffImpl(Complex s, MatrixCoeffPtr a) : s_(s), a_(std::move(a)) {}
  CMatrix eval(const BarNPoint& y) const override { return s_ * a_->eval(y); }
  int rows() const override { return a_->rows(); }
  MatrixCoeffPtr derivative(int k) const override {
    return std::make_shared<MatrixScaleCoeffImpl>(s_, a_->derivative(k));
  }

 private:
  Complex s_;
  MatrixCoeffPtr a_;
};

class DsigmaCoeffImpl final : public MatrixCoeff {
 public:
  DsigmaCoeffImpl(FiberRep fiber, std::vector<ScalarCoeffPtr> v)
      : fiber_(std::move(fiber)), v_(std::move(v)) {
    generators_.reserve(v_.size());
    for (std::size_t a = 0; a < v_.size(); ++a)
      generators_.push_back(fiber_.dsigma(Vector::Unit(fiber_.m_dim, static_cast<int>(a))));
  }
  CMatrix eval(const BarNPoint& y) const override {
    CMatrix out = CMatrix::Zero(fiber_.dim_e, fiber_.dim_e);
    for (std::size_t a = 0; a < v_.size(); ++a)
      if (v_[a]) out += v_[a]->eval(y) * generators_[a];
    return out;
  }
  int rows() const override { return fiber_.dim_e; }
  MatrixCoeffPtr derivative(int k) const override {
    std::vector<ScalarCoeffPtr> dv(v_.size());
    for (std::size_t a = 0; a < v_.size(); ++a)
      if (v_[a]) dv[a] = v_[a]->derivative(k);
    return std::make_shared<DsigmaCoeffImpl>(fiber_, std::move(dv));
  }

 private:
  FiberRep fiber_;
  std::vector<ScalarCoeffPtr> v_;
  std::vector<CMatrix> generators_;
};

}  // namespace

MatrixCoeffPtr MatrixCoeff::derivative(int) const {
  throw std::logic_error("matrix coefficient does not support derivatives");
}

MatrixCoeffPtr constant_matrix_coeff(CMatrix m) {
  return std::make_shared<ConstantMatrixCoeffImpl>(std::move(m));
}

MatrixCoeffPtr scalar_identity_coeff(ScalarCoeffPtr s, int dim) {
  return std::make_shared<ScalarIdentityCoeffImpl>(std::move(s), dim);
}

MatrixCoeffPtr matrix_coeff_sum(MatrixCoeffPtr a, MatrixCoeffPtr b) {
  return std::make_shared<MatrixSumCoeffImpl>(std::move(a), std::move(b));
}

MatrixCoeffPtr matrix_coeff_scale(Complex s, MatrixCoeffPtr a) {
  return std::make_shared<MatrixScaleCoeffImpl>(s, std::move(a));
}

MatrixCoeffPtr dsigma_coeff(const FiberRep& fiber, std::vector<ScalarCoeffPtr> v) {
  return std::make_shared<DsigmaCoeffImpl>(fiber, std::move(v));
}

// ---------------------------------------------------------------------------
// PSymbol
// ---------------------------------------------------------------------------

PSymbol::PSymbol(const RealizedAlgebra& alg, const FiberRep& fiber, std::vector<PSymbolTerm> terms)
    : alg_(&alg), fiber_(fiber), terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    if (static_cast<int>(t.alpha.size()) != alg.nbar_dim())
      throw std::invalid_argument("PSymbol: multi-index length must be the 𝔫̄ dimension");
    int total = 0;
    for (int a : t.alpha) {
      if (a < 0) throw std::invalid_argument("PSymbol: negative exponent");
      total += a;
    }
    if (total > kDegreeCap) throw DegreeTooHigh("PSymbol degree above the cap");
    if (t.coeff->rows() != fiber.dim_e)
      throw std::invalid_argument("PSymbol: coefficient size must be dim E");
    degree_ = std::max(degree_, total);
  }
}

PSymbol PSymbol::from_restricted(const RealizedAlgebra& alg, const FiberRep& fiber,
                                 RestrictedSymbol parts) {
  if (!parts.v.empty() && static_cast<int>(parts.v.size()) != fiber.m_dim)
    throw std::invalid_argument("restricted symbol: v needs one entry per 𝔪 direction");
  if (!parts.w.empty() && static_cast<int>(parts.w.size()) != alg.nbar_dim())
    throw std::invalid_argument("restricted symbol: w needs one entry per 𝔫̄ direction");
  parts.v.resize(fiber.m_dim);
  parts.w.resize(alg.nbar_dim());

  std::vector<PSymbolTerm> terms;
  MatrixCoeffPtr zero_term;
  if (parts.u) zero_term = scalar_identity_coeff(parts.u, fiber.dim_e);
  bool has_v = false;
  for (const auto& c : parts.v) has_v = has_v || static_cast<bool>(c);
  if (has_v) {
    // the operator with fiber symbol β(v, φ) is −i dσ(v)
    MatrixCoeffPtr orbit = matrix_coeff_scale(Complex(0, -1), dsigma_coeff(fiber, parts.v));
    zero_term = zero_term ? matrix_coeff_sum(zero_term, orbit) : orbit;
  }
  if (zero_term) terms.push_back({std::vector<int>(alg.nbar_dim(), 0), zero_term});
  for (int k = 0; k < alg.nbar_dim(); ++k)
    if (parts.w[k]) {
      std::vector<int> alpha(alg.nbar_dim(), 0);
      alpha[k] = 1;
      terms.push_back({std::move(alpha), scalar_identity_coeff(parts.w[k], fiber.dim_e)});
    }

  PSymbol sym(alg, fiber, std::move(terms));
  sym.restricted_ = std::move(parts);
  return sym;
}

// ---------------------------------------------------------------------------
// Test functions
// ---------------------------------------------------------------------------

TestFunction::TestFunction(const RealizedAlgebra& alg, Polynomial p, Real gaussian_rate, CVector u)
    : alg_(&alg), poly_(std::move(p)), rate_(gaussian_rate), u_(std::move(u)) {
  if (rate_ <= 0) throw std::invalid_argument("TestFunction: gaussian rate must be positive");
  if (u_.size() < 1) throw std::invalid_argument("TestFunction: fiber vector is empty");
  for (const auto& [alpha, coeff] : poly_) {
    if (static_cast<int>(alpha.size()) != alg.nbar_dim())
      throw std::invalid_argument("TestFunction: multi-index length must be the 𝔫̄ dimension");
    int total = 0;
    for (int a : alpha) total += a;
    if (total > 3) throw std::invalid_argument("TestFunction: polynomial degree above 3");
    (void)coeff;
  }
}

TestFunction TestFunction::random(Rng& rng, const RealizedAlgebra& alg, int dim_e,
                                  int poly_degree) {
  const int n = alg.nbar_dim();
  Polynomial p;
  p[std::vector<int>(n, 0)] = rng.uniform(0.5, 1.5);
  for (int k = 0; k < n; ++k) {
    std::vector<int> alpha(n, 0);
    alpha[k] = 1;
    p[alpha] = rng.uniform(-1.0, 1.0);
    if (poly_degree >= 2) {
      alpha[k] = 2;
      p[alpha] = rng.uniform(-0.5, 0.5);
    }
  }
  if (poly_degree >= 2 && n >= 2) {
    std::vector<int> alpha(n, 0);
    alpha[0] = 1;
    alpha[1] = 1;
    p[alpha] = rng.uniform(-0.5, 0.5);
  }
  if (poly_degree >= 3) {
    std::vector<int> alpha(n, 0);
    alpha[0] = 3;
    p[alpha] = rng.uniform(-0.3, 0.3);
  }
  CVector u(dim_e);
  for (int i = 0; i < dim_e; ++i) u[i] = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
  return TestFunction(alg, std::move(p), rng.uniform(0.4, 1.0), std::move(u));
}

namespace {

Real poly_value(const Polynomial& p, const Vector& z) {
  Real val = 0.0;
  for (const auto& [alpha, coeff] : p) {
    Real mono = coeff;
    for (std::size_t i = 0; i < alpha.size(); ++i)
      for (int rep = 0; rep < alpha[i]; ++rep) mono *= z[static_cast<int>(i)];
    val += mono;
  }
  return val;
}

Vector poly_gradient(const Polynomial& p, const Vector& z) {
  Vector grad = Vector::Zero(z.size());
  for (const auto& [alpha, coeff] : p)
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      if (alpha[i] == 0) continue;
      Real mono = coeff * alpha[i];
      for (std::size_t jj = 0; jj < alpha.size(); ++jj) {
        const int power = jj == i ? alpha[jj] - 1 : alpha[jj];
        for (int rep = 0; rep < power; ++rep) mono *= z[static_cast<int>(jj)];
      }
      grad[static_cast<int>(i)] += mono;
    }
  return grad;
}

}  // namespace

CVector TestFunction::eval(const BarNPoint& y) const {
  const Vector z = alg_->nbar_onb_coordinates(y.log());
  return poly_value(poly_, z) * std::exp(-rate_ * z.squaredNorm()) * u_;
}

CVector TestFunction::dir_deriv(const BarNPoint& y, const AlgebraElement& w) const {
  const Vector z = alg_->nbar_onb_coordinates(y.log());
  const AlgebraElement wn = project(w, Subspace::Nbar);
  const Vector vel = log_curve_velocity(*alg_, y.log(), wn);
  const Real p = poly_value(poly_, z);
  const Real scalar = poly_gradient(poly_, z).dot(vel) - 2.0 * rate_ * z.dot(vel) * p;
  return scalar * std::exp(-rate_ * z.squaredNorm()) * u_;
}

Vector log_curve_velocity(const RealizedAlgebra& alg, const AlgebraElement& log_y,
                          const AlgebraElement& w) {
  const int n = alg.nbar_dim();
  // ad(Y) restricted to 𝔫̄ in the orthonormal coordinates
  Matrix ad_y = Matrix::Zero(alg.dim, alg.dim);
  for (int i = 0; i < alg.dim; ++i)
    if (log_y.coords[i] != 0.0) ad_y += log_y.coords[i] * alg.ad_basis[i];
  const Matrix a = alg.nbar_onb.transpose() * alg.theta_gram * (ad_y * alg.nbar_onb);

  // T = (1 − e^{−ad Y})/ad Y = Σ (−A)^k/(k+1)!; terminates since A is nilpotent
  Matrix t = Matrix::Identity(n, n);
  Matrix term = Matrix::Identity(n, n);
  for (int k = 1; k <= 2 * n + 2; ++k) {
    term = term * (-a) / (k + 1);
    if (term.norm() == 0.0) break;
    t += term;
  }
  const Vector w_onb = alg.nbar_onb_coordinates(w);
  return t.partialPivLu().solve(w_onb);
}

CVector SmoothEFunction::dir_or_fd(const BarNPoint& y, const AlgebraElement& w) const {
  if (dir) return dir(y, w);
  const AlgebraElement wn = project(w, Subspace::Nbar);
  return central_richardson([&](Real t) { return CVector(eval(translate(y, wn, t))); }, kFdStep);
}

SmoothEFunction as_function(const TestFunction& tf) {
  SmoothEFunction f;
  f.dim_e = tf.dim_e();
  f.eval = [tf](const BarNPoint& y) { return tf.eval(y); };
  f.dir = [tf](const BarNPoint& y, const AlgebraElement& w) { return tf.dir_deriv(y, w); };
  return f;
}

// ---------------------------------------------------------------------------
// Symbol evaluation and the Berezin-Weyl operator
// ---------------------------------------------------------------------------

Complex symbol_eval(const PSymbol& f, const BarNPoint& y, const AlgebraElement& z,
                    const OrbitPointFiber& phi) {
  const Vector zc = f.algebra().nbar_onb_coordinates(z);
  Complex out = 0.0;
  for (const auto& term : f.terms()) {
    Complex mono = berezin_symbol(f.fiber(), term.coeff->eval(y), phi);
    for (std::size_t k = 0; k < term.alpha.size(); ++k)
      for (int rep = 0; rep < term.alpha[k]; ++rep) mono *= zc[static_cast<int>(k)];
    out += mono;
  }
  return out;
}

namespace {

// m-th derivative at 0 with one Richardson level; steps sized against the
// order to balance truncation and roundoff.
CVector stencil_derivative(const std::function<CVector(Real)>& g, int order) {
  const Real h = order <= 2 ? 1e-3 : (order == 3 ? 4e-3 : 8e-3);
  switch (order) {
    case 1: {
      auto d = [&](Real hh) { return CVector((g(hh) - g(-hh)) * (0.5 / hh)); };
      return CVector((4.0 * d(h / 2) - d(h)) / 3.0);
    }
    case 2: {
      const CVector g0 = g(0.0);
      auto d = [&](Real hh) { return CVector((g(hh) - 2.0 * g0 + g(-hh)) / (hh * hh)); };
      return CVector((16.0 * d(h / 2) - d(h)) / 15.0);
    }
    case 3: {
      auto d = [&](Real hh) {
        return CVector((g(2 * hh) - 2.0 * g(hh) + 2.0 * g(-hh) - g(-2 * hh)) /
                       (2.0 * hh * hh * hh));
      };
      return CVector((4.0 * d(h / 2) - d(h)) / 3.0);
    }
    case 4: {
      const CVector g0 = g(0.0);
      auto d = [&](Real hh) {
        return CVector((g(2 * hh) - 4.0 * g(hh) + 6.0 * g0 - 4.0 * g(-hh) + g(-2 * hh)) /
                       (hh * hh * hh * hh));
      };
      return CVector((4.0 * d(h / 2) - d(h)) / 3.0);
    }
    default:
      throw DegreeTooHigh("jet order above the cap");
  }
}

CVector mixed_partial(const std::function<CVector(const Vector&)>& fn, const Vector& base,
                      const std::vector<int>& alpha, std::size_t k) {
  while (k < alpha.size() && alpha[k] == 0) ++k;
  if (k == alpha.size()) return fn(base);
  auto g = [&](Real t) {
    Vector shifted = base;
    shifted[static_cast<int>(k)] += t;
    return mixed_partial(fn, shifted, alpha, k + 1);
  };
  return stencil_derivative(g, alpha[k]);
}

CVector jet_term(const PSymbol& f, const PSymbolTerm& term, const SmoothEFunction& phi,
                 const BarNPoint& y) {
  const RealizedAlgebra& alg = f.algebra();
  const Matrix ym = y.matrix();
  auto base_fn = [&](const Vector& zvec) -> CVector {
    const AlgebraElement z = alg.nbar_from_onb(zvec);
    const BarNPoint y_half(log_nbar({&alg, ym * exp_group(0.5 * z).m}));
    const BarNPoint y_full(log_nbar({&alg, ym * exp_group(z).m}));
    return term.coeff->eval(y_half) * phi.eval(y_full);
  };
  int total = 0;
  for (int a : term.alpha) total += a;
  const CVector deriv = mixed_partial(base_fn, Vector::Zero(alg.nbar_dim()), term.alpha, 0);
  return std::pow(kImag, total) * deriv;
}

}  // namespace

CVector weyl_apply(const PSymbol& f, const SmoothEFunction& phi, const BarNPoint& y) {
  if (phi.dim_e != f.fiber().dim_e)
    throw std::invalid_argument("weyl_apply: function does not take values in E");
  CVector out = CVector::Zero(f.fiber().dim_e);
  for (const auto& term : f.terms()) {
    int total = 0, which = -1;
    for (std::size_t k = 0; k < term.alpha.size(); ++k) {
      total += term.alpha[k];
      if (term.alpha[k] > 0) which = static_cast<int>(k);
    }
    if (total == 0) {
      out += term.coeff->eval(y) * phi.eval(y);
    } else if (total == 1) {
      // degree-one closed form, specialized to the single direction E_k
      const AlgebraElement ek = f.algebra().nbar_onb_element(which);
      out += kImag * (0.5 * (term.coeff->derivative(which)->eval(y) * phi.eval(y)) +
                      term.coeff->eval(y) * phi.dir_or_fd(y, ek));
    } else {
      out += jet_term(f, term, phi, y);
    }
  }
  return out;
}

CVector weyl_apply(const PSymbol& f, const TestFunction& phi, const BarNPoint& y) {
  return weyl_apply(f, as_function(phi), y);
}

CVector weyl_apply_jets(const PSymbol& f, const SmoothEFunction& phi, const BarNPoint& y) {
  if (phi.dim_e != f.fiber().dim_e)
    throw std::invalid_argument("weyl_apply_jets: function does not take values in E");
  CVector out = CVector::Zero(f.fiber().dim_e);
  for (const auto& term : f.terms()) {
    int total = 0;
    for (int a : term.alpha) total += a;
    if (total == 0)
      out += term.coeff->eval(y) * phi.eval(y);
    else
      out += jet_term(f, term, phi, y);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Poisson bracket on the restricted class
// ---------------------------------------------------------------------------

namespace {

void accumulate(ScalarCoeffPtr& target, ScalarCoeffPtr term) {
  target = target ? coeff_sum(std::move(target), std::move(term)) : std::move(term);
}

}  // namespace

PSymbol poisson_p(const PSymbol& f, const PSymbol& g) {
  if (&f.algebra() != &g.algebra() || !(f.fiber() == g.fiber()))
    throw RealizationMismatch("poisson_p: symbols live on different spaces");
  if (!f.restricted() || !g.restricted())
    throw NotInRestrictedClass("poisson_p needs symbols of the u + β(v,φ) + Σ w_k z_k shape");

  const RealizedAlgebra& alg = f.algebra();
  const FiberRep& fiber = f.fiber();
  const int n = alg.nbar_dim();
  const int md = fiber.m_dim;
  const RestrictedSymbol& a = *f.restricted();
  const RestrictedSymbol& b = *g.restricted();

  RestrictedSymbol out;
  out.v.resize(md);
  out.w.resize(n);

  // base × fiber-linear: {u, w'_l z_l} = E_l(u) w'_l, and its mirror
  for (int l = 0; l < n; ++l) {
    if (a.u && b.w[l]) accumulate(out.u, coeff_product(a.u->derivative(l), b.w[l]));
    if (b.u && a.w[l])
      accumulate(out.u, coeff_scale(-1.0, coeff_product(b.u->derivative(l), a.w[l])));
  }

  if (md > 0) {
    // orbit × orbit: {β(v,φ), β(v',φ)}₂ = β([v,v'], φ)
    for (int bb = 0; bb < md; ++bb)
      for (int cc = 0; cc < md; ++cc) {
        if (!a.v[bb] || !b.v[cc]) continue;
        const Vector structure = fiber.bracket_m(Vector::Unit(md, bb), Vector::Unit(md, cc));
        for (int aa = 0; aa < md; ++aa)
          if (structure[aa] != 0.0)
            accumulate(out.v[aa], coeff_scale(structure[aa], coeff_product(a.v[bb], b.v[cc])));
      }
    // base × orbit through the fiber-linear coefficients
    for (int aa = 0; aa < md; ++aa)
      for (int l = 0; l < n; ++l) {
        if (a.v[aa] && b.w[l]) accumulate(out.v[aa], coeff_product(a.v[aa]->derivative(l), b.w[l]));
        if (b.v[aa] && a.w[l])
          accumulate(out.v[aa], coeff_scale(-1.0, coeff_product(b.v[aa]->derivative(l), a.w[l])));
      }
  }

  // fiber-linear × fiber-linear:
  // {w z_k, w' z_l} = −E_k(w') w z_l + E_l(w) w' z_k + w w' {z_k, z_l}
  for (int m = 0; m < n; ++m) {
    for (int l = 0; l < n; ++l)
      if (a.w[m] && b.w[l]) accumulate(out.w[m], coeff_product(a.w[m]->derivative(l), b.w[l]));
    for (int k = 0; k < n; ++k)
      if (b.w[m] && a.w[k])
        accumulate(out.w[m], coeff_scale(-1.0, coeff_product(b.w[m]->derivative(k), a.w[k])));
  }
  // {z_k, z_l} = β(θZ, [E_k, E_l]) stays linear in Z with constant coefficients
  for (int k = 0; k < n; ++k) {
    if (!a.w[k]) continue;
    const AlgebraElement ek = alg.nbar_onb_element(k);
    for (int l = 0; l < n; ++l) {
      if (!b.w[l]) continue;
      const AlgebraElement br = bracket(ek, alg.nbar_onb_element(l));
      for (int m = 0; m < n; ++m) {
        const Real c = killing(theta(alg.nbar_onb_element(m)), br);
        if (std::abs(c) > 1e-14)
          accumulate(out.w[m], coeff_scale(c, coeff_product(a.w[k], b.w[l])));
      }
    }
  }

  return PSymbol::from_restricted(alg, fiber, std::move(out));
}

Real check_lemma_4_3(const PSymbol& f, const PSymbol& g,
                     const std::vector<std::pair<TestFunction, BarNPoint>>& probes) {
  const PSymbol br = poisson_p(f, g);
  Real worst = 0.0;
  for (const auto& [tf, y] : probes) {
    const SmoothEFunction phi = as_function(tf);
    SmoothEFunction wg_phi;
    wg_phi.dim_e = phi.dim_e;
    wg_phi.eval = [&](const BarNPoint& p) { return weyl_apply(g, phi, p); };
    SmoothEFunction wf_phi;
    wf_phi.dim_e = phi.dim_e;
    wf_phi.eval = [&](const BarNPoint& p) { return weyl_apply(f, phi, p); };

    const CVector commutator = weyl_apply(f, wg_phi, y) - weyl_apply(g, wf_phi, y);
    const CVector rhs = weyl_apply(br, phi, y);
    worst = std::max(worst, (commutator + kImag * rhs).norm());
  }
  return worst;
}

Real nbar_trace_of_ad(const RealizedAlgebra& alg, const AlgebraElement& y) {
  Matrix ad_y = Matrix::Zero(alg.dim, alg.dim);
  for (int i = 0; i < alg.dim; ++i)
    if (y.coords[i] != 0.0) ad_y += y.coords[i] * alg.ad_basis[i];
  return (alg.nbar_onb.transpose() * alg.theta_gram * (ad_y * alg.nbar_onb)).trace();
}

}  // namespace corbit
