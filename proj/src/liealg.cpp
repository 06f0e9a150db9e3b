#include "corbit/liealg.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace corbit {

namespace detail {
void require_same(const AlgebraElement& x, const AlgebraElement& y) {
  if (x.alg == nullptr || y.alg == nullptr || !x.alg->same(*y.alg))
    throw RealizationMismatch("algebra elements belong to different realizations");
}
}  // namespace detail

Matrix AlgebraElement::matrix() const { return alg->matrix_of(coords); }

AlgebraElement operator+(const AlgebraElement& x, const AlgebraElement& y) {
  detail::require_same(x, y);
  return {x.alg, x.coords + y.coords};
}

AlgebraElement operator-(const AlgebraElement& x, const AlgebraElement& y) {
  detail::require_same(x, y);
  return {x.alg, x.coords - y.coords};
}

AlgebraElement operator-(const AlgebraElement& x) { return {x.alg, -x.coords}; }

AlgebraElement operator*(Real s, const AlgebraElement& x) { return {x.alg, s * x.coords}; }

AlgebraElement RealizedAlgebra::element(Vector coords) const {
  if (coords.size() != dim) throw std::invalid_argument("coordinate length must equal dim 𝔤");
  return {this, std::move(coords)};
}

Matrix RealizedAlgebra::matrix_of(const Vector& coords) const {
  Matrix m = Matrix::Zero(dim_matrix, dim_matrix);
  for (int i = 0; i < dim; ++i)
    if (coords[i] != 0.0) m += coords[i] * basis[i];
  return m;
}

Vector RealizedAlgebra::coordinates_of(const Matrix& m) const {
  if (exact_coordinates) return exact_coordinates(m);
  Vector v = Eigen::Map<const Vector>(m.data(), m.size());
  return vec_solver_.solve(v);
}

AlgebraElement RealizedAlgebra::from_matrix(const Matrix& m, Real* residual) const {
  Vector c = coordinates_of(m);
  if (residual) *residual = (matrix_of(c) - m).norm();
  return {this, std::move(c)};
}

const Matrix& RealizedAlgebra::projector(Subspace which) const {
  switch (which) {
    case Subspace::A: return proj_a_;
    case Subspace::M: return proj_m_;
    case Subspace::Nbar: return proj_nbar_;
    case Subspace::N: return proj_n_;
    case Subspace::ATilde: return proj_atilde_;
    case Subspace::KTilde: return proj_ktilde_;
    case Subspace::KCartan: return proj_kc_;
    case Subspace::VCartan: return proj_vc_;
  }
  throw std::logic_error("unknown subspace");
}

const Matrix& RealizedAlgebra::subspace_basis(Subspace which) const {
  switch (which) {
    case Subspace::A:
    case Subspace::ATilde: return basis_a;
    case Subspace::M: return basis_m;
    case Subspace::Nbar: return basis_nbar;
    case Subspace::N: return basis_n;
    case Subspace::KTilde:
    case Subspace::KCartan: return basis_k;
    case Subspace::VCartan: return basis_V;
  }
  throw std::logic_error("unknown subspace");
}

Vector RealizedAlgebra::subspace_coordinates(Subspace which, const AlgebraElement& x) const {
  if (subspace_basis(which).cols() == 0) return Vector(0);
  const Vector projected = projector(which) * x.coords;
  switch (which) {
    case Subspace::A:
    case Subspace::ATilde: return a_solver_.solve(projected);
    case Subspace::M: return m_solver_.solve(projected);
    case Subspace::Nbar: return nbar_solver_.solve(projected);
    case Subspace::N: return n_solver_.solve(projected);
    case Subspace::KTilde:
    case Subspace::KCartan: return k_solver_.solve(projected);
    case Subspace::VCartan: return V_solver_.solve(projected);
  }
  throw std::logic_error("unknown subspace");
}

Matrix RealizedAlgebra::subspace_coordinate_map(Subspace which) const {
  const Matrix& basis = subspace_basis(which);
  if (basis.cols() == 0) return Matrix(0, dim);
  return basis.completeOrthogonalDecomposition().pseudoInverse() * projector(which);
}

Real RealizedAlgebra::theta_inner(const AlgebraElement& x, const AlgebraElement& y) const {
  return x.coords.dot(theta_gram * y.coords);
}

Vector RealizedAlgebra::nbar_onb_coordinates(const AlgebraElement& y) const {
  // (E_i) is orthonormal for the θ-inner product, so coordinates are pairings.
  return nbar_onb.transpose() * (theta_gram * y.coords);
}

AlgebraElement RealizedAlgebra::nbar_from_onb(const Vector& z) const {
  return element(nbar_onb * z);
}

namespace {

// Projectors for a direct-sum decomposition given the per-factor bases.
std::vector<Matrix> block_projectors(const std::vector<Matrix>& blocks) {
  const int dim = static_cast<int>(blocks.front().rows());
  int total = 0;
  for (const auto& b : blocks) total += static_cast<int>(b.cols());
  if (total != dim) throw std::logic_error("decomposition does not span the algebra");
  Matrix s(dim, dim);
  int off = 0;
  for (const auto& b : blocks) {
    s.middleCols(off, b.cols()) = b;
    off += static_cast<int>(b.cols());
  }
  const Matrix s_inv = s.partialPivLu().inverse();
  std::vector<Matrix> projs;
  off = 0;
  for (const auto& b : blocks) {
    projs.push_back(b * s_inv.middleRows(off, b.cols()));
    off += static_cast<int>(b.cols());
  }
  return projs;
}

// Gram-Schmidt of the given columns under the inner product gram, dropping
// directions below tol.
Matrix orthonormalize(const Matrix& cols, const Matrix& gram, Real tol = 1e-10) {
  Matrix out(cols.rows(), cols.cols());
  int kept = 0;
  for (int j = 0; j < cols.cols(); ++j) {
    Vector v = cols.col(j);
    for (int pass = 0; pass < 2; ++pass)
      for (int i = 0; i < kept; ++i) v -= out.col(i).dot(gram * v) * out.col(i);
    const Real n2 = v.dot(gram * v);
    if (n2 > tol * tol) out.col(kept++) = v / std::sqrt(n2);
  }
  return out.leftCols(kept);
}

struct JointBlock {
  Matrix frame;     // columns, orthonormal in the transformed metric
  RowVector label;  // accumulated joint eigenvalues
};

}  // namespace

void RealizedAlgebra::finalize() {
  dim = static_cast<int>(basis.size());
  dim_matrix = static_cast<int>(basis.front().rows());

  {
    Matrix vec_basis(dim_matrix * dim_matrix, dim);
    for (int i = 0; i < dim; ++i)
      vec_basis.col(i) = Eigen::Map<const Vector>(basis[i].data(), basis[i].size());
    vec_solver_.compute(vec_basis);
  }

  ad_basis.resize(dim);
  for (int i = 0; i < dim; ++i) {
    Matrix ad_i(dim, dim);
    for (int j = 0; j < dim; ++j)
      ad_i.col(j) = coordinates_of(basis[i] * basis[j] - basis[j] * basis[i]);
    ad_basis[i] = std::move(ad_i);
  }

  killing_matrix.resize(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j <= i; ++j)
      killing_matrix(i, j) = killing_matrix(j, i) = (ad_basis[i] * ad_basis[j]).trace();

  theta_gram = -killing_matrix * theta_matrix;
  theta_gram = 0.5 * (theta_gram + theta_gram.transpose());

  // Restricted roots by simultaneous diagonalization of {ad H_i}. These
  // operators commute and are symmetric for the θ-inner product, so we
  // refine a common orthogonal eigenframe one Cartan direction at a time.
  const Eigen::LLT<Matrix> llt(theta_gram);
  const Matrix l = llt.matrixL();
  std::vector<JointBlock> blocks{{Matrix::Identity(dim, dim), RowVector(0)}};
  const Real cluster_tol = 1e-8;
  for (int ai = 0; ai < basis_a.cols(); ++ai) {
    Matrix ad_h = Matrix::Zero(dim, dim);
    for (int i = 0; i < dim; ++i)
      if (basis_a(i, ai) != 0.0) ad_h += basis_a(i, ai) * ad_basis[i];
    const Matrix sym = l.transpose() * ad_h * l.transpose().fullPivLu().inverse();
    std::vector<JointBlock> refined;
    for (const auto& blk : blocks) {
      const Matrix restricted = blk.frame.transpose() * sym * blk.frame;
      Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (restricted + restricted.transpose()));
      const Vector& ev = es.eigenvalues();
      int start = 0;
      while (start < ev.size()) {
        int stop = start + 1;
        while (stop < ev.size() && ev[stop] - ev[stop - 1] <= cluster_tol) ++stop;
        JointBlock nb;
        nb.frame = blk.frame * es.eigenvectors().middleCols(start, stop - start);
        nb.label.resize(blk.label.size() + 1);
        nb.label << blk.label, ev.segment(start, stop - start).mean();
        refined.push_back(std::move(nb));
        start = stop;
      }
    }
    blocks = std::move(refined);
  }

  roots.clear();
  Matrix zero_block(dim, 0);
  const auto to_original = [&](const Matrix& frame) {
    return Matrix(l.transpose().fullPivLu().solve(frame));
  };
  for (const auto& blk : blocks) {
    const bool is_zero = blk.label.size() == 0 || blk.label.cwiseAbs().maxCoeff() <= cluster_tol;
    if (is_zero) {
      Matrix cols = to_original(blk.frame);
      Matrix grown(dim, zero_block.cols() + cols.cols());
      grown << zero_block, cols;
      zero_block = std::move(grown);
    } else {
      RestrictedRoot r;
      r.on_a = blk.label;
      r.multiplicity = static_cast<int>(blk.frame.cols());
      r.space = to_original(blk.frame);
      roots.push_back(std::move(r));
    }
  }

  // Positivity and a deterministic ordering come from the chamber element.
  for (auto& r : roots) {
    const Real v = r.on_a.dot(chamber_a);
    if (std::abs(v) <= cluster_tol)
      throw std::logic_error("chamber element is not regular for the computed roots");
    r.positive = v > 0;
  }
  std::sort(roots.begin(), roots.end(), [&](const RestrictedRoot& x, const RestrictedRoot& y) {
    return x.on_a.dot(chamber_a) > y.on_a.dot(chamber_a);
  });

  // 𝔪 = θ-fixed part of the joint-zero block 𝔞 ⊕ 𝔪.
  basis_m = orthonormalize(0.5 * (zero_block + theta_matrix * zero_block), theta_gram);
  if (static_cast<int>(zero_block.cols()) != a_dim() + m_dim())
    throw std::logic_error("joint-zero block does not split as 𝔞 ⊕ 𝔪");

  rho_on_a = RowVector::Zero(basis_a.cols());
  for (const auto& r : roots)
    if (r.positive) rho_on_a += 0.5 * r.multiplicity * r.on_a;

  nbar_onb = orthonormalize(basis_nbar, theta_gram);
  if (nbar_onb.cols() != basis_nbar.cols())
    throw std::logic_error("𝔫̄ basis is rank deficient");

  auto projs = block_projectors({basis_nbar, basis_m, basis_a, basis_n});
  proj_nbar_ = projs[0];
  proj_m_ = projs[1];
  proj_a_ = projs[2];
  proj_n_ = projs[3];
  projs = block_projectors({basis_k, basis_a, basis_n});
  proj_ktilde_ = projs[0];
  proj_atilde_ = projs[1];
  projs = block_projectors({basis_k, basis_V});
  proj_kc_ = projs[0];
  proj_vc_ = projs[1];

  // Consistency of the supplied nilpotent subspaces with the chamber choice.
  for (const auto& r : roots) {
    const Matrix& p = r.positive ? proj_n_ : proj_nbar_;
    if ((p * r.space - r.space).cwiseAbs().maxCoeff() > 1e-8)
      throw std::logic_error("root spaces are not aligned with the supplied 𝔫, 𝔫̄");
  }

  a_solver_.compute(basis_a);
  if (basis_m.cols() > 0) m_solver_.compute(basis_m);
  nbar_solver_.compute(basis_nbar);
  n_solver_.compute(basis_n);
  k_solver_.compute(basis_k);
  V_solver_.compute(basis_V);
}

RealizedAlgebra build_sl(int n) {
  if (n < 2) throw std::invalid_argument("build_sl requires n >= 2");
  RealizedAlgebra g;
  g.name = "sl" + std::to_string(n);
  g.dim_matrix = n;
  const int pairs = n * (n - 1) / 2;
  const int dim = n * n - 1;

  // Basis order: diagonal H_k = e_kk − e_(k+1)(k+1), then E_ij (i<j) in pair
  // order, then the mirrored E_ji. Pair order is row-major over i<j.
  std::vector<std::pair<int, int>> upper;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) upper.emplace_back(i, j);

  auto unit = [n](int i, int j) {
    Matrix e = Matrix::Zero(n, n);
    e(i, j) = 1.0;
    return e;
  };

  for (int k = 0; k + 1 < n; ++k) g.basis.push_back(unit(k, k) - unit(k + 1, k + 1));
  for (auto [i, j] : upper) g.basis.push_back(unit(i, j));
  for (auto [i, j] : upper) g.basis.push_back(unit(j, i));

  // Exact coordinate extraction: strict triangle entries are read off and the
  // diagonal decomposes through partial sums.
  g.exact_coordinates = [n, pairs, upper](const Matrix& m) {
    Vector c = Vector::Zero(n * n - 1);
    Real acc = 0.0;
    for (int k = 0; k + 1 < n; ++k) {
      acc += m(k, k);
      c[k] = acc;
    }
    for (int p = 0; p < pairs; ++p) {
      c[n - 1 + p] = m(upper[p].first, upper[p].second);
      c[n - 1 + pairs + p] = m(upper[p].second, upper[p].first);
    }
    return c;
  };

  // θ(X) = −Xᵀ: swaps the two triangles and negates the diagonal part.
  g.theta_matrix = Matrix::Zero(dim, dim);
  for (int k = 0; k + 1 < n; ++k) g.theta_matrix(k, k) = -1.0;
  for (int p = 0; p < pairs; ++p) {
    g.theta_matrix(n - 1 + p, n - 1 + pairs + p) = -1.0;
    g.theta_matrix(n - 1 + pairs + p, n - 1 + p) = -1.0;
  }

  g.basis_a = Matrix::Identity(dim, dim).leftCols(n - 1);
  g.basis_n = Matrix::Identity(dim, dim).middleCols(n - 1, pairs);
  g.basis_nbar = Matrix::Identity(dim, dim).middleCols(n - 1 + pairs, pairs);
  g.basis_m = Matrix(dim, 0);

  g.basis_k = Matrix::Zero(dim, pairs);
  for (int p = 0; p < pairs; ++p) {
    g.basis_k(n - 1 + p, p) = 1.0;
    g.basis_k(n - 1 + pairs + p, p) = -1.0;
  }
  g.basis_V = Matrix::Zero(dim, n - 1 + pairs);
  g.basis_V.topLeftCorner(n - 1, n - 1).setIdentity();
  for (int p = 0; p < pairs; ++p) {
    g.basis_V(n - 1 + p, n - 1 + p) = 1.0;
    g.basis_V(n - 1 + pairs + p, n - 1 + p) = 1.0;
  }

  // Chamber element: diagonal with strictly decreasing dyadic entries, so the
  // positive roots are exactly the strictly upper triangle.
  {
    Vector d(n);
    for (int i = 0; i < n; ++i) d[i] = std::pow(0.5, i + 1);
    d.array() -= d.mean();
    Vector ca(n - 1);
    Real acc = 0.0;
    for (int k = 0; k + 1 < n; ++k) {
      acc += d[k];
      ca[k] = acc;
    }
    g.chamber_a = ca;
  }

  g.finalize();
  return g;
}

std::shared_ptr<const RealizedAlgebra> make_sl(int n) {
  return std::make_shared<const RealizedAlgebra>(build_sl(n));
}

AlgebraElement bracket(const AlgebraElement& x, const AlgebraElement& y) {
  detail::require_same(x, y);
  const Matrix mx = x.matrix(), my = y.matrix();
  return x.alg->from_matrix(mx * my - my * mx);
}

Real killing(const AlgebraElement& x, const AlgebraElement& y) {
  detail::require_same(x, y);
  return x.coords.dot(x.alg->killing_matrix * y.coords);
}

AlgebraElement theta(const AlgebraElement& x) {
  return {x.alg, x.alg->theta_matrix * x.coords};
}

AlgebraElement project(const AlgebraElement& x, Subspace which) {
  return {x.alg, x.alg->projector(which) * x.coords};
}

Real rho_of(const AlgebraElement& h, Real tol) {
  const AlgebraElement pa = project(h, Subspace::A);
  if ((h.coords - pa.coords).norm() > tol * (1.0 + h.coords.norm()))
    throw std::invalid_argument("rho_of: element is not in 𝔞");
  return h.alg->rho_on_a.dot(h.alg->subspace_coordinates(Subspace::A, h));
}

Real pairing_functional(const AlgebraElement& xi, const AlgebraElement& h) {
  return killing(xi, h);
}

std::vector<Real> root_values(const AlgebraElement& xi1) {
  const Vector a = xi1.alg->subspace_coordinates(Subspace::A, xi1);
  std::vector<Real> vals;
  vals.reserve(xi1.alg->roots.size());
  for (const auto& r : xi1.alg->roots) vals.push_back(r.on_a.dot(a));
  return vals;
}

bool is_regular(const AlgebraElement& xi1, Real tol) {
  for (Real v : root_values(xi1))
    if (std::abs(v) <= tol) return false;
  return true;
}

Lemma31Report check_lemma_3_1(const AlgebraElement& xi1, Real tol) {
  const auto& g = *xi1.alg;
  if ((xi1.coords - g.projector(Subspace::A) * xi1.coords).norm() >
      1e-8 * (1.0 + xi1.coords.norm()))
    throw std::invalid_argument("check_lemma_3_1: ξ₁ must lie in 𝔞");
  if (!is_regular(xi1)) throw NonRegular("a restricted root vanishes on ξ₁");

  Matrix ad_xi = Matrix::Zero(g.dim, g.dim);
  for (int i = 0; i < g.dim; ++i)
    if (xi1.coords[i] != 0.0) ad_xi += xi1.coords[i] * g.ad_basis[i];
  const Matrix image = ad_xi * g.basis_V;

  Lemma31Report rep;
  rep.expected_rank = g.k_dim() - g.m_dim();
  Eigen::JacobiSVD<Matrix> svd(image);
  const Real smax = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
  rep.rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > 1e-8 * std::max(1.0, smax)) ++rep.rank;
  rep.ortho_residual =
      g.m_dim() > 0
          ? (image.transpose() * g.killing_matrix * g.basis_m).cwiseAbs().maxCoeff()
          : 0.0;
  rep.pass = rep.rank == rep.expected_rank && rep.ortho_residual <= tol;
  return rep;
}

}  // namespace corbit
