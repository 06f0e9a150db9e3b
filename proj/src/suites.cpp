#include "corbit/suites.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace corbit {

namespace {

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> violations_)
    : std::runtime_error("invalid configuration: " + join(violations_, "; ")),
      violations(std::move(violations_)) {}

const std::vector<std::string>& suite_registry() {
  static const std::vector<std::string> registry{
      "algebra", "lemma21", "lemma31", "prop22", "prop33", "prop41",
      "lemma42", "lemma43", "prop51",  "prop52", "prop61", "prop62",
      "prop53",  "prop63",  "prop71",  "prop81", "prop83"};
  return registry;
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  std::vector<std::string> violations;
  RunConfig config;
  try {
    if (j.contains("realization")) config.realization = j.at("realization").get<std::string>();
    if (j.contains("xi1")) config.xi1_a = j.at("xi1").get<std::vector<Real>>();
    if (j.contains("xi2")) config.xi2_m = j.at("xi2").get<std::vector<Real>>();
    if (j.contains("fiber")) config.fiber = j.at("fiber").get<std::string>();
    if (j.contains("j")) config.spin_j = j.at("j").get<Real>();
    if (j.contains("seed")) config.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("tolerances"))
      for (const auto& [key, value] : j.at("tolerances").items())
        config.tolerance_overrides[key] = value.get<Real>();
    if (j.contains("r_grid")) config.r_grid = j.at("r_grid").get<std::vector<Real>>();
    if (j.contains("suites")) config.suites = j.at("suites").get<std::vector<std::string>>();
    else config.suites.reset();
    if (j.contains("output")) {
      const auto& out = j.at("output");
      if (out.contains("report")) config.report_path = out.at("report").get<std::string>();
      if (out.contains("sweeps")) config.sweeps_path = out.at("sweeps").get<std::string>();
    }
  } catch (const nlohmann::json::exception& e) {
    violations.push_back(std::string("malformed field: ") + e.what());
  }
  if (!violations.empty()) throw ConfigError(std::move(violations));
  return config;
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j;
  j["realization"] = realization;
  j["xi1"] = xi1_a;
  j["xi2"] = xi2_m;
  j["fiber"] = fiber;
  if (fiber == "spin-j") j["j"] = spin_j;
  j["seed"] = seed;
  if (!tolerance_overrides.empty()) j["tolerances"] = tolerance_overrides;
  if (!r_grid.empty()) j["r_grid"] = r_grid;
  if (suites) j["suites"] = *suites;
  j["output"] = {{"report", report_path}, {"sweeps", sweeps_path}};
  return j;
}

namespace {

AlgebraElement default_xi1(const RealizedAlgebra& g) {
  Vector d(g.dim_matrix);
  for (int i = 0; i < g.dim_matrix; ++i) d[i] = g.dim_matrix - 1 - 2 * i;
  Matrix m = Matrix::Zero(g.dim_matrix, g.dim_matrix);
  m.diagonal() = d;
  return g.from_matrix(m);
}

bool standalone_fiber_suite(const std::string& id) {
  return id == "prop41" || id == "lemma43";
}

}  // namespace

RunContext::RunContext(RunConfig config) : config_(std::move(config)) {
  std::vector<std::string> violations;

  int n = 0;
  if (config_.realization == "sl2")
    n = 2;
  else if (config_.realization == "sl3")
    n = 3;
  else if (config_.realization == "sl4")
    n = 4;
  else
    violations.push_back("realization: must be one of sl2, sl3, sl4");

  selected_ = config_.suites ? *config_.suites : suite_registry();
  for (const auto& id : selected_)
    if (std::find(suite_registry().begin(), suite_registry().end(), id) ==
        suite_registry().end())
      violations.push_back("suites: unknown suite '" + id + "'");

  const bool spin_fiber = config_.fiber == "spin-j";
  if (config_.fiber != "trivial-character" && config_.fiber != "sign-character" && !spin_fiber)
    violations.push_back("fiber: must be trivial-character, sign-character or spin-j");
  if (spin_fiber) {
    const Real twice = 2 * config_.spin_j;
    if (config_.spin_j <= 0 || std::abs(twice - std::lround(twice)) > 1e-12)
      violations.push_back("j: spin must be a positive half-integer");
    for (const auto& id : selected_)
      if (!standalone_fiber_suite(id))
        violations.push_back("fiber: spin-j supports only the standalone suites "
                             "(prop41, lemma43); suite '" + id + "' needs a character fiber");
  }

  grid_ = config_.r_grid.empty() ? ContractionScenario::default_grid() : config_.r_grid;
  Real prev = 2.0;
  for (Real r : grid_) {
    if (!(r > 0.0 && r <= 1.0) || r >= prev) {
      violations.push_back("r_grid: values must be strictly decreasing in (0,1]");
      break;
    }
    prev = r;
  }

  for (const auto& [key, value] : config_.tolerance_overrides) {
    if (std::find(suite_registry().begin(), suite_registry().end(), key) ==
        suite_registry().end())
      violations.push_back("tolerances: unknown suite '" + key + "'");
    if (!(value > 0.0)) violations.push_back("tolerances: '" + key + "' must be positive");
  }

  if (n > 0) {
    alg_ = make_sl(n);
    AlgebraElement xi1 = default_xi1(*alg_);
    if (!config_.xi1_a.empty()) {
      if (static_cast<int>(config_.xi1_a.size()) != alg_->a_dim()) {
        violations.push_back("xi1: expected " + std::to_string(alg_->a_dim()) +
                             " 𝔞-coordinates");
      } else {
        Vector coords = Vector::Zero(alg_->dim);
        for (int i = 0; i < alg_->a_dim(); ++i)
          coords += config_.xi1_a[i] * alg_->basis_a.col(i);
        xi1 = alg_->element(coords);
      }
    }
    if (!is_regular(xi1)) violations.push_back("xi1: regularity violated");

    if (!config_.xi2_m.empty() && static_cast<int>(config_.xi2_m.size()) != alg_->m_dim())
      violations.push_back("xi2: expected " + std::to_string(alg_->m_dim()) +
                           " 𝔪-coordinates");

    if (violations.empty() && !spin_fiber) {
      std::vector<int> indices;
      if (config_.fiber == "sign-character") indices = {0};
      params_.emplace(*alg_, xi1, alg_->zero(),
                      FiberRep::finite_character(*alg_, std::move(indices)));
    }
    if (violations.empty() && spin_fiber) {
      // standalone suites only; keep a character-parameter context for the
      // realization-level parts they still need
      params_.emplace(*alg_, xi1, alg_->zero(), FiberRep::finite_character(*alg_));
    }
  }

  if (!violations.empty()) throw ConfigError(std::move(violations));
}

std::uint64_t RunContext::suite_seed(const std::string& suite) const {
  return hash_combine(config_.seed, suite);
}

Real RunContext::tolerance(const std::string& suite, Real fallback) const {
  const auto it = config_.tolerance_overrides.find(suite);
  return it == config_.tolerance_overrides.end() ? fallback : it->second;
}

// ---------------------------------------------------------------------------
// shared sampling helpers
// ---------------------------------------------------------------------------

namespace {

AlgebraElement random_element(Rng& rng, const RealizedAlgebra& g, Real lo = -0.8, Real hi = 0.8) {
  return g.element(rng.uniform_vector(g.dim, lo, hi));
}

AlgebraElement random_in(Rng& rng, const RealizedAlgebra& g, Subspace s, Real lo = -0.8,
                         Real hi = 0.8) {
  const Matrix& b = g.subspace_basis(s);
  return g.element(b * rng.uniform_vector(static_cast<int>(b.cols()), lo, hi));
}

GroupElement random_group(Rng& rng, const RealizedAlgebra& g, Real scale = 0.6) {
  return exp_group(random_element(rng, g, -scale, scale));
}

GroupElement random_compact(Rng& rng, const RealizedAlgebra& g, Real scale = 0.6) {
  return exp_group(random_in(rng, g, Subspace::KCartan, -scale, scale));
}

BarNPoint random_bar_n(Rng& rng, const RealizedAlgebra& g, Real scale = 0.6) {
  return BarNPoint(random_in(rng, g, Subspace::Nbar, -scale, scale));
}

MotionGroupElement random_motion(Rng& rng, const RealizedAlgebra& g, Real scale = 0.5) {
  return motion_element(random_in(rng, g, Subspace::VCartan, -scale, scale),
                        random_compact(rng, g, scale));
}

std::vector<std::pair<TestFunction, BarNPoint>> make_probes(Rng& rng, const RealizedAlgebra& g,
                                                            int dim_e, int count) {
  std::vector<std::pair<TestFunction, BarNPoint>> probes;
  for (int i = 0; i < count; ++i)
    probes.emplace_back(TestFunction::random(rng, g, dim_e), random_bar_n(rng, g));
  return probes;
}

CheckValue make_check(std::string name, Real residual, Real tolerance) {
  return {std::move(name), residual, tolerance, residual <= tolerance};
}

template <class F>
Real max_over(int count, F&& body) {
  Real worst = 0.0;
  for (int i = 0; i < count; ++i) worst = std::max(worst, body(i));
  return worst;
}

void gauss_hermite(int order, Vector& nodes, Vector& weights) {
  Matrix jac = Matrix::Zero(order, order);
  for (int i = 1; i < order; ++i) {
    const Real b = std::sqrt(i / 2.0);
    jac(i, i - 1) = jac(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(jac);
  nodes = es.eigenvalues();
  weights.resize(order);
  const Real sqrt_pi = std::sqrt(3.14159265358979323846);
  for (int i = 0; i < order; ++i)
    weights[i] = sqrt_pi * es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
}

// Quadrature grid over the 𝔫̄ log coordinates: points and Lebesgue weights.
void quadrature_grid(const RealizedAlgebra& g, std::vector<BarNPoint>& points,
                     std::vector<Real>& weights) {
  const int n = g.nbar_dim();
  const int order = n == 1 ? 64 : 20;
  const Real stretch = 1.5;
  Vector nodes, wts;
  gauss_hermite(order, nodes, wts);

  std::vector<Vector> zs{Vector::Zero(n)};
  std::vector<Real> ws{1.0};
  for (int axis = 0; axis < n; ++axis) {
    std::vector<Vector> zs2;
    std::vector<Real> ws2;
    for (std::size_t i = 0; i < zs.size(); ++i)
      for (int q = 0; q < order; ++q) {
        Vector z = zs[i];
        z[axis] = stretch * nodes[q];
        zs2.push_back(z);
        ws2.push_back(ws[i] * stretch * wts[q] * std::exp(nodes[q] * nodes[q]));
      }
    zs = std::move(zs2);
    ws = std::move(ws2);
  }
  points.clear();
  weights.clear();
  for (std::size_t i = 0; i < zs.size(); ++i) {
    points.push_back(BarNPoint(g.nbar_from_onb(zs[i])));
    weights.push_back(ws[i]);
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// check packs
// ---------------------------------------------------------------------------

std::vector<CheckValue> structure_checks(const RealizedAlgebra& g, std::uint64_t seed) {
  std::vector<CheckValue> checks;
  Rng rng(seed);

  checks.push_back(make_check(
      "theta_involution",
      (g.theta_matrix * g.theta_matrix - Matrix::Identity(g.dim, g.dim)).cwiseAbs().maxCoeff(),
      1e-12));
  checks.push_back(make_check("theta_eigenspaces",
                              std::max((g.theta_matrix * g.basis_k - g.basis_k).norm(),
                                       (g.theta_matrix * g.basis_V + g.basis_V).norm()),
                              1e-12));

  {
    const Matrix gram_k = g.basis_k.transpose() * g.killing_matrix * g.basis_k;
    const Matrix gram_v = g.basis_V.transpose() * g.killing_matrix * g.basis_V;
    Eigen::SelfAdjointEigenSolver<Matrix> ek(gram_k), ev(gram_v);
    const Real definite =
        std::max(ek.eigenvalues().maxCoeff(), -ev.eigenvalues().minCoeff());
    checks.push_back(make_check("killing_definiteness", std::max(definite, 0.0), 0.0));
  }

  {
    Real jacobi = 0.0, invariance = 0.0;
    for (int i = 0; i < g.dim; ++i) {
      const AlgebraElement xi = g.element(Vector::Unit(g.dim, i));
      for (int j = 0; j < g.dim; ++j) {
        const AlgebraElement xj = g.element(Vector::Unit(g.dim, j));
        for (int k = 0; k < g.dim; ++k) {
          const AlgebraElement xk = g.element(Vector::Unit(g.dim, k));
          jacobi = std::max(jacobi, (bracket(xi, bracket(xj, xk)) +
                                     bracket(xj, bracket(xk, xi)) +
                                     bracket(xk, bracket(xi, xj)))
                                        .norm());
          invariance = std::max(invariance, std::abs(killing(bracket(xi, xj), xk) +
                                                     killing(xj, bracket(xi, xk))));
        }
      }
    }
    checks.push_back(make_check("jacobi", jacobi, 1e-12));
    checks.push_back(make_check("killing_invariance", invariance, 1e-12));
  }

  {
    Real inclusion = 0.0;
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
                if ((rc.on_a - sum).cwiseAbs().maxCoeff() <= 1e-8)
                  residual -= rc.space * (rc.space.transpose() * g.theta_gram * br.coords);
            }
            inclusion = std::max(inclusion, residual.norm());
          }
      }
    checks.push_back(make_check("root_space_brackets", inclusion, 1e-9));
  }

  {
    Matrix all(g.dim, g.dim);
    all << g.basis_nbar, g.basis_m, g.basis_a, g.basis_n;
    Matrix iwa(g.dim, g.dim);
    iwa << g.basis_k, g.basis_a, g.basis_n;
    const bool ranks = all.colPivHouseholderQr().rank() == g.dim &&
                       iwa.colPivHouseholderQr().rank() == g.dim &&
                       g.k_dim() + g.V_dim() == g.dim;
    checks.push_back(make_check("decomposition_ranks", ranks ? 0.0 : 1.0, 0.5));

    const Matrix gram = g.nbar_onb.transpose() * g.theta_gram * g.nbar_onb;
    checks.push_back(make_check(
        "nbar_onb",
        (gram - Matrix::Identity(g.nbar_dim(), g.nbar_dim())).cwiseAbs().maxCoeff(), 1e-12));
  }

  checks.push_back(make_check(
      "projector_reconstruction", max_over(100, [&](int) {
        const AlgebraElement x = random_element(rng, g);
        const AlgebraElement sum =
            project(x, Subspace::Nbar) + project(x, Subspace::M) + project(x, Subspace::A);
        const AlgebraElement rem = x - sum;
        return (project(rem, Subspace::N) - rem).norm();
      }),
      1e-10));

  checks.push_back(make_check("rho_half_sum", max_over(20, [&](int) {
                                Vector d = rng.uniform_vector(g.dim_matrix, -1.0, 1.0);
                                d.array() -= d.mean();
                                Real expected = 0.0;
                                for (int i = 0; i < g.dim_matrix; ++i)
                                  for (int j = i + 1; j < g.dim_matrix; ++j)
                                    expected += 0.5 * (d[i] - d[j]);
                                Matrix m = Matrix::Zero(g.dim_matrix, g.dim_matrix);
                                m.diagonal() = d;
                                return std::abs(rho_of(g.from_matrix(m)) - expected);
                              }),
                              1e-10));
  return checks;
}

std::vector<CheckValue> factorization_checks(const RealizedAlgebra& g, std::uint64_t seed) {
  std::vector<CheckValue> checks;
  Rng rng(seed);

  checks.push_back(make_check("iwasawa_roundtrip", max_over(100, [&](int) {
                                const GroupElement h = random_group(rng, g);
                                const IwasawaFactors f = iwasawa(h);
                                return (f.ktilde.m * f.atilde.m * f.ntilde.m - h.m).norm();
                              }),
                              1e-10));

  Real bruhat_worst = 0.0;
  int accepted = 0;
  while (accepted < 100) {
    const GroupElement h = random_group(rng, g);
    try {
      const BruhatFactors f = bruhat(h);
      bruhat_worst =
          std::max(bruhat_worst, (f.nbar.matrix() * f.m.m * f.a.m * f.n.m - h.m).norm());
      ++accepted;
    } catch (const NotInBigCell&) {
    }
  }
  checks.push_back(make_check("bruhat_roundtrip", bruhat_worst, 1e-10));

  Real identity_worst = 0.0;
  accepted = 0;
  while (accepted < 30) {
    try {
      const GroupElement gg = random_group(rng, g);
      const BarNPoint y = random_bar_n(rng, g);
      const GroupElement w{&g, gg.m.inverse() * y.matrix()};
      const BruhatFactors bf = bruhat(w);
      identity_worst = std::max(
          identity_worst,
          (iwasawa(w).log_atilde - (iwasawa(bf.nbar).log_atilde + bf.log_a)).norm());
      ++accepted;
    } catch (const NotInBigCell&) {
    }
  }
  checks.push_back(make_check("atilde_factorization_identity", identity_worst, 1e-9));
  return checks;
}

std::vector<CheckValue> lemma31_checks(const RealizedAlgebra& g, const AlgebraElement& xi1,
                                       std::uint64_t seed) {
  std::vector<CheckValue> checks;
  Rng rng(seed);
  Real ortho = 0.0;
  bool ranks = true;

  const Lemma31Report head = check_lemma_3_1(xi1);
  ortho = std::max(ortho, head.ortho_residual);
  ranks = ranks && head.rank == head.expected_rank;

  int accepted = 0;
  while (accepted < 5) {
    const AlgebraElement candidate = random_in(rng, g, Subspace::A, -1.0, 1.0);
    if (!is_regular(candidate)) continue;
    ++accepted;
    const Lemma31Report rep = check_lemma_3_1(candidate);
    ortho = std::max(ortho, rep.ortho_residual);
    ranks = ranks && rep.rank == rep.expected_rank;
  }
  checks.push_back(make_check("orthogonality", ortho, 1e-9));
  checks.push_back(make_check("rank_match", ranks ? 0.0 : 1.0, 0.5));
  return checks;
}

std::vector<CheckValue> lemma21_checks(const RealizedAlgebra& g, std::uint64_t seed) {
  Rng rng(seed);
  const Real h = 1e-5;
  Real worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const AlgebraElement x = random_element(rng, g);
    const BarNPoint y = random_bar_n(rng, g);
    const Lemma21Derivatives deriv = lemma21_derivatives(x, y);
    auto left = [&](Real t) { return GroupElement{&g, exp_group(t * x).m * y.matrix()}; };
    auto fd1 = [&](auto&& f) {
      auto d = [&](Real hh) { return Vector((f(hh) - f(-hh)) * (0.5 / hh)); };
      return Vector((4.0 * d(h / 2) - d(h)) / 3.0);
    };

    const Vector fd_da = fd1([&](Real t) { return Vector(bruhat(left(t)).log_a.coords); });
    worst = std::max(worst, (fd_da - deriv.da.coords).norm());
    worst = std::max(worst, deriv.dm.norm());  // M discrete for sl(n)

    const Vector fd_nbar =
        fd1([&](Real t) { return Vector(bruhat(left(t)).nbar.log().coords); });
    const Vector fd_curve = fd1([&](Real t) {
      return Vector(log_nbar({&g, y.matrix() * exp_group(t * deriv.dnbar_direction).m}).coords);
    });
    worst = std::max(worst, (fd_nbar - fd_curve).norm());

    const Vector fd_datilde =
        fd1([&](Real t) { return Vector(iwasawa(left(t)).log_atilde.coords); });
    worst = std::max(worst, (fd_datilde - deriv.datilde.coords).norm());
  }
  return {make_check("derivative_closed_forms", worst, 1e-6)};
}

std::vector<CheckValue> pi_checks(const PrincipalSeriesParams& params, std::uint64_t seed) {
  const RealizedAlgebra& g = params.algebra();
  Rng rng(seed);
  std::vector<CheckValue> checks;

  Real hom = 0.0;
  int accepted = 0;
  while (accepted < 20) {
    const TestFunction tf = TestFunction::random(rng, g, params.fiber().dim_e);
    const SmoothEFunction phi = as_function(tf);
    const BarNPoint y = random_bar_n(rng, g);
    const GroupElement g1 = random_group(rng, g, 0.5), g2 = random_group(rng, g, 0.5);
    try {
      SmoothEFunction inner;
      inner.dim_e = phi.dim_e;
      inner.eval = [&](const BarNPoint& p) { return pi_apply(params, g2, phi, p); };
      hom = std::max(hom, (pi_apply(params, g1, inner, y) -
                           pi_apply(params, g1 * g2, phi, y))
                              .norm());
      ++accepted;
    } catch (const NotInBigCell&) {
    }
  }
  checks.push_back(make_check("homomorphism", hom, 1e-8));

  Real fd = 0.0, comm = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const TestFunction tf = TestFunction::random(rng, g, params.fiber().dim_e);
    const SmoothEFunction phi = as_function(tf);
    const BarNPoint y = random_bar_n(rng, g);
    const AlgebraElement x = random_element(rng, g), x2 = random_element(rng, g);

    auto d = [&](Real hh) {
      return CVector((pi_apply(params, exp_group(hh * x), phi, y) -
                      pi_apply(params, exp_group(-hh * x), phi, y)) *
                     (0.5 / hh));
    };
    const CVector fd_val = (4.0 * d(5e-5) - d(1e-4)) / 3.0;
    fd = std::max(fd, (fd_val - dpi_apply(params, x, tf, y)).norm());

    auto op = [&](const AlgebraElement& xx, const SmoothEFunction& f) {
      SmoothEFunction out;
      out.dim_e = f.dim_e;
      out.eval = [&params, xx, f](const BarNPoint& p) { return dpi_apply(params, xx, f, p); };
      return out;
    };
    const CVector lhs =
        dpi_apply(params, x, op(x2, phi), y) - dpi_apply(params, x2, op(x, phi), y);
    comm = std::max(comm, (lhs - dpi_apply(params, bracket(x, x2), tf, y)).norm());
  }
  checks.push_back(make_check("derived_vs_fd", fd, 1e-6));
  checks.push_back(make_check("derived_commutators", comm, 1e-5));
  return checks;
}

std::vector<CheckValue> pi0_checks(const PrincipalSeriesParams& params, std::uint64_t seed) {
  const RealizedAlgebra& g = params.algebra();
  Rng rng(seed);
  std::vector<CheckValue> checks;

  Real hom = 0.0;
  int accepted = 0;
  while (accepted < 20) {
    const TestFunction tf = TestFunction::random(rng, g, params.fiber().dim_e);
    const SmoothEFunction phi = as_function(tf);
    const BarNPoint y = random_bar_n(rng, g);
    const MotionGroupElement a = random_motion(rng, g), b = random_motion(rng, g);
    try {
      SmoothEFunction inner;
      inner.dim_e = phi.dim_e;
      inner.eval = [&](const BarNPoint& p) { return pi0_apply(params, b, phi, p); };
      hom = std::max(hom, (pi0_apply(params, a, inner, y) -
                           pi0_apply(params, motion_product(a, b), phi, y))
                              .norm());
      ++accepted;
    } catch (const NotInBigCell&) {
    }
  }
  checks.push_back(make_check("homomorphism", hom, 1e-8));

  Real fd = 0.0, comm = 0.0, equiv = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const TestFunction tf = TestFunction::random(rng, g, params.fiber().dim_e);
    const SmoothEFunction phi = as_function(tf);
    const BarNPoint y = random_bar_n(rng, g);
    const AlgebraElement v = random_in(rng, g, Subspace::VCartan);
    const AlgebraElement u = random_in(rng, g, Subspace::KCartan);

    auto dv = [&](Real hh) {
      return CVector((pi0_apply(params, {hh * v, group_identity(g)}, phi, y) -
                      pi0_apply(params, {-hh * v, group_identity(g)}, phi, y)) *
                     (0.5 / hh));
    };
    auto du = [&](Real hh) {
      return CVector((pi0_apply(params, {g.zero(), exp_group(hh * u)}, phi, y) -
                      pi0_apply(params, {g.zero(), exp_group(-hh * u)}, phi, y)) *
                     (0.5 / hh));
    };
    const CVector fd_val = (4.0 * dv(5e-5) - dv(1e-4)) / 3.0 + (4.0 * du(5e-5) - du(1e-4)) / 3.0;
    fd = std::max(fd, (fd_val - dpi0_apply(params, v, u, tf, y)).norm());

    const AlgebraElement v2 = random_in(rng, g, Subspace::VCartan);
    const AlgebraElement u2 = random_in(rng, g, Subspace::KCartan);
    auto op = [&](const AlgebraElement& vv, const AlgebraElement& uu,
                  const SmoothEFunction& f) {
      SmoothEFunction out;
      out.dim_e = f.dim_e;
      out.eval = [&params, vv, uu, f](const BarNPoint& p) {
        return dpi0_apply(params, vv, uu, f, p);
      };
      return out;
    };
    const CVector lhs = dpi0_apply(params, v, u, op(v2, u2, phi), y) -
                        dpi0_apply(params, v2, u2, op(v, u, phi), y);
    const auto [bv, bu] = motion_bracket(v, u, v2, u2);
    comm = std::max(comm, (lhs - dpi0_apply(params, bv, bu, tf, y)).norm());
  }

  // dot-action identities behind the pi0 formula
  int k_accepted = 0;
  while (k_accepted < 20) {
    try {
      const GroupElement k = random_compact(rng, g);
      const BarNPoint y = random_bar_n(rng, g);
      const GroupElement w = inverse(k) * y.group();
      const BruhatFactors bf = bruhat(w);
      const BarNPoint moved = dot_action(inverse(k), y);
      const Matrix mky = iwasawa(y).ktilde.m.transpose() * k.m * iwasawa(moved).ktilde.m;
      equiv = std::max(equiv, (mky - bf.m.m.inverse()).norm());
      equiv = std::max(
          equiv,
          (iwasawa(y).log_atilde - (iwasawa(moved).log_atilde + bf.log_a)).norm());
      ++k_accepted;
    } catch (const NotInBigCell&) {
    }
  }

  checks.push_back(make_check("derived_vs_fd", fd, 1e-6));
  checks.push_back(make_check("derived_commutators", comm, 1e-5));
  checks.push_back(make_check("dot_action_identities", equiv, 1e-9));
  return checks;
}

std::vector<CheckValue> berezin_checks(const RealizedAlgebra& g, std::uint64_t seed,
                                       const std::vector<FiberRep>& extra) {
  Rng rng(seed);
  std::vector<FiberRep> backends;
  backends.push_back(FiberRep::finite_character(g));
  backends.push_back(FiberRep::finite_character(g, {0}));
  for (Real j : {0.5, 1.0, 1.5}) backends.push_back(FiberRep::spin(j));
  for (const auto& rep : extra) {
    bool dup = false;
    for (const auto& have : backends) dup = dup || have == rep;
    if (!dup) backends.push_back(rep);
  }

  auto random_operator = [&](int d) {
    CMatrix b(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) b(i, j) = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
    return b;
  };

  Real conj = 0.0, equivariance = 0.0, linearity = 0.0, reconstruction = 0.0;
  for (const FiberRep& rep : backends) {
    const auto points = orbit_sample(rep, 20, hash_combine(seed, "orbit"));
    for (int trial = 0; trial < 10; ++trial) {
      const CMatrix b = random_operator(rep.dim_e);
      for (const auto& phi : points)
        conj = std::max(conj, std::abs(berezin_symbol(rep, CMatrix(b.adjoint()), phi) -
                                       std::conj(berezin_symbol(rep, b, phi))));
      if (rep.m_dim > 0) {
        Vector w(3);
        for (int i = 0; i < 3; ++i) w[i] = rng.uniform(-3, 3);
        const CMatrix u = su2_from_rotation_vector(w);
        const CMatrix s = rep.sigma_su2(u);
        const Matrix r = rep.rotation_of_su2(u);
        for (const auto& phi : points)
          equivariance = std::max(
              equivariance,
              std::abs(berezin_symbol(rep, b, {r * phi.m_coords}) -
                       berezin_symbol(rep, CMatrix(s.adjoint() * b * s), phi)));
      }
    }
    for (int a = 0; a < rep.m_dim; ++a) {
      const Vector x = Vector::Unit(rep.m_dim, a);
      for (const auto& phi : points)
        linearity = std::max(
            linearity, std::abs(berezin_symbol(rep, rep.dsigma(x), phi) -
                                Complex(0, 1) * rep.beta_m(phi.m_coords, x)));
    }

    const CMatrix b0 = random_operator(rep.dim_e);
    const int count = std::max(2 * rep.dim_e * rep.dim_e, rep.dim_e * rep.dim_e + 4);
    std::vector<std::pair<OrbitPointFiber, Complex>> samples;
    for (const auto& p : orbit_sample(rep, count, hash_combine(seed, "reconstruct")))
      samples.emplace_back(p, berezin_symbol(rep, b0, p));
    reconstruction = std::max(reconstruction, (berezin_reconstruct(rep, samples) - b0).norm());
  }

  return {make_check("conjugate_symbols", conj, 1e-10),
          make_check("equivariance", equivariance, 1e-10),
          make_check("derived_linearity", linearity, 1e-10),
          make_check("reconstruction", reconstruction, 1e-8)};
}

std::vector<CheckValue> lemma42_checks(const RealizedAlgebra& g, std::uint64_t seed) {
  Rng rng(seed);
  const FiberRep fiber = FiberRep::finite_character(g);

  Real closed = 0.0, jets = 0.0;
  for (int i = 0; i < g.dim; ++i) {
    const AlgebraElement x = g.element(Vector::Unit(g.dim, i));
    RestrictedSymbol parts;
    parts.w.resize(g.nbar_dim());
    for (int k = 0; k < g.nbar_dim(); ++k)
      parts.w[k] =
          adjoint_functional_coeff(g, (g.theta_gram * g.nbar_onb.col(k)).transpose(), x);
    const PSymbol f = PSymbol::from_restricted(g, fiber, std::move(parts));

    const int probes = std::max(2, 20 / g.dim);
    for (int trial = 0; trial < probes; ++trial) {
      const TestFunction tf = TestFunction::random(rng, g, 1);
      const BarNPoint y = random_bar_n(rng, g);
      const AlgebraElement w_ad = adjoint(inverse(y.group()), x);
      const CVector rhs = Complex(0, -1) * rho_of(project(w_ad, Subspace::A)) * tf.eval(y) +
                          kImag * tf.dir_deriv(y, project(w_ad, Subspace::Nbar));
      closed = std::max(closed, (weyl_apply(f, tf, y) - rhs).norm());
      jets = std::max(jets, (weyl_apply_jets(f, as_function(tf), y) - rhs).norm());
    }
  }

  Real trace = 0.0;
  for (int i = 0; i < g.dim; ++i) {
    const AlgebraElement y = g.element(Vector::Unit(g.dim, i));
    trace = std::max(trace, std::abs(nbar_trace_of_ad(g, y) +
                                     2.0 * rho_of(project(y, Subspace::A))));
  }

  return {make_check("closed_form", closed, 1e-7), make_check("jet_route", jets, 1e-7),
          make_check("trace_identity", trace, 1e-10)};
}

std::vector<CheckValue> lemma43_checks(const RealizedAlgebra& g, std::uint64_t seed, Real tol) {
  Rng rng(seed);
  const FiberRep chr = FiberRep::finite_character(g);
  const FiberRep spin = FiberRep::spin(0.5);

  auto gaussian = [&](Real rate, Real shift) {
    return lambda_coeff(g, [&g, rate, shift](const BarNPoint& p) {
      const Vector z = g.nbar_onb_coordinates(p.log());
      return Complex((z[0] + shift) * std::exp(-rate * z.squaredNorm()));
    });
  };
  auto adjoint_c = [&]() {
    return adjoint_functional_coeff(g, rng.uniform_vector(g.dim, -1, 1).transpose(),
                                    random_element(rng, g));
  };
  auto momentum = [&](const FiberRep& fiber) {
    RestrictedSymbol parts;
    parts.w.resize(g.nbar_dim());
    for (int k = 0; k < g.nbar_dim(); ++k)
      parts.w[k] = adjoint_functional_coeff(
          g, (g.theta_gram * g.nbar_onb.col(k)).transpose(), random_element(rng, g));
    return PSymbol::from_restricted(g, fiber, std::move(parts));
  };
  auto base_only = [&](const FiberRep& fiber, Real rate, Real shift) {
    RestrictedSymbol parts;
    parts.u = gaussian(rate, shift);
    return PSymbol::from_restricted(g, fiber, std::move(parts));
  };
  auto single_w = [&](const FiberRep& fiber, int k) {
    RestrictedSymbol parts;
    parts.w.resize(g.nbar_dim());
    parts.w[k] = adjoint_c();
    return PSymbol::from_restricted(g, fiber, std::move(parts));
  };
  auto orbit_linear = [&]() {
    RestrictedSymbol parts;
    parts.v.resize(3);
    for (int a = 0; a < 3; ++a) parts.v[a] = adjoint_c();
    return PSymbol::from_restricted(g, spin, std::move(parts));
  };
  auto full_mixed = [&](const FiberRep& fiber, bool with_orbit) {
    RestrictedSymbol parts;
    parts.u = gaussian(rng.uniform(0.3, 0.7), rng.uniform(-0.5, 0.5));
    parts.w.resize(g.nbar_dim());
    for (int k = 0; k < g.nbar_dim(); ++k) parts.w[k] = adjoint_c();
    if (with_orbit) {
      parts.v.resize(3);
      for (int a = 0; a < 3; ++a) parts.v[a] = adjoint_c();
    }
    return PSymbol::from_restricted(g, fiber, std::move(parts));
  };

  const int last = g.nbar_dim() - 1;
  std::vector<std::pair<PSymbol, PSymbol>> library;
  library.emplace_back(base_only(chr, 0.4, 0.3), base_only(chr, 0.5, -0.2));  // base-base
  library.emplace_back(base_only(chr, 0.4, 0.1), single_w(chr, 0));           // base-z
  library.emplace_back(single_w(chr, 0), single_w(chr, 0));                   // z-z same
  library.emplace_back(single_w(chr, 0), single_w(chr, last));                // z-z cross
  library.emplace_back(momentum(chr), momentum(chr));                         // z-z dense
  library.emplace_back(full_mixed(chr, false), full_mixed(chr, false));       // base+z mixed
  library.emplace_back(full_mixed(chr, false), base_only(chr, 0.6, 0.2));
  library.emplace_back(orbit_linear(), orbit_linear());                        // orbit-orbit
  library.emplace_back(orbit_linear(), single_w(spin, 0));                     // z-orbit
  library.emplace_back(orbit_linear(), base_only(spin, 0.5, 0.4));             // base-orbit
  library.emplace_back(full_mixed(spin, true), full_mixed(spin, true));        // all terms
  library.emplace_back(full_mixed(spin, true), orbit_linear());
  library.emplace_back(momentum(spin), orbit_linear());

  Real worst = 0.0;
  for (const auto& [f, h] : library) {
    const int dim_e = f.fiber().dim_e;
    std::vector<std::pair<TestFunction, BarNPoint>> probes = make_probes(rng, g, dim_e, 10);
    worst = std::max(worst, check_lemma_4_3(f, h, probes));
  }
  return {make_check("commutator_bracket", worst, tol)};
}

namespace {

std::vector<ProductPoint> random_sample(Rng& rng, const PrincipalSeriesParams& params,
                                        int count) {
  const RealizedAlgebra& g = params.algebra();
  std::vector<ProductPoint> sample;
  for (int i = 0; i < count; ++i)
    sample.push_back({random_bar_n(rng, g), random_in(rng, g, Subspace::Nbar),
                      OrbitPointFiber{params.fiber().xi2()}});
  return sample;
}

}  // namespace

std::vector<CheckValue> prop51_checks(const PrincipalSeriesParams& params, std::uint64_t seed) {
  const RealizedAlgebra& g = params.algebra();
  Rng rng(seed);

  Real pairing = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const ProductPoint p = random_sample(rng, params, 1).front();
    const AlgebraElement x = random_element(rng, g);
    pairing = std::max(pairing, std::abs(symbol_eval(linear_symbol_g(params, x), p.y, p.z,
                                                     p.phi) -
                                         killing(psi(params, p).xi, x)));
  }

  const auto probes = make_probes(rng, g, params.fiber().dim_e, 20);
  return {make_check("pairing_identity", pairing, 1e-9),
          make_check("adapted_correspondence", check_adapted_g(params, probes), 1e-7)};
}

std::vector<CheckValue> prop61_checks(const PrincipalSeriesParams& params, std::uint64_t seed) {
  const RealizedAlgebra& g = params.algebra();
  Rng rng(seed);

  Real pairing = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const ProductPoint p = random_sample(rng, params, 1).front();
    const AlgebraElement v = random_in(rng, g, Subspace::VCartan);
    const AlgebraElement u = random_in(rng, g, Subspace::KCartan);
    pairing = std::max(
        pairing, std::abs(symbol_eval(linear_symbol_g0(params, v, u), p.y, p.z, p.phi) -
                          coad_g0_pairing(psi0(params, p), v, u)));
  }

  const auto probes = make_probes(rng, g, params.fiber().dim_e, 20);
  return {make_check("pairing_identity", pairing, 1e-9),
          make_check("adapted_correspondence", check_adapted_g0(params, probes), 1e-7)};
}

std::vector<CheckValue> prop52_checks(const PrincipalSeriesParams& params, std::uint64_t seed) {
  Rng rng(seed);
  const auto sample = random_sample(rng, params, 50);

  Real zprime = 0.0;
  for (const auto& p : sample) {
    ProductPoint shifted = p;
    shifted.z = p.z + z_prime_shift(params, p.y);
    zprime = std::max(zprime, (psi(params, p).xi - psi1(params, shifted).xi).norm());
  }

  return {make_check("bracket_identity", check_symplecto_g(params, sample), 1e-6),
          make_check("zprime_relation", zprime, 1e-9)};
}

std::vector<CheckValue> prop62_checks(const PrincipalSeriesParams& params, std::uint64_t seed) {
  const RealizedAlgebra& g = params.algebra();
  Rng rng(seed);
  const auto sample = random_sample(rng, params, 50);

  Real roundtrip = 0.0;
  int accepted = 0;
  while (accepted < 50) {
    try {
      const MotionGroupElement wit = random_motion(rng, g, 0.6);
      const CoadPointG0 xi = coadjoint_g0(wit, {params.xi1(), params.xi2()});
      const ProductPoint p = psi0_invert(params, xi, wit);
      const CoadPointG0 back = psi0(params, p);
      roundtrip =
          std::max(roundtrip, coad_g0_norm({back.w - xi.w, back.u - xi.u}));

      const ProductPoint q = random_sample(rng, params, 1).front();
      const CoadPointG0 eta = psi0(params, q);
      Matrix cols(g.dim, g.V_dim());
      for (int i = 0; i < g.V_dim(); ++i)
        cols.col(i) = bracket(g.element(g.basis_V.col(i)), eta.w).coords;
      const Vector vc = cols.colPivHouseholderQr().solve(eta.u.coords);
      const ProductPoint p2 = psi0_invert(
          params, eta, motion_element(g.element(g.basis_V * vc), iwasawa(q.y).ktilde));
      roundtrip = std::max(roundtrip, (p2.y.log() - q.y.log()).norm() + (p2.z - q.z).norm());
      ++accepted;
    } catch (const NotInBigCell&) {
    }
  }

  return {make_check("bracket_identity", check_symplecto_g0(params, sample), 1e-6),
          make_check("psi0_roundtrips", roundtrip, 1e-8)};
}

namespace {

// ⟨W(f̄)φ, ψ⟩ = ⟨φ, W(f)ψ⟩ under the quadrature inner product; returns the
// relative defect.
Real adjoint_diagnostic(const PrincipalSeriesParams& params, const PSymbol& f,
                        const PSymbol& f_conj, std::uint64_t seed) {
  const RealizedAlgebra& g = params.algebra();
  Rng rng(seed);
  const TestFunction phi = TestFunction::random(rng, g, params.fiber().dim_e);
  const TestFunction psi_fn = TestFunction::random(rng, g, params.fiber().dim_e);
  std::vector<BarNPoint> points;
  std::vector<Real> weights;
  quadrature_grid(g, points, weights);

  Complex lhs = 0.0, rhs = 0.0;
  Real scale = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const CVector wf_phi = weyl_apply(f_conj, phi, points[i]);
    const CVector wf_psi = weyl_apply(f, psi_fn, points[i]);
    const CVector phi_v = phi.eval(points[i]);
    const CVector psi_v = psi_fn.eval(points[i]);
    lhs += weights[i] * wf_phi.dot(psi_v);
    rhs += weights[i] * phi_v.dot(wf_psi);
    scale += weights[i] * (phi_v.norm() * psi_v.norm() +
                           wf_phi.norm() * psi_v.norm());
  }
  return std::abs(lhs - rhs) / std::max(scale, 1e-30);
}

PSymbol conjugate_restricted(const RealizedAlgebra& g, const FiberRep& fiber,
                             const RestrictedSymbol& parts) {
  auto conj_of = [&](const ScalarCoeffPtr& c) -> ScalarCoeffPtr {
    if (!c) return nullptr;
    return lambda_coeff(g, [c](const BarNPoint& y) { return std::conj(c->eval(y)); });
  };
  RestrictedSymbol out;
  out.u = conj_of(parts.u);
  out.v.resize(parts.v.size());
  for (std::size_t a = 0; a < parts.v.size(); ++a) out.v[a] = conj_of(parts.v[a]);
  out.w.resize(parts.w.size());
  for (std::size_t k = 0; k < parts.w.size(); ++k) out.w[k] = conj_of(parts.w[k]);
  return PSymbol::from_restricted(g, fiber, std::move(out));
}

std::vector<CheckValue> adapted_structural_checks(const PrincipalSeriesParams& params,
                                                  std::uint64_t seed, const PSymbol& sample,
                                                  const PSymbol& sample_conj) {
  const RealizedAlgebra& g = params.algebra();
  Rng rng(seed);
  const FiberRep& fiber = params.fiber();

  RestrictedSymbol one_parts;
  one_parts.u = constant_coeff(1.0);
  const PSymbol one = PSymbol::from_restricted(g, fiber, std::move(one_parts));
  Real identity = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const TestFunction tf = TestFunction::random(rng, g, fiber.dim_e);
    const BarNPoint y = random_bar_n(rng, g);
    identity = std::max(identity, (weyl_apply(one, tf, y) - tf.eval(y)).norm());
  }

  const Real adjoint_defect =
      adjoint_diagnostic(params, sample, sample_conj, hash_combine(seed, "adjoint"));

  return {make_check("unit_symbol", identity, 1e-12),
          make_check("adjoint_diagnostic", adjoint_defect, 1e-3)};
}

}  // namespace

std::vector<CheckValue> prop53_checks(const PrincipalSeriesParams& params, std::uint64_t seed) {
  const RealizedAlgebra& g = params.algebra();
  Rng rng(seed);
  // complex combination of two algebra symbols exercises the conjugation
  const AlgebraElement x1 = random_element(rng, g), x2 = random_element(rng, g);
  const PSymbol fx1 = linear_symbol_g(params, x1);
  const PSymbol fx2 = linear_symbol_g(params, x2);
  RestrictedSymbol combined, combined_conj;
  combined.u = coeff_sum(fx1.restricted()->u, coeff_scale(kImag, fx2.restricted()->u));
  combined_conj.u =
      coeff_sum(fx1.restricted()->u, coeff_scale(-kImag, fx2.restricted()->u));
  combined.w.resize(g.nbar_dim());
  combined_conj.w.resize(g.nbar_dim());
  for (int k = 0; k < g.nbar_dim(); ++k) {
    combined.w[k] =
        coeff_sum(fx1.restricted()->w[k], coeff_scale(kImag, fx2.restricted()->w[k]));
    combined_conj.w[k] =
        coeff_sum(fx1.restricted()->w[k], coeff_scale(-kImag, fx2.restricted()->w[k]));
  }
  const PSymbol f = PSymbol::from_restricted(g, params.fiber(), std::move(combined));
  const PSymbol fc = PSymbol::from_restricted(g, params.fiber(), std::move(combined_conj));
  return adapted_structural_checks(params, seed, f, fc);
}

std::vector<CheckValue> prop63_checks(const PrincipalSeriesParams& params, std::uint64_t seed) {
  const RealizedAlgebra& g = params.algebra();
  Rng rng(seed);
  const AlgebraElement v = random_in(rng, g, Subspace::VCartan);
  const AlgebraElement u = random_in(rng, g, Subspace::KCartan);
  const AlgebraElement v2 = random_in(rng, g, Subspace::VCartan);
  const AlgebraElement u2 = random_in(rng, g, Subspace::KCartan);
  const PSymbol f1 = linear_symbol_g0(params, v, u);
  const PSymbol f2 = linear_symbol_g0(params, v2, u2);
  RestrictedSymbol combined, combined_conj;
  combined.u = coeff_sum(f1.restricted()->u, coeff_scale(kImag, f2.restricted()->u));
  combined_conj.u = coeff_sum(f1.restricted()->u, coeff_scale(-kImag, f2.restricted()->u));
  combined.w.resize(g.nbar_dim());
  combined_conj.w.resize(g.nbar_dim());
  for (int k = 0; k < g.nbar_dim(); ++k) {
    combined.w[k] =
        coeff_sum(f1.restricted()->w[k], coeff_scale(kImag, f2.restricted()->w[k]));
    combined_conj.w[k] =
        coeff_sum(f1.restricted()->w[k], coeff_scale(-kImag, f2.restricted()->w[k]));
  }
  const PSymbol f = PSymbol::from_restricted(g, params.fiber(), std::move(combined));
  const PSymbol fc = PSymbol::from_restricted(g, params.fiber(), std::move(combined_conj));
  return adapted_structural_checks(params, seed, f, fc);
}

namespace {

SweepChecks summarize_sweep(SweepReport report, Real extra_aux_tol = 0.0) {
  SweepChecks out;
  out.checks.push_back(make_check(report.check_id + "_final_ratio", report.final_ratio, 1e-3));
  out.checks.push_back(
      make_check(report.check_id + "_monotone", report.monotone ? 0.0 : 1.0, 0.5));
  if (report.slope)
    out.checks.push_back(make_check(report.check_id + "_slope_deviation",
                                    std::abs(*report.slope - 1.0), 0.3));
  else
    out.checks.push_back(make_check(report.check_id + "_slope_present", 1.0, 0.5));
  if (report.aux_residual)
    out.checks.push_back(
        make_check(report.check_id + "_" + report.aux_label, *report.aux_residual,
                   extra_aux_tol > 0 ? extra_aux_tol : 1e-10));
  out.sweeps.push_back(std::move(report));
  return out;
}

void append(SweepChecks& into, SweepChecks&& from) {
  for (auto& c : from.checks) into.checks.push_back(std::move(c));
  for (auto& s : from.sweeps) into.sweeps.push_back(std::move(s));
}

}  // namespace

SweepChecks prop71_checks(const PrincipalSeriesParams& params, const std::vector<Real>& grid,
                          std::uint64_t seed) {
  ContractionScenario sc = ContractionScenario::standard(params, seed);
  sc.r_grid = grid;
  return summarize_sweep(check_prop_7_1(sc));
}

SweepChecks prop81_checks(const PrincipalSeriesParams& params, const std::vector<Real>& grid,
                          std::uint64_t seed) {
  ContractionScenario sc = ContractionScenario::standard(params, seed);
  sc.r_grid = grid;
  return summarize_sweep(check_prop_8_1(sc));
}

SweepChecks prop83_checks(const PrincipalSeriesParams& params, const std::vector<Real>& grid,
                          std::uint64_t seed) {
  ContractionScenario sc = ContractionScenario::standard(params, seed);
  sc.r_grid = grid;
  const Prop83Report rep = check_prop_8_3(sc);
  SweepChecks out = summarize_sweep(rep.coefficients);
  append(out, summarize_sweep(rep.operators));
  return out;
}

// ---------------------------------------------------------------------------
// suite dispatch
// ---------------------------------------------------------------------------

namespace {

SuiteResult summarize(std::string id, std::vector<CheckValue> checks,
                      std::vector<SweepReport> sweeps = {}) {
  SuiteResult result;
  result.id = std::move(id);
  result.checks = std::move(checks);
  result.sweeps = std::move(sweeps);
  result.pass = true;
  Real worst_ratio = -1.0;
  std::ostringstream details;
  for (std::size_t i = 0; i < result.checks.size(); ++i) {
    const CheckValue& c = result.checks[i];
    result.pass = result.pass && c.pass;
    const Real ratio = c.tolerance > 0 ? c.residual / c.tolerance : (c.pass ? 0.0 : 2.0);
    if (ratio > worst_ratio) {
      worst_ratio = ratio;
      result.max_residual = c.residual;
      result.tolerance = c.tolerance;
    }
    if (i) details << "; ";
    details.precision(3);
    details << c.name << "=" << std::scientific << c.residual;
  }
  result.details = details.str();
  return result;
}

}  // namespace

SuiteResult run_suite(const RunContext& ctx, const std::string& id) {
  const std::uint64_t seed = ctx.suite_seed(id);
  const RealizedAlgebra& g = ctx.algebra();

  if (id == "algebra") {
    auto checks = structure_checks(g, seed);
    for (auto& c : factorization_checks(g, hash_combine(seed, "fact"))) checks.push_back(c);
    return summarize(id, std::move(checks));
  }
  if (id == "lemma31") return summarize(id, lemma31_checks(g, ctx.params().xi1(), seed));
  if (id == "lemma21") return summarize(id, lemma21_checks(g, seed));
  if (id == "prop22") return summarize(id, pi_checks(ctx.params(), seed));
  if (id == "prop33") return summarize(id, pi0_checks(ctx.params(), seed));
  if (id == "prop41") {
    std::vector<FiberRep> extra;
    if (ctx.config().fiber == "spin-j") extra.push_back(FiberRep::spin(ctx.config().spin_j));
    return summarize(id, berezin_checks(g, seed, extra));
  }
  if (id == "lemma42") return summarize(id, lemma42_checks(g, seed));
  if (id == "lemma43")
    return summarize(id, lemma43_checks(g, seed, ctx.tolerance(id, 1e-6)));
  if (id == "prop51") return summarize(id, prop51_checks(ctx.params(), seed));
  if (id == "prop52") return summarize(id, prop52_checks(ctx.params(), seed));
  if (id == "prop61") return summarize(id, prop61_checks(ctx.params(), seed));
  if (id == "prop62") return summarize(id, prop62_checks(ctx.params(), seed));
  if (id == "prop53") return summarize(id, prop53_checks(ctx.params(), seed));
  if (id == "prop63") return summarize(id, prop63_checks(ctx.params(), seed));
  if (id == "prop71") {
    auto sw = prop71_checks(ctx.params(), ctx.r_grid(), seed);
    return summarize(id, std::move(sw.checks), std::move(sw.sweeps));
  }
  if (id == "prop81") {
    auto sw = prop81_checks(ctx.params(), ctx.r_grid(), seed);
    return summarize(id, std::move(sw.checks), std::move(sw.sweeps));
  }
  if (id == "prop83") {
    auto sw = prop83_checks(ctx.params(), ctx.r_grid(), seed);
    return summarize(id, std::move(sw.checks), std::move(sw.sweeps));
  }
  throw std::logic_error("unknown suite '" + id + "'");
}

std::vector<SuiteResult> run_selected(const RunContext& ctx) {
  std::vector<SuiteResult> results;
  // execute in registry order regardless of selection order
  for (const auto& id : suite_registry())
    if (std::find(ctx.selected_suites().begin(), ctx.selected_suites().end(), id) !=
        ctx.selected_suites().end())
      results.push_back(run_suite(ctx, id));
  return results;
}

nlohmann::json report_to_json(const RunContext& ctx, const std::vector<SuiteResult>& results,
                              const std::string& timestamp) {
  nlohmann::json suites = nlohmann::json::object();
  for (const auto& r : results) {
    nlohmann::json entry;
    entry["status"] = r.pass ? "pass" : "fail";
    entry["max_residual"] = r.max_residual;
    entry["tolerance"] = r.tolerance;
    entry["details"] = r.details;
    if (!r.sweeps.empty()) {
      nlohmann::json sweeps = nlohmann::json::array();
      for (const auto& s : r.sweeps) sweeps.push_back(sweep_to_json(s));
      entry["sweeps"] = std::move(sweeps);
    }
    suites[r.id] = std::move(entry);
  }
  nlohmann::json out;
  out["meta"] = {{"realization", ctx.config().realization},
                 {"seed", ctx.config().seed},
                 {"fiber", ctx.config().fiber},
                 {"timestamp", timestamp}};
  out["suites"] = std::move(suites);
  return out;
}

}  // namespace corbit
