#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "corbit/contract.hpp"
#include "corbit/io.hpp"

namespace corbit {

/// Configuration failure; collects every violated field.
struct ConfigError : std::runtime_error {
  explicit ConfigError(std::vector<std::string> violations_);
  std::vector<std::string> violations;
};

/// One verification run: realization, representation parameters, seed,
/// per-suite tolerance overrides, the r-grid of the contraction sweeps and the
/// selected suites.
struct RunConfig {
  std::string realization = "sl2";
  std::vector<Real> xi1_a;  ///< 𝔞-coordinates; empty selects a default regular element
  std::vector<Real> xi2_m;  ///< 𝔪-coordinates; must be empty for sl(n)
  std::string fiber = "trivial-character";  ///< trivial-character | sign-character | spin-j
  Real spin_j = 0.5;
  std::uint64_t seed = 1;
  std::map<std::string, Real> tolerance_overrides;
  std::vector<Real> r_grid;  ///< empty selects 2⁰ … 2⁻¹⁰
  /// absent selects the full registry; an explicitly empty list runs nothing
  std::optional<std::vector<std::string>> suites;
  std::string report_path = "report.json";
  std::string sweeps_path = "sweeps.csv";

  static RunConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

/// The closed suite registry, in execution/report order.
const std::vector<std::string>& suite_registry();

struct CheckValue {
  std::string name;
  Real residual = 0.0;
  Real tolerance = 0.0;
  bool pass = false;
};

struct SuiteResult {
  std::string id;
  bool pass = false;
  Real max_residual = 0.0;  ///< residual of the worst subcheck (by residual/tolerance)
  Real tolerance = 0.0;     ///< that subcheck's tolerance
  std::string details;      ///< "name=residual/tolerance" per subcheck
  std::vector<CheckValue> checks;
  std::vector<SweepReport> sweeps;
};

/// Owns the realization and parameters for a validated config.
class RunContext {
 public:
  explicit RunContext(RunConfig config);  ///< throws ConfigError listing all violations

  const RunConfig& config() const { return config_; }
  const RealizedAlgebra& algebra() const { return *alg_; }
  const PrincipalSeriesParams& params() const { return *params_; }
  std::uint64_t suite_seed(const std::string& suite) const;
  Real tolerance(const std::string& suite, Real fallback) const;
  const std::vector<Real>& r_grid() const { return grid_; }
  const std::vector<std::string>& selected_suites() const { return selected_; }

 private:
  RunConfig config_;
  std::shared_ptr<const RealizedAlgebra> alg_;
  std::optional<PrincipalSeriesParams> params_;
  std::vector<Real> grid_;
  std::vector<std::string> selected_;
};

SuiteResult run_suite(const RunContext& ctx, const std::string& id);
std::vector<SuiteResult> run_selected(const RunContext& ctx);

nlohmann::json report_to_json(const RunContext& ctx, const std::vector<SuiteResult>& results,
                              const std::string& timestamp);

// ---- granular check packs (shared with the acceptance runner) -------------

std::vector<CheckValue> structure_checks(const RealizedAlgebra& g, std::uint64_t seed);
std::vector<CheckValue> factorization_checks(const RealizedAlgebra& g, std::uint64_t seed);
std::vector<CheckValue> lemma31_checks(const RealizedAlgebra& g, const AlgebraElement& xi1,
                                       std::uint64_t seed);
std::vector<CheckValue> lemma21_checks(const RealizedAlgebra& g, std::uint64_t seed);
std::vector<CheckValue> pi_checks(const PrincipalSeriesParams& params, std::uint64_t seed);
std::vector<CheckValue> pi0_checks(const PrincipalSeriesParams& params, std::uint64_t seed);
/// Berezin properties for the character backends of g plus spin j ∈ {½,1,3/2}
/// and any extra backends (the configured one, for instance).
std::vector<CheckValue> berezin_checks(const RealizedAlgebra& g, std::uint64_t seed,
                                       const std::vector<FiberRep>& extra = {});
std::vector<CheckValue> lemma42_checks(const RealizedAlgebra& g, std::uint64_t seed);
std::vector<CheckValue> lemma43_checks(const RealizedAlgebra& g, std::uint64_t seed, Real tol);
std::vector<CheckValue> prop51_checks(const PrincipalSeriesParams& params, std::uint64_t seed);
std::vector<CheckValue> prop52_checks(const PrincipalSeriesParams& params, std::uint64_t seed);
std::vector<CheckValue> prop53_checks(const PrincipalSeriesParams& params, std::uint64_t seed);
std::vector<CheckValue> prop61_checks(const PrincipalSeriesParams& params, std::uint64_t seed);
std::vector<CheckValue> prop62_checks(const PrincipalSeriesParams& params, std::uint64_t seed);
std::vector<CheckValue> prop63_checks(const PrincipalSeriesParams& params, std::uint64_t seed);

struct SweepChecks {
  std::vector<CheckValue> checks;
  std::vector<SweepReport> sweeps;
};

SweepChecks prop71_checks(const PrincipalSeriesParams& params, const std::vector<Real>& grid,
                          std::uint64_t seed);
SweepChecks prop81_checks(const PrincipalSeriesParams& params, const std::vector<Real>& grid,
                          std::uint64_t seed);
SweepChecks prop83_checks(const PrincipalSeriesParams& params, const std::vector<Real>& grid,
                          std::uint64_t seed);

}  // namespace corbit
