#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "corbit/io.hpp"
#include "corbit/suites.hpp"

namespace {

namespace fs = std::filesystem;

std::string now_iso8601() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
  return buf;
}

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw corbit::ConfigError({"config: cannot open '" + path + "'"});
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw corbit::ConfigError({std::string("config: invalid JSON: ") + e.what()});
  }
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  out << text;
}

int run_verify(const std::string& config_path, const std::vector<std::string>& suite_override,
               std::optional<std::uint64_t> seed_override, const std::string& out_dir) {
  corbit::RunConfig config = corbit::RunConfig::from_json(load_json(config_path));
  if (!suite_override.empty()) config.suites = suite_override;
  if (seed_override) config.seed = *seed_override;

  const corbit::RunContext ctx(config);
  const std::vector<corbit::SuiteResult> results = corbit::run_selected(ctx);

  const nlohmann::json report = corbit::report_to_json(ctx, results, now_iso8601());
  const fs::path base = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
  write_text(base / config.report_path, report.dump(2) + "\n");

  std::vector<corbit::SweepReport> sweeps;
  for (const auto& r : results)
    for (const auto& s : r.sweeps) sweeps.push_back(s);
  if (!sweeps.empty()) write_text(base / config.sweeps_path, corbit::sweeps_to_csv(sweeps));

  bool all_pass = true;
  for (const auto& r : results) {
    std::cout << (r.pass ? "pass" : "FAIL") << "  " << r.id << "  max_residual "
              << r.max_residual << " (tolerance " << r.tolerance << ")\n";
    all_pass = all_pass && r.pass;
  }
  std::cout << (all_pass ? "all selected suites passed" : "some suites FAILED") << "\n";
  return all_pass ? 0 : 1;
}

int run_inspect(const std::string& realization) {
  corbit::RunConfig config;
  config.realization = realization;
  config.suites = {"algebra"};  // context validation only
  const corbit::RunContext ctx(config);
  std::cout << corbit::algebra_to_json(ctx.algebra()).dump(2) << "\n";
  return 0;
}

int run_decompose(const std::string& matrix_json) {
  const nlohmann::json j = nlohmann::json::parse(matrix_json);
  const corbit::Matrix m = corbit::json_to_matrix(j);
  if (m.rows() != m.cols() || m.rows() < 2 || m.rows() > 4)
    throw std::invalid_argument("decompose: expected a square matrix of size 2..4");
  const auto alg = corbit::make_sl(static_cast<int>(m.rows()));
  const corbit::GroupElement g = corbit::group_element(*alg, m);

  nlohmann::json out;
  const corbit::IwasawaFactors iw = corbit::iwasawa(g);
  out["iwasawa"] = {{"ktilde", corbit::matrix_to_json(iw.ktilde.m)},
                    {"atilde", corbit::matrix_to_json(iw.atilde.m)},
                    {"ntilde", corbit::matrix_to_json(iw.ntilde.m)},
                    {"log_atilde", corbit::matrix_to_json(iw.log_atilde.matrix())}};
  try {
    const corbit::BruhatFactors bf = corbit::bruhat(g);
    out["bruhat"] = {{"nbar", corbit::matrix_to_json(bf.nbar.matrix())},
                     {"m", corbit::matrix_to_json(bf.m.m)},
                     {"a", corbit::matrix_to_json(bf.a.m)},
                     {"n", corbit::matrix_to_json(bf.n.m)},
                     {"log_a", corbit::matrix_to_json(bf.log_a.matrix())}};
  } catch (const corbit::NotInBigCell&) {
    out["bruhat"] = "not in the big cell";
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int run_contract_sweep(const std::string& config_path, const std::string& out_dir) {
  corbit::RunConfig config = corbit::RunConfig::from_json(load_json(config_path));
  config.suites = {"prop71", "prop81", "prop83"};
  const corbit::RunContext ctx(config);
  const std::vector<corbit::SuiteResult> results = corbit::run_selected(ctx);

  const fs::path base = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
  const nlohmann::json report = corbit::report_to_json(ctx, results, now_iso8601());
  write_text(base / config.report_path, report.dump(2) + "\n");
  std::vector<corbit::SweepReport> sweeps;
  for (const auto& r : results)
    for (const auto& s : r.sweeps) sweeps.push_back(s);
  write_text(base / config.sweeps_path, corbit::sweeps_to_csv(sweeps));

  bool all_pass = true;
  for (const auto& r : results) {
    all_pass = all_pass && r.pass;
    std::cout << (r.pass ? "pass" : "FAIL") << "  " << r.id << "\n";
  }
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"verification toolkit for principal-series contraction on coadjoint orbits"};
  app.require_subcommand(1);

  std::string config_path, out_dir, realization = "sl2", matrix_json;
  std::vector<std::string> suites;
  std::optional<std::uint64_t> seed;

  auto* verify = app.add_subcommand("verify", "run verification suites from a config");
  verify->add_option("--config", config_path, "JSON config path")->required();
  verify->add_option("--suite", suites, "run only the named suites");
  verify->add_option("--seed", seed, "override the config seed");
  verify->add_option("--out", out_dir, "output directory for reports");

  auto* algebra = app.add_subcommand("algebra", "algebra utilities");
  auto* inspect = algebra->add_subcommand("inspect", "dump the structural data as JSON");
  inspect->add_option("--realization", realization, "sl2, sl3 or sl4")->required();

  auto* decompose = app.add_subcommand("decompose", "Iwasawa and Bruhat factorizations");
  decompose->add_option("--g", matrix_json, "group matrix as a JSON array of rows")->required();

  auto* contract = app.add_subcommand("contract", "contraction utilities");
  auto* sweep = contract->add_subcommand("sweep", "run the contraction sweeps");
  sweep->add_option("--config", config_path, "JSON config path")->required();
  sweep->add_option("--out", out_dir, "output directory for reports");

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed()) return run_verify(config_path, suites, seed, out_dir);
    if (inspect->parsed()) return run_inspect(realization);
    if (decompose->parsed()) return run_decompose(matrix_json);
    if (sweep->parsed()) return run_contract_sweep(config_path, out_dir);
  } catch (const corbit::ConfigError& e) {
    std::cerr << "configuration error:\n";
    for (const auto& v : e.violations) std::cerr << "  - " << v << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
