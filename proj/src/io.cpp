#include "corbit/io.hpp"

#include <sstream>

namespace corbit {

nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix json_to_matrix(const nlohmann::json& j) {
  if (!j.is_array() || j.empty() || !j.front().is_array())
    throw std::invalid_argument("expected a nested array of numbers");
  const int rows = static_cast<int>(j.size());
  const int cols = static_cast<int>(j.front().size());
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (static_cast<int>(j[i].size()) != cols)
      throw std::invalid_argument("ragged matrix rows");
    for (int c = 0; c < cols; ++c) m(i, c) = j[i][c].get<double>();
  }
  return m;
}

namespace {

nlohmann::json vector_to_json(const Vector& v) {
  nlohmann::json out = nlohmann::json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

// Index list when every column is a signed coordinate unit vector, otherwise
// the coordinate columns themselves.
nlohmann::json subspace_to_json(const Matrix& basis) {
  nlohmann::json indices = nlohmann::json::array();
  bool unit_aligned = true;
  for (int c = 0; c < basis.cols() && unit_aligned; ++c) {
    int hits = 0, where = -1;
    for (int r = 0; r < basis.rows(); ++r)
      if (basis(r, c) != 0.0) {
        ++hits;
        where = r;
      }
    if (hits == 1 && std::abs(basis(where, c)) == 1.0)
      indices.push_back(where);
    else
      unit_aligned = false;
  }
  if (unit_aligned) return nlohmann::json{{"basis_indices", indices}};
  nlohmann::json cols = nlohmann::json::array();
  for (int c = 0; c < basis.cols(); ++c) cols.push_back(vector_to_json(basis.col(c)));
  return nlohmann::json{{"columns", cols}};
}

}  // namespace

nlohmann::json algebra_to_json(const RealizedAlgebra& g) {
  nlohmann::json out;
  out["name"] = g.name;
  out["dim_matrix"] = g.dim_matrix;
  out["dim"] = g.dim;

  nlohmann::json basis = nlohmann::json::array();
  for (const Matrix& b : g.basis) {
    nlohmann::json flat = nlohmann::json::array();
    for (int i = 0; i < b.rows(); ++i)
      for (int j = 0; j < b.cols(); ++j) flat.push_back(b(i, j));
    basis.push_back(std::move(flat));
  }
  out["basis_row_major"] = std::move(basis);

  nlohmann::json triples = nlohmann::json::array();
  for (int i = 0; i < g.dim; ++i)
    for (int j = 0; j < g.dim; ++j)
      for (int k = 0; k < g.dim; ++k) {
        const Real c = g.structure_constant(i, j, k);
        if (c != 0.0) triples.push_back(nlohmann::json::array({i, j, k, c}));
      }
  out["structure_constants"] = std::move(triples);

  out["killing"] = matrix_to_json(g.killing_matrix);
  out["theta"] = matrix_to_json(g.theta_matrix);
  out["subspaces"] = {
      {"k", subspace_to_json(g.basis_k)},     {"V", subspace_to_json(g.basis_V)},
      {"a", subspace_to_json(g.basis_a)},     {"m", subspace_to_json(g.basis_m)},
      {"n", subspace_to_json(g.basis_n)},     {"nbar", subspace_to_json(g.basis_nbar)}};

  nlohmann::json roots = nlohmann::json::array();
  for (const auto& r : g.roots) {
    nlohmann::json entry;
    entry["on_a"] = vector_to_json(r.on_a.transpose());
    entry["multiplicity"] = r.multiplicity;
    entry["positive"] = r.positive;
    entry["space"] = matrix_to_json(r.space);
    roots.push_back(std::move(entry));
  }
  out["roots"] = std::move(roots);
  out["rho_on_a"] = vector_to_json(g.rho_on_a.transpose());
  out["nbar_onb"] = matrix_to_json(g.nbar_onb);
  return out;
}

nlohmann::json sweep_to_json(const SweepReport& report) {
  nlohmann::json out;
  out["check_id"] = report.check_id;
  out["seed"] = report.seed;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows)
    rows.push_back({{"r", row.r}, {"max_error", row.max_error}, {"probes", row.probe_count}});
  out["rows"] = std::move(rows);
  if (report.slope) out["slope"] = *report.slope;
  if (report.slope_residual) out["slope_residual"] = *report.slope_residual;
  out["monotone"] = report.monotone;
  out["final_ratio"] = report.final_ratio;
  if (report.aux_residual) {
    out["aux_label"] = report.aux_label;
    out["aux_residual"] = *report.aux_residual;
  }
  return out;
}

std::string sweeps_to_csv(const std::vector<SweepReport>& reports) {
  std::ostringstream out;
  out << "check_id,r,max_error,probe_count\n";
  out.precision(17);
  for (const auto& report : reports)
    for (const auto& row : report.rows)
      out << report.check_id << ',' << row.r << ',' << row.max_error << ',' << row.probe_count
          << '\n';
  return out.str();
}

}  // namespace corbit
