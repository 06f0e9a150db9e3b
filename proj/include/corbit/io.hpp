#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "corbit/contract.hpp"

namespace corbit {

nlohmann::json matrix_to_json(const Matrix& m);  ///< row-major nested arrays
Matrix json_to_matrix(const nlohmann::json& j);

/// Full structural dump: basis (row-major), structure constants as sparse
/// (i,j,k,value) quadruples, Killing matrix, θ, subspaces (index lists when a
/// subspace basis consists of coordinate unit vectors, coordinate columns
/// otherwise), roots, ρ and the 𝔫̄ orthonormal basis.
nlohmann::json algebra_to_json(const RealizedAlgebra& g);

nlohmann::json sweep_to_json(const SweepReport& report);

/// CSV rows "check_id,r,max_error,probe_count" with a header line.
std::string sweeps_to_csv(const std::vector<SweepReport>& reports);

}  // namespace corbit
