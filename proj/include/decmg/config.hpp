#pragma once

#include "decmg/physics.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace decmg {

/// Full run configuration parsed from JSON. The schema is strict: unknown
/// keys anywhere in the document are rejected.
struct RunConfig {
    MeshSpec mesh;
    SubdivisionScheme scheme = SubdivisionScheme::Binary;
    int tower_levels = 3;
    SolverSpec solver;
    PoissonConfig::Rhs poisson_rhs = PoissonConfig::Rhs::Random;
    std::uint64_t seed = 0;
    ConvectionConfig convection;
    std::string output_dir = "out";
    std::vector<std::string> output_formats = {"csv"};

    PoissonConfig poisson_config() const;
    nlohmann::json echo() const;
};

/// Throws std::invalid_argument on schema violations (with the offending key).
RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);

SolverKind parse_solver_kind(const std::string& s);
SubdivisionScheme parse_scheme(const std::string& s);
std::string to_string(SolverKind k);
std::string to_string(SubdivisionScheme s);

} // namespace decmg
