#pragma once

#include "kdq/dynamics.hpp"
#include "kdq/model.hpp"

#include <json.hpp>

#include <string>

namespace kdq {

struct GridSpec {
    GridKind kind = GridKind::GaussLegendre;
    int size = kDefaultGaussNodes; // n for Gauss-Legendre, L for a finite chain

    MomentumGrid build() const;
};

struct RunConfig {
    ModelSpec model;
    GridSpec grid;
    RampIntegratorConfig ode;
};

// Keys: hopping, pairing, beta, h0, h1, h2, protocol, grid, ode. Missing keys keep
// the Ising defaults. Throws Error(ConfigError) on malformed input.
RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);

nlohmann::json read_json_file(const std::string& path);

nlohmann::json to_json(const ModelSpec& spec);
nlohmann::json to_json(const GridSpec& grid);
nlohmann::json to_json(const RampIntegratorConfig& ode);

} // namespace kdq
