#include "kdq/config.hpp"

#include "kdq/error.hpp"

#include <fstream>

namespace kdq {

using nlohmann::json;

MomentumGrid GridSpec::build() const {
    return kind == GridKind::GaussLegendre ? MomentumGrid::gauss_legendre(size)
                                           : MomentumGrid::finite_chain(size);
}

namespace {

template <class T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ConfigError, std::string("bad value for '") + key + "': " + e.what());
    }
}

Protocol parse_protocol(const json& j) {
    if (!j.is_object()) throw Error(ErrorKind::ConfigError, "protocol must be an object");
    const auto type = get_or<std::string>(j, "type", "quench");
    if (type == "quench") return SuddenQuench{};
    if (type == "ramp") {
        if (!j.contains("delta")) throw Error(ErrorKind::ConfigError, "ramp protocol needs 'delta'");
        return LinearRamp{get_or<double>(j, "delta", 0.0)};
    }
    throw Error(ErrorKind::ConfigError, "unknown protocol type '" + type + "'");
}

GridSpec parse_grid(const json& j) {
    if (!j.is_object()) throw Error(ErrorKind::ConfigError, "grid must be an object");
    const auto kind = get_or<std::string>(j, "kind", "gauss");
    GridSpec g;
    if (kind == "gauss") {
        g.kind = GridKind::GaussLegendre;
        g.size = get_or<int>(j, "n", kDefaultGaussNodes);
        if (g.size < 1) throw Error(ErrorKind::ConfigError, "grid.n must be >= 1");
    } else if (kind == "chain") {
        g.kind = GridKind::FiniteChain;
        if (!j.contains("L")) throw Error(ErrorKind::ConfigError, "chain grid needs 'L'");
        g.size = get_or<int>(j, "L", 0);
        if (g.size < 2 || g.size % 2) throw Error(ErrorKind::ConfigError, "grid.L must be even and >= 2");
    } else {
        throw Error(ErrorKind::ConfigError, "unknown grid kind '" + kind + "'");
    }
    return g;
}

} // namespace

RunConfig parse_run_config(const json& j) {
    if (!j.is_object()) throw Error(ErrorKind::ConfigError, "configuration must be a JSON object");
    RunConfig cfg;
    auto& m = cfg.model;
    m.hopping = get_or<std::vector<double>>(j, "hopping", m.hopping);
    m.pairing = get_or<std::vector<double>>(j, "pairing", m.pairing);
    m.beta = get_or<double>(j, "beta", m.beta);
    m.h0 = get_or<double>(j, "h0", m.h0);
    m.h1 = get_or<double>(j, "h1", m.h1);
    m.h2 = get_or<double>(j, "h2", m.h2);
    if (j.contains("protocol")) m.protocol = parse_protocol(j.at("protocol"));
    if (j.contains("grid")) cfg.grid = parse_grid(j.at("grid"));
    if (j.contains("ode")) {
        const auto& o = j.at("ode");
        cfg.ode.rel_tol = get_or<double>(o, "rel_tol", cfg.ode.rel_tol);
        cfg.ode.abs_tol = get_or<double>(o, "abs_tol", cfg.ode.abs_tol);
        cfg.ode.max_steps = get_or<long>(o, "max_steps", cfg.ode.max_steps);
    }
    m.validate();
    cfg.ode.validate();
    return cfg;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::IOError, "cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::ConfigError, path + ": " + e.what());
    }
}

RunConfig load_run_config(const std::string& path) {
    return parse_run_config(read_json_file(path));
}

json to_json(const ModelSpec& spec) {
    json j;
    j["hopping"] = spec.hopping;
    j["pairing"] = spec.pairing;
    j["beta"] = spec.beta;
    j["h0"] = spec.h0;
    j["h1"] = spec.h1;
    j["h2"] = spec.h2;
    if (const auto* r = std::get_if<LinearRamp>(&spec.protocol)) {
        j["protocol"] = {{"type", "ramp"}, {"delta", r->delta}};
    } else {
        j["protocol"] = {{"type", "quench"}};
    }
    return j;
}

json to_json(const GridSpec& grid) {
    if (grid.kind == GridKind::GaussLegendre) return {{"kind", "gauss"}, {"n", grid.size}};
    return {{"kind", "chain"}, {"L", grid.size}};
}

json to_json(const RampIntegratorConfig& ode) {
    return {{"rel_tol", ode.rel_tol}, {"abs_tol", ode.abs_tol}, {"max_steps", ode.max_steps}};
}

} // namespace kdq
