// kdq: work statistics of quadratic fermionic chains from the command line.

#include "kdq/config.hpp"
#include "kdq/error.hpp"
#include "kdq/kdq.hpp"
#include "kdq/observables.hpp"
#include "kdq/oracle.hpp"
#include "kdq/sweep.hpp"
#include "kdq/witness.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

using nlohmann::json;

namespace {

struct ModelFlags {
    std::string config;
    std::optional<double> beta, h0, h1, h2, delta;
    std::optional<int> gauss_n, chain_L;
    bool quench = false;

    void attach(CLI::App* app) {
        app->add_option("--config", config, "run configuration (JSON)");
        app->add_option("--beta", beta, "inverse temperature");
        app->add_option("--h0", h0, "field of the initial thermal state");
        app->add_option("--h1", h1, "field at the start of the protocol");
        app->add_option("--h2", h2, "field at the end of the protocol");
        app->add_option("--delta", delta, "linear ramp speed (selects the ramp protocol)");
        app->add_flag("--quench", quench, "force a sudden quench");
        app->add_option("--gauss", gauss_n, "Gauss-Legendre node count");
        app->add_option("--chain", chain_L, "finite chain length (antiperiodic momenta)");
    }

    kdq::RunConfig resolve() const {
        kdq::RunConfig cfg = config.empty() ? kdq::parse_run_config(json::object()) : kdq::load_run_config(config);
        if (beta) cfg.model.beta = *beta;
        if (h0) cfg.model.h0 = *h0;
        if (h1) cfg.model.h1 = *h1;
        if (h2) cfg.model.h2 = *h2;
        if (delta) cfg.model.protocol = kdq::LinearRamp{*delta};
        if (quench) cfg.model.protocol = kdq::SuddenQuench{};
        if (gauss_n) cfg.grid = {kdq::GridKind::GaussLegendre, *gauss_n};
        if (chain_L) cfg.grid = {kdq::GridKind::FiniteChain, *chain_L};
        cfg.model.validate();
        return cfg;
    }
};

kdq::Scheme parse_scheme(const std::string& s) {
    if (s == "kdq") return kdq::Scheme::KDQ;
    if (s == "tpm") return kdq::Scheme::TPM;
    throw kdq::Error(kdq::ErrorKind::ConfigError, "unknown scheme '" + s + "'");
}

json cjson(kdq::cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

std::string recipe_path(const std::string& name) {
    if (std::filesystem::exists(name)) return name;
    std::string dir = KDQ_RECIPE_DIR;
    if (const char* env = std::getenv("KDQ_RECIPE_DIR")) dir = env;
    const auto path = std::filesystem::path(dir) / (name + ".json");
    if (!std::filesystem::exists(path)) {
        throw kdq::Error(kdq::ErrorKind::ConfigError, "no recipe named '" + name + "' in " + dir);
    }
    return path.string();
}

void print_json(const json& j) { std::cout << j.dump(2) << '\n'; }

int fail(std::string_view kind, const std::string& message, int code) {
    std::cerr << json{{"error", kind}, {"message", message}}.dump() << '\n';
    return code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kirkwood-Dirac and two-point-measurement work statistics for quadratic fermionic chains"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kdq::version()));

    // sweep
    auto* sweep = app.add_subcommand("sweep", "evaluate observables on an (h0, h1) grid");
    std::string sweep_config, recipe, out_dir = ".";
    std::vector<std::string> formats;
    int threads = 0;
    sweep->add_option("--config", sweep_config, "sweep configuration (JSON)");
    sweep->add_option("--recipe", recipe, "name of a shipped figure recipe");
    sweep->add_option("--out", out_dir, "output directory");
    sweep->add_option("--threads", threads, "worker threads (default: KDQ_THREADS or 1)");
    sweep->add_option("--format", formats, "csv, json or png (repeatable)")
        ->check(CLI::IsMember({"csv", "json", "png"}));

    // gfunc
    auto* gfunc = app.add_subcommand("gfunc", "tabulate G(u) on a u grid");
    ModelFlags gflags;
    gflags.attach(gfunc);
    double u_min = 0.0, u_max = 2.0;
    int u_count = 21;
    std::string scheme_name = "kdq";
    gfunc->add_option("--u-min", u_min, "first u value");
    gfunc->add_option("--u-max", u_max, "last u value");
    gfunc->add_option("--u-count", u_count, "number of u values")->check(CLI::PositiveNumber);
    gfunc->add_option("--scheme", scheme_name, "quasiprobability (kdq) or two-point measurement (tpm)")->check(CLI::IsMember({"kdq", "tpm"}));

    // moments
    auto* moments = app.add_subcommand("moments", "work cumulant densities from the per-mode distributions");
    ModelFlags mflags;
    mflags.attach(moments);
    std::string mscheme = "kdq";
    moments->add_option("--scheme", mscheme, "quasiprobability (kdq) or two-point measurement (tpm)")->check(CLI::IsMember({"kdq", "tpm"}));

    // witness
    auto* witness = app.add_subcommand("witness", "non-classicality witnesses");
    ModelFlags wflags;
    wflags.attach(witness);

    // oracle-check
    auto* oracle = app.add_subcommand("oracle-check", "compare against the dense many-body reference");
    ModelFlags oflags;
    oflags.attach(oracle);
    int oracle_L = 8;
    double oracle_tol = 1e-8;
    oracle->add_option("--L", oracle_L, "chain length for the dense reference");
    oracle->add_option("--tol", oracle_tol, "allowed |G_dense - G_momentum|");

    // coherence
    auto* coherence = app.add_subcommand("coherence", "relative entropy of coherence density");
    ModelFlags cflags;
    cflags.attach(coherence);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        return fail("UsageError", e.what(), 2);
    }

    try {
        if (*sweep) {
            if (sweep_config.empty() == recipe.empty()) {
                throw kdq::Error(kdq::ErrorKind::ConfigError, "give exactly one of --config or --recipe");
            }
            auto cfg = kdq::load_sweep_config(recipe.empty() ? sweep_config : recipe_path(recipe));
            cfg.threads = kdq::resolve_threads(threads);
            cfg.output_path = out_dir;
            if (formats.empty()) formats.push_back("csv");
            const auto res = kdq::run_sweep(cfg);
            json written = json::array();
            bool png_done = false;
            for (const auto& f : formats) {
                const auto fmt = kdq::parse_format(f);
                png_done = png_done || fmt == kdq::Format::PNG;
                for (const auto& p : kdq::emit(res, fmt, out_dir, cfg.name)) written.push_back(p);
            }
            if (cfg.emit_png && !png_done) {
                for (const auto& p : kdq::emit(res, kdq::Format::PNG, out_dir, cfg.name)) written.push_back(p);
            }
            std::size_t failed = 0;
            for (const auto& r : res.rows) failed += !r.error.empty();
            print_json({{"written", written}, {"rows", res.rows.size()}, {"failed_cells", failed},
                        {"wall_time_s", res.metadata["wall_time_s"]}});
        } else if (*gfunc) {
            const auto cfg = gflags.resolve();
            const auto grid = cfg.grid.build();
            const auto props = kdq::build_propagators(cfg.model, grid, cfg.ode);
            const auto scheme = parse_scheme(scheme_name);
            std::printf("u,re,im\n");
            for (int k = 0; k < u_count; ++k) {
                const double u = u_count == 1 ? u_min : u_min + (u_max - u_min) * k / (u_count - 1);
                const auto g = kdq::char_function(cfg.model, grid, props, u, scheme);
                std::printf("%.17g,%.17g,%.17g\n", u, g.real(), g.imag());
            }
        } else if (*moments) {
            const auto cfg = mflags.resolve();
            const auto grid = cfg.grid.build();
            const auto props = kdq::build_propagators(cfg.model, grid, cfg.ode);
            const auto m = kdq::work_moments(cfg.model, grid, props, parse_scheme(mscheme));
            print_json({{"mean", m.mean},
                        {"variance", cjson(m.variance)},
                        {"third_cumulant", cjson(m.third_cumulant)},
                        {"fourth_cumulant", cjson(m.fourth_cumulant)},
                        {"fourth_central", cjson(m.fourth_central)}});
        } else if (*witness) {
            const auto cfg = wflags.resolve();
            const auto grid = cfg.grid.build();
            const auto props = kdq::build_propagators(cfg.model, grid, cfg.ode);
            const auto rep = kdq::scan_nonclassicality(cfg.model, grid, props, kdq::default_u_samples());
            print_json({{"max_imag_witness", rep.max_imag_witness},
                        {"mu4_real", rep.mu4_real},
                        {"mu4_imag_abs", rep.mu4_imag_abs},
                        {"nonclassical_imag", rep.nonclassical_imag},
                        {"nonclassical_negativity", rep.nonclassical_negativity}});
        } else if (*oracle) {
            auto cfg = oflags.resolve();
            const auto grid = kdq::MomentumGrid::finite_chain(oracle_L);
            const auto props = kdq::build_propagators(cfg.model, grid, cfg.ode);
            const auto sys = kdq::build_dense(cfg.model, oracle_L);
            std::vector<kdq::cplx> us;
            for (int k = 1; k <= 10; ++k) us.emplace_back(0.2 * k);
            const auto dense = kdq::dense_char_function(sys, us);
            double worst = 0.0;
            json samples = json::array();
            for (std::size_t k = 0; k < us.size(); ++k) {
                const auto mom = kdq::char_function(cfg.model, grid, props, us[k]);
                worst = std::max(worst, std::abs(mom - dense[k]));
                samples.push_back({{"u", us[k].real()}, {"dense", cjson(dense[k])}, {"momentum", cjson(mom)}});
            }
            const double w_dense = kdq::dense_mean_work(sys);
            const double w_mom = kdq::mean_work_density(cfg.model, grid, props) * oracle_L;
            const bool ok = worst <= oracle_tol;
            print_json({{"L", oracle_L},
                        {"max_abs_diff", worst},
                        {"tolerance", oracle_tol},
                        {"pass", ok},
                        {"mean_work_dense", w_dense},
                        {"mean_work_momentum", w_mom},
                        {"samples", samples}});
            if (!ok) return fail("OracleMismatch", "dense and momentum G(u) differ by " + std::to_string(worst), 3);
        } else if (*coherence) {
            const auto cfg = cflags.resolve();
            const auto grid = cfg.grid.build();
            print_json({{"coherence_entropy", kdq::coherence_entropy_density(cfg.model, grid)},
                        {"qbar01", kdq::mean_overlap_qbar(cfg.model, grid, cfg.model.h0, cfg.model.h1)}});
        }
    } catch (const kdq::Error& e) {
        return fail(kdq::to_string(e.kind()), e.what(), 1);
    } catch (const std::exception& e) {
        return fail("InternalError", e.what(), 1);
    }
    return 0;
}
