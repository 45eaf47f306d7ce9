#include "kdq/sweep.hpp"

#include "kdq/error.hpp"
#include "kdq/heatmap.hpp"
#include "kdq/kdq.hpp"
#include "kdq/observables.hpp"
#include "kdq/witness.hpp"

#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

namespace kdq {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<Output, std::string_view>, 7> kOutputNames{{
    {Output::MeanW, "mean_w"},
    {Output::MeanWDephased, "mean_w_dephased"},
    {Output::Enhancement, "enhancement"},
    {Output::Qbar01, "qbar01"},
    {Output::CoherenceEntropy, "coherence_entropy"},
    {Output::Mu4, "mu4"},
    {Output::Witness, "witness"},
}};

Range parse_range(const json& j, const char* key) {
    if (!j.contains(key)) return Range{};
    const auto& r = j.at(key);
    if (!r.is_array() || r.size() != 3) {
        throw Error(ErrorKind::ConfigError, std::string("sweep.") + key + " must be [min, max, count]");
    }
    try {
        return Range{r[0].get<double>(), r[1].get<double>(), r[2].get<int>()};
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ConfigError, std::string("sweep.") + key + ": " + e.what());
    }
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& s) {
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') throw Error(ErrorKind::IOError, "bad numeric field '" + s + "'");
    return v;
}

bool is_signed(Output o) {
    return o != Output::CoherenceEntropy && o != Output::Witness;
}

} // namespace

std::string_view to_string(Output o) noexcept {
    for (const auto& [k, name] : kOutputNames)
        if (k == o) return name;
    return "unknown";
}

Output parse_output(std::string_view name) {
    for (const auto& [k, n] : kOutputNames)
        if (n == name) return k;
    throw Error(ErrorKind::ConfigError, "unknown output '" + std::string(name) + "'");
}

void SweepConfig::validate() const {
    base.validate();
    ode.validate();
    for (const Range* r : {&h0_range, &h1_range}) {
        if (r->count < 2) throw Error(ErrorKind::ConfigError, "sweep ranges need count >= 2");
        if (!std::isfinite(r->min) || !std::isfinite(r->max)) {
            throw Error(ErrorKind::ConfigError, "sweep ranges must be finite");
        }
    }
    if (outputs.empty()) throw Error(ErrorKind::ConfigError, "sweep needs at least one output");
    if (threads < 1) throw Error(ErrorKind::ConfigError, "threads must be >= 1");
}

SweepConfig parse_sweep_config(const json& j) {
    const auto run = parse_run_config(j);
    SweepConfig cfg;
    cfg.base = run.model;
    cfg.grid = run.grid;
    cfg.ode = run.ode;
    if (j.contains("name")) cfg.name = j.at("name").get<std::string>();
    if (!j.contains("sweep")) throw Error(ErrorKind::ConfigError, "missing 'sweep' block");
    const auto& s = j.at("sweep");
    cfg.h0_range = parse_range(s, "h0");
    cfg.h1_range = parse_range(s, "h1");
    if (s.contains("outputs")) {
        for (const auto& o : s.at("outputs")) cfg.outputs.push_back(parse_output(o.get<std::string>()));
    }
    if (s.contains("png")) cfg.emit_png = s.at("png").get<bool>();
    if (s.contains("threads")) cfg.threads = s.at("threads").get<int>();
    cfg.validate();
    return cfg;
}

SweepConfig load_sweep_config(const std::string& path) {
    return parse_sweep_config(read_json_file(path));
}

json to_json(const SweepConfig& cfg) {
    json j = to_json(cfg.base);
    j["name"] = cfg.name;
    j["grid"] = to_json(cfg.grid);
    j["ode"] = to_json(cfg.ode);
    std::vector<std::string> outs;
    for (auto o : cfg.outputs) outs.emplace_back(to_string(o));
    j["sweep"] = {
        {"h0", {cfg.h0_range.min, cfg.h0_range.max, cfg.h0_range.count}},
        {"h1", {cfg.h1_range.min, cfg.h1_range.max, cfg.h1_range.count}},
        {"outputs", outs},
        {"png", cfg.emit_png},
    };
    return j;
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers = std::min<std::size_t>(std::max(threads, 1), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = n;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

int resolve_threads(int requested) {
    if (requested >= 1) return requested;
    if (const char* env = std::getenv("KDQ_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) return static_cast<int>(v);
    }
    return 1;
}

SweepResult run_sweep(const SweepConfig& cfg) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    const auto grid = cfg.grid.build();
    const int n0 = cfg.h0_range.count;
    const int n1 = cfg.h1_range.count;

    // Propagators depend on h1 (and h2, delta) only.
    std::vector<PropagatorSet> props(n1);
    std::vector<std::string> prop_error(n1);
    parallel_for(n1, cfg.threads, [&](std::size_t j) {
        ModelSpec spec = cfg.base;
        spec.h1 = cfg.h1_range.at(static_cast<int>(j));
        try {
            props[j] = build_propagators(spec, grid, cfg.ode);
        } catch (const Error& e) {
            prop_error[j] = std::string(to_string(e.kind()));
        }
    });

    bool want_obs = false, want_mu4 = false, want_witness = false;
    for (auto o : cfg.outputs) {
        if (o == Output::Mu4) want_mu4 = true;
        else if (o == Output::Witness) want_witness = true;
        else want_obs = true;
    }
    const auto u_samples = default_u_samples();
    const double nan = std::numeric_limits<double>::quiet_NaN();

    SweepResult res;
    for (auto o : cfg.outputs) res.columns.emplace_back(to_string(o));
    res.h0_count = n0;
    res.h1_count = n1;
    res.rows.resize(static_cast<std::size_t>(n0) * n1);

    parallel_for(res.rows.size(), cfg.threads, [&](std::size_t idx) {
        const int i = static_cast<int>(idx / n1);
        const int j = static_cast<int>(idx % n1);
        SweepRow& row = res.rows[idx];
        row.h0 = cfg.h0_range.at(i);
        row.h1 = cfg.h1_range.at(j);
        row.values.assign(cfg.outputs.size(), nan);
        if (!prop_error[j].empty()) {
            row.error = prop_error[j];
            return;
        }
        ModelSpec spec = cfg.base;
        spec.h0 = row.h0;
        spec.h1 = row.h1;
        try {
            ObservableSet obs;
            if (want_obs) obs = compute_observables(spec, grid, props[j]);
            double mu4 = nan, witness = nan;
            if (want_witness) {
                const auto rep = scan_nonclassicality(spec, grid, props[j], u_samples);
                mu4 = rep.mu4_real;
                witness = rep.max_imag_witness;
            } else if (want_mu4) {
                mu4 = work_moments(spec, grid, props[j], Scheme::KDQ).fourth_central.real();
            }
            for (std::size_t k = 0; k < cfg.outputs.size(); ++k) {
                switch (cfg.outputs[k]) {
                case Output::MeanW: row.values[k] = obs.mean_w; break;
                case Output::MeanWDephased: row.values[k] = obs.mean_w_dephased; break;
                case Output::Enhancement: row.values[k] = obs.enhancement; break;
                case Output::Qbar01: row.values[k] = obs.qbar01; break;
                case Output::CoherenceEntropy: row.values[k] = obs.coherence_entropy; break;
                case Output::Mu4: row.values[k] = mu4; break;
                case Output::Witness: row.values[k] = witness; break;
                }
            }
        } catch (const Error& e) {
            row.values.assign(cfg.outputs.size(), nan);
            row.error = std::string(to_string(e.kind()));
        }
    });

    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    res.metadata = {
        {"config", to_json(cfg)},
        {"version", version()},
        {"threads", cfg.threads},
        {"wall_time_s", wall},
        {"rows", res.rows.size()},
    };
    return res;
}

std::string_view version() noexcept { return KDQ_VERSION; }

void write_csv(const SweepResult& result, std::ostream& out) {
    out << "h0,h1";
    for (const auto& c : result.columns) out << ',' << c;
    out << ",error\n";
    for (const auto& row : result.rows) {
        out << format_double(row.h0) << ',' << format_double(row.h1);
        for (double v : row.values) out << ',' << format_double(v);
        out << ',' << row.error << '\n';
    }
}

std::string to_csv(const SweepResult& result) {
    std::ostringstream os;
    write_csv(result, os);
    return os.str();
}

SweepResult read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorKind::IOError, "empty CSV");
    auto header = split(line, ',');
    if (header.size() < 3 || header[0] != "h0" || header[1] != "h1" || header.back() != "error") {
        throw Error(ErrorKind::IOError, "unexpected CSV header");
    }
    SweepResult res;
    res.columns.assign(header.begin() + 2, header.end() - 1);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != header.size()) throw Error(ErrorKind::IOError, "ragged CSV row");
        SweepRow row;
        row.h0 = parse_double(f[0]);
        row.h1 = parse_double(f[1]);
        for (std::size_t k = 2; k + 1 < f.size(); ++k) row.values.push_back(parse_double(f[k]));
        row.error = f.back();
        res.rows.push_back(std::move(row));
    }
    // Recover the grid shape from the row-major layout.
    int n1 = 0;
    while (n1 < static_cast<int>(res.rows.size()) && res.rows[n1].h0 == res.rows.front().h0) ++n1;
    res.h1_count = n1;
    res.h0_count = n1 ? static_cast<int>(res.rows.size()) / n1 : 0;
    return res;
}

json to_json(const SweepResult& result) {
    json rows = json::array();
    for (const auto& row : result.rows) {
        json r = {{"h0", row.h0}, {"h1", row.h1}};
        for (std::size_t k = 0; k < result.columns.size(); ++k) {
            r[result.columns[k]] = std::isnan(row.values[k]) ? json(nullptr) : json(row.values[k]);
        }
        r["error"] = row.error;
        rows.push_back(std::move(r));
    }
    return {{"metadata", result.metadata}, {"columns", result.columns}, {"rows", rows}};
}

Format parse_format(std::string_view name) {
    if (name == "csv") return Format::CSV;
    if (name == "json") return Format::JSON;
    if (name == "png") return Format::PNG;
    throw Error(ErrorKind::ConfigError, "unknown format '" + std::string(name) + "'");
}

std::vector<std::string> emit(const SweepResult& result, Format format, const std::string& dir,
                              const std::string& stem) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::IOError, "cannot create " + dir + ": " + ec.message());
    std::vector<std::string> written;

    auto open = [](const std::string& path) {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error(ErrorKind::IOError, "cannot write " + path);
        return out;
    };

    switch (format) {
    case Format::CSV: {
        const auto path = (fs::path(dir) / (stem + ".csv")).string();
        auto out = open(path);
        write_csv(result, out);
        if (!out) throw Error(ErrorKind::IOError, "write failed for " + path);
        written.push_back(path);
        break;
    }
    case Format::JSON: {
        const auto path = (fs::path(dir) / (stem + ".json")).string();
        auto out = open(path);
        out << to_json(result).dump(2) << '\n';
        if (!out) throw Error(ErrorKind::IOError, "write failed for " + path);
        written.push_back(path);
        break;
    }
    case Format::PNG: {
        if (result.rows.empty()) throw Error(ErrorKind::IOError, "nothing to render");
        const auto& first = result.rows.front();
        const auto& last = result.rows.back();
        for (std::size_t k = 0; k < result.columns.size(); ++k) {
            HeatmapSpec hm;
            hm.title = result.columns[k];
            hm.x_min = first.h1;
            hm.x_max = last.h1;
            hm.y_min = first.h0;
            hm.y_max = last.h0;
            hm.nx = result.h1_count;
            hm.ny = result.h0_count;
            hm.diverging = is_signed(parse_output(result.columns[k]));
            hm.values.reserve(result.rows.size());
            for (const auto& row : result.rows) hm.values.push_back(row.values[k]);
            const auto path = (fs::path(dir) / (stem + "_" + result.columns[k] + ".png")).string();
            write_heatmap_png(hm, path);
            written.push_back(path);
        }
        break;
    }
    }
    return written;
}

} // namespace kdq
