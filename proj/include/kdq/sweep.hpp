#pragma once

#include "kdq/config.hpp"

#include <json.hpp>

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace kdq {

std::string_view version() noexcept;

enum class Output { MeanW, MeanWDephased, Enhancement, Qbar01, CoherenceEntropy, Mu4, Witness };

std::string_view to_string(Output o) noexcept;
Output parse_output(std::string_view name);

struct Range {
    double min = -2.0;
    double max = 2.0;
    int count = 101;

    double at(int i) const { return min + (max - min) * i / (count - 1); }
};

struct SweepConfig {
    std::string name = "sweep";
    ModelSpec base;
    GridSpec grid;
    RampIntegratorConfig ode;
    Range h0_range;
    Range h1_range;
    std::vector<Output> outputs;
    int threads = 1;
    std::string output_path = ".";
    bool emit_png = false;

    void validate() const;
};

// Run-config keys plus a "sweep" object:
//   {"h0": [min, max, count], "h1": [...], "outputs": [...], "png": bool}
SweepConfig parse_sweep_config(const nlohmann::json& j);
SweepConfig load_sweep_config(const std::string& path);
nlohmann::json to_json(const SweepConfig& cfg);

struct SweepRow {
    double h0 = 0.0;
    double h1 = 0.0;
    std::vector<double> values;
    std::string error; // empty when the cell succeeded
};

struct SweepResult {
    std::vector<std::string> columns; // observable names, in output order
    int h0_count = 0;
    int h1_count = 0;
    std::vector<SweepRow> rows;       // row-major: h0 outer, h1 inner
    nlohmann::json metadata;
};

// Calls fn(i) for i in [0, n) on `threads` workers pulling indices from a shared counter.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

// Resolves --threads, then KDQ_THREADS, then 1.
int resolve_threads(int requested);

SweepResult run_sweep(const SweepConfig& cfg);

void write_csv(const SweepResult& result, std::ostream& out);
std::string to_csv(const SweepResult& result);
SweepResult read_csv(std::istream& in);
nlohmann::json to_json(const SweepResult& result);

enum class Format { CSV, JSON, PNG };
Format parse_format(std::string_view name);

// Writes <dir>/<stem>.csv, <dir>/<stem>.json or one <dir>/<stem>_<obs>.png per column.
// Returns the paths written. Throws Error(IOError).
std::vector<std::string> emit(const SweepResult& result, Format format, const std::string& dir,
                              const std::string& stem);

} // namespace kdq
