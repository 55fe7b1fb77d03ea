#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "wgqed/config.hpp"
#include "wgqed/eigensolve.hpp"
#include "wgqed/model.hpp"

namespace wgqed {

inline constexpr const char* kVersion = "0.1.0";

enum class SweepMode { ground, binding };

struct SweepConfig {
    ModelSpec base;                 // J, boundary, atoms, delta; g and U come from the grid
    int n_trunc = 0;                // 0: default_truncation(n_ex)
    std::vector<double> g_values;   // g / J
    std::vector<double> u_values;   // U / J
    std::vector<int> n_ex_values;
    SweepMode mode = SweepMode::ground;
    int x_ref = -1;                 // two-point reference site; -1: first atom (or 0)
    bool binding_correction = true;
    SolverOptions solver;
    std::string out_path;           // empty: no file, no journal
    std::string format = "csv";
    int threads = 1;
    std::size_t max_points = 0;     // stop after this many new points (0: no limit)
    std::string config_hash;

    std::size_t size() const { return g_values.size() * u_values.size() * n_ex_values.size(); }
    void validate() const;
};

// Keys understood by sweep_config_from; shared with the CLI.
const std::set<std::string>& sweep_config_keys();
SweepConfig sweep_config_from(const Config& cfg);

struct GridPoint {
    std::size_t index = 0;
    int n_ex = 0;
    double g_over_j = 0.0;
    double u_over_j = 0.0;
};

GridPoint grid_point(const SweepConfig& cfg, std::size_t index);
ModelSpec point_spec(const SweepConfig& cfg, const GridPoint& p);

// Column names and one formatted CSV row per point (no trailing newline).
std::vector<std::string> sweep_columns(SweepMode mode);
std::string compute_row(const SweepConfig& cfg, std::size_t index);

struct SweepSummary {
    std::size_t total = 0;
    std::size_t computed = 0;
    std::size_t resumed = 0;  // rows taken from the journal
    bool complete = false;
    std::vector<std::string> rows;  // sorted by index when complete
};

// Runs the grid on a worker pool. With out_path set, rows are journaled to
// out_path + ".journal" as they finish and the final file is written once
// every point is present.
SweepSummary run_sweep(const SweepConfig& cfg);

std::string format_number(double v);
std::string header_comment(const std::string& config_hash, std::uint64_t seed);

// Writes rows in the chosen format ("csv" or "json").
void write_table(std::ostream& os, const std::string& format, const std::string& config_hash, std::uint64_t seed,
                 const std::vector<std::string>& columns, const std::vector<std::string>& rows);

// Thread count: explicit value if > 0, else WGQED_THREADS, else 1.
int resolve_threads(int requested);

}  // namespace wgqed
