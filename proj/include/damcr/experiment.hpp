#pragma once

// Batch sweeps over (nodes, fading, attack) cells and their file outputs.
//
// sweep.csv columns: nodes,fading,attack,snr_db,pdr,latency_ms,energy_j,hops
// Reals are printed with 6 significant digits (printf "%.6g"); energy_j is the
// mean energy per delivered packet. Values are Monte Carlo means over the
// configured seeds.

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "damcr/engine.hpp"
#include "damcr/model.hpp"

namespace damcr {

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitIo = 2 };

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Cell {
    std::uint32_t nodes = 30;
    FadingModel fading = FadingModel::Awgn;
    Attack attack = Attack::None;

    bool operator==(const Cell&) const = default;
};

/// "n30_awgn_none" style label used in file names.
std::string cell_label(const Cell& c);

/// Cartesian product in nodes-major order.
std::vector<Cell> make_cells(const std::vector<std::uint32_t>& nodes,
                             const std::vector<FadingModel>& fadings,
                             const std::vector<Attack>& attacks);

/// {30, 60, 100, 200, 500} x {AWGN, Rayleigh, Rician}, no attack.
std::vector<Cell> default_cells();

struct ExperimentSpec {
    // Every cell copies this and overrides node_count, fading and attack.
    SimConfig base = default_config(30, FadingModel::Awgn, Attack::None);
    std::vector<Cell> cells;
    std::filesystem::path out_dir;
    bool emit_epochs = false;
    bool dump_hops = false;
    bool dump_topology = false;
    // Also run the baseline protocol and write comparison.csv.
    bool baseline = false;
};

/// Throws ConfigError for an empty cell list or an invalid per-cell config.
void validate(const ExperimentSpec& spec);

SimConfig cell_config(const ExperimentSpec& spec, const Cell& cell);

struct CellResult {
    Cell cell;
    Protocol protocol = Protocol::Damcr;
    MonteCarloResult result;
};

std::vector<CellResult> run_cells(const ExperimentSpec& spec, Protocol protocol);

std::string format_sweep_csv(const std::vector<CellResult>& results);

struct SweepRow {
    Cell cell;
    double snr_db = 0.0;
    double pdr = 0.0;
    double latency_ms = 0.0;
    double energy_j = 0.0;
    double hops = 0.0;
};

/// Inverse of format_sweep_csv. Throws std::invalid_argument on a bad header
/// or row.
std::vector<SweepRow> parse_sweep_csv(std::string_view text);

/// Config echo, aggregates and per-trial values for every cell.
nlohmann::json summary_json(const ExperimentSpec& spec, const std::vector<CellResult>& results);

struct ComparisonRow {
    Cell cell;
    Protocol first = Protocol::Damcr;
    Protocol second = Protocol::Baseline;
    double first_pdr = 0.0;
    double second_pdr = 0.0;
    double first_latency_ms = 0.0;
    double second_latency_ms = 0.0;

    // first minus second
    double delta_pdr() const { return first_pdr - second_pdr; }
    double delta_latency_ms() const { return first_latency_ms - second_latency_ms; }
};

/// Runs both protocols over every cell and seed. Passing the same protocol
/// twice yields zero deltas.
std::vector<ComparisonRow> compare_protocols(const ExperimentSpec& spec, Protocol first,
                                             Protocol second);

/// DAMCR against the baseline.
std::vector<ComparisonRow> compare_baseline(const ExperimentSpec& spec);

std::string format_comparison_csv(const std::vector<ComparisonRow>& rows);

/// Writes to a sibling temporary file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Runs the sweep and writes its files into spec.out_dir. Returns an
/// ExitCode; errors are reported on `err`.
int run_experiment(const ExperimentSpec& spec, std::ostream& err);

}  // namespace damcr
