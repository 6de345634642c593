#include "damcr/experiment.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <system_error>

#include "damcr/config_file.hpp"
#include "damcr/rng.hpp"
#include "damcr/topology.hpp"

namespace damcr {

namespace {

std::string g6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

double parse_double(std::string_view s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw std::invalid_argument("bad number '" + std::string(s) + "'");
    return v;
}

std::uint32_t parse_u32(std::string_view s) {
    std::uint32_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw std::invalid_argument("bad integer '" + std::string(s) + "'");
    return v;
}

constexpr std::string_view kSweepHeader = "nodes,fading,attack,snr_db,pdr,latency_ms,energy_j,hops";

nlohmann::json summary_values(const RunSummary& s) {
    return {
        {"seed", s.seed},
        {"generated", s.generated},
        {"delivered", s.delivered},
        {"unroutable", s.unroutable},
        {"transmissions", s.transmissions},
        {"pdr", s.pdr},
        {"snr_db", s.mean_snr_db},
        {"latency_ms", s.mean_latency_ms},
        {"hops", s.mean_hops},
        {"energy_per_delivered_j", s.mean_energy_per_delivered_j},
        {"total_energy_j", s.total_energy_j},
    };
}

std::string epochs_csv(const MonteCarloResult& r) {
    std::string out =
        "seed,epoch,jammer_active,generated,delivered,unroutable,transmissions,"
        "snr_db,latency_ms,energy_j\n";
    for (const auto& t : r.trials) {
        for (const auto& e : t.epochs) {
            out += std::to_string(t.seed) + ',' + std::to_string(e.epoch) + ',' +
                   (e.jammer_active ? "1" : "0") + ',' + std::to_string(e.generated) + ',' +
                   std::to_string(e.delivered) + ',' + std::to_string(e.unroutable) + ',' +
                   std::to_string(e.transmissions) + ',' + g6(e.mean_sinr_db()) + ',' +
                   g6(e.mean_latency_ms()) + ',' + g6(e.energy_j) + '\n';
        }
    }
    return out;
}

std::string hops_csv(const SimConfig& cfg, std::uint64_t seed) {
    RunOptions opts;
    opts.record_hops = true;
    Simulation sim(cfg, seed, Protocol::Damcr, opts);
    sim.run();
    std::string out = "epoch,node,H_k,channel\n";
    for (const auto& h : sim.hop_samples()) {
        out += std::to_string(h.epoch) + ',' + std::to_string(h.node) + ',' + g17(h.state) + ',' +
               std::to_string(h.channel) + '\n';
    }
    return out;
}

std::string topology_csv(const SimConfig& cfg, std::uint64_t seed) {
    Rng rng(seed, StreamTag::Topology);
    const auto topo = deploy(cfg, rng);
    std::string out = "id,x,y,radios,is_gateway\n";
    for (const auto& n : topo.nodes) {
        out += std::to_string(n.id) + ',' + g17(n.position.x) + ',' + g17(n.position.y) + ',' +
               to_string(n.radios) + ',' + (n.is_gateway ? "1" : "0") + '\n';
    }
    return out;
}

}  // namespace

std::string cell_label(const Cell& c) {
    return "n" + std::to_string(c.nodes) + "_" + std::string(to_string(c.fading)) + "_" +
           std::string(to_string(c.attack));
}

std::vector<Cell> make_cells(const std::vector<std::uint32_t>& nodes,
                             const std::vector<FadingModel>& fadings,
                             const std::vector<Attack>& attacks) {
    std::vector<Cell> cells;
    for (auto n : nodes)
        for (auto f : fadings)
            for (auto a : attacks) cells.push_back({n, f, a});
    return cells;
}

std::vector<Cell> default_cells() {
    return make_cells({30, 60, 100, 200, 500},
                      {FadingModel::Awgn, FadingModel::Rayleigh, FadingModel::Rician},
                      {Attack::None});
}

SimConfig cell_config(const ExperimentSpec& spec, const Cell& cell) {
    auto cfg = spec.base;
    cfg.node_count = cell.nodes;
    cfg.fading_model = cell.fading;
    cfg.attack = cell.attack;
    return cfg;
}

void validate(const ExperimentSpec& spec) {
    if (spec.cells.empty()) throw ConfigError("experiment has no cells");
    for (const auto& c : spec.cells) validate(cell_config(spec, c));
}

std::vector<CellResult> run_cells(const ExperimentSpec& spec, Protocol protocol) {
    validate(spec);
    std::vector<CellResult> out;
    for (const auto& c : spec.cells)
        out.push_back({c, protocol, run_monte_carlo(cell_config(spec, c), protocol)});
    return out;
}

std::string format_sweep_csv(const std::vector<CellResult>& results) {
    std::string out(kSweepHeader);
    out += '\n';
    for (const auto& r : results) {
        const auto& a = r.result.aggregate;
        out += std::to_string(r.cell.nodes) + ',' + std::string(to_string(r.cell.fading)) + ',' +
               std::string(to_string(r.cell.attack)) + ',' + g6(a.mean_snr_db) + ',' + g6(a.pdr) +
               ',' + g6(a.mean_latency_ms) + ',' + g6(a.mean_energy_per_delivered_j) + ',' +
               g6(a.mean_hops) + '\n';
    }
    return out;
}

std::vector<SweepRow> parse_sweep_csv(std::string_view text) {
    std::vector<SweepRow> rows;
    bool header = true;
    for (auto line : split(text, '\n')) {
        if (line.empty()) continue;
        if (header) {
            if (line != kSweepHeader) throw std::invalid_argument("unexpected sweep header");
            header = false;
            continue;
        }
        const auto f = split(line, ',');
        if (f.size() != 8) throw std::invalid_argument("sweep row needs 8 fields");
        SweepRow r;
        try {
            r.cell = {parse_u32(f[0]), parse_fading(f[1]), parse_attack(f[2])};
        } catch (const ConfigError& e) {
            throw std::invalid_argument(e.what());
        }
        r.snr_db = parse_double(f[3]);
        r.pdr = parse_double(f[4]);
        r.latency_ms = parse_double(f[5]);
        r.energy_j = parse_double(f[6]);
        r.hops = parse_double(f[7]);
        rows.push_back(r);
    }
    if (header) throw std::invalid_argument("missing sweep header");
    return rows;
}

nlohmann::json summary_json(const ExperimentSpec& spec, const std::vector<CellResult>& results) {
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& r : results) {
        nlohmann::json trials = nlohmann::json::array();
        for (const auto& t : r.result.trials) trials.push_back(summary_values(t));
        auto agg = summary_values(r.result.aggregate);
        agg.erase("seed");
        cells.push_back({
            {"nodes", r.cell.nodes},
            {"fading", to_string(r.cell.fading)},
            {"attack", to_string(r.cell.attack)},
            {"protocol", to_string(r.protocol)},
            {"aggregate", agg},
            {"trials", trials},
        });
    }
    return {
        {"config", format_config(spec.base)},
        {"seeds", spec.base.seeds},
        {"cells", cells},
    };
}

std::vector<ComparisonRow> compare_protocols(const ExperimentSpec& spec, Protocol first,
                                             Protocol second) {
    const auto a = run_cells(spec, first);
    const auto b = first == second ? a : run_cells(spec, second);
    std::vector<ComparisonRow> rows;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto& x = a[i].result.aggregate;
        const auto& y = b[i].result.aggregate;
        rows.push_back({a[i].cell, first, second, x.pdr, y.pdr, x.mean_latency_ms,
                        y.mean_latency_ms});
    }
    return rows;
}

std::vector<ComparisonRow> compare_baseline(const ExperimentSpec& spec) {
    return compare_protocols(spec, Protocol::Damcr, Protocol::Baseline);
}

std::string format_comparison_csv(const std::vector<ComparisonRow>& rows) {
    std::string out =
        "nodes,fading,attack,protocol_a,pdr_a,latency_ms_a,protocol_b,pdr_b,latency_ms_b,"
        "delta_pdr,delta_latency_ms\n";
    for (const auto& r : rows) {
        out += std::to_string(r.cell.nodes) + ',' + std::string(to_string(r.cell.fading)) + ',' +
               std::string(to_string(r.cell.attack)) + ',' + std::string(to_string(r.first)) +
               ',' + g6(r.first_pdr) + ',' + g6(r.first_latency_ms) + ',' +
               std::string(to_string(r.second)) + ',' + g6(r.second_pdr) + ',' +
               g6(r.second_latency_ms) + ',' + g6(r.delta_pdr()) + ',' +
               g6(r.delta_latency_ms()) + '\n';
    }
    return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            out.close();
            std::error_code ignore;
            std::filesystem::remove(tmp, ignore);
            throw IoError("write to '" + tmp.string() + "' failed");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::error_code ignore;
        std::filesystem::remove(tmp, ignore);
        throw IoError("cannot rename onto '" + path.string() + "': " + ec.message());
    }
}

int run_experiment(const ExperimentSpec& spec, std::ostream& err) {
    try {
        validate(spec);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    try {
        const auto& dir = spec.out_dir;
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec || !std::filesystem::is_directory(dir))
            throw IoError("cannot create output directory '" + dir.string() + "'");

        const auto results = run_cells(spec, Protocol::Damcr);
        for (const auto& r : results) {
            const auto cfg = cell_config(spec, r.cell);
            for (auto seed : cfg.seeds) {
                Rng rng(seed, StreamTag::Topology);
                if (!is_connected(deploy(cfg, rng), true).connected)
                    err << "warning: " << cell_label(r.cell) << " seed " << seed
                        << ": deployment is not radio-connected; unroutable packets are lost\n";
            }
        }
        auto summary = summary_json(spec, results);

        if (spec.baseline) {
            const auto base = run_cells(spec, Protocol::Baseline);
            std::vector<ComparisonRow> rows;
            for (std::size_t i = 0; i < results.size(); ++i) {
                const auto& x = results[i].result.aggregate;
                const auto& y = base[i].result.aggregate;
                rows.push_back({results[i].cell, Protocol::Damcr, Protocol::Baseline, x.pdr,
                                y.pdr, x.mean_latency_ms, y.mean_latency_ms});
            }
            summary["baseline"] = summary_json(spec, base)["cells"];
            write_file_atomic(dir / "comparison.csv", format_comparison_csv(rows));
        }

        write_file_atomic(dir / "sweep.csv", format_sweep_csv(results));
        write_file_atomic(dir / "summary.json", summary.dump(2) + "\n");

        if (spec.emit_epochs) {
            for (const auto& r : results)
                write_file_atomic(dir / ("epochs_" + cell_label(r.cell) + ".csv"),
                                  epochs_csv(r.result));
        }
        const auto first_cfg = cell_config(spec, spec.cells.front());
        const auto first_seed = first_cfg.seeds.front();
        if (spec.dump_hops) write_file_atomic(dir / "hops.csv", hops_csv(first_cfg, first_seed));
        if (spec.dump_topology)
            write_file_atomic(dir / "topology.csv", topology_csv(first_cfg, first_seed));
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "i/o error: " << e.what() << '\n';
        return kExitIo;
    }
    return kExitOk;
}

}  // namespace damcr
