// Command-line front end: runs a sweep of (nodes, fading, attack) cells and
// writes sweep.csv, summary.json and optional dumps into the output directory.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "damcr/config_file.hpp"
#include "damcr/experiment.hpp"

namespace {

constexpr const char* kDefaultOutDir = "damcr_out";

template <typename T, typename Parse>
std::vector<T> parse_all(const std::vector<std::string>& names, Parse parse) {
    std::vector<T> out;
    for (const auto& n : names) out.push_back(parse(n));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"DAMCR Monte Carlo simulator"};
    app.set_version_flag("--version", "damcr 1.0");

    std::string config_path;
    std::vector<std::uint32_t> nodes;
    std::vector<std::string> fadings;
    std::vector<std::string> attacks;
    std::vector<std::uint64_t> seeds;
    std::string out_dir = kDefaultOutDir;
    bool baseline = false;
    bool dump_hops = false;
    bool dump_topology = false;
    bool epochs = false;

    app.add_option("--config", config_path, "Config file ([sim], [channel], ... sections)")
        ->check(CLI::ExistingFile);
    app.add_option("--nodes", nodes, "Node counts, e.g. 30,60,100")->delimiter(',');
    app.add_option("--fading", fadings, "awgn|rayleigh|rician (comma list allowed)")
        ->delimiter(',');
    app.add_option("--attack", attacks, "none|jam (comma list allowed)")->delimiter(',');
    app.add_option("--seeds", seeds, "Trial seeds, e.g. 1,2,3")->delimiter(',');
    app.add_option("--out", out_dir, "Output directory")
        ->envname("DAMCR_OUT_DIR")
        ->capture_default_str();
    app.add_flag("--baseline", baseline, "Also run the baseline and write comparison.csv");
    app.add_flag("--dump-hops", dump_hops, "Write hops.csv for the first cell and seed");
    app.add_flag("--dump-topology", dump_topology, "Write topology.csv for the first cell and seed");
    app.add_flag("--epochs", epochs, "Write per-epoch epochs_<cell>.csv files");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return damcr::kExitConfig;
    }

    damcr::ExperimentSpec spec;
    try {
        const bool from_file = !config_path.empty();
        if (from_file) spec.base = damcr::load_config(config_path);
        if (!seeds.empty()) {
            spec.base.seeds = seeds;
            spec.base.trials = static_cast<std::uint32_t>(seeds.size());
        }

        // Unset dimensions come from the config file when one is given, and
        // from the default sweep otherwise.
        const auto& b = spec.base;
        if (nodes.empty())
            nodes = from_file ? std::vector<std::uint32_t>{b.node_count}
                              : std::vector<std::uint32_t>{30, 60, 100, 200, 500};
        auto fading_list = parse_all<damcr::FadingModel>(fadings, damcr::parse_fading);
        if (fading_list.empty())
            fading_list = from_file ? std::vector<damcr::FadingModel>{b.fading_model}
                                    : std::vector<damcr::FadingModel>{damcr::FadingModel::Awgn,
                                                                      damcr::FadingModel::Rayleigh,
                                                                      damcr::FadingModel::Rician};
        auto attack_list = parse_all<damcr::Attack>(attacks, damcr::parse_attack);
        if (attack_list.empty()) attack_list = {from_file ? b.attack : damcr::Attack::None};

        spec.cells = damcr::make_cells(nodes, fading_list, attack_list);
    } catch (const damcr::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return damcr::kExitConfig;
    }
    spec.out_dir = out_dir;
    spec.baseline = baseline;
    spec.dump_hops = dump_hops;
    spec.dump_topology = dump_topology;
    spec.emit_epochs = epochs;

    const int rc = damcr::run_experiment(spec, std::cerr);
    if (rc == damcr::kExitOk) std::cout << "wrote results to " << spec.out_dir.string() << '\n';
    return rc;
}
