#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "damcr/config_file.hpp"
#include "damcr/experiment.hpp"

using namespace damcr;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch_dir(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("damcr_test_" + name);
    fs::remove_all(dir);
    return dir;
}

// Short runs keep the file tests fast.
ExperimentSpec small_spec(const std::string& name) {
    ExperimentSpec s;
    s.base.epochs = 40;
    s.base.jam_start_epoch = 10;
    s.base.jam_end_epoch = 30;
    s.cells = {{30, FadingModel::Awgn, Attack::None}, {30, FadingModel::Awgn, Attack::Jamming}};
    s.out_dir = scratch_dir(name);
    return s;
}

double six_digits(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return std::strtod(buf, nullptr);
}

}  // namespace

TEST_CASE("cell helpers") {
    CHECK(cell_label({30, FadingModel::Awgn, Attack::Jamming}) == "n30_awgn_jam");
    const auto cells = default_cells();
    CHECK(cells.size() == 15);
    CHECK(cells.front() == Cell{30, FadingModel::Awgn, Attack::None});
    CHECK(cells.back() == Cell{500, FadingModel::Rician, Attack::None});
    CHECK(make_cells({1, 2}, {FadingModel::Awgn}, {Attack::None, Attack::Jamming}).size() == 4);
}

TEST_CASE("two cells give two rows that parse back to the aggregates") {
    auto spec = small_spec("rows");
    std::ostringstream err;
    REQUIRE(run_experiment(spec, err) == kExitOk);
    const auto csv = slurp(spec.out_dir / "sweep.csv");
    const auto rows = parse_sweep_csv(csv);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].cell == spec.cells[0]);
    CHECK(rows[1].cell == spec.cells[1]);

    const auto results = run_cells(spec, Protocol::Damcr);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& a = results[i].result.aggregate;
        CHECK(rows[i].pdr == six_digits(a.pdr));
        CHECK(rows[i].snr_db == six_digits(a.mean_snr_db));
        CHECK(rows[i].latency_ms == six_digits(a.mean_latency_ms));
        CHECK(rows[i].energy_j == six_digits(a.mean_energy_per_delivered_j));
        CHECK(rows[i].hops == six_digits(a.mean_hops));
    }
    CHECK(format_sweep_csv(results) == csv);

    const auto summary = nlohmann::json::parse(slurp(spec.out_dir / "summary.json"));
    REQUIRE(summary["cells"].size() == 2);
    CHECK(summary["cells"][1]["attack"] == "jam");
    CHECK(summary["cells"][0]["trials"].size() == 3);
    CHECK(summary["cells"][0]["aggregate"]["pdr"].get<double>() == results[0].result.aggregate.pdr);
    CHECK(parse_config(summary["config"].get<std::string>()) == spec.base);
    CHECK(summary["seeds"] == nlohmann::json({1, 2, 3}));
    for (const auto& e : fs::directory_iterator(spec.out_dir))
        CHECK(e.path().extension() != ".tmp");
    fs::remove_all(spec.out_dir);
}

TEST_CASE("reruns are byte-identical") {
    auto a = small_spec("rerun_a");
    auto b = small_spec("rerun_b");
    std::ostringstream err;
    REQUIRE(run_experiment(a, err) == kExitOk);
    REQUIRE(run_experiment(b, err) == kExitOk);
    CHECK(slurp(a.out_dir / "sweep.csv") == slurp(b.out_dir / "sweep.csv"));
    CHECK(slurp(a.out_dir / "summary.json") == slurp(b.out_dir / "summary.json"));
    fs::remove_all(a.out_dir);
    fs::remove_all(b.out_dir);
}

TEST_CASE("empty cell list is a config error") {
    auto spec = small_spec("empty");
    spec.cells.clear();
    std::ostringstream err;
    CHECK(run_experiment(spec, err) == kExitConfig);
    CHECK_FALSE(fs::exists(spec.out_dir / "sweep.csv"));
    CHECK_THROWS_AS(validate(spec), ConfigError);
}

TEST_CASE("invalid cell is a config error") {
    auto spec = small_spec("badcell");
    spec.cells = {{1, FadingModel::Awgn, Attack::None}};
    std::ostringstream err;
    CHECK(run_experiment(spec, err) == kExitConfig);
}

TEST_CASE("unwritable output is an i/o error") {
    const auto blocker = scratch_dir("blocker");
    {
        std::ofstream f(blocker);
        f << "not a directory";
    }
    auto spec = small_spec("io");
    spec.out_dir = blocker / "sub";
    std::ostringstream err;
    CHECK(run_experiment(spec, err) == kExitIo);
    CHECK(err.str().find("i/o error") != std::string::npos);
    CHECK_THROWS_AS(write_file_atomic(blocker / "x.csv", "data"), IoError);
    fs::remove(blocker);
}

TEST_CASE("atomic write replaces content") {
    const auto dir = scratch_dir("atomic");
    fs::create_directories(dir);
    write_file_atomic(dir / "f.txt", "first");
    write_file_atomic(dir / "f.txt", "second");
    CHECK(slurp(dir / "f.txt") == "second");
    CHECK_FALSE(fs::exists(dir / "f.txt.tmp"));
    fs::remove_all(dir);
}

TEST_CASE("optional dumps") {
    auto spec = small_spec("dumps");
    spec.cells.resize(1);
    spec.emit_epochs = true;
    spec.dump_hops = true;
    spec.dump_topology = true;
    spec.baseline = true;
    std::ostringstream err;
    REQUIRE(run_experiment(spec, err) == kExitOk);

    const auto epochs = slurp(spec.out_dir / "epochs_n30_awgn_none.csv");
    CHECK(epochs.rfind("seed,epoch,", 0) == 0);
    CHECK(std::count(epochs.begin(), epochs.end(), '\n') == 1 + 3 * 40);

    const auto hops = slurp(spec.out_dir / "hops.csv");
    CHECK(hops.rfind("epoch,node,H_k,channel\n", 0) == 0);
    CHECK(std::count(hops.begin(), hops.end(), '\n') > 100);

    const auto topo = slurp(spec.out_dir / "topology.csv");
    CHECK(topo.rfind("id,x,y,radios,is_gateway\n", 0) == 0);
    CHECK(std::count(topo.begin(), topo.end(), '\n') == 31);

    const auto cmp = slurp(spec.out_dir / "comparison.csv");
    CHECK(cmp.find("damcr") != std::string::npos);
    CHECK(cmp.find("baseline") != std::string::npos);
    const auto summary = nlohmann::json::parse(slurp(spec.out_dir / "summary.json"));
    CHECK(summary["baseline"][0]["protocol"] == "baseline");
    fs::remove_all(spec.out_dir);
}

TEST_CASE("self comparison has zero deltas") {
    auto spec = small_spec("self");
    for (auto p : {Protocol::Damcr, Protocol::Baseline}) {
        for (const auto& row : compare_protocols(spec, p, p)) {
            CHECK(row.delta_pdr() == 0.0);
            CHECK(row.delta_latency_ms() == 0.0);
        }
    }
}

TEST_CASE("DAMCR beats the baseline on delivery under jamming") {
    auto spec = small_spec("vsbase");
    spec.cells = {{30, FadingModel::Awgn, Attack::Jamming}};
    const auto rows = compare_baseline(spec);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].first == Protocol::Damcr);
    CHECK(rows[0].second == Protocol::Baseline);
    CHECK(rows[0].delta_pdr() >= 0.05);
    const auto csv = format_comparison_csv(rows);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
}

TEST_CASE("sweep parser rejects malformed text") {
    CHECK_THROWS_AS(parse_sweep_csv(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_sweep_csv("a,b\n"), std::invalid_argument);
    const std::string h = "nodes,fading,attack,snr_db,pdr,latency_ms,energy_j,hops\n";
    CHECK(parse_sweep_csv(h).empty());
    CHECK_THROWS_AS(parse_sweep_csv(h + "30,awgn,none,1,2\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_sweep_csv(h + "30,fog,none,1,2,3,4,5\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_sweep_csv(h + "30,awgn,none,x,2,3,4,5\n"), std::invalid_argument);
    const auto rows = parse_sweep_csv(h + "60,rician,jam,1.5,0.99,20.1,0.005,2.01\n");
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].cell == Cell{60, FadingModel::Rician, Attack::Jamming});
    CHECK(rows[0].hops == 2.01);
}
