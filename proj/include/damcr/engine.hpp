#pragma once

// Epoch-driven Monte Carlo engine: traffic generation, per-hop transmission
// trials with hopping, jamming, relaying and retries, per-hop energy
// accounting, power control and metric aggregation.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "damcr/model.hpp"
#include "damcr/power.hpp"
#include "damcr/rng.hpp"
#include "damcr/routing.hpp"
#include "damcr/spectrum.hpp"
#include "damcr/topology.hpp"

namespace damcr {

enum class Protocol {
    // Chaotic hopping, power control, energy-aware routing, relaying, TR gain.
    Damcr,
    // WiFi-only, fixed power, one fixed channel, min-hop routing, no relays.
    Baseline,
};

std::string_view to_string(Protocol p);

/// (P_tx + P_rx + P_cpu) * packet_bits / bitrate. Throws
/// std::invalid_argument for a non-positive bitrate.
double hop_energy_j(const RadioProfile& radio, const EnergyParams& energy,
                    std::uint32_t packet_bits);

/// Fault alerts travel as High priority, telemetry as Normal.
Priority classify_priority(TrafficKind kind);

/// Fault alert with probability `fault_fraction`, telemetry otherwise.
TrafficKind draw_traffic_kind(Rng& rng, double fault_fraction);

struct EpochMetrics {
    std::uint32_t epoch = 0;
    bool jammer_active = false;
    std::uint32_t generated = 0;
    std::uint32_t delivered = 0;
    std::uint32_t unroutable = 0;
    // Every transmission attempt, relays included.
    std::uint64_t transmissions = 0;
    std::uint64_t delivered_transmissions = 0;
    double sinr_sum_db = 0.0;
    double latency_sum_ms = 0.0;
    double energy_j = 0.0;

    double mean_sinr_db() const { return transmissions ? sinr_sum_db / transmissions : 0.0; }
    double mean_latency_ms() const { return delivered ? latency_sum_ms / delivered : 0.0; }
    double mean_hops() const {
        return delivered ? static_cast<double>(delivered_transmissions) / delivered : 0.0;
    }
};

struct RunSummary {
    Protocol protocol = Protocol::Damcr;
    std::uint64_t seed = 0;
    SimConfig config;
    std::vector<EpochMetrics> epochs;

    std::uint64_t generated = 0;
    std::uint64_t delivered = 0;
    std::uint64_t unroutable = 0;
    std::uint64_t transmissions = 0;
    double pdr = 0.0;
    double mean_snr_db = 0.0;
    double mean_latency_ms = 0.0;
    double mean_hops = 0.0;
    double mean_energy_per_delivered_j = 0.0;
    double total_energy_j = 0.0;
};

struct TransmissionRecord {
    std::uint32_t epoch = 0;
    std::uint64_t packet = 0;
    NodeId node = 0;
    NodeId to = 0;
    RadioKind radio = RadioKind::LoRa;
    std::uint32_t channel = 0;
    bool relay = false;
    bool success = false;
    double sinr_db = 0.0;
    double energy_j = 0.0;
};

struct HopSample {
    std::uint32_t epoch = 0;
    NodeId node = 0;
    double state = 0.0;
    std::uint32_t channel = 0;
};

struct RunOptions {
    bool record_transmissions = false;
    bool record_hops = false;
    bool record_packets = false;
};

class Simulation {
public:
    /// Deploys a random topology from the seed.
    Simulation(const SimConfig& cfg, std::uint64_t seed, Protocol protocol = Protocol::Damcr,
               RunOptions options = {});

    /// Runs on a caller-supplied topology (node count must match the config).
    Simulation(const SimConfig& cfg, Topology topology, std::uint64_t seed,
               Protocol protocol = Protocol::Damcr, RunOptions options = {});

    /// Epochs must be run in increasing order.
    EpochMetrics run_epoch(std::uint32_t epoch);

    /// Runs every remaining epoch and summarizes.
    RunSummary run();

    const SimConfig& config() const { return cfg_; }
    const Topology& topology() const { return topo_; }
    const spectrum::JammerState& jammer() const { return jammer_; }
    Protocol protocol() const { return protocol_; }

    double residual_energy_j(NodeId node) const { return cfg_.initial_energy_j - spent_[node]; }
    std::span<const double> energy_spent_j() const { return spent_; }
    double tx_power_dbm(NodeId node, RadioKind radio) const {
        return power_[node][radio_index(radio)].tx_power_dbm();
    }

    std::span<const TransmissionRecord> transmissions() const { return tx_log_; }
    std::span<const HopSample> hop_samples() const { return hop_log_; }
    std::span<const Packet> packets() const { return packets_; }
    std::span<const EpochMetrics> epoch_metrics() const { return metrics_; }

    /// Routing graph used by the most recent epoch.
    const routing::WeightedGraph& routing_graph() const { return graph_; }

private:
    struct DirectedEdge {
        NodeId from = 0;
        NodeId to = 0;
        RadioKind radio = RadioKind::LoRa;
        std::uint32_t link = 0;
    };

    struct RelayChoice {
        NodeId node = 0;
        RadioKind radio = RadioKind::LoRa;
        double fading_db = 0.0;
    };

    void init();
    bool alive(NodeId node) const;
    bool can_transmit(NodeId node, RadioKind radio) const;
    std::uint32_t link_id(NodeId a, NodeId b) const { return link_index_[std::size_t{a} * n_ + b]; }
    std::optional<std::size_t> edge_index(NodeId from, NodeId to, RadioKind radio) const;

    void update_channels(std::uint32_t epoch);
    void build_graph();
    std::uint32_t next_channel(NodeId node, std::uint32_t epoch);
    double sample_sinr(NodeId from, NodeId to, RadioKind radio, std::uint32_t channel,
                       double fading_db) const;
    // Spends the hop energy, logs the attempt and draws its outcome.
    bool transmit(NodeId from, NodeId to, RadioKind radio, std::uint32_t channel,
                  double fading_db, bool relay, Packet& packet, Rng& rng, EpochMetrics& m);
    std::optional<RelayChoice> find_relay(NodeId from, NodeId to, RadioKind radio,
                                          std::uint32_t channel, Rng& rng) const;
    void deliver(Packet& packet, Rng& rng, EpochMetrics& m);

    SimConfig cfg_;
    std::uint64_t seed_ = 0;
    Protocol protocol_ = Protocol::Damcr;
    RunOptions options_;
    Topology topo_;
    std::size_t n_ = 0;

    std::vector<spectrum::ChaosHopper> hoppers_;
    std::vector<std::array<power::PowerState, kRadioKinds>> power_;
    std::vector<std::array<std::optional<double>, kRadioKinds>> last_sinr_;
    std::vector<double> spent_;
    std::array<double, kRadioKinds> hop_energy_{};
    std::array<double, kRadioKinds> noise_dbm_{};
    spectrum::JammerState jammer_;
    bool jam_now_ = false;

    // Undirected links.
    std::vector<std::uint32_t> link_index_;
    std::vector<double> link_mean_pl_db_;
    std::vector<double> link_shadow_db_;

    // Directed usable edges, grouped by sender (CSR).
    std::vector<DirectedEdge> edges_;
    std::vector<std::size_t> edge_begin_;
    std::vector<double> edge_tx_power_;
    std::vector<double> edge_mean_pl_;
    std::vector<double> edge_shadow_;
    std::vector<double> edge_noise_;
    std::vector<double> edge_fading_;
    std::vector<double> edge_probe_snr_;
    std::vector<double> edge_measured_sinr_;
    std::vector<double> edge_p_succ_;
    std::vector<double> edge_energy_norm_;
    std::vector<double> edge_weight_;
    bool have_measurement_ = false;

    routing::WeightedGraph graph_;
    std::uint32_t next_epoch_ = 0;
    std::uint64_t packet_counter_ = 0;

    std::vector<EpochMetrics> metrics_;
    std::vector<TransmissionRecord> tx_log_;
    std::vector<HopSample> hop_log_;
    std::vector<Packet> packets_;
};

/// Aggregates a finished run's epoch metrics into a summary.
RunSummary summarize(const SimConfig& cfg, std::uint64_t seed, Protocol protocol,
                     std::vector<EpochMetrics> epochs);

RunSummary run_simulation(const SimConfig& cfg, std::uint64_t seed);
RunSummary run_baseline(const SimConfig& cfg, std::uint64_t seed);

struct MonteCarloResult {
    // Arithmetic mean of each per-trial aggregate; counts are summed.
    RunSummary aggregate;
    std::vector<RunSummary> trials;
};

/// One trial per configured seed, run concurrently. The aggregate does not
/// depend on seed order.
MonteCarloResult run_monte_carlo(const SimConfig& cfg, Protocol protocol = Protocol::Damcr);

/// Mean of already-computed trials. A single trial is returned unchanged,
/// per-epoch series included; otherwise the series is left empty.
RunSummary aggregate_trials(std::span<const RunSummary> trials);

}  // namespace damcr
