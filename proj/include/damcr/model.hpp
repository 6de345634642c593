#pragma once

// Shared domain types and configuration for the DAMCR simulator.

#include <array>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace damcr {

using NodeId = std::uint32_t;

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class FadingModel { Awgn, Rayleigh, Rician };
enum class Attack { None, Jamming };
enum class RadioKind : std::uint8_t { LoRa = 0, WiFi = 1 };
enum class Priority { Normal, High };
enum class TrafficKind { Telemetry, FaultAlert };

inline constexpr std::size_t kRadioKinds = 2;

constexpr std::size_t radio_index(RadioKind r) { return static_cast<std::size_t>(r); }

std::string_view to_string(FadingModel m);
std::string_view to_string(Attack a);
std::string_view to_string(RadioKind r);
std::string_view to_string(Priority p);

// Case-insensitive; throws ConfigError on unknown names. "jam" and "jamming"
// are both accepted for Attack::Jamming.
FadingModel parse_fading(std::string_view s);
Attack parse_attack(std::string_view s);

/// Set of radios fitted to a node.
class RadioSet {
public:
    constexpr RadioSet() = default;
    constexpr RadioSet(std::initializer_list<RadioKind> kinds) {
        for (auto k : kinds) bits_ |= bit(k);
    }

    constexpr bool has(RadioKind k) const { return (bits_ & bit(k)) != 0; }
    constexpr bool dual() const { return has(RadioKind::LoRa) && has(RadioKind::WiFi); }
    constexpr bool empty() const { return bits_ == 0; }
    constexpr std::uint8_t bits() const { return bits_; }

    constexpr bool operator==(const RadioSet&) const = default;

    static constexpr RadioSet lora() { return {RadioKind::LoRa}; }
    static constexpr RadioSet wifi() { return {RadioKind::WiFi}; }
    static constexpr RadioSet both() { return {RadioKind::LoRa, RadioKind::WiFi}; }

private:
    static constexpr std::uint8_t bit(RadioKind k) {
        return static_cast<std::uint8_t>(1u << radio_index(k));
    }
    std::uint8_t bits_ = 0;
};

// "lora", "wifi" or "lora+wifi".
std::string to_string(RadioSet s);

struct RadioProfile {
    RadioKind kind = RadioKind::LoRa;
    double tx_power_init_dbm = 14.0;
    double tx_power_min_dbm = 2.0;
    double tx_power_max_dbm = 14.0;
    double bandwidth_hz = 125e3;
    double bitrate_bps = 5470.0;
    double carrier_hz = 868e6;
    double channel_step_hz = 200e3;

    bool operator==(const RadioProfile&) const = default;
};

struct ChannelParams {
    double pl0_db = 40.0;
    double d0_m = 1.0;
    double exponent = 2.7;
    double shadow_sigma_db = 4.0;
    double gt_dbi = 0.0;
    double gr_dbi = 0.0;
    double noise_figure_db = 6.0;
    double rician_k_db = 6.0;

    bool operator==(const ChannelParams&) const = default;
};

struct PowerCtlParams {
    double target_snr_db = 15.0;
    double step_db = 1.5;
    double hysteresis_db = 0.5;

    bool operator==(const PowerCtlParams&) const = default;
};

struct RoutingParams {
    double alpha = 0.7;
    double beta = 0.3;
    // Normalized residual energy at or below which a node is treated as dead.
    double energy_floor = 0.05;

    bool operator==(const RoutingParams&) const = default;
};

struct EnergyParams {
    double p_tx_w = 0.025;
    double p_rx_w = 0.015;
    double p_cpu_w = 0.010;

    bool operator==(const EnergyParams&) const = default;
};

struct SimConfig {
    // Scenario.
    double area_side_m = 200.0;
    std::uint32_t node_count = 30;
    double comm_range_m = 80.0;
    std::uint32_t epochs = 200;
    std::uint32_t packet_bits = 1024;
    double per_hop_delay_ms = 10.0;
    double dual_radio_fraction = 0.15;
    std::uint32_t fhss_channels = 8;
    double relay_probability = 0.25;
    double tr_gain_db = 2.5;
    double chaos_gain_db = 3.0;
    double chaos_mu = 3.9;
    FadingModel fading_model = FadingModel::Awgn;
    Attack attack = Attack::None;
    std::uint32_t jam_start_epoch = 100;
    std::uint32_t jam_end_epoch = 150;
    double jam_tx_power_dbm = 30.0;
    std::uint32_t trials = 3;
    std::vector<std::uint64_t> seeds{1, 2, 3};
    std::uint32_t packets_per_epoch = 5;
    double high_priority_fraction = 0.2;
    // Total transmission attempts allowed per hop, relay forwards included.
    std::uint32_t max_retries_normal = 3;
    std::uint32_t max_retries_high = 5;
    // Redeploy (up to this many extra draws) until every node can reach every
    // gateway over radio-compatible links. 0 keeps the first draw.
    std::uint32_t deploy_attempts = 1000;

    std::array<RadioProfile, kRadioKinds> radios{};
    ChannelParams channel{};
    PowerCtlParams power{};
    RoutingParams routing{};
    std::array<EnergyParams, kRadioKinds> energy{};
    double initial_energy_j = 10.0;

    const RadioProfile& radio(RadioKind k) const { return radios[radio_index(k)]; }
    RadioProfile& radio(RadioKind k) { return radios[radio_index(k)]; }
    const EnergyParams& energy_for(RadioKind k) const { return energy[radio_index(k)]; }
    EnergyParams& energy_for(RadioKind k) { return energy[radio_index(k)]; }

    std::uint32_t max_retries(Priority p) const {
        return p == Priority::High ? max_retries_high : max_retries_normal;
    }

    bool operator==(const SimConfig&) const = default;
};

RadioProfile default_lora_profile();
RadioProfile default_wifi_profile();

/// Fills every default; rejects node_count < 2.
SimConfig default_config(std::uint32_t node_count, FadingModel fading, Attack attack);

/// Throws ConfigError naming the first violated invariant.
void validate(const SimConfig& cfg);

struct Position {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Position&) const = default;
};

double distance(const Position& a, const Position& b);

struct NodeState {
    NodeId id = 0;
    Position position{};
    RadioSet radios{};
    std::array<double, kRadioKinds> tx_power_dbm{};
    double residual_energy_j = 0.0;
    double chaos_state = 0.5;
    bool is_gateway = false;

    bool operator==(const NodeState&) const = default;
};

struct HopRecord {
    NodeId node = 0;
    RadioKind radio = RadioKind::LoRa;
    std::uint32_t channel = 0;
    std::uint32_t transmissions = 0;
};

struct Packet {
    std::uint64_t id = 0;
    NodeId src = 0;
    NodeId dst = 0;
    Priority priority = Priority::Normal;
    // One entry per attempted hop; `node` is the hop's intended receiver.
    std::vector<HopRecord> hop_trace;
    bool delivered = false;
    std::uint32_t transmissions = 0;
    double latency_ms = 0.0;
    double energy_j = 0.0;
};

}  // namespace damcr
