#include "damcr/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace damcr {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

void require(bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("invalid configuration: ") + what);
}

}  // namespace

std::string_view to_string(FadingModel m) {
    switch (m) {
        case FadingModel::Awgn: return "awgn";
        case FadingModel::Rayleigh: return "rayleigh";
        case FadingModel::Rician: return "rician";
    }
    return "?";
}

std::string_view to_string(Attack a) {
    return a == Attack::Jamming ? "jam" : "none";
}

std::string_view to_string(RadioKind r) {
    return r == RadioKind::WiFi ? "wifi" : "lora";
}

std::string_view to_string(Priority p) {
    return p == Priority::High ? "high" : "normal";
}

std::string to_string(RadioSet s) {
    if (s.dual()) return "lora+wifi";
    if (s.has(RadioKind::LoRa)) return "lora";
    if (s.has(RadioKind::WiFi)) return "wifi";
    return "none";
}

FadingModel parse_fading(std::string_view s) {
    const auto v = lower(s);
    if (v == "awgn") return FadingModel::Awgn;
    if (v == "rayleigh") return FadingModel::Rayleigh;
    if (v == "rician") return FadingModel::Rician;
    throw ConfigError("unknown fading model '" + std::string(s) + "'");
}

Attack parse_attack(std::string_view s) {
    const auto v = lower(s);
    if (v == "none") return Attack::None;
    if (v == "jam" || v == "jamming") return Attack::Jamming;
    throw ConfigError("unknown attack '" + std::string(s) + "'");
}

RadioProfile default_lora_profile() {
    RadioProfile p;
    p.kind = RadioKind::LoRa;
    p.tx_power_init_dbm = 14.0;
    p.tx_power_min_dbm = 2.0;
    p.tx_power_max_dbm = 14.0;
    p.bandwidth_hz = 125e3;
    p.bitrate_bps = 5470.0;
    p.carrier_hz = 868e6;
    p.channel_step_hz = 200e3;
    return p;
}

RadioProfile default_wifi_profile() {
    RadioProfile p;
    p.kind = RadioKind::WiFi;
    p.tx_power_init_dbm = 18.0;
    p.tx_power_min_dbm = 0.0;
    p.tx_power_max_dbm = 18.0;
    p.bandwidth_hz = 20e6;
    p.bitrate_bps = 6e6;
    p.carrier_hz = 2.412e9;
    p.channel_step_hz = 5e6;
    return p;
}

SimConfig default_config(std::uint32_t node_count, FadingModel fading, Attack attack) {
    if (node_count < 2) throw ConfigError("node_count must be at least 2");
    SimConfig cfg;
    cfg.node_count = node_count;
    cfg.fading_model = fading;
    cfg.attack = attack;
    cfg.radio(RadioKind::LoRa) = default_lora_profile();
    cfg.radio(RadioKind::WiFi) = default_wifi_profile();
    cfg.energy_for(RadioKind::LoRa) = EnergyParams{0.025, 0.015, 0.010};
    cfg.energy_for(RadioKind::WiFi) = EnergyParams{0.063, 0.040, 0.010};
    return cfg;
}

void validate(const SimConfig& c) {
    require(c.node_count >= 2, "node_count >= 2");
    require(c.area_side_m > 0.0, "area_side_m > 0");
    require(c.comm_range_m >= 0.0, "comm_range_m >= 0");
    require(c.epochs >= 1, "epochs >= 1");
    require(c.per_hop_delay_ms >= 0.0, "per_hop_delay_ms >= 0");
    require(c.dual_radio_fraction >= 0.0 && c.dual_radio_fraction <= 1.0,
            "0 <= dual_radio_fraction <= 1");
    require(c.fhss_channels >= 2, "fhss_channels >= 2");
    require(c.relay_probability >= 0.0 && c.relay_probability <= 1.0,
            "0 <= relay_probability <= 1");
    require(c.chaos_mu > 0.0 && c.chaos_mu <= 4.0, "0 < chaos_mu <= 4");
    require(c.jam_start_epoch < c.jam_end_epoch, "jam_start_epoch < jam_end_epoch");
    require(c.trials >= 1, "trials >= 1");
    require(c.seeds.size() == c.trials, "seeds length equals trials");
    require(c.high_priority_fraction >= 0.0 && c.high_priority_fraction <= 1.0,
            "0 <= high_priority_fraction <= 1");
    for (const auto& r : c.radios) {
        require(r.tx_power_min_dbm <= r.tx_power_init_dbm &&
                    r.tx_power_init_dbm <= r.tx_power_max_dbm,
                "tx_power_min <= tx_power_init <= tx_power_max");
        require(r.bandwidth_hz > 0.0, "bandwidth_hz > 0");
        require(r.bitrate_bps > 0.0, "bitrate_bps > 0");
    }
    require(c.radios[radio_index(RadioKind::LoRa)].kind == RadioKind::LoRa &&
                c.radios[radio_index(RadioKind::WiFi)].kind == RadioKind::WiFi,
            "radio profile kinds match their slots");
    require(c.channel.d0_m > 0.0, "d0_m > 0");
    require(c.channel.shadow_sigma_db >= 0.0, "shadow_sigma_db >= 0");
    require(c.power.step_db > 0.0, "step_db > 0");
    require(c.power.hysteresis_db >= 0.0, "hysteresis_db >= 0");
    require(c.routing.alpha >= 0.0 && c.routing.beta >= 0.0, "alpha, beta >= 0");
    require(c.routing.alpha + c.routing.beta > 0.0, "alpha + beta > 0");
    require(c.routing.energy_floor >= 0.0 && c.routing.energy_floor < 1.0,
            "0 <= energy_floor < 1");
    for (const auto& e : c.energy) {
        require(e.p_tx_w >= 0.0 && e.p_rx_w >= 0.0 && e.p_cpu_w >= 0.0, "powers >= 0");
    }
    require(c.initial_energy_j > 0.0, "initial_energy_j > 0");
}

double distance(const Position& a, const Position& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

}  // namespace damcr
