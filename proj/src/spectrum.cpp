#include "damcr/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "damcr/channel.hpp"

namespace damcr::spectrum {

double chaos_step(double state, double mu) {
    if (!(state >= 0.0 && state <= 1.0))
        throw std::domain_error("chaos state must lie in [0, 1]");
    // Same operation order as the batched logistic kernel.
    return (mu * state) * (1.0 - state);
}

std::uint32_t hop_channel(double state, std::uint32_t channels) {
    const double q = std::floor(state * static_cast<double>(channels));
    const double top = static_cast<double>(channels) - 1.0;
    return static_cast<std::uint32_t>(std::max(std::min(q, top), 0.0));
}

double channel_frequency_hz(const RadioProfile& radio, std::uint32_t channel) {
    return radio.carrier_hz + radio.channel_step_hz * static_cast<double>(channel);
}

ChaosHopper::ChaosHopper(double state, double mu, std::uint32_t channels)
    : state_(state), mu_(mu), channels_(channels) {
    if (!(state > 0.0 && state < 1.0))
        throw std::domain_error("hopper state must lie in (0, 1)");
    if (channels == 0) throw std::invalid_argument("hopper needs at least one channel");
}

std::uint32_t ChaosHopper::next_channel() {
    state_ = chaos_step(state_, mu_);
    return hop_channel(state_, channels_);
}

std::uint32_t jammer_channel(Rng& rng, std::uint32_t channels) {
    return static_cast<std::uint32_t>(rng.index(channels));
}

JammerState make_jammer(const SimConfig& cfg, Rng& rng) {
    JammerState j;
    j.enabled = cfg.attack == Attack::Jamming;
    j.position = {rng.uniform(0.0, cfg.area_side_m), rng.uniform(0.0, cfg.area_side_m)};
    j.tx_power_dbm = cfg.jam_tx_power_dbm;
    j.start_epoch = cfg.jam_start_epoch;
    j.end_epoch = cfg.jam_end_epoch;
    return j;
}

double effective_sinr_db(double snr_db, double signal_power_dbm, double jam_power_at_rx_dbm,
                         double noise_dbm, bool channel_hit, double chaos_gain_db) {
    if (!channel_hit) return snr_db;
    const double s = channel::db_to_linear(signal_power_dbm);
    const double n = channel::db_to_linear(noise_dbm);
    const double j = channel::db_to_linear(jam_power_at_rx_dbm - chaos_gain_db);
    return channel::linear_to_db(s / (n + j));
}

}  // namespace damcr::spectrum
