#pragma once

// Chaotic frequency hopping driven by the logistic map, the narrowband
// jammer, and SINR under jamming.

#include <cstdint>
#include <optional>

#include "damcr/model.hpp"
#include "damcr/rng.hpp"

namespace damcr::spectrum {

inline constexpr double kDefaultMu = 3.9;

/// mu * state * (1 - state). Throws std::domain_error if state is outside
/// [0, 1].
double chaos_step(double state, double mu);

/// floor(state * channels), clamped to [0, channels - 1].
std::uint32_t hop_channel(double state, std::uint32_t channels);

/// Carrier for a channel index: f_c + df * index.
double channel_frequency_hz(const RadioProfile& radio, std::uint32_t channel);

/// Per-node hop sequence generator. Transmitter and receiver seeded with the
/// same state produce identical sequences.
class ChaosHopper {
public:
    ChaosHopper() = default;
    ChaosHopper(double state, double mu, std::uint32_t channels);

    /// Advances the map once and returns the channel for the new state.
    std::uint32_t next_channel();

    double state() const { return state_; }
    double mu() const { return mu_; }
    std::uint32_t channels() const { return channels_; }

private:
    double state_ = 0.5;
    double mu_ = kDefaultMu;
    std::uint32_t channels_ = 8;
};

/// One uniformly random channel in [0, channels).
std::uint32_t jammer_channel(Rng& rng, std::uint32_t channels);

/// Single narrowband jammer active on [start_epoch, end_epoch) when the
/// scenario is under attack.
struct JammerState {
    bool enabled = false;
    Position position{};
    double tx_power_dbm = 30.0;
    std::uint32_t start_epoch = 100;
    std::uint32_t end_epoch = 150;
    std::optional<std::uint32_t> jammed_channel;

    bool active(std::uint32_t epoch) const {
        return enabled && start_epoch <= epoch && epoch < end_epoch;
    }
};

/// Jammer placed uniformly in the deployment area.
JammerState make_jammer(const SimConfig& cfg, Rng& rng);

/// Without a channel hit the SNR is returned unchanged. On a hit the result
/// is 10 log10(S / (N + J')) with J' the received jam power reduced by
/// chaos_gain_db.
double effective_sinr_db(double snr_db, double signal_power_dbm, double jam_power_at_rx_dbm,
                         double noise_dbm, bool channel_hit, double chaos_gain_db);

}  // namespace damcr::spectrum
