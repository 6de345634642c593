#pragma once

// Link budget: log-distance path loss with log-normal shadowing, thermal
// noise floor, small-scale fading and the time-reversal focusing gain.
// Everything here is in dB / dBm; conversion to linear scale happens only
// where packet success is evaluated.

#include <cmath>

#include "damcr/model.hpp"
#include "damcr/rng.hpp"

namespace damcr::channel {

inline constexpr double kThermalNoiseDbmPerHz = -174.0;

struct LinkSample {
    double path_loss_db = 0.0;
    double shadow_db = 0.0;
    double fading_db = 0.0;
    double snr_db = 0.0;
    double sinr_db = 0.0;
    bool tr_applied = false;
};

/// Deterministic part PL0 + 10 n log10(d/d0). Distances below d0 clamp to
/// d0. Throws std::invalid_argument for d <= 0.
double mean_path_loss_db(double d_m, const ChannelParams& params);

/// mean_path_loss_db(d) + shadow_db.
double path_loss_db(double d_m, const ChannelParams& params, double shadow_db);

double noise_floor_dbm(double bandwidth_hz, double noise_figure_db);

/// Time-reversal focusing only helps multipath channels.
constexpr bool tr_applies(FadingModel m) { return m != FadingModel::Awgn; }

/// Power gain in dB of one small-scale fading realization; unit mean in
/// linear scale. AWGN draws nothing and returns 0.
double fading_gain_db(FadingModel model, const ChannelParams& params, Rng& rng);

/// Rician power gain for a linear K factor; K = +inf gives exactly 1.
double rician_power_gain(double k_linear, Rng& rng);

/// P_t + G_t + G_r - PL - noise + fading (+ G_TR when enabled).
double link_snr_db(double tx_power_dbm, double gt_dbi, double gr_dbi, double path_loss_db,
                   double noise_floor_dbm, double fading_db, bool tr_enabled, double tr_gain_db);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

}  // namespace damcr::channel
