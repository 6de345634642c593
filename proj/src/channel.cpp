#include "damcr/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace damcr::channel {

double mean_path_loss_db(double d_m, const ChannelParams& params) {
    if (!(d_m > 0.0)) throw std::invalid_argument("path loss needs a positive distance");
    const double d = std::max(d_m, params.d0_m);
    return params.pl0_db + 10.0 * params.exponent * std::log10(d / params.d0_m);
}

double path_loss_db(double d_m, const ChannelParams& params, double shadow_db) {
    return mean_path_loss_db(d_m, params) + shadow_db;
}

double noise_floor_dbm(double bandwidth_hz, double noise_figure_db) {
    return kThermalNoiseDbmPerHz + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
}

double rician_power_gain(double k_linear, Rng& rng) {
    if (std::isinf(k_linear)) return 1.0;
    const double los = std::sqrt(k_linear / (k_linear + 1.0));
    const double sigma = std::sqrt(0.5 / (k_linear + 1.0));
    const double re = los + rng.normal(0.0, sigma);
    const double im = rng.normal(0.0, sigma);
    return re * re + im * im;
}

double fading_gain_db(FadingModel model, const ChannelParams& params, Rng& rng) {
    switch (model) {
        case FadingModel::Awgn:
            return 0.0;
        case FadingModel::Rayleigh:
            return linear_to_db(rng.exponential());
        case FadingModel::Rician: {
            const double k = db_to_linear(params.rician_k_db);
            if (std::isinf(k)) return 0.0;
            return linear_to_db(rician_power_gain(k, rng));
        }
    }
    return 0.0;
}

double link_snr_db(double tx_power_dbm, double gt_dbi, double gr_dbi, double path_loss_db,
                   double noise_floor_dbm, double fading_db, bool tr_enabled, double tr_gain_db) {
    // Summation order is shared with the batched link-budget kernels.
    double snr = tx_power_dbm + (gt_dbi + gr_dbi);
    snr = snr - path_loss_db;
    snr = snr - noise_floor_dbm;
    snr = snr + fading_db;
    snr = snr + (tr_enabled ? tr_gain_db : 0.0);
    return snr;
}

}  // namespace damcr::channel
