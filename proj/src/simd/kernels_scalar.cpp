#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "damcr/simd/kernels.hpp"

namespace damcr::simd::scalar {

namespace {

void check_sizes(const LinkBudgetInputs& in, std::size_t n) {
    if (in.tx_power_dbm.size() != n || in.mean_path_loss_db.size() != n ||
        in.shadow_db.size() != n || in.noise_floor_dbm.size() != n || in.fading_db.size() != n)
        throw std::invalid_argument("link_budget_db: input spans differ in length");
}

}  // namespace

void link_budget_db(const LinkBudgetInputs& in, double antenna_gain_db, double extra_gain_db,
                    std::span<double> snr_db) {
    const auto n = snr_db.size();
    check_sizes(in, n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = in.tx_power_dbm[i] + antenna_gain_db;
        s = s - (in.mean_path_loss_db[i] + in.shadow_db[i]);
        s = s - in.noise_floor_dbm[i];
        s = s + in.fading_db[i];
        snr_db[i] = s + extra_gain_db;
    }
}

void routing_weights(std::span<const double> p_succ, std::span<const double> energy_norm,
                     double alpha, double beta, std::span<double> weights) {
    const auto n = weights.size();
    if (p_succ.size() != n || energy_norm.size() != n)
        throw std::invalid_argument("routing_weights: span length mismatch");
    for (std::size_t i = 0; i < n; ++i)
        weights[i] = alpha * (1.0 - p_succ[i]) + beta / energy_norm[i];
}

void logistic_iterate(std::span<double> states, double mu, std::uint64_t steps) {
    for (auto& s : states) {
        double x = s;
        for (std::uint64_t k = 0; k < steps; ++k) x = (mu * x) * (1.0 - x);
        s = x;
    }
}

void quantize_channels(std::span<const double> states, std::uint32_t channels,
                       std::span<std::uint32_t> out) {
    if (states.size() != out.size())
        throw std::invalid_argument("quantize_channels: span length mismatch");
    const double c = static_cast<double>(channels);
    const double top = c - 1.0;
    for (std::size_t i = 0; i < states.size(); ++i) {
        const double q = std::min(std::floor(states[i] * c), top);
        out[i] = static_cast<std::uint32_t>(std::max(q, 0.0));
    }
}

}  // namespace damcr::simd::scalar
