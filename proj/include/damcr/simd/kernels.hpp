#pragma once

// Batched arithmetic kernels used on the per-epoch hot paths (link budgets
// for every directed link, routing weights, logistic-map orbits).
//
// Each kernel has a scalar reference in `scalar::` and a vector variant in
// `avx2::`. The public entry points dispatch at runtime to the best variant
// the host supports. Variants perform the same IEEE operations in the same
// order, so their outputs are bit-identical; the equivalence tests rely on
// this. Set DAMCR_ISA=scalar to force the reference path.

#include <cstdint>
#include <span>
#include <string_view>

namespace damcr::simd {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa);

bool avx2_supported();

/// ISA used by the dispatching entry points. Initialized from DAMCR_ISA when
/// set, otherwise the best supported.
Isa active_isa();

/// Throws std::runtime_error if the host cannot run `isa`.
void set_isa(Isa isa);

struct LinkBudgetInputs {
    std::span<const double> tx_power_dbm;
    std::span<const double> mean_path_loss_db;
    std::span<const double> shadow_db;
    std::span<const double> noise_floor_dbm;
    std::span<const double> fading_db;
};

/// snr[i] = tx + gains - (pl + shadow) - noise + fading + extra_gain.
/// `antenna_gain_db` is G_t + G_r; `extra_gain_db` is the TR gain or 0.
void link_budget_db(const LinkBudgetInputs& in, double antenna_gain_db, double extra_gain_db,
                    std::span<double> snr_db);

/// w[i] = alpha * (1 - p[i]) + beta / e[i].
void routing_weights(std::span<const double> p_succ, std::span<const double> energy_norm,
                     double alpha, double beta, std::span<double> weights);

/// Advances every state by `steps` iterations of s <- mu * s * (1 - s).
void logistic_iterate(std::span<double> states, double mu, std::uint64_t steps);

/// channel[i] = min(floor(state[i] * channels), channels - 1).
void quantize_channels(std::span<const double> states, std::uint32_t channels,
                       std::span<std::uint32_t> out);

namespace scalar {
void link_budget_db(const LinkBudgetInputs& in, double antenna_gain_db, double extra_gain_db,
                    std::span<double> snr_db);
void routing_weights(std::span<const double> p_succ, std::span<const double> energy_norm,
                     double alpha, double beta, std::span<double> weights);
void logistic_iterate(std::span<double> states, double mu, std::uint64_t steps);
void quantize_channels(std::span<const double> states, std::uint32_t channels,
                       std::span<std::uint32_t> out);
}  // namespace scalar

namespace avx2 {
void link_budget_db(const LinkBudgetInputs& in, double antenna_gain_db, double extra_gain_db,
                    std::span<double> snr_db);
void routing_weights(std::span<const double> p_succ, std::span<const double> energy_norm,
                     double alpha, double beta, std::span<double> weights);
void logistic_iterate(std::span<double> states, double mu, std::uint64_t steps);
void quantize_channels(std::span<const double> states, std::uint32_t channels,
                       std::span<std::uint32_t> out);
}  // namespace avx2

}  // namespace damcr::simd
