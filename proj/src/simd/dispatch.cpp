#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "damcr/simd/kernels.hpp"

namespace damcr::simd {

namespace {

Isa initial_isa() {
    if (const char* env = std::getenv("DAMCR_ISA")) {
        const std::string v(env);
        if (v == "scalar") return Isa::Scalar;
        if (v == "avx2" && avx2_supported()) return Isa::Avx2;
    }
    return avx2_supported() ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<Isa>& current() {
    static std::atomic<Isa> isa{initial_isa()};
    return isa;
}

}  // namespace

std::string_view to_string(Isa isa) {
    return isa == Isa::Avx2 ? "avx2" : "scalar";
}

bool avx2_supported() {
#if defined(DAMCR_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
    static const bool ok = [] {
        __builtin_cpu_init();
        return __builtin_cpu_supports("avx2") != 0;
    }();
    return ok;
#else
    return false;
#endif
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void set_isa(Isa isa) {
    if (isa == Isa::Avx2 && !avx2_supported())
        throw std::runtime_error("AVX2 is not available on this host");
    current().store(isa, std::memory_order_relaxed);
}

void link_budget_db(const LinkBudgetInputs& in, double antenna_gain_db, double extra_gain_db,
                    std::span<double> snr_db) {
    if (active_isa() == Isa::Avx2) return avx2::link_budget_db(in, antenna_gain_db, extra_gain_db, snr_db);
    scalar::link_budget_db(in, antenna_gain_db, extra_gain_db, snr_db);
}

void routing_weights(std::span<const double> p_succ, std::span<const double> energy_norm,
                     double alpha, double beta, std::span<double> weights) {
    if (active_isa() == Isa::Avx2) return avx2::routing_weights(p_succ, energy_norm, alpha, beta, weights);
    scalar::routing_weights(p_succ, energy_norm, alpha, beta, weights);
}

void logistic_iterate(std::span<double> states, double mu, std::uint64_t steps) {
    if (active_isa() == Isa::Avx2) return avx2::logistic_iterate(states, mu, steps);
    scalar::logistic_iterate(states, mu, steps);
}

void quantize_channels(std::span<const double> states, std::uint32_t channels,
                       std::span<std::uint32_t> out) {
    if (active_isa() == Isa::Avx2) return avx2::quantize_channels(states, channels, out);
    scalar::quantize_channels(states, channels, out);
}

}  // namespace damcr::simd
