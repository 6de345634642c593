// Compiled with -mavx2 (never -mfma: fused multiply-add would break bitwise
// agreement with the scalar reference).

#include <stdexcept>

#include "damcr/simd/kernels.hpp"

#if defined(__AVX2__)
#include <immintrin.h>
#endif

namespace damcr::simd::avx2 {

#if defined(__AVX2__)

void link_budget_db(const LinkBudgetInputs& in, double antenna_gain_db, double extra_gain_db,
                    std::span<double> snr_db) {
    const auto n = snr_db.size();
    if (in.tx_power_dbm.size() != n || in.mean_path_loss_db.size() != n ||
        in.shadow_db.size() != n || in.noise_floor_dbm.size() != n || in.fading_db.size() != n)
        throw std::invalid_argument("link_budget_db: input spans differ in length");

    const __m256d gain = _mm256_set1_pd(antenna_gain_db);
    const __m256d extra = _mm256_set1_pd(extra_gain_db);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d s = _mm256_add_pd(_mm256_loadu_pd(&in.tx_power_dbm[i]), gain);
        const __m256d pl = _mm256_add_pd(_mm256_loadu_pd(&in.mean_path_loss_db[i]),
                                         _mm256_loadu_pd(&in.shadow_db[i]));
        s = _mm256_sub_pd(s, pl);
        s = _mm256_sub_pd(s, _mm256_loadu_pd(&in.noise_floor_dbm[i]));
        s = _mm256_add_pd(s, _mm256_loadu_pd(&in.fading_db[i]));
        _mm256_storeu_pd(&snr_db[i], _mm256_add_pd(s, extra));
    }
    if (i < n) {
        LinkBudgetInputs tail{in.tx_power_dbm.subspan(i), in.mean_path_loss_db.subspan(i),
                              in.shadow_db.subspan(i), in.noise_floor_dbm.subspan(i),
                              in.fading_db.subspan(i)};
        scalar::link_budget_db(tail, antenna_gain_db, extra_gain_db, snr_db.subspan(i));
    }
}

void routing_weights(std::span<const double> p_succ, std::span<const double> energy_norm,
                     double alpha, double beta, std::span<double> weights) {
    const auto n = weights.size();
    if (p_succ.size() != n || energy_norm.size() != n)
        throw std::invalid_argument("routing_weights: span length mismatch");
    const __m256d a = _mm256_set1_pd(alpha);
    const __m256d b = _mm256_set1_pd(beta);
    const __m256d one = _mm256_set1_pd(1.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d miss = _mm256_sub_pd(one, _mm256_loadu_pd(&p_succ[i]));
        const __m256d energy = _mm256_div_pd(b, _mm256_loadu_pd(&energy_norm[i]));
        _mm256_storeu_pd(&weights[i], _mm256_add_pd(_mm256_mul_pd(a, miss), energy));
    }
    if (i < n)
        scalar::routing_weights(p_succ.subspan(i), energy_norm.subspan(i), alpha, beta,
                                weights.subspan(i));
}

void logistic_iterate(std::span<double> states, double mu, std::uint64_t steps) {
    const __m256d m = _mm256_set1_pd(mu);
    const __m256d one = _mm256_set1_pd(1.0);
    const auto n = states.size();
    std::size_t i = 0;
    // Two independent accumulators per iteration hide the multiply latency.
    for (; i + 8 <= n; i += 8) {
        __m256d x0 = _mm256_loadu_pd(&states[i]);
        __m256d x1 = _mm256_loadu_pd(&states[i + 4]);
        for (std::uint64_t k = 0; k < steps; ++k) {
            x0 = _mm256_mul_pd(_mm256_mul_pd(m, x0), _mm256_sub_pd(one, x0));
            x1 = _mm256_mul_pd(_mm256_mul_pd(m, x1), _mm256_sub_pd(one, x1));
        }
        _mm256_storeu_pd(&states[i], x0);
        _mm256_storeu_pd(&states[i + 4], x1);
    }
    for (; i + 4 <= n; i += 4) {
        __m256d x = _mm256_loadu_pd(&states[i]);
        for (std::uint64_t k = 0; k < steps; ++k)
            x = _mm256_mul_pd(_mm256_mul_pd(m, x), _mm256_sub_pd(one, x));
        _mm256_storeu_pd(&states[i], x);
    }
    if (i < n) scalar::logistic_iterate(states.subspan(i), mu, steps);
}

void quantize_channels(std::span<const double> states, std::uint32_t channels,
                       std::span<std::uint32_t> out) {
    if (states.size() != out.size())
        throw std::invalid_argument("quantize_channels: span length mismatch");
    const __m256d c = _mm256_set1_pd(static_cast<double>(channels));
    const __m256d top = _mm256_set1_pd(static_cast<double>(channels) - 1.0);
    const __m256d zero = _mm256_setzero_pd();
    const auto n = states.size();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d q = _mm256_floor_pd(_mm256_mul_pd(_mm256_loadu_pd(&states[i]), c));
        q = _mm256_max_pd(_mm256_min_pd(q, top), zero);
        const __m128i idx = _mm256_cvttpd_epi32(q);
        _mm_storeu_si128(reinterpret_cast<__m128i*>(&out[i]), idx);
    }
    if (i < n) scalar::quantize_channels(states.subspan(i), channels, out.subspan(i));
}

#else

void link_budget_db(const LinkBudgetInputs&, double, double, std::span<double>) {
    throw std::runtime_error("AVX2 kernels were not compiled into this build");
}
void routing_weights(std::span<const double>, std::span<const double>, double, double,
                     std::span<double>) {
    throw std::runtime_error("AVX2 kernels were not compiled into this build");
}
void logistic_iterate(std::span<double>, double, std::uint64_t) {
    throw std::runtime_error("AVX2 kernels were not compiled into this build");
}
void quantize_channels(std::span<const double>, std::uint32_t, std::span<std::uint32_t>) {
    throw std::runtime_error("AVX2 kernels were not compiled into this build");
}

#endif

}  // namespace damcr::simd::avx2
