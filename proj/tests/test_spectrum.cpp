#include <doctest.h>

#include <array>
#include <cmath>
#include <unordered_set>

#include "damcr/channel.hpp"
#include "damcr/spectrum.hpp"

using namespace damcr;
using namespace damcr::spectrum;

TEST_CASE("logistic recurrence by hand") {
    CHECK(chaos_step(0.5, 3.9) == doctest::Approx(0.975));
    CHECK(chaos_step(0.0, 3.9) == 0.0);
    CHECK(chaos_step(0.975, 3.9) == doctest::Approx(0.0950625));
    CHECK(chaos_step(1.0, 3.9) == 0.0);
    CHECK_THROWS_AS(chaos_step(-0.01, 3.9), std::domain_error);
    CHECK_THROWS_AS(chaos_step(1.01, 3.9), std::domain_error);
}

TEST_CASE("state to channel quantization") {
    CHECK(hop_channel(0.0, 8) == 0);
    CHECK(hop_channel(0.5, 8) == 4);
    CHECK(hop_channel(1.0, 8) == 7);
    CHECK(hop_channel(0.124999, 8) == 0);
    CHECK(hop_channel(0.125, 8) == 1);
    CHECK(hop_channel(0.999999, 8) == 7);
}

TEST_CASE("channel carriers") {
    const auto lora = default_lora_profile();
    const auto wifi = default_wifi_profile();
    CHECK(channel_frequency_hz(lora, 0) == 868e6);
    CHECK(channel_frequency_hz(lora, 3) == doctest::Approx(868.6e6));
    CHECK(channel_frequency_hz(wifi, 7) == doctest::Approx(2.447e9));
}

TEST_CASE("hopper advances then quantizes") {
    ChaosHopper h(0.5, 3.9, 8);
    CHECK(h.next_channel() == 7);  // 0.975
    CHECK(h.state() == doctest::Approx(0.975));
    CHECK(h.next_channel() == 0);  // 0.0950625
    CHECK_THROWS(ChaosHopper(0.0, 3.9, 8));
    CHECK_THROWS(ChaosHopper(1.0, 3.9, 8));
}

TEST_CASE("transmitter and receiver stay in lockstep") {
    ChaosHopper tx(0.3141, 3.9, 8), rx(0.3141, 3.9, 8);
    for (int i = 0; i < 10000; ++i) REQUIRE(tx.next_channel() == rx.next_channel());
}

TEST_CASE("jammer window and channel") {
    auto cfg = default_config(30, FadingModel::Awgn, Attack::Jamming);
    Rng rng(4, StreamTag::Jammer);
    const auto j = make_jammer(cfg, rng);
    CHECK(j.enabled);
    CHECK_FALSE(j.active(99));
    CHECK(j.active(100));
    CHECK(j.active(120));
    CHECK(j.active(149));
    CHECK_FALSE(j.active(150));
    CHECK(j.tx_power_dbm == 30.0);
    CHECK(j.position.x >= 0.0);
    CHECK(j.position.x <= cfg.area_side_m);

    auto quiet = default_config(30, FadingModel::Awgn, Attack::None);
    Rng rng2(4, StreamTag::Jammer);
    CHECK_FALSE(make_jammer(quiet, rng2).active(120));
}

TEST_CASE("jammer channel histogram is uniform") {
    Rng rng(8);
    std::array<int, 8> hist{};
    const int n = 100'000;
    for (int i = 0; i < n; ++i) {
        const auto c = jammer_channel(rng, 8);
        REQUIRE(c < 8);
        ++hist[c];
    }
    double chi2 = 0.0;
    for (int h : hist) {
        CHECK(std::abs(h / double(n) - 0.125) <= 0.02 * 0.125);
        chi2 += (h - n / 8.0) * (h - n / 8.0) / (n / 8.0);
    }
    // 7 degrees of freedom; 0.999 quantile is 24.3.
    CHECK(chi2 < 24.3);
}

TEST_CASE("SINR under jamming") {
    CHECK(effective_sinr_db(12.3, -80, -85, -120, false, 3.0) == 12.3);
    // Noise 40 dB below the jammer barely matters.
    CHECK(effective_sinr_db(40.0, -80, -85, -200, true, 0.0) == doctest::Approx(5.0).epsilon(1e-3));
    CHECK(effective_sinr_db(40.0, -80, -85, -200, true, 3.0) == doctest::Approx(8.0).epsilon(1e-3));
    // Equal noise and jam power: 3 dB worse than S/N.
    CHECK(effective_sinr_db(20.0, -80, -100, -100, true, 0.0) ==
          doctest::Approx(20.0 - channel::linear_to_db(2.0)));
}

TEST_CASE("chaotic orbits: range, occupancy, no recurrence, reproducibility") {
    Rng seeds(2718);
    for (int s = 0; s < 10; ++s) {
        const double h0 = seeds.uniform(0.05, 0.95);
        ChaosHopper h(h0, 3.9, 8), twin(h0, 3.9, 8);
        std::array<int, 8> hist{};
        std::unordered_set<double> seen;
        const int steps = 100'000;
        for (int i = 0; i < steps; ++i) {
            const auto c = h.next_channel();
            REQUIRE(c == twin.next_channel());
            REQUIRE(h.state() > 0.0);
            REQUIRE(h.state() < 1.0);
            ++hist[c];
            REQUIRE(seen.insert(h.state()).second);
        }
        for (int v : hist) CHECK(v >= 0.03 * steps);
    }
}
