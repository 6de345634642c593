#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "damcr/channel.hpp"
#include "damcr/rng.hpp"
#include "damcr/routing.hpp"
#include "damcr/simd/kernels.hpp"
#include "damcr/spectrum.hpp"

using namespace damcr;
namespace simd = damcr::simd;

namespace {

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

// Lengths around the 4-lane width so every tail shape is exercised.
const std::size_t kLengths[] = {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 63, 64, 65, 1000, 1003};

}  // namespace

TEST_CASE("scalar link budget matches the channel model") {
    Rng rng(1);
    const std::size_t n = 257;
    std::vector<double> tx(n), pl(n), sh(n), no(n), fa(n), out(n);
    for (std::size_t i = 0; i < n; ++i) {
        tx[i] = rng.uniform(0, 18);
        pl[i] = rng.uniform(40, 120);
        sh[i] = rng.normal(0, 4);
        no[i] = rng.bernoulli(0.5) ? -117.03 : -94.99;
        fa[i] = rng.normal(0, 3);
    }
    simd::scalar::link_budget_db({tx, pl, sh, no, fa}, 1.5, 2.5, out);
    for (std::size_t i = 0; i < n; ++i) {
        const double want =
            channel::link_snr_db(tx[i], 0.75, 0.75, pl[i] + sh[i], no[i], fa[i], true, 2.5);
        CHECK(out[i] == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("scalar weights match the routing model") {
    Rng rng(2);
    std::vector<double> p(100), e(100), w(100);
    for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] = rng.uniform();
        e[i] = rng.uniform(0.06, 1.0);
    }
    simd::scalar::routing_weights(p, e, 0.7, 0.3, w);
    for (std::size_t i = 0; i < p.size(); ++i)
        CHECK(w[i] == doctest::Approx(*routing::link_weight(p[i], e[i], RoutingParams{})));
}

TEST_CASE("scalar logistic kernel matches the hopper") {
    std::vector<double> s{0.1, 0.5, 0.77, 0.9};
    std::vector<double> ref = s;
    simd::scalar::logistic_iterate(s, 3.9, 1000);
    for (std::size_t i = 0; i < ref.size(); ++i) {
        for (int k = 0; k < 1000; ++k) ref[i] = spectrum::chaos_step(ref[i], 3.9);
        CHECK(s[i] == ref[i]);
    }
    std::vector<std::uint32_t> ch(4);
    simd::scalar::quantize_channels(s, 8, ch);
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(ch[i] == spectrum::hop_channel(s[i], 8));
}

TEST_CASE("ISA selection") {
    const auto start = simd::active_isa();
    CHECK_NOTHROW(simd::set_isa(simd::Isa::Scalar));
    CHECK(simd::active_isa() == simd::Isa::Scalar);
    if (simd::avx2_supported()) {
        simd::set_isa(simd::Isa::Avx2);
        CHECK(simd::active_isa() == simd::Isa::Avx2);
    } else {
        CHECK_THROWS(simd::set_isa(simd::Isa::Avx2));
    }
    simd::set_isa(start);
    CHECK(simd::to_string(simd::Isa::Scalar) == "scalar");
}

TEST_CASE("vector kernels are bit-identical to the scalar references") {
    if (!simd::avx2_supported()) {
        MESSAGE("host lacks AVX2; vector variants not exercised");
        return;
    }
    Rng rng(77);
    for (auto n : kLengths) {
        CAPTURE(n);
        std::vector<double> tx(n), pl(n), sh(n), no(n), fa(n);
        for (std::size_t i = 0; i < n; ++i) {
            tx[i] = rng.uniform(-5, 30);
            pl[i] = rng.uniform(40, 140);
            sh[i] = rng.normal(0, 8);
            no[i] = rng.uniform(-120, -90);
            fa[i] = 10 * std::log10(rng.exponential());
        }
        std::vector<double> a(n), b(n);
        for (double tr : {0.0, 2.5}) {
            simd::scalar::link_budget_db({tx, pl, sh, no, fa}, 0.0, tr, a);
            simd::avx2::link_budget_db({tx, pl, sh, no, fa}, 0.0, tr, b);
            CHECK(same_bits(a, b));
            simd::scalar::link_budget_db({tx, pl, sh, no, fa}, 4.25, tr, a);
            simd::avx2::link_budget_db({tx, pl, sh, no, fa}, 4.25, tr, b);
            CHECK(same_bits(a, b));
        }

        std::vector<double> p(n), e(n);
        for (std::size_t i = 0; i < n; ++i) {
            p[i] = rng.uniform();
            e[i] = rng.uniform(1e-3, 1.0);
        }
        simd::scalar::routing_weights(p, e, 0.7, 0.3, a);
        simd::avx2::routing_weights(p, e, 0.7, 0.3, b);
        CHECK(same_bits(a, b));
        simd::scalar::routing_weights(p, e, 0.123, 1.7, a);
        simd::avx2::routing_weights(p, e, 0.123, 1.7, b);
        CHECK(same_bits(a, b));

        std::vector<double> s1(n);
        for (auto& v : s1) v = rng.uniform(0.05, 0.95);
        auto s2 = s1;
        simd::scalar::logistic_iterate(s1, 3.9, 5000);
        simd::avx2::logistic_iterate(s2, 3.9, 5000);
        CHECK(same_bits(s1, s2));

        // Include the exact edges of [0, 1].
        if (n >= 2) {
            s1[0] = 0.0;
            s1[1] = 1.0;
        }
        std::vector<std::uint32_t> c1(n), c2(n);
        for (std::uint32_t channels : {2u, 8u, 13u}) {
            simd::scalar::quantize_channels(s1, channels, c1);
            simd::avx2::quantize_channels(s1, channels, c2);
            CHECK(c1 == c2);
        }
    }
}

TEST_CASE("dispatching entry points follow the active ISA") {
    std::vector<double> s(37);
    Rng rng(5);
    for (auto& v : s) v = rng.uniform(0.05, 0.95);
    auto ref = s;
    simd::scalar::logistic_iterate(ref, 3.9, 100);
    const auto start = simd::active_isa();
    for (auto isa : {simd::Isa::Scalar, simd::Isa::Avx2}) {
        if (isa == simd::Isa::Avx2 && !simd::avx2_supported()) continue;
        simd::set_isa(isa);
        auto got = s;
        simd::logistic_iterate(got, 3.9, 100);
        CHECK(same_bits(got, ref));
    }
    simd::set_isa(start);
}
