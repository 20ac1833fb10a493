#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "mmkey/array_channel.hpp"
#include "mmkey/beam_weights.hpp"
#include "mmkey/errors.hpp"

using namespace mmkey;

namespace {
const ArrayGeometry kUla9{9, 0.5, 60.0};
const ArrayGeometry kUla2{2, 0.5, 60.0};
} // namespace

TEST_CASE("steering vector at broadside is all ones") {
    const ComplexVec a = steering_vector(kUla2, 0.0);
    REQUIRE(a.size() == 2);
    CHECK(a[0] == Complex{1.0, 0.0});
    CHECK(a[1].real() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(a[1].imag() == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("steering vector at endfire alternates sign") {
    const ComplexVec a = steering_vector(kUla2, 90.0);
    CHECK(std::abs(a[0] - Complex{1.0, 0.0}) < 1e-12);
    CHECK(std::abs(a[1] - Complex{-1.0, 0.0}) < 1e-12);
}

TEST_CASE("steering vector phase progression at 30 degrees") {
    // element m = exp(-j * pi * 0.5 * m) for half-wavelength spacing
    const ComplexVec a = steering_vector(kUla9, 30.0);
    for (int m = 0; m < 9; ++m) {
        const Complex expected = std::polar(1.0, -std::numbers::pi * 0.5 * m);
        CHECK(std::abs(a[static_cast<std::size_t>(m)] - expected) < 1e-12);
    }
    CHECK(std::abs(a[2] - Complex{-1.0, 0.0}) < 1e-12);
}

TEST_CASE("steering vector elements are unit magnitude") {
    for (double angle : {-90.0, -47.3, -12.0, 0.0, 8.25, 33.0, 61.7, 90.0}) {
        const ComplexVec a = steering_vector(kUla9, angle);
        CHECK(a[0] == Complex{1.0, 0.0});
        for (const Complex& e : a)
            CHECK(std::abs(std::abs(e) - 1.0) < 1e-12);
    }
}

TEST_CASE("steering vector is conjugate symmetric in angle") {
    for (double angle : {3.0, 17.0, 45.0, 76.5}) {
        const ComplexVec pos = steering_vector(kUla9, angle);
        const ComplexVec neg = steering_vector(kUla9, -angle);
        for (std::size_t m = 0; m < pos.size(); ++m)
            CHECK(std::abs(neg[m] - std::conj(pos[m])) < 1e-12);
    }
}

TEST_CASE("steering vector rejects out-of-range angles") {
    CHECK_THROWS_AS((void)steering_vector(kUla9, 90.5), InputDomainError);
    CHECK_THROWS_AS((void)steering_vector(kUla9, -120.0), InputDomainError);
}

TEST_CASE("geometry validation") {
    CHECK_THROWS_AS((void)steering_vector(ArrayGeometry{1, 0.5, 60.0}, 0.0), InputDomainError);
    CHECK_THROWS_AS((void)steering_vector(ArrayGeometry{4, 0.0, 60.0}, 0.0), InputDomainError);
    CHECK_THROWS_AS((void)steering_vector(ArrayGeometry{4, 1.5, 60.0}, 0.0), InputDomainError);
}

TEST_CASE("pure LOS channel equals the steering vector") {
    Rng rng = make_rng(7);
    const ChannelRealization ch =
        draw_channel(kUla9, 25.0, std::numeric_limits<double>::infinity(), rng);
    const ComplexVec a = steering_vector(kUla9, 25.0);
    for (std::size_t m = 0; m < a.size(); ++m)
        CHECK(ch.h[m] == a[m]);
}

TEST_CASE("pure NLOS channel equals the drawn scatter vector") {
    Rng rng = make_rng(7);
    const ChannelRealization ch =
        draw_channel(kUla9, 25.0, -std::numeric_limits<double>::infinity(), rng);
    for (std::size_t m = 0; m < ch.h.size(); ++m)
        CHECK(ch.h[m] == ch.nlos[m]);
}

TEST_CASE("channel combines LOS and NLOS with Rician weights") {
    Rng rng = make_rng(21);
    const double k_db = 10.0;
    const ChannelRealization ch = draw_channel(kUla9, -40.0, k_db, rng);
    const ComplexVec a = steering_vector(kUla9, -40.0);
    const double k = std::pow(10.0, k_db / 10.0);
    for (std::size_t m = 0; m < a.size(); ++m) {
        const Complex expected =
            std::sqrt(k / (k + 1.0)) * a[m] + std::sqrt(1.0 / (k + 1.0)) * ch.nlos[m];
        CHECK(std::abs(ch.h[m] - expected) < 1e-12);
    }
}

TEST_CASE("channel draws are bit-identical for the same seed") {
    Rng rng_a = make_rng(123456);
    Rng rng_b = make_rng(123456);
    const ChannelRealization a = draw_channel(kUla9, 12.0, 10.0, rng_a);
    const ChannelRealization b = draw_channel(kUla9, 12.0, 10.0, rng_b);
    for (std::size_t m = 0; m < a.h.size(); ++m) {
        CHECK(a.h[m] == b.h[m]);
        CHECK(a.nlos[m] == b.nlos[m]);
    }
}

TEST_CASE("K-factor power ratio at 0 dB is near unity") {
    Rng rng = make_rng(99);
    const ComplexVec a = steering_vector(kUla9, 5.0);
    double los_power = 0.0;
    double nlos_power = 0.0;
    const int draws = 10000;
    const double k = 1.0; // 0 dB
    for (int i = 0; i < draws; ++i) {
        const ChannelRealization ch = draw_channel(kUla9, 5.0, 0.0, rng);
        for (std::size_t m = 0; m < a.size(); ++m) {
            los_power += std::norm(std::sqrt(k / (k + 1.0)) * a[m]);
            nlos_power += std::norm(std::sqrt(1.0 / (k + 1.0)) * ch.nlos[m]);
        }
    }
    const double ratio = los_power / nlos_power;
    CHECK(ratio > 0.94);
    CHECK(ratio < 1.06);
}

TEST_CASE("noise calibration from the best training beam") {
    // N=3 pure-LOS broadside channel: the all-on zero-phase beam is the
    // best directional beam, delivering |3|^2 = 9.
    const ArrayGeometry geom{3, 0.5, 60.0};
    const HardwareProfile hw = default_hardware(geom);
    Rng rng = make_rng(1);
    const ChannelRealization ch =
        draw_channel(geom, 0.0, std::numeric_limits<double>::infinity(), rng);
    const std::vector<WeightVector> codebook = directional_codebook(geom, hw);

    SUBCASE("snr 0 dB makes noise power equal best power") {
        const NoiseModel noise = calibrate_noise(ch, 0.0, codebook, hw);
        CHECK(noise.noise_power == doctest::Approx(9.0).epsilon(1e-12));
    }
    SUBCASE("snr 10 dB with best power 9 gives 0.9") {
        const NoiseModel noise = calibrate_noise(ch, 10.0, codebook, hw);
        CHECK(noise.noise_power == doctest::Approx(0.9).epsilon(1e-12));
    }
}

TEST_CASE("noise calibration for the nine-antenna broadside case") {
    const HardwareProfile hw = default_hardware(kUla9); // P_t = 9
    Rng rng = make_rng(1);
    const ChannelRealization ch =
        draw_channel(kUla9, 0.0, std::numeric_limits<double>::infinity(), rng);
    const std::vector<WeightVector> codebook = directional_codebook(kUla9, hw);

    // The broadside beam needs no quantization, so P_best = N * P_t = 81.
    const NoiseModel noise = calibrate_noise(ch, 31.4, codebook, hw);
    CHECK(noise.noise_power == doctest::Approx(81.0 / std::pow(10.0, 3.14)).epsilon(1e-12));
    CHECK(noise.noise_power == doctest::Approx(0.0587).epsilon(2e-3));
}

TEST_CASE("noise calibration requires a codebook") {
    Rng rng = make_rng(1);
    const ChannelRealization ch = draw_channel(kUla9, 0.0, 10.0, rng);
    CHECK_THROWS_AS((void)calibrate_noise(ch, 10.0, {}, default_hardware(kUla9)),
                    ConfigError);
}

TEST_CASE("noiseless observation is the exact product") {
    Rng rng = make_rng(5);
    const ChannelRealization ch = draw_channel(kUla9, 10.0, 10.0, rng);
    const HardwareProfile hw = default_hardware(kUla9);
    const ComplexVec w = realize(random_weight(hw, 9, rng), hw);
    const NoiseModel noiseless{0.0, 0.0};
    CHECK(observe(ch, w, noiseless, rng) == dot(ch.h, w));
}

TEST_CASE("observation through a perfect null is noise only") {
    ChannelRealization ch;
    ch.h = {Complex{1.0, 0.0}, Complex{1.0, 0.0}};
    const double s = std::sqrt(2.0) / 2.0; // ||W||^2 = 1
    const ComplexVec w = {Complex{s, 0.0}, Complex{-s, 0.0}};

    Rng rng = make_rng(31);
    CHECK(std::abs(observe(ch, w, NoiseModel{0.0, 0.0}, rng)) < 1e-15);

    Complex mean{0.0, 0.0};
    const int draws = 20000;
    for (int i = 0; i < draws; ++i)
        mean += observe(ch, w, NoiseModel{1.0, 0.0}, rng);
    mean /= static_cast<double>(draws);
    CHECK(std::abs(mean) < 0.02);
}

TEST_CASE("observation noise variance matches the configured power") {
    Rng rng_ch = make_rng(77);
    const ChannelRealization ch = draw_channel(kUla9, 0.0, 10.0, rng_ch);
    const HardwareProfile hw = default_hardware(kUla9);
    const ComplexVec w = realize(random_weight(hw, 9, rng_ch), hw);
    const Complex clean = dot(ch.h, w);

    const NoiseModel noise{1.0, 0.0};
    Rng rng = make_rng(78);
    double second_moment = 0.0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i)
        second_moment += std::norm(observe(ch, w, noise, rng) - clean);
    second_moment /= draws;
    CHECK(second_moment > 0.99);
    CHECK(second_moment < 1.01);
}

TEST_CASE("noiseless observation is linear in the weight vector") {
    Rng rng = make_rng(11);
    const ChannelRealization ch = draw_channel(kUla9, 33.0, 5.0, rng);
    ComplexVec w1(9);
    ComplexVec w2(9);
    for (std::size_t i = 0; i < 9; ++i) {
        w1[i] = complex_gaussian(rng, 1.0);
        w2[i] = complex_gaussian(rng, 1.0);
    }
    const Complex alpha{0.7, -1.2};
    const Complex beta{-0.3, 0.4};
    ComplexVec combo(9);
    for (std::size_t i = 0; i < 9; ++i)
        combo[i] = alpha * w1[i] + beta * w2[i];

    const NoiseModel noiseless{0.0, 0.0};
    const Complex lhs = observe(ch, combo, noiseless, rng);
    const Complex rhs = alpha * observe(ch, w1, noiseless, rng) +
                        beta * observe(ch, w2, noiseless, rng);
    CHECK(std::abs(lhs - rhs) < 1e-12);
}

TEST_CASE("dot rejects mismatched lengths") {
    CHECK_THROWS_AS((void)dot(ComplexVec(3), ComplexVec(4)), InputDomainError);
}
