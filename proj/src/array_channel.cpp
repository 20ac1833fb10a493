#include "mmkey/array_channel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mmkey/beam_weights.hpp"
#include "mmkey/errors.hpp"

namespace mmkey {

double deg_to_rad(double deg) {
    return deg * (std::numbers::pi / 180.0);
}

void validate(const ArrayGeometry& geom) {
    if (geom.n_antennas < 2)
        throw InputDomainError("n_antennas must be >= 2, got " + std::to_string(geom.n_antennas));
    if (!(geom.spacing_wavelengths > 0.0) || geom.spacing_wavelengths > 1.0)
        throw InputDomainError("spacing_wavelengths must be in (0, 1]");
    if (!(geom.carrier_ghz > 0.0))
        throw InputDomainError("carrier_ghz must be positive");
}

ComplexVec steering_vector(const ArrayGeometry& geom, double angle_deg) {
    validate(geom);
    if (!(angle_deg >= -90.0 && angle_deg <= 90.0))
        throw InputDomainError("steering angle must be in [-90, 90] degrees, got " +
                               std::to_string(angle_deg));

    const double sin_theta = std::sin(deg_to_rad(angle_deg));
    const double phase_step = -2.0 * std::numbers::pi * geom.spacing_wavelengths * sin_theta;

    ComplexVec a(static_cast<std::size_t>(geom.n_antennas));
    for (int m = 0; m < geom.n_antennas; ++m)
        a[static_cast<std::size_t>(m)] = std::polar(1.0, phase_step * m);
    return a;
}

namespace {

// LOS/NLOS mixing weights for a K-factor in dB; +-inf select the pure
// components without evaluating 10^(K/10).
void rician_weights(double k_factor_db, double& los_w, double& nlos_w) {
    if (std::isinf(k_factor_db)) {
        los_w = k_factor_db > 0 ? 1.0 : 0.0;
        nlos_w = k_factor_db > 0 ? 0.0 : 1.0;
        return;
    }
    const double k = std::pow(10.0, k_factor_db / 10.0);
    if (std::isinf(k)) {
        los_w = 1.0;
        nlos_w = 0.0;
        return;
    }
    los_w = std::sqrt(k / (k + 1.0));
    nlos_w = std::sqrt(1.0 / (k + 1.0));
}

} // namespace

ChannelRealization draw_channel(const ArrayGeometry& geom, double angle_deg,
                                double k_factor_db, Rng& rng) {
    if (std::isnan(k_factor_db))
        throw InputDomainError("k_factor_db must not be NaN");

    ChannelRealization ch;
    ch.los_angle_deg = angle_deg;
    ch.k_factor_db = k_factor_db;

    const ComplexVec los = steering_vector(geom, angle_deg);

    ch.nlos.resize(los.size());
    for (auto& z : ch.nlos)
        z = complex_gaussian(rng, 1.0);

    double los_w = 0.0;
    double nlos_w = 0.0;
    rician_weights(k_factor_db, los_w, nlos_w);

    ch.h.resize(los.size());
    for (std::size_t m = 0; m < los.size(); ++m)
        ch.h[m] = los_w * los[m] + nlos_w * ch.nlos[m];
    return ch;
}

std::vector<WeightVector> directional_codebook(const ArrayGeometry& geom,
                                               const HardwareProfile& hw) {
    validate(geom);
    validate(hw);

    const int n = geom.n_antennas;
    std::vector<WeightVector> beams;
    beams.reserve(181);
    for (int angle = -90; angle <= 90; ++angle) {
        const double sin_theta = std::sin(deg_to_rad(static_cast<double>(angle)));
        // Conjugate steering phase: +2*pi*d*m*sin(theta).
        const double phase_step = 2.0 * std::numbers::pi * geom.spacing_wavelengths * sin_theta;

        WeightVector w;
        w.phase_codes.resize(static_cast<std::size_t>(n));
        w.on_bits.assign(static_cast<std::size_t>(n), 1);
        for (int m = 0; m < n; ++m)
            w.phase_codes[static_cast<std::size_t>(m)] = nearest_phase_code(hw, phase_step * m);
        beams.push_back(std::move(w));
    }
    return beams;
}

NoiseModel calibrate_noise(const ChannelRealization& channel, double snr_max_db,
                           const std::vector<WeightVector>& training_codebook,
                           const HardwareProfile& hw) {
    if (training_codebook.empty())
        throw ConfigError("noise calibration requires a non-empty training codebook");

    double p_best = 0.0;
    for (const WeightVector& w : training_codebook) {
        const double p = std::norm(dot(channel.h, realize(w, hw)));
        if (p > p_best)
            p_best = p;
    }

    NoiseModel noise;
    noise.snr_max_db = snr_max_db;
    noise.noise_power = p_best / std::pow(10.0, snr_max_db / 10.0);
    return noise;
}

Complex dot(const ComplexVec& a, const ComplexVec& b) {
    if (a.size() != b.size())
        throw InputDomainError("dot: length mismatch (" + std::to_string(a.size()) + " vs " +
                               std::to_string(b.size()) + ")");
    Complex acc{0.0, 0.0};
    for (std::size_t m = 0; m < a.size(); ++m)
        acc += a[m] * b[m];
    return acc;
}

Complex observe(const ChannelRealization& channel, const ComplexVec& w_realized,
                const NoiseModel& noise, Rng& rng) {
    Complex y = dot(channel.h, w_realized);
    if (noise.noise_power > 0.0)
        y += complex_gaussian(rng, noise.noise_power);
    return y;
}

} // namespace mmkey
