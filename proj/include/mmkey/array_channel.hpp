#pragma once

#include <complex>
#include <vector>

#include "mmkey/rng.hpp"

namespace mmkey {

using Complex = std::complex<double>;
using ComplexVec = std::vector<Complex>;

struct HardwareProfile; // beam_weights.hpp
struct WeightVector;    // beam_weights.hpp

/// Uniform linear array at the transmitter.
struct ArrayGeometry {
    int n_antennas = 9;
    double spacing_wavelengths = 0.5; // element spacing d, in (0, 1]
    double carrier_ghz = 60.0;        // informational only
};

void validate(const ArrayGeometry& geom);

/// Transmit steering vector a(theta): element m is
/// exp(-j * 2*pi * spacing * m * sin(theta)). Element 0 is exactly 1.
/// Angles are degrees in [-90, 90].
ComplexVec steering_vector(const ArrayGeometry& geom, double angle_deg);

/// One static Rician channel realization: h = sqrt(K/(K+1)) * a(theta)
/// + sqrt(1/(K+1)) * nlos, with K linear. The realization stays fixed
/// for the lifetime of a key-generation session.
struct ChannelRealization {
    ComplexVec h;
    double los_angle_deg = 0.0;
    double k_factor_db = 0.0; // +inf = pure LOS, -inf = pure NLOS
    ComplexVec nlos;          // i.i.d. CN(0, 1) per element
};

ChannelRealization draw_channel(const ArrayGeometry& geom, double angle_deg,
                                double k_factor_db, Rng& rng);

/// Receiver noise, calibrated from the highest observed SNR: the noise
/// variance is the best directional-beam power divided by 10^(snr/10).
/// noise_power == 0 encodes noiseless reception.
struct NoiseModel {
    double noise_power = 0.0;
    double snr_max_db = 0.0;
};

/// Quantized directional beams on a 1-degree grid over [-90, 90], all
/// antennas on, each phase snapped to the code nearest the conjugate
/// steering phase. This is the default training codebook.
std::vector<WeightVector> directional_codebook(const ArrayGeometry& geom,
                                               const HardwareProfile& hw);

NoiseModel calibrate_noise(const ChannelRealization& channel, double snr_max_db,
                           const std::vector<WeightVector>& training_codebook,
                           const HardwareProfile& hw);

/// Unconjugated product-sum: sum_m a[m] * b[m]. The row-vector channel
/// convention means no conjugate appears anywhere in the signal model.
Complex dot(const ComplexVec& a, const ComplexVec& b);

/// One received sample y = h.W + z with z ~ CN(0, noise_power).
/// Consumes no randomness when noise_power == 0.
Complex observe(const ChannelRealization& channel, const ComplexVec& w_realized,
                const NoiseModel& noise, Rng& rng);

double deg_to_rad(double deg);

} // namespace mmkey
