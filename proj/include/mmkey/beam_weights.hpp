#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mmkey/array_channel.hpp"
#include "mmkey/rng.hpp"

namespace mmkey {

/// Per-antenna control limits: phase quantized to 2^phase_bits codes,
/// amplitude restricted to on/off, total transmit power P_t.
struct HardwareProfile {
    int phase_bits = 2;
    bool amplitude_on_off = true;
    double total_power = 9.0; // P_t; default is n_antennas
};

HardwareProfile default_hardware(const ArrayGeometry& geom);
void validate(const HardwareProfile& hw);

int phase_code_count(const HardwareProfile& hw); // 2^phase_bits
double code_phase(const HardwareProfile& hw, int code);
ComplexVec phase_table(const HardwareProfile& hw);

/// Nearest feasible code for a continuous phase; exact midpoints break
/// toward the lower code.
int nearest_phase_code(const HardwareProfile& hw, double phase_rad);

/// A hardware-feasible weight vector. The normalization scale is derived
/// (sqrt(P_t / on-count)), so identity is the (codes, on) pair alone.
struct WeightVector {
    std::vector<int> phase_codes;
    std::vector<std::uint8_t> on_bits;

    bool operator==(const WeightVector&) const = default;
};

int count_on(const WeightVector& w);
double weight_scale(const WeightVector& w, const HardwareProfile& hw);

/// Normalized complex excitation, ||W||^2 = total_power.
/// Throws InfeasibleWeightError when every antenna is off.
ComplexVec realize(const WeightVector& w, const HardwareProfile& hw);

/// Normalized LOS power f(W) = |a(theta*).W|^2 / (N * P_t), in [0, 1].
double los_power_fraction(const ComplexVec& w_realized, const ArrayGeometry& geom,
                          double theta_star_deg, double total_power);
double los_power_fraction(const WeightVector& w, const ArrayGeometry& geom,
                          double theta_star_deg, const HardwareProfile& hw);

/// Shared evaluation core; callers pass precomputed a(theta*) and the
/// phase table so repeated evaluations stay cheap and bit-identical.
double los_power_fraction_core(const WeightVector& w, const ComplexVec& steering,
                               const ComplexVec& table, double total_power);

/// Uniform random phase codes. All antennas stay on unless allow_off is
/// set, in which case each on-bit is a fair coin with all-off repaired.
WeightVector random_weight(const HardwareProfile& hw, int n, Rng& rng,
                           bool allow_off = false);

/// Project a random complex vector onto the null space of a(theta*),
/// then quantize: phases snap to the nearest code, antennas switch off
/// when their magnitude falls below half the maximum. Nulling is
/// generally imperfect after quantization.
WeightVector null_weight_practical(const ArrayGeometry& geom, double theta_star_deg,
                                   const HardwareProfile& hw, Rng& rng);

/// Continuous null-space beam with ||W||^2 = total_power and
/// a(theta*).W = 0; bypasses the hardware profile (ideal baseline).
ComplexVec null_weight_ideal(const ArrayGeometry& geom, double theta_star_deg,
                             double total_power, Rng& rng);

/// Compact text form "codes:0132...;on:1101..." used by codebook dumps.
/// Codes are hex digits, which covers phase_bits <= 4.
std::string serialize(const WeightVector& w);
WeightVector parse_weight(const std::string& text);

} // namespace mmkey
