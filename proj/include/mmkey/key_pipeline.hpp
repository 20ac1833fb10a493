#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mmkey/array_channel.hpp"

namespace mmkey {

/// Quantizer settings: T time slots, b bits per differential phase.
/// (T-1)*b must cover the target key length.
struct KeyParams {
    int slots = 65;
    int bits_per_slot = 2;
    int target_key_bits = 128;
};

void validate(const KeyParams& params);

struct KeyBits {
    std::vector<std::uint8_t> bits; // one bit per entry, length (T-1)*b
    KeyParams params;
};

/// Differential-phase extraction: for consecutive samples, wrap the
/// phase difference into [0, 2*pi), slice it into 2^b uniform sectors
/// anchored at 0, and emit the Gray-coded sector index, MSB first.
KeyBits extract_key(const std::vector<Complex>& samples, const KeyParams& params);

int gray_encode(int index);

/// Key disagreement rate: mismatched bits / key length.
double kdr(const KeyBits& a, const KeyBits& b);
double kdr(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b);

/// SG = min(kdr_be, 1 - kdr_be) - kdr_ab.
double secrecy_gap(double kdr_ab, double kdr_be);

struct KdrReport {
    double kdr_ab = 0.0;
    double kdr_be = 0.0;
    double secrecy_gap = 0.0;
};

/// The only way reports are built, so the SG identity always holds.
KdrReport make_report(double kdr_ab, double kdr_be);

/// Hex serialization, MSB-first; a trailing partial nibble is padded
/// with zero bits.
std::string to_hex(const KeyBits& key);

double monobit_fraction(const KeyBits& key);

} // namespace mmkey
