#include "mmkey/key_pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mmkey/errors.hpp"

namespace mmkey {

void validate(const KeyParams& params) {
    if (params.slots < 2)
        throw InputDomainError("slots must be >= 2");
    if (params.bits_per_slot < 1)
        throw InputDomainError("bits_per_slot must be >= 1");
    if (params.bits_per_slot > 16)
        throw InputDomainError("bits_per_slot must be <= 16");
    if (params.target_key_bits < 1)
        throw InputDomainError("target_key_bits must be >= 1");
    const long total = static_cast<long>(params.slots - 1) * params.bits_per_slot;
    if (total < params.target_key_bits)
        throw InputDomainError("(slots-1)*bits_per_slot = " + std::to_string(total) +
                               " cannot cover target_key_bits = " +
                               std::to_string(params.target_key_bits));
}

int gray_encode(int index) {
    return index ^ (index >> 1);
}

namespace {

double phase_of(const Complex& sample) {
    if (sample.real() == 0.0 && sample.imag() == 0.0)
        throw UndefinedPhaseError("zero-magnitude sample has no phase");
    return std::arg(sample);
}

} // namespace

KeyBits extract_key(const std::vector<Complex>& samples, const KeyParams& params) {
    validate(params);
    if (static_cast<int>(samples.size()) != params.slots)
        throw InputDomainError("expected " + std::to_string(params.slots) + " samples, got " +
                               std::to_string(samples.size()));

    const int bits = params.bits_per_slot;
    const int sectors = 1 << bits;
    const double two_pi = 2.0 * std::numbers::pi;
    const double sector_width = two_pi / sectors;

    KeyBits key;
    key.params = params;
    key.bits.reserve(static_cast<std::size_t>(params.slots - 1) * bits);

    double prev_phase = phase_of(samples[0]);
    for (int t = 1; t < params.slots; ++t) {
        const double cur_phase = phase_of(samples[static_cast<std::size_t>(t)]);
        double delta = std::fmod(cur_phase - prev_phase, two_pi);
        if (delta < 0.0)
            delta += two_pi;
        if (delta >= two_pi) // rounding at the wrap boundary
            delta = 0.0;
        prev_phase = cur_phase;

        int sector = static_cast<int>(delta / sector_width);
        sector = std::min(sector, sectors - 1);
        const int gray = gray_encode(sector);
        for (int k = bits - 1; k >= 0; --k)
            key.bits.push_back(static_cast<std::uint8_t>((gray >> k) & 1));
    }
    return key;
}

double kdr(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
    if (a.size() != b.size())
        throw InputDomainError("kdr: key lengths differ (" + std::to_string(a.size()) + " vs " +
                               std::to_string(b.size()) + ")");
    if (a.empty())
        throw InputDomainError("kdr: empty keys");
    std::size_t mismatched = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        mismatched += (a[i] != b[i]) ? 1 : 0;
    return static_cast<double>(mismatched) / static_cast<double>(a.size());
}

double kdr(const KeyBits& a, const KeyBits& b) {
    return kdr(a.bits, b.bits);
}

double secrecy_gap(double kdr_ab, double kdr_be) {
    if (!(kdr_ab >= 0.0 && kdr_ab <= 1.0) || !(kdr_be >= 0.0 && kdr_be <= 1.0))
        throw InputDomainError("key disagreement rates must lie in [0, 1]");
    return std::min(kdr_be, 1.0 - kdr_be) - kdr_ab;
}

KdrReport make_report(double kdr_ab, double kdr_be) {
    return KdrReport{kdr_ab, kdr_be, secrecy_gap(kdr_ab, kdr_be)};
}

std::string to_hex(const KeyBits& key) {
    static const char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve((key.bits.size() + 3) / 4);
    for (std::size_t i = 0; i < key.bits.size(); i += 4) {
        int nibble = 0;
        for (std::size_t k = 0; k < 4; ++k) {
            nibble <<= 1;
            if (i + k < key.bits.size() && key.bits[i + k])
                nibble |= 1;
        }
        out += digits[nibble];
    }
    return out;
}

double monobit_fraction(const KeyBits& key) {
    if (key.bits.empty())
        throw InputDomainError("monobit_fraction: empty key");
    std::size_t ones = 0;
    for (std::uint8_t b : key.bits)
        ones += b ? 1 : 0;
    return static_cast<double>(ones) / static_cast<double>(key.bits.size());
}

} // namespace mmkey
