#include "mmkey/beam_weights.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mmkey/errors.hpp"

namespace mmkey {

HardwareProfile default_hardware(const ArrayGeometry& geom) {
    validate(geom);
    return HardwareProfile{2, true, static_cast<double>(geom.n_antennas)};
}

void validate(const HardwareProfile& hw) {
    if (hw.phase_bits < 1 || hw.phase_bits > 16)
        throw ConfigError("phase_bits must be in [1, 16], got " + std::to_string(hw.phase_bits));
    if (!(hw.total_power > 0.0))
        throw ConfigError("total_power must be positive");
}

int phase_code_count(const HardwareProfile& hw) {
    return 1 << hw.phase_bits;
}

double code_phase(const HardwareProfile& hw, int code) {
    return (2.0 * std::numbers::pi * code) / phase_code_count(hw);
}

ComplexVec phase_table(const HardwareProfile& hw) {
    const int count = phase_code_count(hw);
    ComplexVec table(static_cast<std::size_t>(count));
    for (int c = 0; c < count; ++c)
        table[static_cast<std::size_t>(c)] = std::polar(1.0, code_phase(hw, c));
    return table;
}

int nearest_phase_code(const HardwareProfile& hw, double phase_rad) {
    const int count = phase_code_count(hw);
    const double step = 2.0 * std::numbers::pi / count;
    const double q = phase_rad / step;
    const double base = std::floor(q);
    // > keeps exact midpoints on the lower code.
    const long code = (q - base > 0.5) ? static_cast<long>(base) + 1 : static_cast<long>(base);
    long wrapped = code % count;
    if (wrapped < 0)
        wrapped += count;
    return static_cast<int>(wrapped);
}

int count_on(const WeightVector& w) {
    int on = 0;
    for (std::uint8_t b : w.on_bits)
        on += b ? 1 : 0;
    return on;
}

double weight_scale(const WeightVector& w, const HardwareProfile& hw) {
    const int on = count_on(w);
    if (on == 0)
        throw InfeasibleWeightError("weight vector has every antenna off");
    return std::sqrt(hw.total_power / on);
}

namespace {

void check_shape(const WeightVector& w, const HardwareProfile& hw) {
    if (w.phase_codes.size() != w.on_bits.size() || w.phase_codes.empty())
        throw InputDomainError("weight vector has inconsistent lengths");
    const int count = phase_code_count(hw);
    for (int c : w.phase_codes)
        if (c < 0 || c >= count)
            throw InputDomainError("phase code " + std::to_string(c) + " outside [0, " +
                                   std::to_string(count) + ")");
}

} // namespace

ComplexVec realize(const WeightVector& w, const HardwareProfile& hw) {
    validate(hw);
    check_shape(w, hw);
    const double scale = weight_scale(w, hw);
    const ComplexVec table = phase_table(hw);

    ComplexVec out(w.phase_codes.size());
    for (std::size_t m = 0; m < out.size(); ++m)
        out[m] = w.on_bits[m] ? scale * table[static_cast<std::size_t>(w.phase_codes[m])]
                              : Complex{0.0, 0.0};
    return out;
}

double los_power_fraction(const ComplexVec& w_realized, const ArrayGeometry& geom,
                          double theta_star_deg, double total_power) {
    const ComplexVec a = steering_vector(geom, theta_star_deg);
    return std::norm(dot(a, w_realized)) / (geom.n_antennas * total_power);
}

double los_power_fraction_core(const WeightVector& w, const ComplexVec& steering,
                               const ComplexVec& table, double total_power) {
    const int on = count_on(w);
    if (on == 0)
        throw InfeasibleWeightError("weight vector has every antenna off");
    const double scale = std::sqrt(total_power / on);

    Complex acc{0.0, 0.0};
    for (std::size_t m = 0; m < steering.size(); ++m)
        if (w.on_bits[m])
            acc += steering[m] * table[static_cast<std::size_t>(w.phase_codes[m])];
    return std::norm(acc) * (scale * scale) / (static_cast<double>(steering.size()) * total_power);
}

double los_power_fraction(const WeightVector& w, const ArrayGeometry& geom,
                          double theta_star_deg, const HardwareProfile& hw) {
    validate(hw);
    check_shape(w, hw);
    if (static_cast<int>(w.phase_codes.size()) != geom.n_antennas)
        throw InputDomainError("weight vector length does not match the array");
    return los_power_fraction_core(w, steering_vector(geom, theta_star_deg), phase_table(hw),
                                   hw.total_power);
}

WeightVector random_weight(const HardwareProfile& hw, int n, Rng& rng, bool allow_off) {
    validate(hw);
    if (n < 1)
        throw InputDomainError("random_weight needs n >= 1");

    std::uniform_int_distribution<int> code_dist(0, phase_code_count(hw) - 1);
    WeightVector w;
    w.phase_codes.resize(static_cast<std::size_t>(n));
    w.on_bits.assign(static_cast<std::size_t>(n), 1);
    for (auto& c : w.phase_codes)
        c = code_dist(rng);

    if (allow_off) {
        std::uniform_int_distribution<int> coin(0, 1);
        for (auto& b : w.on_bits)
            b = static_cast<std::uint8_t>(coin(rng));
        if (count_on(w) == 0) {
            std::uniform_int_distribution<int> pick(0, n - 1);
            w.on_bits[static_cast<std::size_t>(pick(rng))] = 1;
        }
    }
    return w;
}

namespace {

// Random complex vector projected onto the orthogonal complement of
// a(theta*): the result satisfies a.W = 0 up to rounding. Retries the
// (probability-zero) degenerate draw.
ComplexVec draw_null_space_vector(const ComplexVec& steering, Rng& rng) {
    const auto n = steering.size();
    for (int attempt = 0; attempt < 64; ++attempt) {
        ComplexVec g(n);
        for (auto& z : g)
            z = complex_gaussian(rng, 1.0);

        const Complex along = dot(steering, g) / static_cast<double>(n);
        ComplexVec w(n);
        double norm2 = 0.0;
        for (std::size_t m = 0; m < n; ++m) {
            w[m] = g[m] - along * std::conj(steering[m]);
            norm2 += std::norm(w[m]);
        }
        if (norm2 > 1e-12)
            return w;
    }
    throw Error("null-space projection kept degenerating");
}

} // namespace

WeightVector null_weight_practical(const ArrayGeometry& geom, double theta_star_deg,
                                   const HardwareProfile& hw, Rng& rng) {
    validate(hw);
    const ComplexVec steering = steering_vector(geom, theta_star_deg);
    const ComplexVec cont = draw_null_space_vector(steering, rng);

    double max_mag = 0.0;
    for (const Complex& z : cont)
        max_mag = std::max(max_mag, std::abs(z));

    WeightVector w;
    w.phase_codes.resize(cont.size());
    w.on_bits.resize(cont.size());
    for (std::size_t m = 0; m < cont.size(); ++m) {
        w.phase_codes[m] = nearest_phase_code(hw, std::arg(cont[m]));
        w.on_bits[m] = std::abs(cont[m]) >= 0.5 * max_mag ? 1 : 0;
    }
    // The largest element always stays on, so the result is feasible.
    return w;
}

ComplexVec null_weight_ideal(const ArrayGeometry& geom, double theta_star_deg,
                             double total_power, Rng& rng) {
    if (!(total_power > 0.0))
        throw InputDomainError("total_power must be positive");
    const ComplexVec steering = steering_vector(geom, theta_star_deg);
    ComplexVec w = draw_null_space_vector(steering, rng);

    double norm2 = 0.0;
    for (const Complex& z : w)
        norm2 += std::norm(z);
    const double gain = std::sqrt(total_power / norm2);
    for (Complex& z : w)
        z *= gain;
    return w;
}

std::string serialize(const WeightVector& w) {
    static const char digits[] = "0123456789abcdef";
    std::string out = "codes:";
    for (int c : w.phase_codes) {
        if (c < 0 || c > 15)
            throw ConfigError("weight serialization covers phase codes 0..15 only");
        out += digits[c];
    }
    out += ";on:";
    for (std::uint8_t b : w.on_bits)
        out += b ? '1' : '0';
    return out;
}

WeightVector parse_weight(const std::string& text) {
    const std::string codes_tag = "codes:";
    const std::string on_tag = ";on:";
    if (text.rfind(codes_tag, 0) != 0)
        throw InputDomainError("weight text must start with 'codes:'");
    const auto sep = text.find(on_tag);
    if (sep == std::string::npos)
        throw InputDomainError("weight text is missing ';on:'");

    WeightVector w;
    for (std::size_t i = codes_tag.size(); i < sep; ++i) {
        const char c = text[i];
        int value = 0;
        if (c >= '0' && c <= '9')
            value = c - '0';
        else if (c >= 'a' && c <= 'f')
            value = 10 + (c - 'a');
        else
            throw InputDomainError(std::string("bad code digit '") + c + "'");
        w.phase_codes.push_back(value);
    }
    for (std::size_t i = sep + on_tag.size(); i < text.size(); ++i) {
        const char c = text[i];
        if (c != '0' && c != '1')
            throw InputDomainError(std::string("bad on bit '") + c + "'");
        w.on_bits.push_back(c == '1' ? 1 : 0);
    }
    if (w.phase_codes.size() != w.on_bits.size() || w.phase_codes.empty())
        throw InputDomainError("weight text has inconsistent lengths");
    return w;
}

} // namespace mmkey
