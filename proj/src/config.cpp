#include "mmkey/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <string>

#include "mmkey/errors.hpp"
#include "mmkey/text.hpp"

namespace mmkey {

Options default_options() {
    Options opts;
    opts.grid.snr_values_db = default_snr_axis();
    opts.grid.k_values_db = default_k_axis();
    opts.grid.schemes = default_grid_schemes();
    opts.eve_offsets = default_eve_offsets();
    return opts;
}

namespace {

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const std::string& expected) {
    throw ConfigError("bad value '" + value + "' for '" + key + "' (expected " + expected + ")");
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size() || std::isnan(v))
            bad_value(key, value, "a number");
        return v;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        bad_value(key, value, "a number");
    }
}

long parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const long v = std::stol(value, &used);
        if (used != value.size())
            bad_value(key, value, "an integer");
        return v;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        bad_value(key, value, "an integer");
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(value, &used);
        if (used != value.size())
            bad_value(key, value, "an unsigned integer");
        return v;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        bad_value(key, value, "an unsigned integer");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1")
        return true;
    if (value == "false" || value == "0")
        return false;
    bad_value(key, value, "true/false");
}

std::vector<double> parse_double_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    for (const std::string& part : split(value, ',')) {
        const std::string item = trim(part);
        if (item.empty())
            bad_value(key, value, "a comma-separated list of numbers");
        out.push_back(parse_double(key, item));
    }
    return out;
}

Scheme parse_scheme(const std::string& key, const std::string& value) {
    if (const auto scheme = scheme_from_string(value))
        return *scheme;
    bad_value(key, value, "random|null-practical|null-ideal|mmkey");
}

std::vector<Scheme> parse_scheme_list(const std::string& key, const std::string& value) {
    std::vector<Scheme> out;
    for (const std::string& part : split(value, ','))
        out.push_back(parse_scheme(key, trim(part)));
    return out;
}

} // namespace

void apply_key_value(Options& opts, const std::string& key, const std::string& value) {
    SessionConfig& s = opts.session;

    if (key == "n_antennas")
        s.geom.n_antennas = static_cast<int>(parse_int(key, value));
    else if (key == "spacing_wavelengths")
        s.geom.spacing_wavelengths = parse_double(key, value);
    else if (key == "carrier_ghz")
        s.geom.carrier_ghz = parse_double(key, value);
    else if (key == "phase_bits")
        s.hw.phase_bits = static_cast<int>(parse_int(key, value));
    else if (key == "total_power")
        opts.total_power = parse_double(key, value);
    else if (key == "theta_star_deg")
        s.theta_star_deg = parse_double(key, value);
    else if (key == "eve_angle_deg")
        opts.eve_angle_deg = parse_double(key, value);
    else if (key == "k_factor_db")
        s.k_factor_db = parse_double(key, value); // stod accepts inf / -inf
    else if (key == "snr_max_db")
        s.snr_max_db = parse_double(key, value);
    else if (key == "slots")
        s.key_params.slots = static_cast<int>(parse_int(key, value));
    else if (key == "bits_per_slot")
        s.key_params.bits_per_slot = static_cast<int>(parse_int(key, value));
    else if (key == "target_key_bits")
        s.key_params.target_key_bits = static_cast<int>(parse_int(key, value));
    else if (key == "mc_channel_draws")
        s.mc_channel_draws = static_cast<int>(parse_int(key, value));
    else if (key == "mc_noise_draws")
        s.mc_noise_draws = static_cast<int>(parse_int(key, value));
    else if (key == "scheme")
        s.scheme = parse_scheme(key, value);
    else if (key == "seed")
        s.seed = parse_u64(key, value);
    else if (key == "noiseless_bob")
        s.noiseless_bob = parse_bool(key, value);
    else if (key == "two_sided_noise")
        s.two_sided_noise = parse_bool(key, value);
    else if (key == "random_allow_off")
        s.random_allow_off = parse_bool(key, value);
    else if (key == "min_subset_size")
        s.min_subset_size = static_cast<int>(parse_int(key, value));
    else if (key == "threshold_grid_points")
        s.threshold_grid_points = static_cast<int>(parse_int(key, value));
    else if (key == "ga_population")
        s.ga.population_size = static_cast<int>(parse_int(key, value));
    else if (key == "ga_max_generations")
        s.ga.max_generations = static_cast<int>(parse_int(key, value));
    else if (key == "ga_tournament")
        s.ga.tournament_size = static_cast<int>(parse_int(key, value));
    else if (key == "ga_crossover")
        s.ga.crossover_prob = parse_double(key, value);
    else if (key == "ga_mutation")
        s.ga.mutation_rate = parse_double(key, value);
    else if (key == "ga_elites")
        s.ga.elite_count = static_cast<int>(parse_int(key, value));
    else if (key == "ga_stall")
        s.ga.stall_generations = static_cast<int>(parse_int(key, value));
    else if (key == "snr_values_db")
        opts.grid.snr_values_db = parse_double_list(key, value);
    else if (key == "k_values_db")
        opts.grid.k_values_db = parse_double_list(key, value);
    else if (key == "schemes")
        opts.grid.schemes = parse_scheme_list(key, value);
    else if (key == "sessions_per_cell")
        opts.grid.sessions_per_cell = static_cast<int>(parse_int(key, value));
    else if (key == "angle_offsets_deg")
        opts.eve_offsets = parse_double_list(key, value);
    else if (key == "workers")
        opts.workers = static_cast<int>(parse_int(key, value));
    else
        throw ConfigError("unknown config key '" + key + "'");
}

void apply_config_file(Options& opts, const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read config file: " + path);

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty())
            continue;

        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(line_no) +
                              ": expected 'key = value'");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError(path + ":" + std::to_string(line_no) +
                              ": expected 'key = value'");
        apply_key_value(opts, key, value);
    }
}

void finalize(Options& opts) {
    SessionConfig& s = opts.session;
    s.hw.total_power = opts.total_power.value_or(static_cast<double>(s.geom.n_antennas));
    s.eve_angle_deg = opts.eve_angle_deg.value_or(s.theta_star_deg);
    opts.grid.base_seed = s.seed;

    if (opts.workers < 0)
        throw ConfigError("workers must be >= 0");
    try {
        validate(s);
        validate(opts.grid);
    } catch (const InputDomainError& e) {
        throw ConfigError(e.what());
    }
}

} // namespace mmkey
