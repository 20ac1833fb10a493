#pragma once

#include <optional>
#include <string>

#include "mmkey/experiment.hpp"
#include "mmkey/schemes.hpp"

namespace mmkey {

/// Resolved tool options: a session template plus experiment axes.
/// Precedence is CLI flags over config file over defaults.
struct Options {
    SessionConfig session;
    ExperimentGrid grid;
    std::vector<double> eve_offsets;
    int workers = 0; // 0 = hardware concurrency

    // Deferred defaults (depend on other options).
    std::optional<double> eve_angle_deg; // default: theta_star_deg
    std::optional<double> total_power;   // default: n_antennas
};

Options default_options();

/// One "key = value" per line; '#' starts a comment. Unknown keys are
/// configuration errors. k_factor_db accepts "inf" and "-inf".
void apply_config_file(Options& opts, const std::string& path);
void apply_key_value(Options& opts, const std::string& key, const std::string& value);

/// Resolve deferred defaults and validate everything.
void finalize(Options& opts);

} // namespace mmkey
