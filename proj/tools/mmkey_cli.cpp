// mmkey: link-level simulator for physical-layer key generation in
// sparse mmWave channels. Subcommands reproduce the evaluation grids
// (grid, eve-sweep), inspect the beam archive (ga-dump), and run single
// key-generation sessions (keygen).

#include <cmath>
#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "mmkey/config.hpp"
#include "mmkey/errors.hpp"
#include "mmkey/experiment.hpp"
#include "mmkey/ga_optimizer.hpp"
#include "mmkey/key_pipeline.hpp"
#include "mmkey/schemes.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitIo = 4;

struct CommonFlags {
    std::string config_path;
    std::string out_path;
    std::uint64_t seed = 0;
    int workers = -1;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* workers_opt = nullptr;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "flat key = value config file");
    cmd->add_option("--out", flags.out_path, "output path")->required();
    flags.seed_opt = cmd->add_option("--seed", flags.seed, "base seed (overrides config)");
    flags.workers_opt =
        cmd->add_option("--workers", flags.workers, "worker threads (overrides config)");
}

mmkey::Options resolve_options(const CommonFlags& flags) {
    mmkey::Options opts = mmkey::default_options();
    if (!flags.config_path.empty())
        mmkey::apply_config_file(opts, flags.config_path);
    if (flags.seed_opt->count() > 0)
        opts.session.seed = flags.seed;
    if (flags.workers_opt->count() > 0)
        opts.workers = flags.workers;
    mmkey::finalize(opts);
    return opts;
}

// K-factor sentinels are not representable in JSON numbers.
nlohmann::ordered_json json_number_or_inf(double v) {
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    return v;
}

int cmd_grid(const CommonFlags& flags) {
    const mmkey::Options opts = resolve_options(flags);
    const auto rows = mmkey::run_grid(opts.session, opts.grid, opts.workers);
    mmkey::write_grid_csv(rows, flags.out_path);
    std::cout << "wrote " << rows.size() << " rows to " << flags.out_path << "\n";
    return kExitOk;
}

int cmd_eve_sweep(const CommonFlags& flags) {
    const mmkey::Options opts = resolve_options(flags);
    const auto rows =
        mmkey::run_eve_sweep(opts.session, opts.eve_offsets, opts.grid.sessions_per_cell,
                             opts.session.seed, opts.workers);
    mmkey::write_eve_sweep_csv(rows, flags.out_path);
    std::cout << "wrote " << rows.size() << " rows to " << flags.out_path << "\n";
    return kExitOk;
}

int cmd_ga_dump(const CommonFlags& flags) {
    const mmkey::Options opts = resolve_options(flags);
    const mmkey::BeamArchive archive = mmkey::session_archive(opts.session);
    std::ostringstream text;
    mmkey::dump_archive(archive, text);
    mmkey::write_file(flags.out_path, text.str());
    std::cout << "wrote " << archive.size() << " archive entries to " << flags.out_path << "\n";
    return kExitOk;
}

int cmd_keygen(const CommonFlags& flags) {
    const mmkey::Options opts = resolve_options(flags);
    const mmkey::SessionConfig& cfg = opts.session;
    const mmkey::SessionResult result = mmkey::run_session_detailed(cfg);

    nlohmann::ordered_json j;
    j["scheme"] = mmkey::to_string(cfg.scheme);
    j["config"] = {
        {"n_antennas", cfg.geom.n_antennas},
        {"spacing_wavelengths", cfg.geom.spacing_wavelengths},
        {"carrier_ghz", cfg.geom.carrier_ghz},
        {"phase_bits", cfg.hw.phase_bits},
        {"total_power", cfg.hw.total_power},
        {"theta_star_deg", cfg.theta_star_deg},
        {"eve_angle_deg", cfg.eve_angle_deg},
        {"k_factor_db", json_number_or_inf(cfg.k_factor_db)},
        {"snr_max_db", cfg.snr_max_db},
        {"slots", cfg.key_params.slots},
        {"bits_per_slot", cfg.key_params.bits_per_slot},
        {"target_key_bits", cfg.key_params.target_key_bits},
        {"mc_channel_draws", cfg.mc_channel_draws},
        {"mc_noise_draws", cfg.mc_noise_draws},
        {"noiseless_bob", cfg.noiseless_bob},
        {"two_sided_noise", cfg.two_sided_noise},
        {"seed", cfg.seed},
    };
    if (cfg.scheme == mmkey::Scheme::MmKey) {
        j["alpha_l"] = result.thresholds.alpha_l;
        j["alpha_u"] = result.thresholds.alpha_u;
        j["omega_prime_size"] = result.omega_prime_size;
    }
    j["alice_key_hex"] = mmkey::to_hex(result.alice_key);
    j["bob_key_hex"] = mmkey::to_hex(result.bob_key);
    j["kdr_ab"] = result.report.kdr_ab;
    j["kdr_be"] = result.report.kdr_be;
    j["sg"] = result.report.secrecy_gap;
    j["monobit_fraction"] = mmkey::monobit_fraction(result.alice_key);

    mmkey::write_file(flags.out_path, j.dump(2) + "\n");
    std::cout << "wrote key record to " << flags.out_path << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"link-level simulator for physical-layer key generation over sparse "
                 "mmWave channels"};
    app.require_subcommand(1);

    CommonFlags grid_flags;
    CLI::App* grid = app.add_subcommand("grid", "SNR x K-factor secrecy-gap grid to CSV");
    add_common_flags(grid, grid_flags);

    CommonFlags sweep_flags;
    CLI::App* sweep =
        app.add_subcommand("eve-sweep", "Eve KDR versus angular offset from the LOS to CSV");
    add_common_flags(sweep, sweep_flags);

    CommonFlags dump_flags;
    CLI::App* dump = app.add_subcommand("ga-dump", "evolve the beam archive and dump it");
    add_common_flags(dump, dump_flags);

    CommonFlags keygen_flags;
    CLI::App* keygen = app.add_subcommand("keygen", "run one session and emit a JSON record");
    add_common_flags(keygen, keygen_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (grid->parsed())
            return cmd_grid(grid_flags);
        if (sweep->parsed())
            return cmd_eve_sweep(sweep_flags);
        if (dump->parsed())
            return cmd_ga_dump(dump_flags);
        if (keygen->parsed())
            return cmd_keygen(keygen_flags);
        std::cerr << "no subcommand selected\n";
        return kExitConfig;
    } catch (const mmkey::SchemeInfeasibleError& e) {
        nlohmann::ordered_json err;
        err["error"] = "scheme-infeasible";
        err["reason"] = e.what();
        std::cout << err.dump() << "\n";
        return kExitInfeasible;
    } catch (const mmkey::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const mmkey::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const mmkey::InputDomainError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
