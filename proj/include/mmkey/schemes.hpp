#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mmkey/array_channel.hpp"
#include "mmkey/beam_weights.hpp"
#include "mmkey/ga_optimizer.hpp"
#include "mmkey/key_pipeline.hpp"

namespace mmkey {

enum class Scheme { Random, NullPractical, NullIdeal, MmKey };

const char* to_string(Scheme scheme);
std::optional<Scheme> scheme_from_string(std::string_view name);

/// Everything one key-generation session needs. Identical configs
/// (including the seed) produce identical reports.
struct SessionConfig {
    ArrayGeometry geom;
    HardwareProfile hw;
    double theta_star_deg = 0.0;
    double k_factor_db = 10.0;
    double snr_max_db = 31.4;
    KeyParams key_params;
    double eve_angle_deg = 0.0; // worst case: on the LOS
    int mc_channel_draws = 20;  // Eve-channel realizations for kdr_be
    int mc_noise_draws = 10;    // noise realizations for kdr_ab
    Scheme scheme = Scheme::MmKey;
    std::uint64_t seed = 1;

    bool noiseless_bob = false;   // force noise_power = 0
    bool two_sided_noise = false; // model Alice's own measurement noise
    bool random_allow_off = false;
    int min_subset_size = 0;        // 0 selects max(8, ceil(T/8))
    int threshold_grid_points = 21; // quantile grid resolution
    GaConfig ga;
};

void validate(const SessionConfig& cfg);
int resolved_min_subset_size(const SessionConfig& cfg);

struct ThresholdPair {
    double alpha_l = 0.0;
    double alpha_u = 1.0;
    double estimated_sg = 0.0;
};

/// Candidate thresholds: quantiles of the archive's f distribution, so
/// the sweep adapts to whatever suppression the hardware permits.
std::vector<double> default_threshold_grid(const BeamArchive& archive, int points);

/// Pick the (alpha_l, alpha_u) pair whose subset maximizes the secrecy
/// gap, estimated at reduced Monte-Carlo fidelity; ties prefer the
/// smaller alpha_u. Pairs whose subset is smaller than the minimum
/// subset size are skipped; if none survives, the scheme is infeasible.
ThresholdPair sweep_thresholds(const SessionConfig& cfg, const BeamArchive& archive,
                               const std::vector<double>& candidate_grid, Rng& rng);

/// Realized transmit weights for all T slots. Random/null schemes draw
/// i.i.d. per slot; MmKey cycles a shuffled omega_prime, reshuffling at
/// each wrap and swapping once when a wrap would repeat a beam.
std::vector<ComplexVec> beam_sequence(const SessionConfig& cfg, Rng& rng,
                                      const std::vector<ArchiveEntry>* omega_prime = nullptr);

/// The archive a session with this config would evolve (the MmKey path
/// and the archive dump tool share it).
BeamArchive session_archive(const SessionConfig& cfg);

struct SessionResult {
    KdrReport report;
    KeyBits alice_key;
    KeyBits bob_key; // first noise draw; equals alice_key when noiseless
    ThresholdPair thresholds{0.0, 1.0, 0.0}; // meaningful for MmKey only
    std::size_t omega_prime_size = 0;
};

/// One full session: draw Bob's channel, calibrate noise, build the beam
/// sequence (for MmKey: GA archive + threshold sweep first), then
/// estimate kdr_ab over noise draws and kdr_be over Eve-channel draws,
/// both against the noiseless reference key.
SessionResult run_session_detailed(const SessionConfig& cfg);
KdrReport run_session(const SessionConfig& cfg);

} // namespace mmkey
