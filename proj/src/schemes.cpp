#include "mmkey/schemes.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <optional>
#include <string>

#include "mmkey/errors.hpp"

namespace mmkey {

const char* to_string(Scheme scheme) {
    switch (scheme) {
    case Scheme::Random: return "random";
    case Scheme::NullPractical: return "null-practical";
    case Scheme::NullIdeal: return "null-ideal";
    case Scheme::MmKey: return "mmkey";
    }
    return "unknown";
}

std::optional<Scheme> scheme_from_string(std::string_view name) {
    if (name == "random") return Scheme::Random;
    if (name == "null-practical") return Scheme::NullPractical;
    if (name == "null-ideal") return Scheme::NullIdeal;
    if (name == "mmkey") return Scheme::MmKey;
    return std::nullopt;
}

void validate(const SessionConfig& cfg) {
    validate(cfg.geom);
    validate(cfg.hw);
    validate(cfg.key_params);
    validate(cfg.ga);
    if (!(cfg.theta_star_deg >= -90.0 && cfg.theta_star_deg <= 90.0))
        throw InputDomainError("theta_star_deg must be in [-90, 90]");
    if (!(cfg.eve_angle_deg >= -90.0 && cfg.eve_angle_deg <= 90.0))
        throw InputDomainError("eve_angle_deg must be in [-90, 90]");
    if (std::isnan(cfg.k_factor_db))
        throw InputDomainError("k_factor_db must not be NaN");
    if (std::isnan(cfg.snr_max_db))
        throw InputDomainError("snr_max_db must not be NaN");
    if (cfg.mc_channel_draws < 1)
        throw InputDomainError("mc_channel_draws must be >= 1");
    if (cfg.mc_noise_draws < 1)
        throw InputDomainError("mc_noise_draws must be >= 1");
    if (cfg.min_subset_size < 0)
        throw InputDomainError("min_subset_size must be >= 0");
    if (cfg.threshold_grid_points < 2)
        throw InputDomainError("threshold_grid_points must be >= 2");
}

int resolved_min_subset_size(const SessionConfig& cfg) {
    if (cfg.min_subset_size > 0)
        return cfg.min_subset_size;
    const int by_slots = (cfg.key_params.slots + 7) / 8; // ceil(T/8)
    return std::max(8, by_slots);
}

namespace {

// Independent substreams of one session seed. Every random decision in a
// session hangs off (seed, tag, ...), so draws never depend on evaluation
// order.
enum StreamTag : std::uint64_t {
    kStreamBobChannel = 1,
    kStreamGa = 2,
    kStreamSweep = 3,
    kStreamBeams = 4,
    kStreamNoiseBob = 5,
    kStreamNoiseAlice = 6,
    kStreamEve = 7,
    kStreamSweepBeams = 8,
};

// Beam-order stream keyed by the threshold values themselves, so the same
// (alpha_l, alpha_u) pair cycles identically no matter which candidate
// grid it came from.
std::uint64_t pair_salt(double alpha_l, double alpha_u) {
    return derive_seed(0x70617273u,
                       {std::bit_cast<std::uint64_t>(alpha_l),
                        std::bit_cast<std::uint64_t>(alpha_u)});
}

// Shuffle only the prefix that will actually be consumed before the next
// wrap; positions beyond it stay untouched.
void partial_shuffle(std::vector<std::size_t>& order, std::size_t prefix, Rng& rng) {
    for (std::size_t i = 0; i < prefix; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, order.size() - 1);
        std::swap(order[i], order[pick(rng)]);
    }
}

std::vector<ComplexVec> cycle_from_realized(const ComplexVec* beams, std::size_t count,
                                            int slots, Rng& rng) {
    std::vector<std::size_t> order(count);
    for (std::size_t k = 0; k < count; ++k)
        order[k] = k;

    std::vector<ComplexVec> out;
    out.reserve(static_cast<std::size_t>(slots));
    std::size_t pos = count; // force the initial shuffle
    std::size_t last = count;
    for (int t = 0; t < slots; ++t) {
        if (pos == count) {
            partial_shuffle(order, std::min(count, static_cast<std::size_t>(slots - t)), rng);
            pos = 0;
            if (count >= 2 && order[0] == last)
                std::swap(order[0], order[1]);
        }
        last = order[pos++];
        out.push_back(beams[last]);
    }
    return out;
}

std::vector<ComplexVec> realize_entries(const ArchiveEntry* entries, std::size_t count,
                                        const HardwareProfile& hw) {
    std::vector<ComplexVec> realized(count);
    for (std::size_t k = 0; k < count; ++k)
        realized[k] = realize(entries[k].weights, hw);
    return realized;
}

struct BeamEval {
    double kdr_ab = 0.0;
    double kdr_be = 0.0;
    KeyBits ref_key;   // noiseless Alice/Bob key
    KeyBits alice_key; // representative draw (== ref_key unless two-sided)
    KeyBits bob_key;   // representative first noise draw
};

BeamEval evaluate_beams(const SessionConfig& cfg, const ChannelRealization& bob,
                        const NoiseModel& noise, const std::vector<ComplexVec>& beams,
                        int mc_noise, int mc_channel, std::uint64_t stream_seed,
                        std::uint64_t salt) {
    const int slots = cfg.key_params.slots;

    std::vector<Complex> clean(static_cast<std::size_t>(slots));
    for (int t = 0; t < slots; ++t)
        clean[static_cast<std::size_t>(t)] = dot(bob.h, beams[static_cast<std::size_t>(t)]);

    BeamEval eval;
    eval.ref_key = extract_key(clean, cfg.key_params);
    eval.alice_key = eval.ref_key;
    eval.bob_key = eval.ref_key;

    const bool noisy = noise.noise_power > 0.0;
    std::vector<Complex> samples(clean.size());

    double ab_sum = 0.0;
    for (int i = 0; i < mc_noise; ++i) {
        samples = clean;
        if (noisy) {
            Rng rng_bob = make_rng(stream_seed, {kStreamNoiseBob, salt,
                                                 static_cast<std::uint64_t>(i)});
            for (Complex& y : samples)
                y += complex_gaussian(rng_bob, noise.noise_power);
        }
        KeyBits bob_key = extract_key(samples, cfg.key_params);

        KeyBits alice_key = eval.ref_key;
        if (cfg.two_sided_noise && noisy) {
            samples = clean;
            Rng rng_alice = make_rng(stream_seed, {kStreamNoiseAlice, salt,
                                                   static_cast<std::uint64_t>(i)});
            for (Complex& y : samples)
                y += complex_gaussian(rng_alice, noise.noise_power);
            alice_key = extract_key(samples, cfg.key_params);
        }

        if (i == 0) {
            eval.bob_key = bob_key;
            eval.alice_key = alice_key;
        }
        ab_sum += kdr(alice_key, bob_key);
    }
    eval.kdr_ab = ab_sum / mc_noise;

    // Secrecy is evaluated noiseless on both sides; only Eve's channel
    // realization varies.
    double be_sum = 0.0;
    std::vector<Complex> eve_samples(clean.size());
    for (int j = 0; j < mc_channel; ++j) {
        Rng rng_eve = make_rng(stream_seed, {kStreamEve, salt, static_cast<std::uint64_t>(j)});
        const ChannelRealization eve =
            draw_channel(cfg.geom, cfg.eve_angle_deg, cfg.k_factor_db, rng_eve);
        for (int t = 0; t < slots; ++t)
            eve_samples[static_cast<std::size_t>(t)] =
                dot(eve.h, beams[static_cast<std::size_t>(t)]);
        be_sum += kdr(eval.ref_key, extract_key(eve_samples, cfg.key_params));
    }
    eval.kdr_be = be_sum / mc_channel;
    return eval;
}

ThresholdPair sweep_impl(const SessionConfig& cfg, const ChannelRealization& bob,
                         const NoiseModel& noise, const BeamArchive& archive,
                         const std::vector<double>& grid, Rng& rng) {
    if (archive.empty())
        throw InputDomainError("threshold sweep needs a non-empty archive");
    if (grid.empty())
        throw InputDomainError("threshold sweep needs a non-empty candidate grid");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] >= 0.0 && grid[i] <= 1.0))
            throw InputDomainError("candidate thresholds must lie in [0, 1]");
        if (i > 0 && grid[i] < grid[i - 1])
            throw InputDomainError("candidate thresholds must be sorted ascending");
    }

    // Alice designs against the worst-case eavesdropper on the LOS; the
    // true Eve position only enters the final evaluation.
    SessionConfig design = cfg;
    design.eve_angle_deg = cfg.theta_star_deg;

    const std::uint64_t sweep_base = rng();
    const std::vector<ArchiveEntry> sorted = select_subset(archive, 0.0, 1.0);
    const std::vector<ComplexVec> realized = realize_entries(sorted.data(), sorted.size(), cfg.hw);
    const int min_size = resolved_min_subset_size(cfg);
    const int mc_noise = std::max(1, cfg.mc_noise_draws / 5);
    const int mc_channel = std::max(1, cfg.mc_channel_draws / 5);

    struct Candidate {
        double alpha_l;
        double alpha_u;
        double screened_sg;
        std::size_t offset;
        std::size_t count;
    };

    const auto evaluate_pair = [&](const Candidate& c, int stage, int n_noise,
                                   int n_channel) {
        // Common random numbers within a stage: every pair sees the same
        // noise and Eve-channel draws, so estimate differences come from
        // the subsets themselves rather than draw luck.
        Rng rng_beams = make_rng(sweep_base, {kStreamSweepBeams, static_cast<std::uint64_t>(stage),
                                              pair_salt(c.alpha_l, c.alpha_u)});
        const std::vector<ComplexVec> beams = cycle_from_realized(
            realized.data() + c.offset, c.count, cfg.key_params.slots, rng_beams);
        const BeamEval eval = evaluate_beams(design, bob, noise, beams, n_noise, n_channel,
                                             sweep_base, static_cast<std::uint64_t>(stage));
        return secrecy_gap(eval.kdr_ab, eval.kdr_be);
    };

    // Stage 1: screen every feasible pair at reduced fidelity.
    std::vector<Candidate> candidates;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (std::size_t j = i; j < grid.size(); ++j) {
            Candidate c{grid[i], grid[j], 0.0, 0, 0};
            const auto lo = std::lower_bound(
                sorted.begin(), sorted.end(), c.alpha_l,
                [](const ArchiveEntry& e, double v) { return e.f < v; });
            const auto hi = std::upper_bound(
                sorted.begin(), sorted.end(), c.alpha_u,
                [](double v, const ArchiveEntry& e) { return v < e.f; });
            c.offset = static_cast<std::size_t>(lo - sorted.begin());
            c.count = static_cast<std::size_t>(hi - lo);
            if (c.count < static_cast<std::size_t>(min_size))
                continue;
            c.screened_sg = evaluate_pair(c, 1, mc_noise, mc_channel);
            candidates.push_back(c);
        }
    }
    if (candidates.empty())
        throw SchemeInfeasibleError("no threshold pair yields a subset of at least " +
                                    std::to_string(min_size) + " beams");

    const auto prefer = [](const Candidate& a, const Candidate& b) {
        if (a.screened_sg != b.screened_sg)
            return a.screened_sg > b.screened_sg;
        if (a.alpha_u != b.alpha_u)
            return a.alpha_u < b.alpha_u;
        return a.alpha_l < b.alpha_l;
    };
    std::sort(candidates.begin(), candidates.end(), prefer);

    // Stage 2: rescore a short list at full fidelity; screening noise is
    // too coarse to separate near-ties. The widest pair and the tightest
    // feasible pair always get rescored so the selected pair provably
    // dominates both extremes.
    const std::size_t shortlist = std::min<std::size_t>(candidates.size(), 12);
    std::vector<Candidate> finalists(candidates.begin(),
                                     candidates.begin() + static_cast<std::ptrdiff_t>(shortlist));
    const auto add_corner = [&](const Candidate& c) {
        for (const Candidate& f : finalists)
            if (f.alpha_l == c.alpha_l && f.alpha_u == c.alpha_u)
                return;
        finalists.push_back(c);
    };
    {
        std::optional<Candidate> widest;
        std::optional<Candidate> tightest;
        for (const Candidate& c : candidates) {
            if (c.alpha_l == grid.front() && c.alpha_u == grid.back())
                widest = c;
            if (c.alpha_l == grid.front() && (!tightest || c.alpha_u < tightest->alpha_u))
                tightest = c;
        }
        if (widest)
            add_corner(*widest);
        if (tightest)
            add_corner(*tightest);
    }

    std::optional<ThresholdPair> best;
    for (const Candidate& c : finalists) {
        const double sg = evaluate_pair(c, 2, cfg.mc_noise_draws, cfg.mc_channel_draws);
        if (!best || sg > best->estimated_sg ||
            (sg == best->estimated_sg && c.alpha_u < best->alpha_u))
            best = ThresholdPair{c.alpha_l, c.alpha_u, sg};
    }
    return *best;
}

NoiseModel session_noise(const SessionConfig& cfg, const ChannelRealization& bob) {
    NoiseModel noise = calibrate_noise(bob, cfg.snr_max_db,
                                       directional_codebook(cfg.geom, cfg.hw), cfg.hw);
    if (cfg.noiseless_bob)
        noise.noise_power = 0.0;
    return noise;
}

ChannelRealization session_bob_channel(const SessionConfig& cfg) {
    Rng rng = make_rng(cfg.seed, {kStreamBobChannel});
    return draw_channel(cfg.geom, cfg.theta_star_deg, cfg.k_factor_db, rng);
}

} // namespace

std::vector<double> default_threshold_grid(const BeamArchive& archive, int points) {
    if (archive.empty())
        throw InputDomainError("threshold grid needs a non-empty archive");
    if (points < 2)
        throw InputDomainError("threshold grid needs at least 2 points");

    std::vector<double> fs;
    fs.reserve(archive.size());
    for (const ArchiveEntry& e : archive.entries())
        fs.push_back(e.f);
    std::sort(fs.begin(), fs.end());

    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        const double q = static_cast<double>(i) / (points - 1);
        const auto idx = static_cast<std::size_t>(
            std::llround(q * static_cast<double>(fs.size() - 1)));
        const double v = fs[idx];
        if (grid.empty() || grid.back() != v)
            grid.push_back(v);
    }
    return grid;
}

ThresholdPair sweep_thresholds(const SessionConfig& cfg, const BeamArchive& archive,
                               const std::vector<double>& candidate_grid, Rng& rng) {
    validate(cfg);
    const ChannelRealization bob = session_bob_channel(cfg);
    return sweep_impl(cfg, bob, session_noise(cfg, bob), archive, candidate_grid, rng);
}

std::vector<ComplexVec> beam_sequence(const SessionConfig& cfg, Rng& rng,
                                      const std::vector<ArchiveEntry>* omega_prime) {
    validate(cfg);
    const int slots = cfg.key_params.slots;
    std::vector<ComplexVec> beams;
    beams.reserve(static_cast<std::size_t>(slots));

    switch (cfg.scheme) {
    case Scheme::Random:
        for (int t = 0; t < slots; ++t)
            beams.push_back(realize(
                random_weight(cfg.hw, cfg.geom.n_antennas, rng, cfg.random_allow_off), cfg.hw));
        return beams;
    case Scheme::NullPractical:
        for (int t = 0; t < slots; ++t)
            beams.push_back(
                realize(null_weight_practical(cfg.geom, cfg.theta_star_deg, cfg.hw, rng),
                        cfg.hw));
        return beams;
    case Scheme::NullIdeal:
        for (int t = 0; t < slots; ++t)
            beams.push_back(null_weight_ideal(cfg.geom, cfg.theta_star_deg,
                                              cfg.hw.total_power, rng));
        return beams;
    case Scheme::MmKey: {
        if (omega_prime == nullptr || omega_prime->empty())
            throw SchemeInfeasibleError("mmkey needs a non-empty beam subset");
        const std::vector<ComplexVec> realized =
            realize_entries(omega_prime->data(), omega_prime->size(), cfg.hw);
        return cycle_from_realized(realized.data(), realized.size(), slots, rng);
    }
    }
    throw InputDomainError("unknown scheme");
}

BeamArchive session_archive(const SessionConfig& cfg) {
    validate(cfg);
    Rng rng = make_rng(cfg.seed, {kStreamGa});
    return evolve(cfg.geom, cfg.theta_star_deg, cfg.hw, cfg.ga, rng);
}

SessionResult run_session_detailed(const SessionConfig& cfg) {
    validate(cfg);

    const ChannelRealization bob = session_bob_channel(cfg);
    const NoiseModel noise = session_noise(cfg, bob);

    SessionResult result;
    std::vector<ComplexVec> beams;
    if (cfg.scheme == Scheme::MmKey) {
        const BeamArchive archive = session_archive(cfg);
        const std::vector<double> grid =
            default_threshold_grid(archive, cfg.threshold_grid_points);
        Rng rng_sweep = make_rng(cfg.seed, {kStreamSweep});
        result.thresholds = sweep_impl(cfg, bob, noise, archive, grid, rng_sweep);

        const std::vector<ArchiveEntry> omega =
            select_subset(archive, result.thresholds.alpha_l, result.thresholds.alpha_u);
        result.omega_prime_size = omega.size();

        Rng rng_beams = make_rng(cfg.seed, {kStreamBeams});
        beams = beam_sequence(cfg, rng_beams, &omega);
    } else {
        Rng rng_beams = make_rng(cfg.seed, {kStreamBeams});
        beams = beam_sequence(cfg, rng_beams);
    }

    const BeamEval eval = evaluate_beams(cfg, bob, noise, beams, cfg.mc_noise_draws,
                                         cfg.mc_channel_draws, cfg.seed, 0);
    result.report = make_report(eval.kdr_ab, eval.kdr_be);
    result.alice_key = eval.alice_key;
    result.bob_key = eval.bob_key;
    return result;
}

KdrReport run_session(const SessionConfig& cfg) {
    return run_session_detailed(cfg).report;
}

} // namespace mmkey
