#include "mmkey/ga_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>
#include <utility>

#include "mmkey/errors.hpp"
#include "mmkey/text.hpp"

namespace mmkey {

void validate(const GaConfig& cfg) {
    if (cfg.population_size < 2)
        throw ConfigError("population_size must be >= 2");
    if (cfg.max_generations < 1)
        throw ConfigError("max_generations must be >= 1");
    if (cfg.tournament_size < 1 || cfg.tournament_size > cfg.population_size)
        throw ConfigError("tournament_size must be in [1, population_size]");
    if (!(cfg.crossover_prob >= 0.0 && cfg.crossover_prob <= 1.0))
        throw ConfigError("crossover_prob must be in [0, 1]");
    if (cfg.mutation_rate > 1.0)
        throw ConfigError("mutation_rate must be <= 1");
    if (cfg.elite_count < 0 || cfg.elite_count >= cfg.population_size)
        throw ConfigError("elite_count must be in [0, population_size)");
    if (cfg.stall_generations < 1)
        throw ConfigError("stall_generations must be >= 1");
}

namespace {

// Compact identity key; unlike serialize() this works for any phase_bits.
std::string archive_key(const WeightVector& w) {
    std::string key;
    key.reserve(3 * w.phase_codes.size());
    for (int c : w.phase_codes) {
        key += static_cast<char>(c & 0xff);
        key += static_cast<char>((c >> 8) & 0xff);
    }
    for (std::uint8_t b : w.on_bits)
        key += b ? '\1' : '\0';
    return key;
}

} // namespace

bool BeamArchive::insert(const WeightVector& w, double f) {
    auto [it, fresh] = seen_.insert(archive_key(w));
    (void)it;
    if (!fresh)
        return false;
    entries_.push_back(ArchiveEntry{w, f});
    return true;
}

bool BeamArchive::contains(const WeightVector& w) const {
    return seen_.count(archive_key(w)) != 0;
}

double BeamArchive::min_f() const {
    if (entries_.empty())
        throw Error("archive is empty");
    double best = entries_.front().f;
    for (const ArchiveEntry& e : entries_)
        best = std::min(best, e.f);
    return best;
}

namespace {

// Codes uniform over the alphabet; on-bits are fair coins with an
// all-off draw repaired by forcing one random antenna on.
WeightVector random_feasible(const HardwareProfile& hw, int n, Rng& rng) {
    std::uniform_int_distribution<int> code_dist(0, phase_code_count(hw) - 1);
    std::uniform_int_distribution<int> coin(0, 1);

    WeightVector w;
    w.phase_codes.resize(static_cast<std::size_t>(n));
    w.on_bits.resize(static_cast<std::size_t>(n));
    for (int m = 0; m < n; ++m) {
        w.phase_codes[static_cast<std::size_t>(m)] = code_dist(rng);
        w.on_bits[static_cast<std::size_t>(m)] = static_cast<std::uint8_t>(coin(rng));
    }
    if (count_on(w) == 0) {
        std::uniform_int_distribution<int> pick(0, n - 1);
        w.on_bits[static_cast<std::size_t>(pick(rng))] = 1;
    }
    return w;
}

void repair_all_off(WeightVector& w, Rng& rng) {
    if (count_on(w) == 0) {
        std::uniform_int_distribution<int> pick(0, static_cast<int>(w.on_bits.size()) - 1);
        w.on_bits[static_cast<std::size_t>(pick(rng))] = 1;
    }
}

std::size_t tournament(const std::vector<double>& fitness, int rounds, Rng& rng) {
    std::uniform_int_distribution<std::size_t> pick(0, fitness.size() - 1);
    std::size_t best = pick(rng);
    for (int r = 1; r < rounds; ++r) {
        const std::size_t challenger = pick(rng);
        if (fitness[challenger] < fitness[best])
            best = challenger;
    }
    return best;
}

void mutate(WeightVector& w, const HardwareProfile& hw, double rate, Rng& rng) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::uniform_int_distribution<int> code_dist(0, phase_code_count(hw) - 1);
    for (std::size_t m = 0; m < w.phase_codes.size(); ++m) {
        if (uni(rng) < rate)
            w.phase_codes[m] = code_dist(rng);
        if (uni(rng) < rate)
            w.on_bits[m] ^= 1;
    }
    repair_all_off(w, rng);
}

} // namespace

BeamArchive evolve(const ArrayGeometry& geom, double theta_star_deg,
                   const HardwareProfile& hw, const GaConfig& cfg, Rng& rng) {
    validate(geom);
    validate(hw);
    validate(cfg);

    const int n = geom.n_antennas;
    const ComplexVec steering = steering_vector(geom, theta_star_deg);
    const ComplexVec table = phase_table(hw);
    const double mutation_rate = cfg.mutation_rate > 0.0 ? cfg.mutation_rate : 1.0 / n;

    BeamArchive archive;
    const auto fitness_of = [&](const WeightVector& w) {
        const double f = los_power_fraction_core(w, steering, table, hw.total_power);
        archive.insert(w, f);
        return f;
    };

    std::vector<WeightVector> population(static_cast<std::size_t>(cfg.population_size));
    std::vector<double> fitness(population.size());
    for (std::size_t i = 0; i < population.size(); ++i) {
        population[i] = random_feasible(hw, n, rng);
        fitness[i] = fitness_of(population[i]);
    }

    double best = *std::min_element(fitness.begin(), fitness.end());
    int stalled = 0;

    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::uniform_int_distribution<int> gene_coin(0, 1);

    for (int generation = 0; generation < cfg.max_generations; ++generation) {
        // Elites survive unchanged; ties resolve by population index.
        std::vector<std::size_t> order(population.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return fitness[a] < fitness[b]; });

        std::vector<WeightVector> next;
        next.reserve(population.size());
        for (int e = 0; e < cfg.elite_count; ++e)
            next.push_back(population[order[static_cast<std::size_t>(e)]]);

        while (next.size() < population.size()) {
            const WeightVector& pa = population[tournament(fitness, cfg.tournament_size, rng)];
            const WeightVector& pb = population[tournament(fitness, cfg.tournament_size, rng)];

            WeightVector c1 = pa;
            WeightVector c2 = pb;
            if (uni(rng) < cfg.crossover_prob) {
                for (int m = 0; m < n; ++m) {
                    if (gene_coin(rng)) {
                        const auto mm = static_cast<std::size_t>(m);
                        c1.phase_codes[mm] = pb.phase_codes[mm];
                        c1.on_bits[mm] = pb.on_bits[mm];
                        c2.phase_codes[mm] = pa.phase_codes[mm];
                        c2.on_bits[mm] = pa.on_bits[mm];
                    }
                }
            }
            mutate(c1, hw, mutation_rate, rng);
            mutate(c2, hw, mutation_rate, rng);
            // Re-mutate offspring that were already evaluated; keeps the
            // population exploring instead of re-scoring known points.
            for (int retry = 0; retry < 4 && archive.contains(c1); ++retry)
                mutate(c1, hw, mutation_rate, rng);
            for (int retry = 0; retry < 4 && archive.contains(c2); ++retry)
                mutate(c2, hw, mutation_rate, rng);
            next.push_back(std::move(c1));
            if (next.size() < population.size())
                next.push_back(std::move(c2));
        }

        population = std::move(next);
        for (std::size_t i = 0; i < population.size(); ++i)
            fitness[i] = fitness_of(population[i]);

        const double generation_best = *std::min_element(fitness.begin(), fitness.end());
        if (best - generation_best > 1e-6) {
            best = generation_best;
            stalled = 0;
        } else {
            best = std::min(best, generation_best);
            ++stalled;
        }
        if (stalled >= cfg.stall_generations)
            break;
    }
    return archive;
}

std::vector<ArchiveEntry> select_subset(const BeamArchive& archive, double alpha_l,
                                        double alpha_u) {
    if (!(alpha_l >= 0.0) || !(alpha_u <= 1.0) || !(alpha_l <= alpha_u))
        throw InputDomainError("thresholds must satisfy 0 <= alpha_l <= alpha_u <= 1");

    std::vector<ArchiveEntry> subset;
    for (const ArchiveEntry& e : archive.entries())
        if (e.f >= alpha_l && e.f <= alpha_u)
            subset.push_back(e);

    // Lexicographic (codes, on) order matches the serialized-form order
    // without materializing strings.
    std::sort(subset.begin(), subset.end(), [](const ArchiveEntry& a, const ArchiveEntry& b) {
        if (a.f != b.f)
            return a.f < b.f;
        if (a.weights.phase_codes != b.weights.phase_codes)
            return a.weights.phase_codes < b.weights.phase_codes;
        return a.weights.on_bits < b.weights.on_bits;
    });
    return subset;
}

void dump_archive(const BeamArchive& archive, std::ostream& out) {
    const std::vector<ArchiveEntry> sorted = select_subset(archive, 0.0, 1.0);
    for (const ArchiveEntry& e : sorted)
        out << fmt_g17(e.f) << '\t' << serialize(e.weights) << '\n';
}

} // namespace mmkey
