#pragma once

#include <cstddef>
#include <iosfwd>
#include <unordered_set>
#include <vector>

#include "mmkey/beam_weights.hpp"

namespace mmkey {

struct GaConfig {
    int population_size = 200;
    int max_generations = 100;
    int tournament_size = 3;
    double crossover_prob = 0.5;
    double mutation_rate = 0.0; // <= 0 selects the 1/N default
    int elite_count = 2;
    int stall_generations = 40; // stop after this many generations
                                // without a > 1e-6 improvement
};

void validate(const GaConfig& cfg);

struct ArchiveEntry {
    WeightVector weights;
    double f = 0.0;
};

/// Every unique individual the GA ever evaluated, with its exact
/// objective value, in insertion order.
class BeamArchive {
public:
    bool insert(const WeightVector& w, double f);
    bool contains(const WeightVector& w) const;
    const std::vector<ArchiveEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    double min_f() const; // throws on empty archive

private:
    std::vector<ArchiveEntry> entries_;
    std::unordered_set<std::string> seen_;
};

/// Evolve feasible weight vectors toward low normalized LOS power.
/// Tournament selection, uniform per-gene crossover (a gene is one
/// antenna's (code, on) pair), per-gene mutation with all-off repair,
/// and elitism. Archives every evaluated individual.
BeamArchive evolve(const ArrayGeometry& geom, double theta_star_deg,
                   const HardwareProfile& hw, const GaConfig& cfg, Rng& rng);

/// Entries with alpha_l <= f <= alpha_u, ordered by (f, serialized form).
std::vector<ArchiveEntry> select_subset(const BeamArchive& archive,
                                        double alpha_l, double alpha_u);

/// One "f<TAB>codes:...;on:..." line per entry, ascending in f with ties
/// broken by the serialized form. f is printed with 17 significant
/// digits so it round-trips bit-for-bit.
void dump_archive(const BeamArchive& archive, std::ostream& out);

} // namespace mmkey
