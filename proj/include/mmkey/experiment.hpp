#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mmkey/schemes.hpp"

namespace mmkey {

struct ExperimentGrid {
    std::vector<double> snr_values_db; // default: 8 points, 1.3 .. 31.4
    std::vector<double> k_values_db;   // default: 0, 5, ..., 30
    std::vector<Scheme> schemes;       // default: random, null-practical, mmkey
    int sessions_per_cell = 100;
    std::uint64_t base_seed = 1;
};

void validate(const ExperimentGrid& grid);

std::vector<double> default_snr_axis();
std::vector<double> default_k_axis();
std::vector<Scheme> default_grid_schemes();
std::vector<double> default_eve_offsets(); // -60 .. 60, step 10

struct GridResultRow {
    Scheme scheme = Scheme::Random;
    double snr_db = 0.0;
    double k_db = 0.0;
    double mean_kdr_ab = 0.0;
    double mean_kdr_be = 0.0;
    double mean_sg = 0.0;
    bool sg_negative = false;
};

/// One row per (scheme, snr, k) cell, averaged over exactly
/// sessions_per_cell sessions. Session seeds derive from
/// (base_seed, scheme, snr index, k index, session index), so results
/// are identical for any worker count.
std::vector<GridResultRow> run_grid(const SessionConfig& base, const ExperimentGrid& grid,
                                    int workers);

/// CSV columns are fixed: scheme,snr_db,k_db,kdr_ab,kdr_be,sg,sg_negative
void write_grid_csv(const std::vector<GridResultRow>& rows, const std::string& path);

struct EveSweepRow {
    Scheme scheme = Scheme::Random;
    double offset_deg = 0.0;
    double mean_kdr_be = 0.0;
};

/// Mean kdr_be per Eve angular offset from the LOS, for the scheme in
/// the base config. Offsets must keep Eve inside [-90, 90].
std::vector<EveSweepRow> run_eve_sweep(const SessionConfig& base,
                                       const std::vector<double>& offsets_deg,
                                       int sessions_per_point, std::uint64_t base_seed,
                                       int workers);

void write_eve_sweep_csv(const std::vector<EveSweepRow>& rows, const std::string& path);

/// Deterministic fan-out: fn(i) for i in [0, count) on up to `workers`
/// threads. Exceptions are rethrown on the caller thread.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn);

/// Whole-buffer write; on failure the partial file is removed and an
/// IoError carrying the path is thrown.
void write_file(const std::string& path, const std::string& content);

} // namespace mmkey
