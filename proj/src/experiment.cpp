#include "mmkey/experiment.hpp"

#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include "mmkey/errors.hpp"
#include "mmkey/text.hpp"

namespace mmkey {

void validate(const ExperimentGrid& grid) {
    if (grid.snr_values_db.empty() || grid.k_values_db.empty() || grid.schemes.empty())
        throw ConfigError("experiment grid axes must be non-empty");
    if (grid.sessions_per_cell < 1)
        throw ConfigError("sessions_per_cell must be >= 1");
    for (std::size_t i = 1; i < grid.snr_values_db.size(); ++i)
        if (grid.snr_values_db[i] < grid.snr_values_db[i - 1])
            throw ConfigError("snr_values_db must be sorted ascending");
    for (std::size_t i = 1; i < grid.k_values_db.size(); ++i)
        if (grid.k_values_db[i] < grid.k_values_db[i - 1])
            throw ConfigError("k_values_db must be sorted ascending");
}

std::vector<double> default_snr_axis() {
    const double lo = 1.3;
    const double hi = 31.4;
    const int points = 8;
    std::vector<double> axis(points);
    for (int i = 0; i < points; ++i)
        axis[static_cast<std::size_t>(i)] =
            (i == points - 1) ? hi : lo + (hi - lo) * i / (points - 1);
    return axis;
}

std::vector<double> default_k_axis() {
    return {0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0};
}

std::vector<Scheme> default_grid_schemes() {
    return {Scheme::Random, Scheme::NullPractical, Scheme::MmKey};
}

std::vector<double> default_eve_offsets() {
    std::vector<double> offsets;
    for (int deg = -60; deg <= 60; deg += 10)
        offsets.push_back(static_cast<double>(deg));
    return offsets;
}

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
    if (count == 0)
        return;
    std::size_t pool_size = workers <= 0
                                ? std::max(1u, std::thread::hardware_concurrency())
                                : static_cast<std::size_t>(workers);
    pool_size = std::min(pool_size, count);

    if (pool_size <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr error;

    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count)
                return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(pool_size);
    for (std::size_t w = 0; w < pool_size; ++w)
        pool.emplace_back(worker);
    for (std::thread& t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

std::vector<GridResultRow> run_grid(const SessionConfig& base, const ExperimentGrid& grid,
                                    int workers) {
    validate(grid);

    const std::size_t n_snr = grid.snr_values_db.size();
    const std::size_t n_k = grid.k_values_db.size();
    const std::size_t cells = grid.schemes.size() * n_snr * n_k;

    std::vector<GridResultRow> rows(cells);
    parallel_for(cells, workers, [&](std::size_t cell) {
        const std::size_t scheme_idx = cell / (n_snr * n_k);
        const std::size_t snr_idx = (cell / n_k) % n_snr;
        const std::size_t k_idx = cell % n_k;

        SessionConfig cfg = base;
        cfg.scheme = grid.schemes[scheme_idx];
        cfg.snr_max_db = grid.snr_values_db[snr_idx];
        cfg.k_factor_db = grid.k_values_db[k_idx];

        double ab = 0.0;
        double be = 0.0;
        double sg = 0.0;
        for (int s = 0; s < grid.sessions_per_cell; ++s) {
            cfg.seed = derive_seed(grid.base_seed,
                                   {static_cast<std::uint64_t>(cfg.scheme), snr_idx, k_idx,
                                    static_cast<std::uint64_t>(s)});
            const KdrReport report = run_session(cfg);
            ab += report.kdr_ab;
            be += report.kdr_be;
            sg += report.secrecy_gap;
        }
        const double n = grid.sessions_per_cell;
        rows[cell] = GridResultRow{cfg.scheme,  cfg.snr_max_db, cfg.k_factor_db,
                                   ab / n,      be / n,         sg / n,
                                   sg / n < 0.0};
    });
    return rows;
}

void write_grid_csv(const std::vector<GridResultRow>& rows, const std::string& path) {
    std::string csv = "scheme,snr_db,k_db,kdr_ab,kdr_be,sg,sg_negative\n";
    for (const GridResultRow& row : rows) {
        csv += to_string(row.scheme);
        csv += ',';
        csv += fmt_g(row.snr_db);
        csv += ',';
        csv += fmt_g(row.k_db);
        csv += ',';
        csv += fmt_f(row.mean_kdr_ab, 6);
        csv += ',';
        csv += fmt_f(row.mean_kdr_be, 6);
        csv += ',';
        csv += fmt_f(row.mean_sg, 6);
        csv += ',';
        csv += row.sg_negative ? '1' : '0';
        csv += '\n';
    }
    write_file(path, csv);
}

std::vector<EveSweepRow> run_eve_sweep(const SessionConfig& base,
                                       const std::vector<double>& offsets_deg,
                                       int sessions_per_point, std::uint64_t base_seed,
                                       int workers) {
    if (offsets_deg.empty())
        throw ConfigError("eve sweep needs at least one angle offset");
    if (sessions_per_point < 1)
        throw ConfigError("sessions_per_point must be >= 1");
    for (double offset : offsets_deg) {
        const double angle = base.theta_star_deg + offset;
        if (!(angle >= -90.0 && angle <= 90.0))
            throw ConfigError("offset " + fmt_g(offset) + " puts Eve at " + fmt_g(angle) +
                              " degrees, outside [-90, 90]");
    }

    std::vector<EveSweepRow> rows(offsets_deg.size());
    parallel_for(offsets_deg.size(), workers, [&](std::size_t point) {
        SessionConfig cfg = base;
        cfg.eve_angle_deg = base.theta_star_deg + offsets_deg[point];

        double be = 0.0;
        for (int s = 0; s < sessions_per_point; ++s) {
            cfg.seed = derive_seed(base_seed, {static_cast<std::uint64_t>(cfg.scheme), point,
                                               static_cast<std::uint64_t>(s)});
            be += run_session(cfg).kdr_be;
        }
        rows[point] = EveSweepRow{cfg.scheme, offsets_deg[point],
                                  be / sessions_per_point};
    });
    return rows;
}

void write_eve_sweep_csv(const std::vector<EveSweepRow>& rows, const std::string& path) {
    std::string csv = "scheme,offset_deg,kdr_be\n";
    for (const EveSweepRow& row : rows) {
        csv += to_string(row.scheme);
        csv += ',';
        csv += fmt_g(row.offset_deg);
        csv += ',';
        csv += fmt_f(row.mean_kdr_be, 6);
        csv += '\n';
    }
    write_file(path, csv);
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open for writing: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
        out.close();
        std::remove(path.c_str());
        throw IoError("write failed, partial file removed: " + path);
    }
}

} // namespace mmkey
