#include "vanishdamp/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <thread>

#include "vanishdamp/csvio.hpp"

namespace vanishdamp {

namespace fs = std::filesystem;

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
    if (count == 0) return;
    unsigned n = workers > 0 ? static_cast<unsigned>(workers)
                             : std::max(1u, std::thread::hardware_concurrency());
    n = std::min<unsigned>(n, static_cast<unsigned>(count));
    if (n <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (unsigned t = 0; t < n; ++t)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                fn(i);
            }
        });
    for (auto& th : pool) th.join();
}

namespace {

std::string cell_dir_name(const std::string& problem, double alpha, double K) {
    return problem + "_a" + format_double(alpha) + "_K" + format_double(K);
}

} // namespace

SweepOutcome run_sweep(const SweepConfig& sc, const std::string& out_dir, std::ostream* log) {
    struct Cell {
        std::string problem;
        double alpha, K;
    };
    std::vector<Cell> cells;
    for (const auto& p : sc.problems)
        for (double a : sc.alphas)
            for (double K : sc.Ks) cells.push_back(Cell{p, a, K});

    std::vector<SummaryRow> rows(cells.size());
    std::atomic<int> failures{0};

    parallel_for(cells.size(), sc.workers, [&](std::size_t i) {
        const Cell& c = cells[i];
        RunConfig rc = sc.base;
        rc.problem_id = c.problem;
        rc.custom_problem.reset();
        rc.schedule.kind = "powerlaw";
        rc.schedule.alpha = c.alpha;
        rc.schedule.K = c.K;
        const std::string dir =
            (fs::path(out_dir) / "cells" / cell_dir_name(c.problem, c.alpha, c.K)).string();
        try {
            RunResult r = execute_run(rc, dir, nullptr);
            rows[i] = r.row;
            if (r.exit_code != 0) failures.fetch_add(1);
        } catch (const std::exception& e) {
            SummaryRow row;
            row.problem = c.problem;
            row.alpha = c.alpha;
            row.K = c.K;
            row.h = rc.h;
            row.t_end = rc.t_end;
            std::string msg = e.what();
            std::replace(msg.begin(), msg.end(), ',', ';');
            std::replace(msg.begin(), msg.end(), '\n', ' ');
            row.status = "error: " + msg;
            rows[i] = std::move(row);
            failures.fetch_add(1);
        }
        if (log) *log << "cell " << cell_dir_name(c.problem, c.alpha, c.K) << " done\n";
    });

    std::stable_sort(rows.begin(), rows.end(), [](const SummaryRow& a, const SummaryRow& b) {
        if (a.problem != b.problem) return a.problem < b.problem;
        if (a.alpha != b.alpha) return a.alpha < b.alpha;
        return a.K < b.K;
    });

    SweepOutcome out;
    out.rows = std::move(rows);
    out.failed_cells = failures.load();

    fs::create_directories(out_dir);
    const fs::path summary = fs::path(out_dir) / "summary.csv";
    std::ofstream f(summary, std::ios::binary);
    f << SummaryRow::csv_header() << "\n";
    for (const auto& r : out.rows) f << r.csv_row() << "\n";
    out.summary_path = summary.string();
    return out;
}

} // namespace vanishdamp
