#ifndef VANISHDAMP_SWEEP_HPP
#define VANISHDAMP_SWEEP_HPP

#include <functional>

#include "vanishdamp/runner.hpp"

namespace vanishdamp {

/// Run fn(i) for i in [0, count) on a bounded worker pool. workers <= 0
/// means hardware concurrency. Exceptions must be handled inside fn.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn);

struct SweepOutcome {
    std::vector<SummaryRow> rows;  // sorted by (problem, alpha, K)
    int failed_cells = 0;
    std::string summary_path;
};

/// Cartesian sweep over problems x alphas x Ks. Each cell owns its output
/// subdirectory; per-cell failures land in the status column and never
/// abort the sweep. The aggregate summary is sorted by cell key, so it does
/// not depend on execution order.
SweepOutcome run_sweep(const SweepConfig& sc, const std::string& out_dir, std::ostream* log);

} // namespace vanishdamp

#endif
