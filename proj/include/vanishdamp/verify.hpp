#ifndef VANISHDAMP_VERIFY_HPP
#define VANISHDAMP_VERIFY_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace vanishdamp {

struct CriterionResult {
    int id = 0;
    std::string group;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct VerifyOptions {
    /// Restrict to one group: order, dissipation, tail, rates, integrability,
    /// anchor, convergence, control. Empty runs everything.
    std::string only;
    int workers = 0;  // 0: hardware concurrency
};

/// Executes the acceptance suite (11 criteria) and returns one result per
/// criterion, in id order. Progress lines go to `progress` when non-null.
std::vector<CriterionResult> run_acceptance(const VerifyOptions& opts,
                                            std::ostream* progress = nullptr);

bool all_passed(const std::vector<CriterionResult>& results);

/// "[ 4/11] rates th2-decay ........ PASS (...)" style line.
std::string format_result_line(const CriterionResult& r);

} // namespace vanishdamp

#endif
