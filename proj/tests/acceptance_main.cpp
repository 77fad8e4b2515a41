// Acceptance suite: runs every criterion at its pinned tolerance and prints
// one pass/fail line each. Exit status 0 iff everything passed.

#include <cstring>
#include <iostream>

#include "vanishdamp/verify.hpp"

int main(int argc, char** argv) {
    vanishdamp::VerifyOptions opts;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) opts.only = argv[++i];
        if (std::strcmp(argv[i], "--workers") == 0 && i + 1 < argc)
            opts.workers = std::atoi(argv[++i]);
    }
    auto results = vanishdamp::run_acceptance(opts, &std::cout);
    if (results.empty()) {
        std::cerr << "no criteria selected\n";
        return 1;
    }
    int failed = 0;
    for (const auto& r : results)
        if (!r.pass) ++failed;
    std::cout << results.size() - failed << "/" << results.size() << " acceptance criteria passed"
              << std::endl;
    return failed == 0 ? 0 : 1;
}
