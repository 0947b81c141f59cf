// Acceptance suite: one PASS/FAIL line per criterion.
//   saltlab_acceptance            run everything
//   saltlab_acceptance 3 7        run selected ids
#include "saltlab/checks.hpp"

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

int main(int argc, char** argv) {
    std::vector<int> ids;
    for (int i = 1; i < argc; ++i) ids.push_back(std::stoi(argv[i]));
    const auto results = saltlab::run_checks(std::cout, ids);
    int failed = 0;
    for (const auto& r : results) failed += !r.passed;
    std::cout << results.size() - std::size_t(failed) << "/" << results.size() << " criteria passed\n";
    return failed ? EXIT_FAILURE : EXIT_SUCCESS;
}
