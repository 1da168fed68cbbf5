#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace corrbc {

struct PropertyResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ValidationOptions {
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::size_t trials = 200;  // Monte Carlo checks
};

// Property checks across all modules, sized to run in well under a minute.
std::vector<PropertyResult> run_invariant_suite(const ValidationOptions& options);

}  // namespace corrbc
