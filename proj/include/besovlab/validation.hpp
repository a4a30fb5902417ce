#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace besovlab {

struct CheckResult {
    std::string suite;
    std::string name;
    bool passed = false;
    /// measured / tolerance for the worst case; <= 1 means within tolerance.
    double worst_ratio = 0.0;
    std::string detail;
};

struct ValidationOptions {
    /// Subset of {grid, lp, equations, counterexamples}; empty runs all.
    std::vector<std::string> suites;
    std::uint64_t seed = 20240601;
    /// Builds the dyadic partition from a widened low-frequency profile whose
    /// blocks overlap beyond their nominal annuli. Negative control.
    bool inject_broken_phi = false;
};

struct ValidationReport {
    std::vector<CheckResult> checks;
    bool all_passed() const;
};

const std::vector<std::string>& validation_suites();

/// Runs the selected property suites. Throws ConfigError for unknown suite names.
ValidationReport run_validation(const ValidationOptions& options);

} // namespace besovlab
