#pragma once

#include "besovlab/littlewood_paley.hpp"

#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <string>
#include <vector>

namespace besovlab {

/// Stable process exit codes.
enum ExitCode : int {
    kExitOk = 0,
    kExitPropertyFailure = 1,
    kExitConfigError = 2,
    kExitBlowUp = 3,
};

/// Settings shared by every subcommand. Defaults reproduce the reference run.
struct RunConfig {
    double grid_L = 24.0 * std::numbers::pi;
    std::size_t grid_N = std::size_t{1} << 18;
    BesovIndex idx{3.0, 2.0, 2.0};
    std::vector<int> n_list{5, 6, 7, 8, 9, 10};
    std::vector<double> t_list{0.005, 0.01, 0.02};
    std::vector<double> drift_t_list{0.001, 0.002, 0.005, 0.01, 0.02};
    double dt = 1e-3;
    std::string variant = "forq";  ///< forq or novikov
    std::string out = "out";
    std::uint64_t seed = 20240601;
    std::vector<std::string> suites;
    double t_max = 0.05;
    unsigned threads = 0;
    bool dealias = true;
    double blowup_ceiling = 1e6;
    bool t_list_given = false;
    bool p_given = false;
};

/// Applies one key = value setting. Keys use underscores (grid_L, n_list, ...).
/// A non-empty section must be the module that owns the key:
///   spectral_grid: grid_L grid_N
///   littlewood_paley: s p r
///   equations: dt variant dealias blowup_ceiling
///   experiments: n_list t_list drift_t_list t_max threads
///   cli: out seed suite
/// Throws ConfigError for unknown keys, misplaced keys and malformed values.
void apply_setting(RunConfig& cfg, const std::string& section, const std::string& key, const std::string& value);

/// Reads an INI-style file of such settings.
void load_config_file(RunConfig& cfg, const std::string& path);

/// Entry point of the besovlab executable; returns an ExitCode.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace besovlab
