#pragma once

#include "besovlab/counterexamples.hpp"
#include "besovlab/equations.hpp"
#include "besovlab/littlewood_paley.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace besovlab {

struct ExperimentConfig {
    Grid grid;
    BesovIndex idx{3.0, 2.0, 2.0};
    /// FORQ or Novikov; either spelling is accepted, runs use the v-form.
    EquationVariant variant = EquationVariant::ForqV;
    double dt = 1e-3;
    bool dealias = true;
    double blowup_ceiling = 1e6;
    BumpSpec bump;
    /// Upper end of the time window; every t must lie in [0, t_max].
    double t_max = 0.05;
    /// Worker cap; 0 defers to BESOVLAB_THREADS, then the hardware.
    unsigned threads = 0;

    void validate() const;
    EvolutionConfig evolution(double t_end, std::vector<double> snapshots) const;
};

/// L = 24 pi, N = 2^18: carriers up to n = 10 stay below the dealiasing cut
/// and |xi| <= 1/2 holds 12 lattice frequencies.
ExperimentConfig default_experiment_config();
std::vector<int> default_n_list();           ///< 5..10
std::vector<double> default_t_list();        ///< 0.005, 0.01, 0.02
std::vector<double> default_drift_t_list();  ///< 1e-3 .. 2e-2

/// One row of every experiment CSV. Fields that an experiment does not
/// measure are left at zero.
struct ExperimentRecord {
    std::string experiment;  ///< nonuniform, prop2 or prop3
    std::string data;        ///< label of the initial data
    int n = 0;
    double t = 0.0;
    EquationVariant variant = EquationVariant::ForqV;
    BesovIndex idx;
    double init_distance = 0.0;       ///< ||u1(0) - u2(0)||_{B^s}
    double evolved_distance = 0.0;    ///< ||u1(t) - u2(t)||_{B^s}
    double init_distance_v = 0.0;     ///< ||v1(0) - v2(0)||_{B^{s-1}}
    double evolved_distance_v = 0.0;  ///< ||v1(t) - v2(t)||_{B^{s-1}}
    /// ||(v1(t) - v2(t)) - (v1(0) - v2(0))||_{B^{s-1}}, the part that grows like t.
    double separation_v = 0.0;
    double approx_remainder = 0.0;    ///< ||v(t) - v0 - t dv/dt(0)||_{B^{s-1}}
    double drift_sm2 = 0.0;           ///< ||v(t) - v0||_{B^{s-2}}
    double drift_sm1 = 0.0;           ///< ||v(t) - v0||_{B^{s-1}}
    double drift_s = 0.0;             ///< ||v(t) - v0||_{B^s}
    /// Drifts and remainder divided by t (resp. t^2) times their a priori bounds.
    double ratio_sm2 = 0.0;
    double ratio_sm1 = 0.0;
    double ratio_s = 0.0;
    double ratio_remainder = 0.0;
    std::string status = "ok";        ///< ok, or blowup when the cell was aborted

    friend bool operator==(const ExperimentRecord&, const ExperimentRecord&) = default;
};

const std::vector<std::string>& record_columns();

/// Separation sweep: for each n evolves the pair once and samples every t.
/// A blow-up marks the affected cells and keeps the earlier ones.
std::vector<ExperimentRecord> run_nonuniform(const std::vector<int>& n_list, const std::vector<double>& t_list,
                                             const ExperimentConfig& cfg);

/// Drift of a single datum in the three norms.
std::vector<ExperimentRecord> run_prop2(const SpectralField& v0, const std::string& label, int n,
                                        const std::vector<double>& t_list, const ExperimentConfig& cfg);

/// Remainder of the first-order approximation S_t v0 ~ v0 + t dv/dt(0).
std::vector<ExperimentRecord> run_prop3(const SpectralField& v0, const std::string& label, int n,
                                        const std::vector<double>& t_list, const ExperimentConfig& cfg);

struct FitResult {
    double exponent = 0.0;
    double intercept = 0.0;  ///< natural log of the prefactor
    double residual = 0.0;   ///< RMS of the log residuals
    double x_min = 0.0;
    double x_max = 0.0;
    std::size_t points = 0;
};

/// Least-squares line through (log x, log y). Needs >= 3 points, all positive.
FitResult fit_power_law(const std::vector<double>& xs, const std::vector<double>& ys);

/// y = a t + b t^2 in least squares (no constant term).
struct LinearQuadraticFit {
    double linear = 0.0;
    double quadratic = 0.0;
};
LinearQuadraticFit fit_linear_quadratic(const std::vector<double>& ts, const std::vector<double>& ys);

/// Candidate values for the separation rate.
struct SeparationTargets {
    /// 17/12 * (mean |sin|^p)^{1/p} * ||(1 - dx)phi (1 + dx)phi dx phi||_{L^p}
    double stated = 0.0;
    /// (17/12)^2 * (mean |sin|^p)^{1/p} * ||(1 - dx)phi (1 + dx)phi phi||_{L^p}:
    /// the limit of 2^{n(s-1)} ||T_n||_{L^p}, since dxx f_n ~ -(17/12 2^n)^2 2^{-ns} phi sin.
    double leading_order = 0.0;
};
SeparationTargets separation_targets(const SpectralField& phi, double p);

struct SeparationRate {
    int n = 0;
    LinearQuadraticFit fit;
    /// min over t of (separation_v - quadratic t^2) / t.
    double corrected_rate = 0.0;
};

struct NonuniformSummary {
    EquationVariant variant = EquationVariant::ForqV;
    BesovIndex idx;
    FitResult init_decay;  ///< init_distance_v against 2^n; exponent is the log2 slope
    /// max_n init_distance_v * 2^{n/2}
    double init_constant = 0.0;
    std::vector<SeparationRate> rates;
    double c0 = 0.0;  ///< min over n of corrected_rate
    SeparationTargets targets;
    bool all_cells_ok = true;
    bool holds = false;
    std::string verdict;
};

/// The separation-of-scales verdict holds when the initial distance decays
/// with log2 slope -1/2 +- 0.05, every cell finished and c0 > 0.
NonuniformSummary summarize_nonuniform(const std::vector<ExperimentRecord>& records, const SpectralField& phi);

/// Writes header and rows; doubles use 17 significant digits and round trip exactly.
void emit_csv(const std::vector<ExperimentRecord>& records, const std::filesystem::path& path);
std::string format_csv(const std::vector<ExperimentRecord>& records);
std::vector<ExperimentRecord> parse_csv(const std::string& text);

/// Per-block norms of a named field.
struct BlockRow {
    std::string field;
    int n = 0;
    int j = 0;
    double lp_norm = 0.0;
    double weighted = 0.0;
};
std::vector<BlockRow> block_rows(const std::string& field, int n, const SpectralField& f, const BesovIndex& idx,
                                 const DyadicPartition& part);
std::string format_blocks_csv(const std::vector<BlockRow>& rows);

/// Writes text to path, creating parent directories; errors carry the path.
void write_text(const std::filesystem::path& path, const std::string& text);

nlohmann::json to_json(const ExperimentConfig& cfg);
nlohmann::json to_json(const FitResult& fit);
nlohmann::json to_json(const NonuniformSummary& summary);

/// Workers used for independent cells.
unsigned thread_budget(unsigned requested, std::size_t tasks);

/// Library and FFT backend identification for run manifests.
std::string library_version();
std::string fft_backend_version();

} // namespace besovlab
