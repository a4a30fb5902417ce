#pragma once

#include "besovlab/spectral_field.hpp"

#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace besovlab {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// C^infinity transition: 0 for t <= 0, 1 for t >= 1, exp-based in between.
double smooth_step(double t);

/// Low-frequency cut: 1 on |xi| <= 3/4, 0 on |xi| >= 4/3.
double chi(double xi);
/// Annulus function phi(xi) = chi(xi/2) - chi(xi), supported in 3/4 <= |xi| <= 8/3
/// and identically 1 on 4/3 <= |xi| <= 3/2.
double phi(double xi);

/// Regularity s, integrability p and summability r of a Besov norm.
/// p and r may be kInfinity.
struct BesovIndex {
    double s = 0.0;
    double p = 2.0;
    double r = 2.0;

    /// s > max{2 + 1/p, 5/2}: the range where the solution map is well posed.
    /// Stored as a predicate only; lower indices are evaluated routinely.
    bool wellposed_regime() const noexcept;

    BesovIndex shifted(double ds) const noexcept { return {s + ds, p, r}; }
    void validate() const;
    std::string to_string() const;

    friend bool operator==(const BesovIndex&, const BesovIndex&) = default;
};

/// chi and phi(2^{-j} .) sampled on a grid's lattice for j = 0..j_max.
class DyadicPartition {
public:
    const Grid& grid() const noexcept { return grid_; }
    int j_max() const noexcept { return j_max_; }

    /// Real multiplier of block j, j = -1 (chi) .. j_max.
    std::span<const double> samples(int j) const;

    /// Lowest/highest stored coefficient index that block j can touch.
    std::size_t first_index(int j) const { return range_.at(static_cast<std::size_t>(j + 1)).first; }
    std::size_t last_index(int j) const { return range_.at(static_cast<std::size_t>(j + 1)).second; }

private:
    friend DyadicPartition build_partition(const Grid&, const std::function<double(double)>&);

    Grid grid_;
    int j_max_ = 0;
    std::vector<std::vector<double>> blocks_;                  // index j + 1
    std::vector<std::pair<std::size_t, std::size_t>> range_;  // index j + 1
};

/// Largest block index whose annulus the grid resolves:
/// floor(log2(Nyquist * 9 / 16)).
int resolvable_j_max(const Grid& grid);

/// Builds the partition from the standard chi. Throws ConfigError for N < 32.
DyadicPartition build_partition(const Grid& grid);
/// Same construction from an arbitrary low-frequency profile, with
/// phi_j(xi) = profile(2^{-j-1} xi) - profile(2^{-j} xi). Used to inject
/// faults into the validation suites.
DyadicPartition build_partition(const Grid& grid, const std::function<double(double)>& profile);

/// Delta_j f for j >= 0, chi(D) f for j = -1. Throws ConfigError if j is outside [-1, j_max].
SpectralField block(int j, const SpectralField& f, const DyadicPartition& part);

/// S_j f = sum_{j' < j} Delta_{j'} f. Zero for j <= -1.
SpectralField low_cut(int j, const SpectralField& f, const DyadicPartition& part);

/// Per-block ingredients of a Besov norm.
struct BlockProfile {
    std::vector<double> lp_norms;  ///< ||Delta_j f||_{L^p}, j = -1..j_max
    std::vector<double> weighted;  ///< 2^{js} ||Delta_j f||_{L^p}
    double norm = 0.0;             ///< l^r norm of `weighted`
    double unresolved_fraction = 0.0;  ///< relative L^2 energy not covered by the blocks
};

BlockProfile block_profile(const SpectralField& f, const BesovIndex& idx, const DyadicPartition& part);

/// ||f||_{B^s_{p,r}} with the l^r sum truncated to j = -1..j_max. Logs a
/// resolution warning when more than 1e-10 of the energy lies above the
/// partition's reach.
double besov_norm(const SpectralField& f, const BesovIndex& idx, const DyadicPartition& part);

/// Both sides of the product estimate
///   ||u v||_{B^s} <= C (||u||_inf ||v||_{B^s} + ||v||_inf ||u||_{B^s}).
struct ProductEstimateReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;  ///< lhs / rhs, defined as 0 when both inputs vanish
};

/// Requires s > 0.
ProductEstimateReport check_product_estimate(const SpectralField& u, const SpectralField& v,
                                             const BesovIndex& idx, const DyadicPartition& part);

/// Receives resolution warnings. Defaults to stderr; pass nullptr to restore.
void set_warning_sink(std::function<void(const std::string&)> sink);
void warn(const std::string& message);

} // namespace besovlab
