#pragma once

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <vector>

namespace besovlab {

/// Periodic box [-L, L) sampled at N equispaced points.
///
/// The frequency lattice is xi_k = k * pi / L for k = -N/2 .. N/2 - 1.
/// L is restricted to integer multiples of 12*pi so that every carrier
/// frequency of the form (17/12) * 2^n lands exactly on the lattice.
class Grid {
public:
    Grid() = default;

    double half_length() const noexcept { return half_length_; }
    std::size_t size() const noexcept { return size_; }
    /// L / (12 pi).
    std::int64_t period_multiple() const noexcept { return multiple_; }

    double dx() const noexcept { return 2.0 * half_length_ / static_cast<double>(size_); }
    /// Lattice spacing pi / L.
    double spacing() const noexcept { return std::numbers::pi / half_length_; }
    double nyquist() const noexcept { return spacing() * static_cast<double>(size_ / 2); }
    /// Number of stored (non-negative) coefficients, N/2 + 1.
    std::size_t spectrum_size() const noexcept { return size_ / 2 + 1; }

    double x(std::size_t i) const noexcept { return -half_length_ + static_cast<double>(i) * dx(); }
    double frequency(std::int64_t k) const noexcept { return static_cast<double>(k) * spacing(); }

    /// Lattice index of a frequency; returns false when xi is off-lattice.
    bool lattice_index(double xi, std::int64_t& k) const noexcept;

    std::vector<double> coordinates() const;

    friend bool operator==(const Grid& a, const Grid& b) noexcept {
        return a.size_ == b.size_ && a.multiple_ == b.multiple_;
    }

private:
    friend Grid make_grid(double half_length, std::size_t size);

    double half_length_ = 0.0;
    std::size_t size_ = 0;
    std::int64_t multiple_ = 0;
};

/// Validates and builds a grid. Throws ConfigError when L is not a multiple
/// of 12*pi or N is not a power of two.
Grid make_grid(double half_length, std::size_t size);

/// Convenience: L = 12*pi*multiple.
Grid make_grid_multiple(std::int64_t multiple, std::size_t size);

enum class Wave { Cos, Sin };

/// Samples cos(xi_k x) or sin(xi_k x) at the grid points with the phase
/// reduced in integer arithmetic, so large k keeps full relative accuracy.
std::vector<double> lattice_wave(const Grid& grid, std::int64_t k, Wave kind);

} // namespace besovlab
