#include "besovlab/grid.hpp"

#include "besovlab/error.hpp"

#include <bit>
#include <cmath>
#include <string>

namespace besovlab {

namespace {
constexpr double kTwelvePi = 12.0 * std::numbers::pi;
}

bool Grid::lattice_index(double xi, std::int64_t& k) const noexcept {
    const double scaled = xi / spacing();
    const double nearest = std::round(scaled);
    if (std::abs(scaled - nearest) > 1e-9 * std::max(1.0, std::abs(scaled))) {
        return false;
    }
    k = static_cast<std::int64_t>(nearest);
    return true;
}

std::vector<double> Grid::coordinates() const {
    std::vector<double> xs(size_);
    for (std::size_t i = 0; i < size_; ++i) xs[i] = x(i);
    return xs;
}

Grid make_grid(double half_length, std::size_t size) {
    if (!(half_length > 0.0) || !std::isfinite(half_length)) {
        throw ConfigError("grid half-length must be positive and finite");
    }
    const double multiple = half_length / kTwelvePi;
    const double nearest = std::round(multiple);
    if (nearest < 1.0 || std::abs(multiple - nearest) > 1e-9 * nearest) {
        throw ConfigError("grid half-length " + std::to_string(half_length) +
                          " is not a positive multiple of 12*pi");
    }
    if (size < 2 || !std::has_single_bit(size)) {
        throw ConfigError("grid size " + std::to_string(size) + " is not a power of two");
    }
    Grid g;
    g.multiple_ = static_cast<std::int64_t>(nearest);
    g.half_length_ = kTwelvePi * nearest;
    g.size_ = size;
    return g;
}

Grid make_grid_multiple(std::int64_t multiple, std::size_t size) {
    return make_grid(kTwelvePi * static_cast<double>(multiple), size);
}

std::vector<double> lattice_wave(const Grid& grid, std::int64_t k, Wave kind) {
    // xi_k x_i = pi (2 k i - k N) / N; reduce the integer numerator mod 2N.
    const auto n = static_cast<std::int64_t>(grid.size());
    const std::int64_t period = 2 * n;
    const std::int64_t km = ((k % period) + period) % period;
    std::vector<double> out(grid.size());
    for (std::int64_t i = 0; i < n; ++i) {
        std::int64_t m = (2 * km * i - km * n) % period;
        if (m < 0) m += period;
        const double angle = std::numbers::pi * static_cast<double>(m) / static_cast<double>(n);
        out[static_cast<std::size_t>(i)] = kind == Wave::Cos ? std::cos(angle) : std::sin(angle);
    }
    return out;
}

} // namespace besovlab
