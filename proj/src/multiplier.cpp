#include "besovlab/multiplier.hpp"

#include "besovlab/error.hpp"

#include <cmath>

namespace besovlab {

SampledMultiplier::SampledMultiplier(const Multiplier& m, const Grid& grid)
    : name_(m.name), grid_(grid), samples_(grid.spectrum_size()) {
    for (std::size_t k = 0; k + 1 < samples_.size(); ++k) {
        const Complex value = m.symbol(grid.frequency(static_cast<std::int64_t>(k)));
        if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
            throw ConfigError("multiplier '" + m.name + "' is not finite on the lattice");
        }
        samples_[k] = value;
    }
    samples_.back() = 0.0;
}

SpectralField SampledMultiplier::apply(const SpectralField& f) const {
    if (!(f.grid() == grid_)) throw ConfigError("multiplier sampled on a different grid");
    const auto c = f.coeffs();
    std::vector<Complex> out(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) out[k] = c[k] * samples_[k];
    return SpectralField::from_coeffs(grid_, std::move(out));
}

SpectralField apply_multiplier(const Multiplier& m, const SpectralField& f) {
    if (!f.is_finite()) throw ConfigError("non-finite field passed to multiplier '" + m.name + "'");
    return SampledMultiplier(m, f.grid()).apply(f);
}

namespace multipliers {

Multiplier identity() {
    return {"identity", [](double) { return Complex{1.0, 0.0}; }};
}

Multiplier derivative() {
    return {"dx", [](double xi) { return Complex{0.0, xi}; }};
}

Multiplier second_derivative() {
    return {"dxx", [](double xi) { return Complex{-xi * xi, 0.0}; }};
}

Multiplier one_minus_dx() {
    return {"1-dx", [](double xi) { return Complex{1.0, -xi}; }};
}

Multiplier one_plus_dx() {
    return {"1+dx", [](double xi) { return Complex{1.0, xi}; }};
}

Multiplier one_minus_dx_inv() {
    return {"(1-dx)^-1", [](double xi) { return 1.0 / Complex{1.0, -xi}; }};
}

Multiplier helmholtz_inv() {
    return {"(1-dxx)^-1", [](double xi) { return Complex{1.0 / (1.0 + xi * xi), 0.0}; }};
}

Multiplier dx_helmholtz_inv() {
    return compose(derivative(), helmholtz_inv());
}

Multiplier compose(const Multiplier& a, const Multiplier& b) {
    return {a.name + "*" + b.name,
            [sa = a.symbol, sb = b.symbol](double xi) { return sa(xi) * sb(xi); }};
}

Multiplier inverse(const Multiplier& m) {
    return {"(" + m.name + ")^-1", [s = m.symbol, name = m.name](double xi) {
                const Complex v = s(xi);
                if (v == Complex{}) {
                    throw ConfigError("multiplier '" + name + "' vanishes on the lattice");
                }
                return 1.0 / v;
            }};
}

} // namespace multipliers

} // namespace besovlab
