#pragma once

#include "besovlab/spectral_field.hpp"

#include <functional>
#include <string>
#include <vector>

namespace besovlab {

/// A Fourier multiplier m(D): coefficients at lattice frequency xi are
/// multiplied by symbol(xi).
///
/// Symbols are expected to be Hermitian (m(-xi) = conj m(xi)) so that real
/// fields stay real. The Nyquist mode is shared by +xi and -xi and has no
/// consistent image under odd symbols; every multiplier annihilates it.
struct Multiplier {
    std::string name;
    std::function<Complex(double)> symbol;
};

/// A multiplier evaluated once on a grid's lattice.
class SampledMultiplier {
public:
    SampledMultiplier() = default;
    SampledMultiplier(const Multiplier& m, const Grid& grid);

    const std::string& name() const noexcept { return name_; }
    const Grid& grid() const noexcept { return grid_; }
    std::span<const Complex> samples() const noexcept { return samples_; }

    SpectralField apply(const SpectralField& f) const;

private:
    std::string name_;
    Grid grid_;
    std::vector<Complex> samples_;
};

/// Throws ConfigError when f carries non-finite samples.
SpectralField apply_multiplier(const Multiplier& m, const SpectralField& f);

namespace multipliers {

Multiplier identity();
/// d/dx, symbol i xi.
Multiplier derivative();
/// d^2/dx^2, symbol -xi^2.
Multiplier second_derivative();
/// (1 - d/dx), symbol 1 - i xi.
Multiplier one_minus_dx();
/// (1 + d/dx), symbol 1 + i xi.
Multiplier one_plus_dx();
/// (1 - d/dx)^{-1}, symbol 1 / (1 - i xi).
Multiplier one_minus_dx_inv();
/// (1 - d^2/dx^2)^{-1}, symbol 1 / (1 + xi^2).
Multiplier helmholtz_inv();
/// d/dx (1 - d^2/dx^2)^{-1}, the product of the two symbols above.
Multiplier dx_helmholtz_inv();

/// Symbol-wise product; applying the result equals applying b then a.
Multiplier compose(const Multiplier& a, const Multiplier& b);
/// 1 / symbol. Sampling throws ConfigError if the symbol vanishes on the lattice.
Multiplier inverse(const Multiplier& m);

} // namespace multipliers

} // namespace besovlab
