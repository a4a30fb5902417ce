#pragma once

#include "besovlab/grid.hpp"

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace besovlab {

using Complex = std::complex<double>;

/// A real periodic function held simultaneously as grid samples and as
/// Fourier coefficients.
///
/// Only the non-negative half of the spectrum (k = 0..N/2) is stored; the
/// negative frequencies follow from conjugate symmetry. Both sides are kept
/// consistent at construction, so a field is immutable and can be shared
/// freely between threads. Linear operations update both sides without a
/// transform; every other operation costs at most one FFT.
///
/// Transform normalization: c_k = (1/N) sum_i f(x_i) exp(-i xi_k x_i), so
/// f(x) = sum_k c_k exp(i xi_k x) and the integral over the box is 2L c_0.
class SpectralField {
public:
    /// Empty placeholder on the default grid; assign before use.
    SpectralField() = default;

    static SpectralField from_values(const Grid& grid, std::vector<double> values);
    static SpectralField from_coeffs(const Grid& grid, std::vector<Complex> coeffs);
    static SpectralField zero(const Grid& grid);
    static SpectralField constant(const Grid& grid, double c);

    const Grid& grid() const noexcept { return grid_; }
    std::span<const double> values() const noexcept { return values_; }
    /// Coefficients for k = 0..N/2.
    std::span<const Complex> coeffs() const noexcept { return coeffs_; }
    /// Coefficient for any k in [-N/2, N/2).
    Complex coefficient(std::int64_t k) const;

    bool is_finite() const noexcept;
    double sup_norm() const noexcept;

    SpectralField operator-() const;
    SpectralField& operator+=(const SpectralField& other);
    SpectralField& operator-=(const SpectralField& other);
    SpectralField& operator*=(double scale);

    /// this + scale * other, both sides updated in place.
    SpectralField& axpy(double scale, const SpectralField& other);

    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(SpectralField a, double s) { return a *= s; }
    friend SpectralField operator*(double s, SpectralField a) { return a *= s; }
    /// Pointwise product, computed on the grid (no dealiasing).
    friend SpectralField operator*(const SpectralField& a, const SpectralField& b);

private:
    SpectralField(const Grid& grid, std::vector<double> values, std::vector<Complex> coeffs)
        : grid_(grid), values_(std::move(values)), coeffs_(std::move(coeffs)) {}

    void require_same_grid(const SpectralField& other) const;

    Grid grid_;
    std::vector<double> values_;
    std::vector<Complex> coeffs_;
};

/// Pointwise product of three fields in a single transform.
SpectralField product(const SpectralField& a, const SpectralField& b, const SpectralField& c);

/// Applies a pointwise map to the grid samples.
template <typename F>
SpectralField map_values(const SpectralField& f, F&& fn) {
    std::vector<double> out(f.values().begin(), f.values().end());
    for (auto& v : out) v = fn(v);
    return SpectralField::from_values(f.grid(), std::move(out));
}

/// Rectangle-rule L^p norm: (sum |f_i|^p dx)^{1/p}; p = infinity gives the
/// sample maximum. Throws ConfigError for p < 1.
double lp_norm(const SpectralField& f, double p);

/// L^2 norm evaluated from the coefficients; equals lp_norm(f, 2) exactly for
/// trigonometric polynomials resolved by the grid.
double l2_norm_spectral(const SpectralField& f);

/// Zeroes every coefficient with |xi| > fraction * Nyquist.
SpectralField truncate_above(const SpectralField& f, double fraction);

/// Dealiasing for cubic nonlinearities: keep |xi| <= Nyquist / 2.
inline SpectralField dealias(const SpectralField& f) { return truncate_above(f, 0.5); }

/// Field built from a real-valued function of x.
template <typename F>
SpectralField sample(const Grid& grid, F&& fn) {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) v[i] = fn(grid.x(i));
    return SpectralField::from_values(grid, std::move(v));
}

} // namespace besovlab
