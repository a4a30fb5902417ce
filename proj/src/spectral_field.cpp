#include "besovlab/spectral_field.hpp"

#include "besovlab/error.hpp"
#include "fft.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace besovlab {

SpectralField SpectralField::from_values(const Grid& grid, std::vector<double> values) {
    if (values.size() != grid.size()) {
        throw ConfigError("sample count does not match grid size");
    }
    std::vector<Complex> coeffs(grid.spectrum_size());
    detail::forward(values, coeffs);
    return SpectralField(grid, std::move(values), std::move(coeffs));
}

SpectralField SpectralField::from_coeffs(const Grid& grid, std::vector<Complex> coeffs) {
    if (coeffs.size() != grid.spectrum_size()) {
        throw ConfigError("coefficient count does not match grid spectrum size");
    }
    // A real field has a real mean and a real Nyquist coefficient.
    coeffs.front() = coeffs.front().real();
    coeffs.back() = coeffs.back().real();
    std::vector<double> values(grid.size());
    detail::inverse(coeffs, values);
    return SpectralField(grid, std::move(values), std::move(coeffs));
}

SpectralField SpectralField::zero(const Grid& grid) {
    return SpectralField(grid, std::vector<double>(grid.size(), 0.0),
                         std::vector<Complex>(grid.spectrum_size()));
}

SpectralField SpectralField::constant(const Grid& grid, double c) {
    std::vector<Complex> coeffs(grid.spectrum_size());
    coeffs[0] = c;
    return SpectralField(grid, std::vector<double>(grid.size(), c), std::move(coeffs));
}

Complex SpectralField::coefficient(std::int64_t k) const {
    const auto half = static_cast<std::int64_t>(grid_.size() / 2);
    if (k < -half || k >= half) {
        throw ConfigError("coefficient index outside [-N/2, N/2)");
    }
    if (k == -half) return coeffs_.back();
    return k >= 0 ? coeffs_[static_cast<std::size_t>(k)]
                  : std::conj(coeffs_[static_cast<std::size_t>(-k)]);
}

bool SpectralField::is_finite() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double SpectralField::sup_norm() const noexcept {
    double m = 0.0;
    for (double v : values_) {
        if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
        m = std::max(m, std::abs(v));
    }
    return m;
}

void SpectralField::require_same_grid(const SpectralField& other) const {
    if (!(grid_ == other.grid_)) throw ConfigError("fields live on different grids");
}

SpectralField SpectralField::operator-() const {
    SpectralField out = *this;
    out *= -1.0;
    return out;
}

SpectralField& SpectralField::operator+=(const SpectralField& other) { return axpy(1.0, other); }
SpectralField& SpectralField::operator-=(const SpectralField& other) { return axpy(-1.0, other); }

SpectralField& SpectralField::operator*=(double scale) {
    for (auto& v : values_) v *= scale;
    for (auto& c : coeffs_) c *= scale;
    return *this;
}

SpectralField& SpectralField::axpy(double scale, const SpectralField& other) {
    require_same_grid(other);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += scale * other.values_[i];
    for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += scale * other.coeffs_[k];
    return *this;
}

SpectralField operator*(const SpectralField& a, const SpectralField& b) {
    a.require_same_grid(b);
    std::vector<double> v(a.values_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.values_[i] * b.values_[i];
    return SpectralField::from_values(a.grid_, std::move(v));
}

SpectralField product(const SpectralField& a, const SpectralField& b, const SpectralField& c) {
    if (!(a.grid() == b.grid()) || !(a.grid() == c.grid())) {
        throw ConfigError("fields live on different grids");
    }
    const auto av = a.values(), bv = b.values(), cv = c.values();
    std::vector<double> v(av.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = av[i] * bv[i] * cv[i];
    return SpectralField::from_values(a.grid(), std::move(v));
}

double lp_norm(const SpectralField& f, double p) {
    if (!(p >= 1.0)) throw ConfigError("L^p norm requires p >= 1");
    const auto v = f.values();
    if (std::isinf(p)) {
        double m = 0.0;
        for (double x : v) m = std::max(m, std::abs(x));
        return m;
    }
    const double dx = f.grid().dx();
    if (p == 1.0) {
        double sum = 0.0;
        for (double x : v) sum += std::abs(x);
        return sum * dx;
    }
    if (p == 2.0) {
        double sum = 0.0;
        for (double x : v) sum += x * x;
        return std::sqrt(sum * dx);
    }
    // Scale by the maximum to keep |f|^p in range for large p.
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    if (m == 0.0) return 0.0;
    double sum = 0.0;
    for (double x : v) sum += std::pow(std::abs(x) / m, p);
    return m * std::pow(sum * dx, 1.0 / p);
}

double l2_norm_spectral(const SpectralField& f) {
    const auto c = f.coeffs();
    double sum = std::norm(c.front()) + std::norm(c.back());
    for (std::size_t k = 1; k + 1 < c.size(); ++k) sum += 2.0 * std::norm(c[k]);
    return std::sqrt(2.0 * f.grid().half_length() * sum);
}

SpectralField truncate_above(const SpectralField& f, double fraction) {
    const Grid& g = f.grid();
    const double cutoff = fraction * g.nyquist();
    std::vector<Complex> c(f.coeffs().begin(), f.coeffs().end());
    bool touched = false;
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (g.frequency(static_cast<std::int64_t>(k)) > cutoff && c[k] != Complex{}) {
            c[k] = 0.0;
            touched = true;
        }
    }
    if (!touched) return f;
    return SpectralField::from_coeffs(g, std::move(c));
}

} // namespace besovlab
