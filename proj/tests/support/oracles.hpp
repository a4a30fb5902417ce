#pragma once

// Test-only reference implementations that share no code path with the
// library's FFT-based kernels.

#include "besovlab/grid.hpp"
#include "besovlab/spectral_field.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;

/// Exact algebra of real trigonometric polynomials sum_k c_k exp(i k w x)
/// with w = pi / L. Products are evaluated by convolution of coefficients.
class TrigPoly {
public:
    explicit TrigPoly(double spacing) : w_(spacing) {}

    static TrigPoly cos_mode(double spacing, std::int64_t k, double amp = 1.0) {
        TrigPoly p(spacing);
        p.c_[k] += amp / 2.0;
        p.c_[-k] += amp / 2.0;
        return p;
    }
    static TrigPoly sin_mode(double spacing, std::int64_t k, double amp = 1.0) {
        TrigPoly p(spacing);
        p.c_[k] += Complex(0.0, -amp / 2.0);
        p.c_[-k] += Complex(0.0, amp / 2.0);
        return p;
    }
    static TrigPoly constant(double spacing, double c) {
        TrigPoly p(spacing);
        p.c_[0] = c;
        return p;
    }

    TrigPoly operator+(const TrigPoly& o) const {
        TrigPoly r = *this;
        for (const auto& [k, v] : o.c_) r.c_[k] += v;
        return r;
    }
    TrigPoly operator-(const TrigPoly& o) const { return *this + o * -1.0; }
    TrigPoly operator*(double s) const {
        TrigPoly r = *this;
        for (auto& [k, v] : r.c_) v *= s;
        return r;
    }
    friend TrigPoly operator*(double s, const TrigPoly& p) { return p * s; }
    TrigPoly operator*(const TrigPoly& o) const {
        TrigPoly r(w_);
        for (const auto& [a, x] : c_) {
            for (const auto& [b, y] : o.c_) r.c_[a + b] += x * y;
        }
        return r;
    }

    /// Fourier multiplier with the given symbol m(xi).
    TrigPoly apply(const std::function<Complex(double)>& symbol) const {
        TrigPoly r(w_);
        for (const auto& [k, v] : c_) r.c_[k] = v * symbol(static_cast<double>(k) * w_);
        return r;
    }
    TrigPoly dx() const { return apply([](double xi) { return Complex(0.0, xi); }); }
    TrigPoly helmholtz_inv() const { return apply([](double xi) { return Complex(1.0 / (1.0 + xi * xi)); }); }
    TrigPoly one_minus_dx() const { return apply([](double xi) { return Complex(1.0, -xi); }); }
    TrigPoly one_minus_dx_inv() const { return apply([](double xi) { return 1.0 / Complex(1.0, -xi); }); }

    double eval(double x) const {
        Complex s = 0.0;
        for (const auto& [k, v] : c_) s += v * std::exp(Complex(0.0, static_cast<double>(k) * w_ * x));
        return s.real();
    }

    /// Direct (non-FFT) evaluation at every grid point.
    besovlab::SpectralField sample(const besovlab::Grid& g) const {
        std::vector<double> v(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) v[i] = eval(g.x(i));
        return besovlab::SpectralField::from_values(g, std::move(v));
    }

    std::int64_t max_mode() const {
        std::int64_t m = 0;
        for (const auto& [k, v] : c_) {
            if (std::abs(v) > 0.0) m = std::max<std::int64_t>(m, std::abs(k));
        }
        return m;
    }

    const std::map<std::int64_t, Complex>& coeffs() const { return c_; }

private:
    double w_;
    std::map<std::int64_t, Complex> c_;
};

/// Random real trigonometric polynomial with modes 0..kmax.
inline TrigPoly random_poly(double spacing, std::int64_t kmax, double amp, std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    TrigPoly p = TrigPoly::constant(spacing, amp * 0.3 * n(rng));
    for (std::int64_t k = 1; k <= kmax; ++k) {
        p = p + TrigPoly::cos_mode(spacing, k, amp * n(rng) / static_cast<double>(k)) +
            TrigPoly::sin_mode(spacing, k, amp * n(rng) / static_cast<double>(k));
    }
    return p;
}

/// u_t for the FORQ / Novikov u-equation evaluated in exact trig algebra.
inline TrigPoly rhs_u(const TrigPoly& u, bool forq) {
    const TrigPoly ux = u.dx();
    const TrigPoly ux3 = ux * ux * ux;
    TrigPoly r = (u * u * ux) * -1.0 - ux3.helmholtz_inv() * (1.0 / 3.0) -
                 ((2.0 / 3.0) * (u * u * u) + u * ux * ux).helmholtz_inv().dx();
    if (forq) r = r + ux3 * (1.0 / 3.0);
    return r;
}

/// Naive O(N^2) DFT in the library's normalization:
/// c_k = (1/N) sum_i f(x_i) exp(-i xi_k x_i), k = 0..N/2.
inline std::vector<Complex> naive_dft(const besovlab::Grid& g, const std::vector<double>& f) {
    std::vector<Complex> c(g.spectrum_size());
    const double n = static_cast<double>(g.size());
    for (std::size_t k = 0; k < c.size(); ++k) {
        Complex s = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            s += f[i] * std::exp(Complex(0.0, -g.frequency(static_cast<std::int64_t>(k)) * g.x(i)));
        }
        c[k] = s / n;
    }
    return c;
}

inline double max_abs_diff(const besovlab::SpectralField& a, const besovlab::SpectralField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i) m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
    return m;
}

} // namespace oracle
