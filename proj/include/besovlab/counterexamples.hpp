#pragma once

#include "besovlab/littlewood_paley.hpp"
#include "besovlab/spectral_field.hpp"

#include <string>
#include <vector>

namespace besovlab {

/// Frequency-side bump: 1 on |xi| <= inner_radius, 0 on |xi| >= outer_radius,
/// joined by the same exp-based smooth step as the dyadic partition.
struct BumpSpec {
    double inner_radius = 0.25;
    double outer_radius = 0.5;
    std::string transition = "smooth_step";

    void validate() const;
};

/// The bump's Fourier transform at frequency xi.
double bump_hat(double xi, const BumpSpec& spec = {});

/// phi(x) = integral of bump_hat(xi) exp(i x xi) over the line, realised on
/// the periodic box by sampling bump_hat on the lattice. With this
/// normalization phi(0) is the area under bump_hat and the integral of phi
/// over the box is 2 pi bump_hat(0).
///
/// Requires at least 8 lattice frequencies in (0, outer_radius].
SpectralField make_phi(const Grid& grid, const BumpSpec& spec = {});

/// 17/12 * 2^n, the centre of the plateau of block n.
double carrier_frequency(int n);

/// f_n = 2^{-ns} phi(x) sin(17/12 2^n x). Throws ConfigError when the carrier
/// band is not resolved (2^n * 3/2 >= Nyquist) or n < 0.
SpectralField make_fn(int n, const BesovIndex& idx, const SpectralField& phi);

/// g_n = 2^{-n/2} phi. Requires n >= 1.
SpectralField make_gn(int n, const SpectralField& phi);

/// The two data families whose solutions separate at rate t.
struct CounterexamplePair {
    int n = 0;
    BesovIndex idx;
    SpectralField v1;  ///< (1 - dx)(f_n + g_n)
    SpectralField v2;  ///< (1 - dx) f_n
    SpectralField u1;  ///< f_n + g_n
    SpectralField u2;  ///< f_n
};

/// Requires n >= 5 so that the carrier band sits inside a single block.
CounterexamplePair make_pair(int n, const BesovIndex& idx, const SpectralField& phi);

/// Leading product of the separation estimate and its profile.
struct KeyTerm {
    SpectralField t_n;  ///< (1 - dx) g_n * (1 + dx) g_n * dxx f_n
    SpectralField psi;  ///< (1 - dx) phi * (1 + dx) phi * dx phi
    /// Sup-norm residual of
    ///   [2 u1 (v1 - v2) - (v1^2 - v2^2)] dxx f_n = T_n + 2 (1 - dx) g_n dx f_n dxx f_n
    /// relative to the sup of the left-hand side.
    double identity_residual = 0.0;
};

KeyTerm key_term(int n, const BesovIndex& idx, const SpectralField& phi);

/// (1 - dx) phi * (1 + dx) phi * dx phi.
SpectralField make_psi(const SpectralField& phi);

/// Mean of |sin x|^p over a period: Gamma((p+1)/2) / (sqrt(pi) Gamma(p/2 + 1)).
double sin_power_mean(double p);
/// sin_power_mean(p)^{1/p}.
double sin_power_factor(double p);

struct RiemannSample {
    double lambda = 0.0;
    double norm = 0.0;            ///< ||psi sin(lambda x)||_{L^p}
    double relative_error = 0.0;  ///< |norm - target| / target
};

struct RiemannReport {
    double p = 0.0;
    double factor = 0.0;     ///< sin_power_factor(p)
    double psi_norm = 0.0;   ///< ||psi||_{L^p}
    double target = 0.0;     ///< factor * psi_norm
    std::vector<RiemannSample> samples;
};

/// Oscillatory averaging ||psi sin(lambda x)||_{L^p} -> factor ||psi||_{L^p}.
/// Every lambda must lie on the lattice; p must be finite and >= 1.
RiemannReport riemann_limit(double p, const std::vector<double>& lambdas, const SpectralField& psi);

} // namespace besovlab
