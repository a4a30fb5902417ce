#pragma once

#include "besovlab/multiplier.hpp"
#include "besovlab/spectral_field.hpp"

#include <string>
#include <vector>

namespace besovlab {

/// Which right-hand side drives the evolution.
///  - ForqU:    u_t = -u^2 u_x + (1/3) u_x^3 - (1/3) H[u_x^3] - dx H[(2/3) u^3 + u u_x^2]
///  - NovikovU: the same without the local (1/3) u_x^3 term
///  - ForqV / NovikovV: the equations satisfied by v = (1 - dx) u
/// with H = (1 - dxx)^{-1}.
enum class EquationVariant { ForqU, ForqV, NovikovU, NovikovV };

std::string to_string(EquationVariant v);
/// Accepts the enum spellings (forq_u, forq_v, novikov_u, novikov_v).
EquationVariant parse_variant(const std::string& name);
bool is_v_form(EquationVariant v) noexcept;
/// The v-form companion of a u-form variant and vice versa.
EquationVariant v_form(EquationVariant v) noexcept;
EquationVariant u_form(EquationVariant v) noexcept;

/// Nonlocal operators shared by all right-hand sides, sampled once per grid.
struct NonlocalKit {
    Grid grid;
    SampledMultiplier dx;
    SampledMultiplier helmholtz_inv;     ///< 1 / (1 + xi^2)
    SampledMultiplier dx_helmholtz_inv;  ///< i xi / (1 + xi^2)
    SampledMultiplier one_minus_dx;      ///< 1 - i xi
    SampledMultiplier one_minus_dx_inv;  ///< 1 / (1 - i xi)
    /// Zero |xi| > Nyquist/2 on inputs and outputs of every cubic product.
    bool dealias = true;
};

NonlocalKit make_kit(const Grid& grid, bool dealias = true);

SpectralField u_from_v(const SpectralField& v, const NonlocalKit& kit);
SpectralField v_from_u(const SpectralField& u, const NonlocalKit& kit);

SpectralField rhs_forq_u(const SpectralField& u, const NonlocalKit& kit);
SpectralField rhs_novikov_u(const SpectralField& u, const NonlocalKit& kit);

/// d/dt v for v = (1 - dx) u under the FORQ flow, with u = (1 - dx)^{-1} v:
///
///   (v^2 - 2uv) v_x - u^3/3 - v^3/3 - Phi1(v) - Phi2(v) + v^2 (v - u)
///
///   Phi1(v) = H[(8/3) u^3 - (1/3) v^3 - 3 u^2 v]
///   Phi2(v) = dx H[(1/3) v^3 - u^2 v]
///
/// Satisfies rhs_forq_v((1 - dx) u) = (1 - dx) rhs_forq_u(u).
SpectralField rhs_forq_v(const SpectralField& v, const NonlocalKit& kit);

/// The v-form right-hand side without the local v^2 (v - u) term. It does
/// not commute with (1 - dx) and is kept only as a negative control for the
/// cross-equation checks.
SpectralField rhs_forq_v_without_local_correction(const SpectralField& v, const NonlocalKit& kit);

/// d/dt v under the Novikov flow: rhs_forq_v(v) - (1 - dx)[(1/3) u_x^3].
SpectralField rhs_novikov_v(const SpectralField& v, const NonlocalKit& kit);

SpectralField rhs(EquationVariant variant, const SpectralField& f, const NonlocalKit& kit);

/// First-order approximant: the time derivative of the v-system at t = 0, so
/// that S_t(v0) = v0 + t * approximant(v0) + O(t^2).
SpectralField approximant(const SpectralField& v0, const NonlocalKit& kit,
                          EquationVariant variant = EquationVariant::ForqV);

enum class Integrator { Rk4 };

struct EvolutionConfig {
    Grid grid;
    double dt = 1e-3;
    double t_end = 0.0;
    EquationVariant variant = EquationVariant::ForqU;
    Integrator integrator = Integrator::Rk4;
    bool dealias = true;
    /// Sup-norm above which the run is declared blown up.
    double blowup_ceiling = 1e6;
    /// Times at which snapshots are returned; each must be a multiple of dt.
    /// Empty means {t_end}.
    std::vector<double> snapshot_times;

    void validate() const;
};

struct Snapshot {
    double t;
    SpectralField field;
};

/// Classical RK4 with uniform dt. Throws BlowUpError (with the failure time)
/// when the state becomes non-finite or exceeds the ceiling.
std::vector<Snapshot> evolve(const SpectralField& f0, const EvolutionConfig& cfg);

/// dt * (max advective speed) / dx for the initial state; advisory only.
double cfl_number(const SpectralField& f0, const EvolutionConfig& cfg);

/// Richardson-style self-convergence at t_end: runs dt, dt/2 and dt/4 and
/// compares successive differences in L^2.
struct SelfConvergence {
    double dt = 0.0;
    double coarse_difference = 0.0;  ///< ||y(dt) - y(dt/2)||
    double fine_difference = 0.0;    ///< ||y(dt/2) - y(dt/4)||
    double ratio = 0.0;
    double observed_order = 0.0;
};

SelfConvergence self_convergence(const SpectralField& f0, const EvolutionConfig& cfg);

} // namespace besovlab
