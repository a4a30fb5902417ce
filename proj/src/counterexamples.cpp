#include "besovlab/counterexamples.hpp"

#include "besovlab/error.hpp"
#include "besovlab/multiplier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace besovlab {

namespace {

SpectralField modulate(const SpectralField& f, double lambda, Wave kind) {
    std::int64_t k = 0;
    if (!f.grid().lattice_index(lambda, k)) {
        std::ostringstream os;
        os << "frequency " << lambda << " is not on the lattice of spacing " << f.grid().spacing();
        throw ConfigError(os.str());
    }
    std::vector<double> w = lattice_wave(f.grid(), k, kind);
    const auto v = f.values();
    for (std::size_t i = 0; i < w.size(); ++i) w[i] *= v[i];
    return SpectralField::from_values(f.grid(), std::move(w));
}

// ||f||_{L^p} on a grid refined by zero padding until every period of the
// frequency lambda holds at least 64 samples. Exact interpolation for
// band-limited f, and it keeps the rectangle rule accurate for non-smooth |f|^p.
double refined_lp_norm(const SpectralField& f, double lambda, double p) {
    const Grid& g = f.grid();
    std::size_t factor = 1;
    while (static_cast<double>(g.size() * factor) / (2.0 * g.half_length()) * (2.0 * std::numbers::pi / lambda) < 64.0) {
        factor *= 2;
    }
    if (factor == 1) return lp_norm(f, p);
    const Grid fine = make_grid(g.half_length(), g.size() * factor);
    std::vector<Complex> c(fine.spectrum_size());
    const auto src = f.coeffs();
    std::copy(src.begin(), src.end() - 1, c.begin());
    c[src.size() - 1] = 0.5 * src.back();  // split the shared Nyquist mode between +xi and -xi
    return lp_norm(SpectralField::from_coeffs(fine, std::move(c)), p);
}

SpectralField apply(const Multiplier& m, const SpectralField& f) {
    return SampledMultiplier(m, f.grid()).apply(f);
}

} // namespace

void BumpSpec::validate() const {
    if (!(inner_radius > 0.0) || !(outer_radius > inner_radius)) {
        throw ConfigError("bump radii must satisfy 0 < inner < outer");
    }
    if (transition != "smooth_step") {
        throw ConfigError("unknown bump transition '" + transition + "'");
    }
}

double bump_hat(double xi, const BumpSpec& spec) {
    return smooth_step((spec.outer_radius - std::abs(xi)) / (spec.outer_radius - spec.inner_radius));
}

SpectralField make_phi(const Grid& grid, const BumpSpec& spec) {
    spec.validate();
    const double h = grid.spacing();
    if (std::floor(spec.outer_radius / h + 1e-9) < 8.0) {
        std::ostringstream os;
        os << "grid resolves only " << std::floor(spec.outer_radius / h + 1e-9)
           << " lattice frequencies in (0, " << spec.outer_radius << "]; need at least 8 (increase L)";
        throw ConfigError(os.str());
    }
    if (spec.outer_radius >= grid.nyquist()) throw ConfigError("bump support exceeds the Nyquist frequency");
    std::vector<Complex> c(grid.spectrum_size());
    for (std::size_t k = 0; k < c.size(); ++k) {
        c[k] = bump_hat(grid.frequency(static_cast<std::int64_t>(k)), spec) * h;
    }
    return SpectralField::from_coeffs(grid, std::move(c));
}

double carrier_frequency(int n) { return 17.0 / 12.0 * std::ldexp(1.0, n); }

SpectralField make_fn(int n, const BesovIndex& idx, const SpectralField& phi) {
    if (n < 0) throw ConfigError("f_n requires n >= 0");
    if (std::ldexp(1.5, n) >= phi.grid().nyquist()) {
        std::ostringstream os;
        os << "n = " << n << " is too large for the grid: carrier band reaches " << std::ldexp(1.5, n)
           << " but the Nyquist frequency is " << phi.grid().nyquist();
        throw ConfigError(os.str());
    }
    return std::exp2(-n * idx.s) * modulate(phi, carrier_frequency(n), Wave::Sin);
}

SpectralField make_gn(int n, const SpectralField& phi) {
    if (n < 1) throw ConfigError("g_n requires n >= 1");
    return std::exp2(-0.5 * n) * phi;
}

CounterexamplePair make_pair(int n, const BesovIndex& idx, const SpectralField& phi) {
    if (n < 5) throw ConfigError("the data pair requires n >= 5");
    idx.validate();
    const SpectralField f = make_fn(n, idx, phi);
    const SpectralField g = make_gn(n, phi);
    const SampledMultiplier d(multipliers::one_minus_dx(), phi.grid());
    CounterexamplePair pair;
    pair.n = n;
    pair.idx = idx;
    pair.u1 = f + g;
    pair.u2 = f;
    pair.v1 = d.apply(pair.u1);
    pair.v2 = d.apply(pair.u2);
    return pair;
}

SpectralField make_psi(const SpectralField& phi) {
    return product(apply(multipliers::one_minus_dx(), phi), apply(multipliers::one_plus_dx(), phi),
                   apply(multipliers::derivative(), phi));
}

KeyTerm key_term(int n, const BesovIndex& idx, const SpectralField& phi) {
    const CounterexamplePair pair = make_pair(n, idx, phi);
    const SpectralField f = pair.u2;
    const SpectralField g = make_gn(n, phi);
    const SpectralField fxx = apply(multipliers::second_derivative(), f);
    const SpectralField fx = apply(multipliers::derivative(), f);
    const SpectralField gm = apply(multipliers::one_minus_dx(), g);
    const SpectralField gp = apply(multipliers::one_plus_dx(), g);

    KeyTerm out;
    out.t_n = product(gm, gp, fxx);
    out.psi = make_psi(phi);

    const SpectralField lhs = (2.0 * pair.u1 * (pair.v1 - pair.v2) - (pair.v1 * pair.v1 - pair.v2 * pair.v2)) * fxx;
    const SpectralField rhs = out.t_n + 2.0 * product(gm, fx, fxx);
    const double scale = lhs.sup_norm();
    out.identity_residual = scale > 0.0 ? (lhs - rhs).sup_norm() / scale : (lhs - rhs).sup_norm();
    return out;
}

double sin_power_mean(double p) {
    if (!(p > 0.0) || !std::isfinite(p)) throw ConfigError("sin power mean requires finite p > 0");
    return std::exp(std::lgamma(0.5 * (p + 1.0)) - std::lgamma(0.5 * p + 1.0)) / std::sqrt(std::numbers::pi);
}

double sin_power_factor(double p) { return std::pow(sin_power_mean(p), 1.0 / p); }

RiemannReport riemann_limit(double p, const std::vector<double>& lambdas, const SpectralField& psi) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw ConfigError("the oscillatory limit requires finite p >= 1");
    RiemannReport rep;
    rep.p = p;
    rep.factor = sin_power_factor(p);
    // Same refinement as the finest oscillation so both sides share one quadrature.
    const double finest = lambdas.empty() ? 1.0 : std::max(1.0, *std::max_element(lambdas.begin(), lambdas.end()));
    rep.psi_norm = refined_lp_norm(psi, finest, p);
    rep.target = rep.factor * rep.psi_norm;
    for (double lambda : lambdas) {
        RiemannSample s;
        s.lambda = lambda;
        s.norm = refined_lp_norm(modulate(psi, lambda, Wave::Sin), lambda, p);
        s.relative_error = rep.target > 0.0 ? std::abs(s.norm - rep.target) / rep.target : s.norm;
        rep.samples.push_back(s);
    }
    return rep;
}

} // namespace besovlab
