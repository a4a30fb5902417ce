#include "besovlab/equations.hpp"

#include "besovlab/error.hpp"
#include "besovlab/littlewood_paley.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace besovlab {

namespace {

std::vector<Complex> transform(const Grid& grid, std::vector<double> values) {
    const SpectralField f = SpectralField::from_values(grid, std::move(values));
    return {f.coeffs().begin(), f.coeffs().end()};
}

// local + c_h * H[a_h] + c_dh * dx H[a_dh], assembled in coefficient space
// with a single inverse transform.
SpectralField assemble(const NonlocalKit& kit, std::vector<double> local,
                       double c_h, std::vector<double> a_h,
                       double c_dh, std::vector<double> a_dh) {
    const Grid& g = kit.grid;
    std::vector<Complex> out = transform(g, std::move(local));
    const std::vector<Complex> fh = transform(g, std::move(a_h));
    const std::vector<Complex> fdh = transform(g, std::move(a_dh));
    const auto h = kit.helmholtz_inv.samples();
    const auto dh = kit.dx_helmholtz_inv.samples();
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] += c_h * h[k] * fh[k] + c_dh * dh[k] * fdh[k];
    }
    if (kit.dealias) {
        const double cutoff = 0.5 * g.nyquist();
        for (std::size_t k = 0; k < out.size(); ++k) {
            if (g.frequency(static_cast<std::int64_t>(k)) >= cutoff * (1.0 - 1e-12)) out[k] = 0.0;
        }
    }
    return SpectralField::from_coeffs(g, std::move(out));
}

SpectralField prepared(const SpectralField& f, const NonlocalKit& kit) {
    if (!(f.grid() == kit.grid)) throw ConfigError("field and operator kit use different grids");
    return kit.dealias ? dealias(f) : f;
}

enum class VForm { Forq, ForqWithoutCorrection, Novikov };

SpectralField rhs_v_impl(const SpectralField& v_in, const NonlocalKit& kit, VForm form) {
    const SpectralField v = prepared(v_in, kit);
    const SpectralField u = kit.one_minus_dx_inv.apply(v);
    const SpectralField vx_f = kit.dx.apply(v);
    const auto vv = v.values(), uv = u.values(), vx = vx_f.values();
    const std::size_t n = vv.size();

    std::vector<double> wx;
    if (form == VForm::Novikov) {
        // w = u_x = u - v, so w_x = u_x - v_x = u - v - v_x.
        wx.resize(n);
        for (std::size_t i = 0; i < n; ++i) wx[i] = uv[i] - vv[i] - vx[i];
    }

    std::vector<double> local(n), a1(n), a2(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = uv[i], b = vv[i];
        const double a3 = a * a * a, b3 = b * b * b, a2b = a * a * b;
        double l = (b * b - 2.0 * a * b) * vx[i] - a3 / 3.0 - b3 / 3.0;
        if (form != VForm::ForqWithoutCorrection) l += b * b * (b - a);
        if (form == VForm::Novikov) {
            const double w = a - b;
            l += -w * w * w / 3.0 + w * w * wx[i];
        }
        local[i] = l;
        a1[i] = 8.0 / 3.0 * a3 - b3 / 3.0 - 3.0 * a2b;
        a2[i] = b3 / 3.0 - a2b;
    }
    return assemble(kit, std::move(local), -1.0, std::move(a1), -1.0, std::move(a2));
}

SpectralField rhs_u_impl(const SpectralField& u_in, const NonlocalKit& kit, bool local_cube) {
    const SpectralField u = prepared(u_in, kit);
    const SpectralField ux_f = kit.dx.apply(u);
    const auto uv = u.values(), ux = ux_f.values();
    const std::size_t n = uv.size();
    std::vector<double> local(n), cube(n), a2(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = uv[i], d = ux[i];
        const double d3 = d * d * d;
        local[i] = -a * a * d + (local_cube ? d3 / 3.0 : 0.0);
        cube[i] = d3;
        a2[i] = 2.0 / 3.0 * a * a * a + a * d * d;
    }
    return assemble(kit, std::move(local), -1.0 / 3.0, std::move(cube), -1.0, std::move(a2));
}

double max_speed(const SpectralField& f, EquationVariant variant) {
    const Grid& g = f.grid();
    double speed = 0.0;
    if (is_v_form(variant)) {
        const NonlocalKit kit = make_kit(g, false);
        const SpectralField u = u_from_v(f, kit);
        const auto vv = f.values(), uv = u.values();
        for (std::size_t i = 0; i < vv.size(); ++i) {
            const double c = variant == EquationVariant::ForqV ? vv[i] * vv[i] - 2.0 * uv[i] * vv[i]
                                                               : uv[i] * uv[i];
            speed = std::max(speed, std::abs(c));
        }
    } else {
        for (double a : f.values()) speed = std::max(speed, a * a);
    }
    return speed;
}

std::size_t steps_for(double t, double dt) {
    const double q = t / dt;
    const double nearest = std::round(q);
    if (std::abs(q - nearest) > 1e-9 * std::max(1.0, q)) {
        std::ostringstream os;
        os << "time " << t << " is not a multiple of dt = " << dt;
        throw ConfigError(os.str());
    }
    return static_cast<std::size_t>(nearest);
}

std::vector<SpectralField> final_states(const SpectralField& f0, EvolutionConfig cfg,
                                        std::initializer_list<double> dts) {
    std::vector<SpectralField> out;
    cfg.snapshot_times = {cfg.t_end};
    for (double dt : dts) {
        cfg.dt = dt;
        out.push_back(evolve(f0, cfg).back().field);
    }
    return out;
}

} // namespace

std::string to_string(EquationVariant v) {
    switch (v) {
    case EquationVariant::ForqU: return "forq_u";
    case EquationVariant::ForqV: return "forq_v";
    case EquationVariant::NovikovU: return "novikov_u";
    case EquationVariant::NovikovV: return "novikov_v";
    }
    return "unknown";
}

EquationVariant parse_variant(const std::string& name) {
    for (auto v : {EquationVariant::ForqU, EquationVariant::ForqV, EquationVariant::NovikovU,
                   EquationVariant::NovikovV}) {
        if (to_string(v) == name) return v;
    }
    throw ConfigError("unknown equation variant '" + name + "'");
}

bool is_v_form(EquationVariant v) noexcept {
    return v == EquationVariant::ForqV || v == EquationVariant::NovikovV;
}

EquationVariant v_form(EquationVariant v) noexcept {
    switch (v) {
    case EquationVariant::ForqU: return EquationVariant::ForqV;
    case EquationVariant::NovikovU: return EquationVariant::NovikovV;
    default: return v;
    }
}

EquationVariant u_form(EquationVariant v) noexcept {
    switch (v) {
    case EquationVariant::ForqV: return EquationVariant::ForqU;
    case EquationVariant::NovikovV: return EquationVariant::NovikovU;
    default: return v;
    }
}

NonlocalKit make_kit(const Grid& grid, bool dealias) {
    NonlocalKit kit;
    kit.grid = grid;
    kit.dx = SampledMultiplier(multipliers::derivative(), grid);
    kit.helmholtz_inv = SampledMultiplier(multipliers::helmholtz_inv(), grid);
    kit.dx_helmholtz_inv = SampledMultiplier(multipliers::dx_helmholtz_inv(), grid);
    kit.one_minus_dx = SampledMultiplier(multipliers::one_minus_dx(), grid);
    kit.one_minus_dx_inv = SampledMultiplier(multipliers::one_minus_dx_inv(), grid);
    kit.dealias = dealias;
    return kit;
}

SpectralField u_from_v(const SpectralField& v, const NonlocalKit& kit) {
    return kit.one_minus_dx_inv.apply(v);
}

SpectralField v_from_u(const SpectralField& u, const NonlocalKit& kit) {
    return kit.one_minus_dx.apply(u);
}

SpectralField rhs_forq_u(const SpectralField& u, const NonlocalKit& kit) {
    return rhs_u_impl(u, kit, true);
}

SpectralField rhs_novikov_u(const SpectralField& u, const NonlocalKit& kit) {
    return rhs_u_impl(u, kit, false);
}

SpectralField rhs_forq_v(const SpectralField& v, const NonlocalKit& kit) {
    return rhs_v_impl(v, kit, VForm::Forq);
}

SpectralField rhs_forq_v_without_local_correction(const SpectralField& v, const NonlocalKit& kit) {
    return rhs_v_impl(v, kit, VForm::ForqWithoutCorrection);
}

SpectralField rhs_novikov_v(const SpectralField& v, const NonlocalKit& kit) {
    return rhs_v_impl(v, kit, VForm::Novikov);
}

SpectralField rhs(EquationVariant variant, const SpectralField& f, const NonlocalKit& kit) {
    switch (variant) {
    case EquationVariant::ForqU: return rhs_forq_u(f, kit);
    case EquationVariant::ForqV: return rhs_forq_v(f, kit);
    case EquationVariant::NovikovU: return rhs_novikov_u(f, kit);
    case EquationVariant::NovikovV: return rhs_novikov_v(f, kit);
    }
    throw ConfigError("unknown equation variant");
}

SpectralField approximant(const SpectralField& v0, const NonlocalKit& kit, EquationVariant variant) {
    if (!is_v_form(variant)) throw ConfigError("approximant is defined for the v-system only");
    return rhs(variant, v0, kit);
}

void EvolutionConfig::validate() const {
    if (grid.size() == 0) throw ConfigError("evolution grid is not initialised");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be positive and finite");
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ConfigError("t_end must be positive");
    if (t_end < dt * (1.0 - 1e-12)) throw ConfigError("t_end must be at least dt");
    for (double t : snapshot_times) {
        if (t < 0.0 || t > t_end * (1.0 + 1e-12)) {
            throw ConfigError("snapshot time outside [0, t_end]");
        }
        steps_for(t, dt);
    }
    steps_for(t_end, dt);
}

std::vector<Snapshot> evolve(const SpectralField& f0, const EvolutionConfig& cfg) {
    cfg.validate();
    if (!(f0.grid() == cfg.grid)) throw ConfigError("initial data lives on a different grid");
    if (!f0.is_finite()) throw BlowUpError(0.0, "initial data is not finite");

    std::vector<double> times = cfg.snapshot_times;
    if (times.empty()) times.push_back(cfg.t_end);
    std::sort(times.begin(), times.end());
    std::vector<std::size_t> marks;
    for (double t : times) marks.push_back(steps_for(t, cfg.dt));
    const std::size_t total = steps_for(cfg.t_end, cfg.dt);

    const NonlocalKit kit = make_kit(cfg.grid, cfg.dealias);
    const double dt = cfg.dt;
    SpectralField y = cfg.dealias ? dealias(f0) : f0;

    std::vector<Snapshot> out;
    std::size_t next = 0;
    auto record = [&](std::size_t step) {
        while (next < marks.size() && marks[next] == step) {
            out.push_back({times[next], y});
            ++next;
        }
    };
    record(0);
    for (std::size_t step = 1; step <= total && next < marks.size(); ++step) {
        const SpectralField k1 = rhs(cfg.variant, y, kit);
        const SpectralField k2 = rhs(cfg.variant, SpectralField(y).axpy(0.5 * dt, k1), kit);
        const SpectralField k3 = rhs(cfg.variant, SpectralField(y).axpy(0.5 * dt, k2), kit);
        const SpectralField k4 = rhs(cfg.variant, SpectralField(y).axpy(dt, k3), kit);
        y.axpy(dt / 6.0, k1).axpy(dt / 3.0, k2).axpy(dt / 3.0, k3).axpy(dt / 6.0, k4);

        const double t = static_cast<double>(step) * dt;
        const double sup = y.sup_norm();
        if (!std::isfinite(sup) || sup > cfg.blowup_ceiling) {
            std::ostringstream os;
            os << "blow-up at t = " << t << ": sup norm " << sup << " exceeds ceiling "
               << cfg.blowup_ceiling;
            throw BlowUpError(t, os.str());
        }
        record(step);
    }
    return out;
}

double cfl_number(const SpectralField& f0, const EvolutionConfig& cfg) {
    return cfg.dt * max_speed(f0, cfg.variant) / cfg.grid.dx();
}

SelfConvergence self_convergence(const SpectralField& f0, const EvolutionConfig& cfg) {
    const auto states = final_states(f0, cfg, {cfg.dt, cfg.dt / 2.0, cfg.dt / 4.0});
    SelfConvergence sc;
    sc.dt = cfg.dt;
    sc.coarse_difference = l2_norm_spectral(states[0] - states[1]);
    sc.fine_difference = l2_norm_spectral(states[1] - states[2]);
    sc.ratio = sc.fine_difference > 0.0 ? sc.coarse_difference / sc.fine_difference : 0.0;
    sc.observed_order = sc.ratio > 0.0 ? std::log2(sc.ratio) : 0.0;
    return sc;
}

} // namespace besovlab
