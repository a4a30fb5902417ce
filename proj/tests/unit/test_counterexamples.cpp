#include "besovlab/counterexamples.hpp"
#include "besovlab/error.hpp"
#include "besovlab/multiplier.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace besovlab;
using oracle::TrigPoly;
using std::numbers::pi;

namespace {

Grid box() { return make_grid_multiple(2, 16384); }

double rel_diff(const SpectralField& a, const SpectralField& b) {
    return oracle::max_abs_diff(a, b) / std::max(b.sup_norm(), 1e-300);
}

// phi assembled mode by mode from the bump, without any FFT.
TrigPoly phi_poly(const Grid& g) {
    TrigPoly p = TrigPoly::constant(g.spacing(), bump_hat(0.0) * g.spacing());
    for (std::int64_t k = 1; static_cast<double>(k) * g.spacing() < 0.5; ++k) {
        p = p + TrigPoly::cos_mode(g.spacing(), k, 2.0 * bump_hat(g.frequency(k)) * g.spacing());
    }
    return p;
}

TrigPoly fn_poly(const Grid& g, int n, double s) {
    std::int64_t k = 0;
    REQUIRE(g.lattice_index(carrier_frequency(n), k));
    return phi_poly(g) * TrigPoly::sin_mode(g.spacing(), k, std::exp2(-n * s));
}

TrigPoly one_plus_dx(const TrigPoly& p) { return p + p.dx(); }

// Trapezoid rule for the area under the bump.
double bump_area() {
    const int m = 200000;
    const double h = 1.0 / m;
    double sum = 0.0;
    for (int i = -m; i <= m; ++i) sum += (std::abs(i) == m ? 0.5 : 1.0) * bump_hat(i * h);
    return sum * h;
}

} // namespace

TEST_CASE("bump profile values") {
    CHECK(bump_hat(0.0) == 1.0);
    CHECK(bump_hat(0.25) == 1.0);
    CHECK(bump_hat(-0.2) == 1.0);
    CHECK(bump_hat(0.5) == 0.0);
    CHECK(bump_hat(0.6) == 0.0);
    CHECK(bump_hat(0.375) == doctest::Approx(0.5).epsilon(1e-14));
    for (double xi = 0.25; xi < 0.5; xi += 0.01) {
        CHECK(bump_hat(xi) >= bump_hat(xi + 0.01));
        CHECK(bump_hat(xi) == bump_hat(-xi));
    }
    CHECK_THROWS_AS(BumpSpec({0.5, 0.25, "smooth_step"}).validate(), ConfigError);
    CHECK_THROWS_AS(BumpSpec({0.25, 0.5, "linear"}).validate(), ConfigError);
    CHECK_THROWS_AS(BumpSpec({-0.1, 0.5, "smooth_step"}).validate(), ConfigError);
}

TEST_CASE("phi is even, real and normalized by the bump") {
    const Grid g = box();
    const SpectralField phi = make_phi(g);
    CHECK(rel_diff(phi, phi_poly(g).sample(g)) < 1e-12);
    const std::size_t n = g.size();
    for (std::size_t i = 1; i < n; i += 97) CHECK(phi.values()[i] == doctest::Approx(phi.values()[n - i]).epsilon(1e-13));
    CHECK(phi.values()[n / 2] == doctest::Approx(bump_area()).epsilon(1e-8));
    CHECK(phi.values()[n / 2] == doctest::Approx(0.75).epsilon(1e-10));
    double integral = 0.0;
    for (double v : phi.values()) integral += v * g.dx();
    CHECK(integral == doctest::Approx(2.0 * pi).epsilon(1e-12));
    CHECK_THROWS_AS(make_phi(make_grid_multiple(1, 4096)), ConfigError);
}

TEST_CASE("f_n and g_n follow their closed forms") {
    const Grid g = box();
    const SpectralField phi = make_phi(g);
    const BesovIndex idx{3, 2, 2};
    for (int n = 3; n <= 7; ++n) {
        const SpectralField f = make_fn(n, idx, phi);
        CHECK(rel_diff(f, fn_poly(g, n, idx.s).sample(g)) < 1e-11);
        CHECK(std::abs(f.values()[g.size() / 2]) < 1e-15);
        CHECK(rel_diff(make_gn(n, phi), std::exp2(-0.5 * n) * phi) < 1e-15);
    }
    CHECK(carrier_frequency(4) == doctest::Approx(17.0 / 12.0 * 16.0));
    CHECK_THROWS_AS(make_fn(-1, idx, phi), ConfigError);
    CHECK_THROWS_AS(make_fn(8, idx, phi), ConfigError);
    CHECK_THROWS_AS(make_gn(0, phi), ConfigError);
}

TEST_CASE("f_n is localized in block n with a uniform Besov norm") {
    const Grid g = box();
    const SpectralField phi = make_phi(g);
    const DyadicPartition part = build_partition(g);
    const double expected = std::sqrt(0.5) * lp_norm(phi, 2.0);
    for (double s : {2.0, 3.0, 3.5}) {
        for (int n = 3; n <= 7; ++n) {
            const SpectralField f = make_fn(n, {s, 2, 2}, phi);
            const BlockProfile prof = block_profile(f, {s, 2, 2}, part);
            for (int j = -1; j <= part.j_max(); ++j) {
                if (j != n) CHECK(prof.lp_norms[static_cast<std::size_t>(j + 1)] < 1e-14);
            }
            CHECK(prof.norm == doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("g_n lives in the low block") {
    const Grid g = box();
    const SpectralField phi = make_phi(g);
    const DyadicPartition part = build_partition(g);
    for (double sigma : {1.0, 2.0, 3.0}) {
        for (int n = 1; n <= 6; ++n) {
            const double want = std::exp2(-sigma) * std::exp2(-0.5 * n) * lp_norm(phi, 4.0);
            CHECK(besov_norm(make_gn(n, phi), {sigma, 4, 2}, part) == doctest::Approx(want).epsilon(1e-12));
        }
    }
}

TEST_CASE("pair data are conjugate and separate at rate 2^{-n/2}") {
    const Grid g = box();
    const SpectralField phi = make_phi(g);
    const DyadicPartition part = build_partition(g);
    const BesovIndex idx{3, 2, 2};
    const SampledMultiplier omd(multipliers::one_minus_dx(), g);
    double prev = 0.0;
    for (int n = 5; n <= 7; ++n) {
        const CounterexamplePair pr = make_pair(n, idx, phi);
        CHECK(pr.n == n);
        CHECK(rel_diff(pr.u2, make_fn(n, idx, phi)) < 1e-15);
        CHECK(rel_diff(pr.u1 - pr.u2, make_gn(n, phi)) < 1e-13);
        CHECK(rel_diff(pr.v1, omd.apply(pr.u1)) < 1e-13);
        CHECK(rel_diff(pr.v2, omd.apply(pr.u2)) < 1e-13);
        const double d = besov_norm(pr.v1 - pr.v2, idx.shifted(-1), part);
        if (n > 5) CHECK(d / prev == doctest::Approx(std::sqrt(0.5)).epsilon(1e-10));
        prev = d;
    }
    CHECK_THROWS_AS(make_pair(4, idx, phi), ConfigError);
}

TEST_CASE("key term matches its trigonometric oracle and is localized") {
    const Grid g = box();
    const SpectralField phi = make_phi(g);
    const DyadicPartition part = build_partition(g);
    const BesovIndex idx{3, 2, 2};
    const TrigPoly ph = phi_poly(g);
    const TrigPoly psi = ph.one_minus_dx() * one_plus_dx(ph) * ph.dx();
    for (int n = 5; n <= 7; ++n) {
        const KeyTerm kt = key_term(n, idx, phi);
        const TrigPoly gn = ph * std::exp2(-0.5 * n);
        const TrigPoly tn = gn.one_minus_dx() * one_plus_dx(gn) * fn_poly(g, n, idx.s).dx().dx();
        CHECK(rel_diff(kt.t_n, tn.sample(g)) < 1e-11);
        CHECK(rel_diff(kt.psi, psi.sample(g)) < 1e-11);
        CHECK(kt.identity_residual < 1e-12);
        for (double p : {1.0, 2.0, kInfinity}) {
            const BesovIndex shifted{idx.s - 1, p, 2};
            CHECK(besov_norm(kt.t_n, shifted, part) ==
                  doctest::Approx(std::exp2(n * (idx.s - 1)) * lp_norm(kt.t_n, p)).epsilon(1e-10));
        }
    }
    CHECK(rel_diff(make_psi(phi), psi.sample(g)) < 1e-11);
}

TEST_CASE("scaled key term approaches its leading-order profile") {
    const Grid g = box();
    const SpectralField phi = make_phi(g);
    const BesovIndex idx{3, 2, 2};
    const SampledMultiplier omd(multipliers::one_minus_dx(), g);
    const SampledMultiplier d(multipliers::derivative(), g);
    const SpectralField big_phi = product(omd.apply(phi), phi + d.apply(phi), phi);
    const double limit = std::pow(17.0 / 12.0, 2) * std::sqrt(0.5) * lp_norm(big_phi, 2.0);
    double prev_err = 1.0;
    for (int n = 5; n <= 7; ++n) {
        const double scaled = std::exp2(n * (idx.s - 1)) * lp_norm(key_term(n, idx, phi).t_n, 2.0);
        const double err = std::abs(scaled / limit - 1.0);
        CHECK(err < prev_err);
        prev_err = err;
    }
    CHECK(prev_err < 0.02);
}

TEST_CASE("sin power means") {
    CHECK(sin_power_mean(2.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(sin_power_mean(1.0) == doctest::Approx(2.0 / pi).epsilon(1e-14));
    CHECK(sin_power_mean(4.0) == doctest::Approx(3.0 / 8.0).epsilon(1e-14));
    CHECK(sin_power_factor(2.0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
    CHECK(sin_power_factor(1.0) == doctest::Approx(2.0 / pi).epsilon(1e-14));
    CHECK(sin_power_factor(4.0) == doctest::Approx(std::pow(3.0 / 8.0, 0.25)).epsilon(1e-14));
}

TEST_CASE("oscillatory averages converge to the mean factor") {
    const Grid g = box();
    const SpectralField psi = make_psi(make_phi(g));
    std::vector<double> lambdas;
    for (int n = 3; n <= 7; ++n) lambdas.push_back(carrier_frequency(n));
    for (double p : {1.0, 2.0, 4.0}) {
        const RiemannReport rep = riemann_limit(p, lambdas, psi);
        CHECK(rep.p == p);
        CHECK(rep.factor == doctest::Approx(sin_power_factor(p)));
        CHECK(rep.target == doctest::Approx(rep.factor * rep.psi_norm));
        REQUIRE(rep.samples.size() == lambdas.size());
        CHECK(rep.samples.back().lambda == lambdas.back());
        CHECK(rep.samples.back().relative_error < 1e-3);
    }
    CHECK_THROWS_AS(riemann_limit(kInfinity, lambdas, psi), ConfigError);
    CHECK_THROWS_AS(riemann_limit(0.5, lambdas, psi), ConfigError);
    CHECK_THROWS_AS(riemann_limit(2.0, {std::sqrt(2.0)}, psi), ConfigError);
}
