#include "besovlab/error.hpp"
#include "besovlab/littlewood_paley.hpp"
#include "besovlab/multiplier.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <string>

using namespace besovlab;
using std::numbers::pi;

namespace {

SpectralField random_field(const Grid& g, double max_xi, std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    std::vector<Complex> c(g.spectrum_size());
    for (std::size_t k = 0; k < c.size() && g.frequency(static_cast<std::int64_t>(k)) <= max_xi; ++k) {
        c[k] = Complex(n(rng), k == 0 ? 0.0 : n(rng)) / (1.0 + static_cast<double>(k) * g.spacing());
    }
    return SpectralField::from_coeffs(g, std::move(c));
}

struct WarningCapture {
    std::vector<std::string> messages;
    WarningCapture() {
        set_warning_sink([this](const std::string& m) { messages.push_back(m); });
    }
    ~WarningCapture() { set_warning_sink(nullptr); }
};

} // namespace

TEST_CASE("chi and phi values") {
    CHECK(chi(0.0) == 1.0);
    CHECK(chi(0.75) == 1.0);
    CHECK(chi(4.0 / 3.0) == 0.0);
    CHECK(phi(17.0 / 12.0) == 1.0);
    CHECK(phi(4.0 / 3.0) == 1.0);
    CHECK(phi(1.5) == 1.0);
    CHECK(phi(0.74) == 0.0);
    CHECK(phi(8.0 / 3.0) == 0.0);
    double sum = chi(2.0);
    for (int j = 0; j < 8; ++j) sum += phi(std::ldexp(2.0, -j));
    CHECK(std::abs(sum - 1.0) < 1e-15);
    CHECK(smooth_step(-1.0) == 0.0);
    CHECK(smooth_step(2.0) == 1.0);
    CHECK(smooth_step(0.5) == doctest::Approx(0.5));
}

TEST_CASE("partition invariants on the lattice") {
    const Grid g = make_grid_multiple(1, 8192);
    const DyadicPartition part = build_partition(g);
    CHECK(part.j_max() == resolvable_j_max(g));
    CHECK(part.j_max() == static_cast<int>(std::floor(std::log2(g.nyquist() * 9.0 / 16.0))));
    const std::size_t m = g.spectrum_size();
    const double limit = 1.5 * std::ldexp(1.0, part.j_max());
    for (std::size_t k = 0; k < m; ++k) {
        const double xi = g.frequency(static_cast<std::int64_t>(k));
        double sum = 0.0;
        for (int j = -1; j <= part.j_max(); ++j) sum += part.samples(j)[k];
        if (xi < limit) CHECK(std::abs(sum - 1.0) < 1e-12);
        for (int j = 0; j <= part.j_max(); ++j) {
            const double y = xi * std::ldexp(1.0, -j);
            if (y < 0.75 || y > 8.0 / 3.0) CHECK(part.samples(j)[k] == 0.0);
            if (y >= 4.0 / 3.0 && y <= 1.5) CHECK(part.samples(j)[k] == 1.0);
            if (j >= 1) CHECK(part.samples(-1)[k] * part.samples(j)[k] == 0.0);
            for (int jj = j + 2; jj <= part.j_max(); ++jj) CHECK(part.samples(j)[k] * part.samples(jj)[k] == 0.0);
        }
    }
    CHECK_THROWS_AS(part.samples(-2), ConfigError);
    CHECK_THROWS_AS(part.samples(part.j_max() + 1), ConfigError);
    CHECK_THROWS_AS(build_partition(make_grid_multiple(1, 16)), ConfigError);
}

TEST_CASE("blocks of single waves and constants") {
    const Grid g = make_grid_multiple(1, 8192);
    const DyadicPartition part = build_partition(g);
    std::int64_t k = 0;
    REQUIRE(g.lattice_index(17.0 / 12.0 * 32.0, k));
    const SpectralField w = SpectralField::from_values(g, lattice_wave(g, k, Wave::Cos));
    CHECK(oracle::max_abs_diff(block(5, w, part), w) < 1e-14);
    for (int j = -1; j <= part.j_max(); ++j) {
        if (j != 5) CHECK(block(j, w, part).sup_norm() < 1e-14);
    }
    CHECK(low_cut(0, w, part).sup_norm() < 1e-14);

    const SpectralField c = SpectralField::constant(g, 3.0);
    CHECK(oracle::max_abs_diff(block(-1, c, part), c) < 1e-15);
    for (int j = 0; j <= part.j_max(); ++j) CHECK(block(j, c, part).sup_norm() == 0.0);
    CHECK_THROWS_AS(block(part.j_max() + 1, c, part), ConfigError);
    CHECK_THROWS_AS(block(-2, c, part), ConfigError);
}

TEST_CASE("blocks sum to the field and low cuts telescope") {
    std::mt19937_64 rng(21);
    const Grid g = make_grid_multiple(1, 4096);
    const DyadicPartition part = build_partition(g);
    const SpectralField f = random_field(g, 1.4 * std::ldexp(1.0, part.j_max()), rng);
    SpectralField sum = SpectralField::zero(g);
    for (int j = -1; j <= part.j_max(); ++j) sum += block(j, f, part);
    CHECK(oracle::max_abs_diff(sum, f) / f.sup_norm() < 1e-12);
    CHECK(oracle::max_abs_diff(low_cut(part.j_max() + 1, f, part), f) / f.sup_norm() < 1e-12);
    CHECK(low_cut(-1, f, part).sup_norm() == 0.0);
    for (int j = 0; j <= part.j_max(); ++j) {
        const SpectralField diff = low_cut(j + 1, f, part) - low_cut(j, f, part);
        CHECK(oracle::max_abs_diff(diff, block(j, f, part)) / f.sup_norm() < 1e-12);
    }
    CHECK_THROWS_AS(low_cut(part.j_max() + 2, f, part), ConfigError);
}

TEST_CASE("Besov norm examples") {
    const Grid g = make_grid_multiple(1, 4096);
    const DyadicPartition part = build_partition(g);
    const SpectralField c = SpectralField::constant(g, -2.0);
    for (BesovIndex idx : {BesovIndex{3, 2, 2}, BesovIndex{1.5, 1, kInfinity}, BesovIndex{0.5, 4, 1}}) {
        CHECK(besov_norm(c, idx, part) ==
              doctest::Approx(std::exp2(-idx.s) * 2.0 * std::pow(24.0 * pi, 1.0 / idx.p)).epsilon(1e-12));
    }
    for (int n = 3; n <= 6; ++n) {
        std::int64_t k = 0;
        REQUIRE(g.lattice_index(17.0 / 12.0 * std::ldexp(1.0, n), k));
        const SpectralField w = SpectralField::from_values(g, lattice_wave(g, k, Wave::Cos));
        CHECK(besov_norm(w, {1.25, kInfinity, 2.0}, part) == doctest::Approx(std::exp2(1.25 * n)).epsilon(1e-12));
    }
}

TEST_CASE("Besov norm is homogeneous and subadditive") {
    std::mt19937_64 rng(4);
    const Grid g = make_grid_multiple(1, 2048);
    const DyadicPartition part = build_partition(g);
    for (BesovIndex idx : {BesovIndex{2, 2, 2}, BesovIndex{1, 3, 1}, BesovIndex{0.5, kInfinity, kInfinity}}) {
        for (int t = 0; t < 5; ++t) {
            const SpectralField a = random_field(g, 40.0, rng), b = random_field(g, 40.0, rng);
            const double na = besov_norm(a, idx, part), nb = besov_norm(b, idx, part);
            CHECK(besov_norm(-3.5 * a, idx, part) == doctest::Approx(3.5 * na).epsilon(1e-12));
            CHECK(besov_norm(a + b, idx, part) <= (na + nb) * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("Bernstein inequality with constant 8/3") {
    std::mt19937_64 rng(8);
    const Grid g = make_grid_multiple(1, 4096);
    const DyadicPartition part = build_partition(g);
    const SampledMultiplier d(multipliers::derivative(), g);
    double worst = 0.0;
    for (int t = 0; t < 6; ++t) {
        const SpectralField f = random_field(g, 0.5 * g.nyquist(), rng);
        for (int j = 0; j < part.j_max(); ++j) {
            const SpectralField b = block(j, f, part);
            for (double p : {1.0, 2.0, 4.0, kInfinity}) {
                worst = std::max(worst, lp_norm(d.apply(b), p) / (std::ldexp(1.0, j) * lp_norm(b, p)));
            }
        }
    }
    CHECK(worst <= 8.0 / 3.0 * 1.05);
}

TEST_CASE("(1 - dx)^{-1} is an isomorphism B^{s-1} -> B^s with stable constants") {
    std::mt19937_64 rng(13);
    auto ratio_range = [&](std::size_t n) {
        const Grid g = make_grid_multiple(1, n);
        const DyadicPartition part = build_partition(g);
        const SampledMultiplier inv(multipliers::one_minus_dx_inv(), g);
        double lo = kInfinity, hi = 0.0;
        for (int t = 0; t < 20; ++t) {
            const SpectralField f = random_field(g, 35.0, rng);
            const double q = besov_norm(inv.apply(f), {3, 2, 2}, part) / besov_norm(f, {2, 2, 2}, part);
            lo = std::min(lo, q);
            hi = std::max(hi, q);
        }
        return std::pair{lo, hi};
    };
    const auto [lo1, hi1] = ratio_range(2048);
    const auto [lo2, hi2] = ratio_range(4096);
    CHECK(lo1 > 0.1);
    CHECK(hi1 < 4.0);
    CHECK(lo2 > 0.1);
    CHECK(hi2 < 4.0);
}

TEST_CASE("product and algebra estimates stay bounded") {
    std::mt19937_64 rng(17);
    const Grid g = make_grid_multiple(1, 4096);
    const DyadicPartition part = build_partition(g);
    const BesovIndex idx{1.5, 2, 2};
    double worst_product = 0.0, worst_algebra = 0.0;
    for (int t = 0; t < 100; ++t) {
        const SpectralField u = random_field(g, 45.0, rng), v = random_field(g, 45.0, rng);
        worst_product = std::max(worst_product, check_product_estimate(u, v, idx, part).ratio);
        worst_algebra = std::max(worst_algebra, besov_norm(u * v, idx, part) /
                                                    (besov_norm(u, idx, part) * besov_norm(v, idx, part)));
    }
    CHECK(std::isfinite(worst_product));
    CHECK(worst_product < 10.0);
    CHECK(worst_algebra < 10.0);

    const SpectralField zero = SpectralField::zero(g);
    CHECK(check_product_estimate(zero, zero, idx, part).ratio == 0.0);
    const SpectralField one = SpectralField::constant(g, 1.0);
    const auto rep = check_product_estimate(one, one, idx, part);
    CHECK(rep.ratio == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(check_product_estimate(one, one, {0.0, 2, 2}, part), ConfigError);
}

TEST_CASE("Besov index validation and regime predicate") {
    CHECK(BesovIndex{3, 2, 2}.wellposed_regime());
    CHECK_FALSE(BesovIndex{2.5, 2, 2}.wellposed_regime());
    CHECK(BesovIndex{3.2, kInfinity, kInfinity}.wellposed_regime());
    CHECK_FALSE(BesovIndex{2.9, 1, 2}.wellposed_regime());
    CHECK_THROWS_AS(BesovIndex({1, 0.5, 2}).validate(), ConfigError);
    CHECK_THROWS_AS(BesovIndex({1, 2, 0.9}).validate(), ConfigError);
    CHECK(BesovIndex{3, kInfinity, 1}.to_string() == "(s=3, p=inf, r=1)");
    CHECK(BesovIndex{3, 2, 2}.shifted(-1).s == 2.0);
}

TEST_CASE("unresolved energy triggers a warning") {
    const Grid g = make_grid_multiple(1, 1024);
    const DyadicPartition part = build_partition(g);
    WarningCapture cap;
    const SpectralField low = sample(g, [](double x) { return std::cos(x); });
    besov_norm(low, {1, 2, 2}, part);
    CHECK(cap.messages.empty());
    const std::int64_t k = static_cast<std::int64_t>(g.size() / 2 - 3);
    const SpectralField high = SpectralField::from_values(g, lattice_wave(g, k, Wave::Cos));
    const BlockProfile prof = block_profile(high, {1, 2, 2}, part);
    CHECK(prof.unresolved_fraction > 1e-10);
    besov_norm(high, {1, 2, 2}, part);
    REQUIRE(cap.messages.size() == 1);
    CHECK(cap.messages.front().find("truncated") != std::string::npos);
}

TEST_CASE("p = 2 block norms agree between Parseval and quadrature") {
    std::mt19937_64 rng(31);
    const Grid g = make_grid_multiple(1, 2048);
    const DyadicPartition part = build_partition(g);
    const SpectralField f = random_field(g, 40.0, rng);
    const BlockProfile prof = block_profile(f, {1, 2, 2}, part);
    for (int j = -1; j <= part.j_max(); ++j) {
        CHECK(prof.lp_norms[static_cast<std::size_t>(j + 1)] ==
              doctest::Approx(lp_norm(block(j, f, part), 2.0)).epsilon(1e-11));
    }
}
