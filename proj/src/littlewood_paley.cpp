#include "besovlab/littlewood_paley.hpp"

#include "besovlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <mutex>
#include <sstream>

namespace besovlab {

namespace {

std::mutex& sink_mutex() {
    static std::mutex m;
    return m;
}

std::function<void(const std::string&)>& sink() {
    static std::function<void(const std::string&)> s;
    return s;
}

double lr_norm(std::span<const double> values, double r) {
    double m = 0.0;
    for (double v : values) m = std::max(m, v);
    if (std::isinf(r) || m == 0.0) return m;
    double sum = 0.0;
    for (double v : values) sum += std::pow(v / m, r);
    return m * std::pow(sum, 1.0 / r);
}

// Sum of |c_k|^2 over the full spectrum, given the stored half.
double half_spectrum_energy(std::span<const Complex> c, std::span<const double> weight) {
    const std::size_t last = c.size() - 1;
    double sum = std::norm(c[0] * weight[0]) + std::norm(c[last] * weight[last]);
    for (std::size_t k = 1; k < last; ++k) sum += 2.0 * std::norm(c[k] * weight[k]);
    return sum;
}

} // namespace

void set_warning_sink(std::function<void(const std::string&)> s) {
    std::lock_guard lock(sink_mutex());
    sink() = std::move(s);
}

void warn(const std::string& message) {
    std::lock_guard lock(sink_mutex());
    if (sink()) {
        sink()(message);
    } else {
        std::cerr << "besovlab: warning: " << message << '\n';
    }
}

double smooth_step(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / t);
    const double b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
}

double chi(double xi) {
    return smooth_step((4.0 / 3.0 - std::abs(xi)) / (4.0 / 3.0 - 3.0 / 4.0));
}

double phi(double xi) { return chi(xi / 2.0) - chi(xi); }

bool BesovIndex::wellposed_regime() const noexcept {
    const double inv_p = std::isinf(p) ? 0.0 : 1.0 / p;
    return s > std::max(2.0 + inv_p, 2.5);
}

void BesovIndex::validate() const {
    if (!std::isfinite(s)) throw ConfigError("Besov regularity s must be finite");
    if (!(p >= 1.0)) throw ConfigError("Besov integrability p must be >= 1");
    if (!(r >= 1.0)) throw ConfigError("Besov summability r must be >= 1");
}

std::string BesovIndex::to_string() const {
    std::ostringstream os;
    auto put = [&os](double v) {
        if (std::isinf(v)) os << "inf"; else os << v;
    };
    os << "(s=";
    put(s);
    os << ", p=";
    put(p);
    os << ", r=";
    put(r);
    os << ')';
    return os.str();
}

int resolvable_j_max(const Grid& grid) {
    return static_cast<int>(std::floor(std::log2(grid.nyquist() * 9.0 / 16.0)));
}

DyadicPartition build_partition(const Grid& grid) {
    return build_partition(grid, [](double xi) { return chi(xi); });
}

DyadicPartition build_partition(const Grid& grid, const std::function<double(double)>& profile) {
    if (grid.size() < 32) throw ConfigError("grid too small to host dyadic block 0 (N < 32)");
    DyadicPartition part;
    part.grid_ = grid;
    part.j_max_ = resolvable_j_max(grid);
    if (part.j_max_ < 0) throw ConfigError("grid does not resolve dyadic block 0");
    const std::size_t m = grid.spectrum_size();
    for (int j = -1; j <= part.j_max_; ++j) {
        std::vector<double> samples(m);
        std::size_t lo = m, hi = 0;
        for (std::size_t k = 0; k < m; ++k) {
            const double xi = grid.frequency(static_cast<std::int64_t>(k));
            double value;
            if (j < 0) {
                value = profile(xi);
            } else {
                const double scale = std::ldexp(1.0, -j);
                value = profile(xi * scale / 2.0) - profile(xi * scale);
            }
            samples[k] = value;
            if (value != 0.0) {
                lo = std::min(lo, k);
                hi = std::max(hi, k);
            }
        }
        if (lo > hi) lo = hi = 0;
        part.blocks_.push_back(std::move(samples));
        part.range_.emplace_back(lo, hi);
    }
    return part;
}

std::span<const double> DyadicPartition::samples(int j) const {
    if (j < -1 || j > j_max_) {
        throw ConfigError("block index " + std::to_string(j) + " outside [-1, " +
                          std::to_string(j_max_) + "]");
    }
    return blocks_[static_cast<std::size_t>(j + 1)];
}

SpectralField block(int j, const SpectralField& f, const DyadicPartition& part) {
    const auto m = part.samples(j);
    if (!(f.grid() == part.grid())) throw ConfigError("partition built for a different grid");
    const auto c = f.coeffs();
    std::vector<Complex> out(c.size());
    for (std::size_t k = part.first_index(j); k <= part.last_index(j); ++k) out[k] = c[k] * m[k];
    return SpectralField::from_coeffs(f.grid(), std::move(out));
}

SpectralField low_cut(int j, const SpectralField& f, const DyadicPartition& part) {
    if (j > part.j_max() + 1) {
        throw ConfigError("low_cut index above j_max + 1");
    }
    if (!(f.grid() == part.grid())) throw ConfigError("partition built for a different grid");
    const auto c = f.coeffs();
    std::vector<double> total(c.size(), 0.0);
    for (int jj = -1; jj < j; ++jj) {
        const auto m = part.samples(jj);
        for (std::size_t k = 0; k < c.size(); ++k) total[k] += m[k];
    }
    std::vector<Complex> out(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) out[k] = c[k] * total[k];
    return SpectralField::from_coeffs(f.grid(), std::move(out));
}

BlockProfile block_profile(const SpectralField& f, const BesovIndex& idx, const DyadicPartition& part) {
    idx.validate();
    if (!(f.grid() == part.grid())) throw ConfigError("partition built for a different grid");
    const Grid& grid = f.grid();
    const auto c = f.coeffs();
    const std::size_t m = c.size();

    BlockProfile out;
    std::vector<double> coverage(m, 0.0);
    std::vector<double> ones(m, 1.0);
    for (int j = -1; j <= part.j_max(); ++j) {
        const auto mult = part.samples(j);
        for (std::size_t k = 0; k < m; ++k) coverage[k] += mult[k];

        const std::size_t lo = part.first_index(j), hi = part.last_index(j);
        bool empty = true;
        for (std::size_t k = lo; k <= hi && empty; ++k) empty = c[k] * mult[k] == Complex{};

        double norm = 0.0;
        if (!empty) {
            if (idx.p == 2.0) {
                norm = std::sqrt(2.0 * grid.half_length() * half_spectrum_energy(c, mult));
            } else {
                norm = lp_norm(block(j, f, part), idx.p);
            }
        }
        out.lp_norms.push_back(norm);
        out.weighted.push_back(std::exp2(static_cast<double>(j) * idx.s) * norm);
    }
    out.norm = lr_norm(out.weighted, idx.r);

    const double total = half_spectrum_energy(c, ones);
    if (total > 0.0) {
        std::vector<double> missing(m);
        for (std::size_t k = 0; k < m; ++k) missing[k] = 1.0 - coverage[k];
        out.unresolved_fraction = half_spectrum_energy(c, missing) / total;
    }
    return out;
}

double besov_norm(const SpectralField& f, const BesovIndex& idx, const DyadicPartition& part) {
    const BlockProfile profile = block_profile(f, idx, part);
    if (profile.unresolved_fraction > 1e-10) {
        std::ostringstream os;
        os << "field has relative energy " << profile.unresolved_fraction
           << " above dyadic block " << part.j_max() << "; Besov norm is truncated";
        warn(os.str());
    }
    return profile.norm;
}

ProductEstimateReport check_product_estimate(const SpectralField& u, const SpectralField& v,
                                             const BesovIndex& idx, const DyadicPartition& part) {
    if (!(idx.s > 0.0)) throw ConfigError("product estimate requires s > 0");
    ProductEstimateReport rep;
    rep.lhs = besov_norm(u * v, idx, part);
    rep.rhs = lp_norm(u, kInfinity) * besov_norm(v, idx, part) +
              lp_norm(v, kInfinity) * besov_norm(u, idx, part);
    rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : 0.0;
    return rep;
}

} // namespace besovlab
