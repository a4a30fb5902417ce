#include "besovlab/experiments.hpp"

#include "besovlab/error.hpp"
#include "besovlab/multiplier.hpp"
#include "fft.hpp"

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

namespace besovlab {

namespace {

constexpr const char* kVersion = "1.0.0";

template <typename Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn) {
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(count);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    // Rethrow the first failure in task order so errors are deterministic.
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

void check_times(const std::vector<double>& ts, const ExperimentConfig& cfg) {
    if (ts.empty()) throw ConfigError("time list is empty");
    for (double t : ts) {
        if (!(t >= 0.0) || t > cfg.t_max * (1.0 + 1e-12)) {
            std::ostringstream os;
            os << "time " << t << " lies outside [0, t_max = " << cfg.t_max << "]";
            throw ConfigError(os.str());
        }
    }
}

std::vector<double> with_zero(std::vector<double> ts) {
    ts.push_back(0.0);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    return ts;
}

// Evolves f0 and returns the state at every requested time. On blow-up the
// trajectory is replayed up to the failure so earlier snapshots survive;
// times at or after the failure map to std::nullopt.
std::vector<std::optional<SpectralField>> trajectory(const SpectralField& f0, const std::vector<double>& times,
                                                     const ExperimentConfig& cfg) {
    const double t_end = *std::max_element(times.begin(), times.end());
    std::vector<std::optional<SpectralField>> out(times.size());
    auto fill = [&](const std::vector<Snapshot>& snaps) {
        for (const auto& s : snaps) {
            for (std::size_t i = 0; i < times.size(); ++i) {
                if (times[i] == s.t) out[i] = s.field;
            }
        }
    };
    if (t_end == 0.0) {
        const SpectralField y = cfg.dealias ? dealias(f0) : f0;
        for (auto& o : out) o = y;
        return out;
    }
    try {
        fill(evolve(f0, cfg.evolution(t_end, times)));
    } catch (const BlowUpError& e) {
        std::vector<double> before;
        for (double t : times) {
            if (t < e.time()) before.push_back(t);
        }
        if (before.empty()) return out;
        const double t_last = *std::max_element(before.begin(), before.end());
        if (t_last == 0.0) {
            const SpectralField y = cfg.dealias ? dealias(f0) : f0;
            for (std::size_t i = 0; i < times.size(); ++i) {
                if (times[i] == 0.0) out[i] = y;
            }
        } else {
            fill(evolve(f0, cfg.evolution(t_last, before)));
        }
    }
    return out;
}

std::vector<ExperimentRecord> run_drift(const char* experiment, const SpectralField& v0, const std::string& label,
                                        int n, const std::vector<double>& t_list, const ExperimentConfig& cfg) {
    cfg.validate();
    check_times(t_list, cfg);
    const EquationVariant variant = v_form(cfg.variant);
    const DyadicPartition part = build_partition(cfg.grid);
    const NonlocalKit kit = make_kit(cfg.grid, cfg.dealias);
    const SpectralField y0 = cfg.dealias ? dealias(v0) : v0;
    const SpectralField slope = approximant(y0, kit, variant);

    const BesovIndex& idx = cfg.idx;
    const double n2 = besov_norm(y0, idx.shifted(-2.0), part);
    const double n1 = besov_norm(y0, idx.shifted(-1.0), part);
    const double n0 = besov_norm(y0, idx, part);
    const double np1 = besov_norm(y0, idx.shifted(1.0), part);
    const double bound_sm2 = n2 * n2 * n1;
    const double bound_sm1 = n1 * n1 * n1 + n2 * n2 * n0;
    const double bound_s = n1 * n1 * n0 + n2 * n2 * np1;
    const double bound_rem = n1 * n1 * n1 + n2 * n2 * n0 + n2 * n2 * n2 * n2 * np1;
    auto ratio = [](double num, double den) { return den > 0.0 ? num / den : 0.0; };

    const auto states = trajectory(v0, t_list, cfg);
    std::vector<ExperimentRecord> out;
    for (std::size_t i = 0; i < t_list.size(); ++i) {
        ExperimentRecord r;
        r.experiment = experiment;
        r.data = label;
        r.n = n;
        r.t = t_list[i];
        r.variant = variant;
        r.idx = idx;
        if (!states[i]) {
            r.status = "blowup";
            out.push_back(r);
            continue;
        }
        const SpectralField drift = *states[i] - y0;
        r.drift_sm2 = besov_norm(drift, idx.shifted(-2.0), part);
        r.drift_sm1 = besov_norm(drift, idx.shifted(-1.0), part);
        r.drift_s = besov_norm(drift, idx, part);
        r.approx_remainder = besov_norm(SpectralField(drift).axpy(-r.t, slope), idx.shifted(-1.0), part);
        if (r.t > 0.0) {
            r.ratio_sm2 = ratio(r.drift_sm2, r.t * bound_sm2);
            r.ratio_sm1 = ratio(r.drift_sm1, r.t * bound_sm1);
            r.ratio_s = ratio(r.drift_s, r.t * bound_s);
            r.ratio_remainder = ratio(r.approx_remainder, r.t * r.t * bound_rem);
        }
        out.push_back(r);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.t < b.t; });
    return out;
}

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& s) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || (errno == ERANGE && std::abs(v) > 1.0)) {
        throw ConfigError("malformed number '" + s + "' in CSV");
    }
    return v;
}

int parse_int(const std::string& s) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw ConfigError("malformed integer '" + s + "' in CSV");
    return v;
}

std::string quote(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

std::vector<std::vector<std::string>> split_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false, any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"') {
            quoted = true;
            any = true;
        } else if (c == ',') {
            row.push_back(std::move(field));
            field.clear();
            any = true;
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            if (any || !field.empty()) {
                row.push_back(std::move(field));
                rows.push_back(std::move(row));
            }
            row.clear();
            field.clear();
            any = false;
        } else {
            field += c;
            any = true;
        }
    }
    if (quoted) throw ConfigError("unterminated quoted field in CSV");
    if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string join_row(const std::vector<std::string>& fields) {
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) line += ',';
        line += quote(fields[i]);
    }
    return line + '\n';
}

} // namespace

void ExperimentConfig::validate() const {
    if (grid.size() == 0) throw ConfigError("experiment grid is not initialised");
    idx.validate();
    bump.validate();
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be positive and finite");
    if (!(t_max > 0.0) || !std::isfinite(t_max)) throw ConfigError("t_max must be positive and finite");
    if (!(blowup_ceiling > 0.0)) throw ConfigError("blow-up ceiling must be positive");
}

EvolutionConfig ExperimentConfig::evolution(double t_end, std::vector<double> snapshots) const {
    EvolutionConfig e;
    e.grid = grid;
    e.dt = dt;
    e.t_end = t_end;
    e.variant = v_form(variant);
    e.dealias = dealias;
    e.blowup_ceiling = blowup_ceiling;
    e.snapshot_times = std::move(snapshots);
    return e;
}

ExperimentConfig default_experiment_config() {
    ExperimentConfig cfg;
    cfg.grid = make_grid_multiple(2, std::size_t{1} << 18);
    return cfg;
}

std::vector<int> default_n_list() { return {5, 6, 7, 8, 9, 10}; }
std::vector<double> default_t_list() { return {0.005, 0.01, 0.02}; }
std::vector<double> default_drift_t_list() { return {0.001, 0.002, 0.005, 0.01, 0.02}; }

const std::vector<std::string>& record_columns() {
    static const std::vector<std::string> cols = {
        "experiment", "data", "n", "t", "variant", "s", "p", "r",
        "init_distance", "evolved_distance", "init_distance_v", "evolved_distance_v", "separation_v",
        "approx_remainder", "drift_sm2", "drift_sm1", "drift_s",
        "ratio_sm2", "ratio_sm1", "ratio_s", "ratio_remainder", "status"};
    return cols;
}

std::vector<ExperimentRecord> run_nonuniform(const std::vector<int>& n_list, const std::vector<double>& t_list,
                                             const ExperimentConfig& cfg) {
    cfg.validate();
    check_times(t_list, cfg);
    if (n_list.empty()) throw ConfigError("n list is empty");
    const EquationVariant variant = v_form(cfg.variant);
    const SpectralField phi = make_phi(cfg.grid, cfg.bump);
    const DyadicPartition part = build_partition(cfg.grid);
    const NonlocalKit kit = make_kit(cfg.grid, cfg.dealias);
    const BesovIndex& idx = cfg.idx;
    const BesovIndex idx_v = idx.shifted(-1.0);
    const std::vector<double> times = with_zero(t_list);

    // Validate every n before starting any work.
    for (int n : n_list) make_fn(n, idx, phi);

    std::vector<std::vector<ExperimentRecord>> per_n(n_list.size());
    parallel_for(n_list.size(), thread_budget(cfg.threads, n_list.size()), [&](std::size_t cell) {
        const int n = n_list[cell];
        const CounterexamplePair pair = make_pair(n, idx, phi);
        const auto s1 = trajectory(pair.v1, times, cfg);
        const auto s2 = trajectory(pair.v2, times, cfg);
        const SpectralField d0 = *s1[0] - *s2[0];
        const double init_u = besov_norm(u_from_v(d0, kit), idx, part);
        const double init_v = besov_norm(d0, idx_v, part);
        for (std::size_t i = 0; i < times.size(); ++i) {
            const double t = times[i];
            if (std::find(t_list.begin(), t_list.end(), t) == t_list.end()) continue;
            ExperimentRecord r;
            r.experiment = "nonuniform";
            r.data = "pair";
            r.n = n;
            r.t = t;
            r.variant = variant;
            r.idx = idx;
            r.init_distance = init_u;
            r.init_distance_v = init_v;
            if (!s1[i] || !s2[i]) {
                r.status = "blowup";
            } else {
                const SpectralField d = *s1[i] - *s2[i];
                r.evolved_distance = besov_norm(u_from_v(d, kit), idx, part);
                r.evolved_distance_v = besov_norm(d, idx_v, part);
                r.separation_v = besov_norm(d - d0, idx_v, part);
            }
            per_n[cell].push_back(r);
        }
    });

    std::vector<ExperimentRecord> out;
    for (auto& rows : per_n) out.insert(out.end(), rows.begin(), rows.end());
    std::stable_sort(out.begin(), out.end(),
                     [](const auto& a, const auto& b) { return a.n != b.n ? a.n < b.n : a.t < b.t; });
    return out;
}

std::vector<ExperimentRecord> run_prop2(const SpectralField& v0, const std::string& label, int n,
                                        const std::vector<double>& t_list, const ExperimentConfig& cfg) {
    return run_drift("prop2", v0, label, n, t_list, cfg);
}

std::vector<ExperimentRecord> run_prop3(const SpectralField& v0, const std::string& label, int n,
                                        const std::vector<double>& t_list, const ExperimentConfig& cfg) {
    return run_drift("prop3", v0, label, n, t_list, cfg);
}

FitResult fit_power_law(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw ConfigError("fit needs equally many abscissae and ordinates");
    if (xs.size() < 3) throw ConfigError("fit needs at least 3 points");
    const std::size_t m = xs.size();
    std::vector<double> lx(m), ly(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (!(xs[i] > 0.0) || !(ys[i] > 0.0) || !std::isfinite(xs[i]) || !std::isfinite(ys[i])) {
            std::ostringstream os;
            os << "fit rejects nonpositive or non-finite point (" << xs[i] << ", " << ys[i] << ")";
            throw ConfigError(os.str());
        }
        lx[i] = std::log(xs[i]);
        ly[i] = std::log(ys[i]);
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(m);
    my /= static_cast<double>(m);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx == 0.0) throw ConfigError("fit needs at least two distinct abscissae");
    FitResult f;
    f.exponent = sxy / sxx;
    f.intercept = my - f.exponent * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double e = ly[i] - (f.intercept + f.exponent * lx[i]);
        ss += e * e;
    }
    f.residual = std::sqrt(ss / static_cast<double>(m));
    f.x_min = *std::min_element(xs.begin(), xs.end());
    f.x_max = *std::max_element(xs.begin(), xs.end());
    f.points = m;
    return f;
}

LinearQuadraticFit fit_linear_quadratic(const std::vector<double>& ts, const std::vector<double>& ys) {
    if (ts.size() != ys.size() || ts.empty()) throw ConfigError("fit needs matching, non-empty samples");
    if (ts.size() == 1) {
        if (ts[0] == 0.0) throw ConfigError("fit needs a positive time");
        return {ys[0] / ts[0], 0.0};
    }
    double a11 = 0, a12 = 0, a22 = 0, b1 = 0, b2 = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double t = ts[i], t2 = t * t;
        a11 += t2;
        a12 += t2 * t;
        a22 += t2 * t2;
        b1 += t * ys[i];
        b2 += t2 * ys[i];
    }
    const double det = a11 * a22 - a12 * a12;
    if (!(std::abs(det) > 1e-12 * a11 * a22)) throw ConfigError("fit needs at least two distinct positive times");
    return {(b1 * a22 - b2 * a12) / det, (a11 * b2 - a12 * b1) / det};
}

SeparationTargets separation_targets(const SpectralField& phi, double p) {
    const double factor = std::isinf(p) ? 1.0 : sin_power_factor(p);
    const Grid& g = phi.grid();
    const SampledMultiplier dm(multipliers::one_minus_dx(), g), dp(multipliers::one_plus_dx(), g);
    const SpectralField envelope = dm.apply(phi) * dp.apply(phi);
    constexpr double c = 17.0 / 12.0;
    return {c * factor * lp_norm(make_psi(phi), p), c * c * factor * lp_norm(envelope * phi, p)};
}

NonuniformSummary summarize_nonuniform(const std::vector<ExperimentRecord>& records, const SpectralField& phi) {
    NonuniformSummary s;
    std::map<int, std::vector<const ExperimentRecord*>> by_n;
    for (const auto& r : records) {
        if (r.experiment != "nonuniform") continue;
        by_n[r.n].push_back(&r);
        s.variant = r.variant;
        s.idx = r.idx;
        if (r.status != "ok") s.all_cells_ok = false;
    }
    if (by_n.empty()) throw ConfigError("no separation records to summarize");
    s.targets = separation_targets(phi, s.idx.p);

    std::vector<double> xs, ys;
    bool positive_rates = true;
    s.c0 = kInfinity;
    for (const auto& [n, rows] : by_n) {
        const double init_v = rows.front()->init_distance_v;
        xs.push_back(std::exp2(n));
        ys.push_back(init_v);
        s.init_constant = std::max(s.init_constant, init_v * std::exp2(0.5 * n));

        std::vector<double> ts, ds;
        for (const auto* r : rows) {
            if (r->t > 0.0 && r->status == "ok") {
                ts.push_back(r->t);
                ds.push_back(r->separation_v);
            }
        }
        SeparationRate rate;
        rate.n = n;
        if (ts.empty()) {
            positive_rates = false;
            rate.corrected_rate = 0.0;
        } else {
            rate.fit = fit_linear_quadratic(ts, ds);
            rate.corrected_rate = kInfinity;
            for (std::size_t i = 0; i < ts.size(); ++i) {
                rate.corrected_rate =
                    std::min(rate.corrected_rate, (ds[i] - rate.fit.quadratic * ts[i] * ts[i]) / ts[i]);
            }
        }
        s.c0 = std::min(s.c0, rate.corrected_rate);
        s.rates.push_back(rate);
    }

    std::ostringstream why;
    bool slope_ok = false;
    try {
        s.init_decay = fit_power_law(xs, ys);
        slope_ok = std::abs(s.init_decay.exponent + 0.5) <= 0.05;
        if (!slope_ok) why << "initial distance log2 slope " << s.init_decay.exponent << " is not -1/2 +- 0.05; ";
    } catch (const ConfigError& e) {
        why << "initial distance fit unavailable (" << e.what() << "); ";
    }
    if (!(s.c0 > 0.0) || !positive_rates) why << "separation rate c0 = " << s.c0 << " is not positive; ";
    if (!s.all_cells_ok) why << "some cells blew up; ";
    s.holds = slope_ok && s.c0 > 0.0 && positive_rates && s.all_cells_ok;
    if (s.holds) {
        s.verdict = "holds";
    } else {
        std::string reason = why.str();
        if (reason.size() >= 2) reason.resize(reason.size() - 2);
        s.verdict = "fails: " + reason;
    }
    return s;
}

std::string format_csv(const std::vector<ExperimentRecord>& records) {
    std::string out = join_row(record_columns());
    for (const auto& r : records) {
        out += join_row({r.experiment, r.data, std::to_string(r.n), format_double(r.t), to_string(r.variant),
                         format_double(r.idx.s), format_double(r.idx.p), format_double(r.idx.r),
                         format_double(r.init_distance), format_double(r.evolved_distance),
                         format_double(r.init_distance_v), format_double(r.evolved_distance_v),
                         format_double(r.separation_v), format_double(r.approx_remainder),
                         format_double(r.drift_sm2), format_double(r.drift_sm1), format_double(r.drift_s),
                         format_double(r.ratio_sm2), format_double(r.ratio_sm1), format_double(r.ratio_s),
                         format_double(r.ratio_remainder), r.status});
    }
    return out;
}

void emit_csv(const std::vector<ExperimentRecord>& records, const std::filesystem::path& path) {
    write_text(path, format_csv(records));
}

std::vector<ExperimentRecord> parse_csv(const std::string& text) {
    const auto rows = split_csv(text);
    if (rows.empty()) throw ConfigError("CSV has no header row");
    if (rows.front() != record_columns()) throw ConfigError("CSV header does not match the record schema");
    std::vector<ExperimentRecord> out;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& f = rows[i];
        if (f.size() != record_columns().size()) {
            throw ConfigError("CSV row " + std::to_string(i) + " has " + std::to_string(f.size()) + " fields");
        }
        ExperimentRecord r;
        r.experiment = f[0];
        r.data = f[1];
        r.n = parse_int(f[2]);
        r.t = parse_double(f[3]);
        r.variant = parse_variant(f[4]);
        r.idx = {parse_double(f[5]), parse_double(f[6]), parse_double(f[7])};
        double* slots[] = {&r.init_distance, &r.evolved_distance, &r.init_distance_v, &r.evolved_distance_v,
                           &r.separation_v, &r.approx_remainder, &r.drift_sm2, &r.drift_sm1, &r.drift_s,
                           &r.ratio_sm2, &r.ratio_sm1, &r.ratio_s, &r.ratio_remainder};
        for (std::size_t k = 0; k < std::size(slots); ++k) *slots[k] = parse_double(f[8 + k]);
        r.status = f[21];
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<BlockRow> block_rows(const std::string& field, int n, const SpectralField& f, const BesovIndex& idx,
                                 const DyadicPartition& part) {
    const BlockProfile prof = block_profile(f, idx, part);
    std::vector<BlockRow> rows;
    for (int j = -1; j <= part.j_max(); ++j) {
        const auto k = static_cast<std::size_t>(j + 1);
        rows.push_back({field, n, j, prof.lp_norms[k], prof.weighted[k]});
    }
    return rows;
}

std::string format_blocks_csv(const std::vector<BlockRow>& rows) {
    std::string out = join_row({"field", "n", "j", "lp_norm", "weighted"});
    for (const auto& r : rows) {
        out += join_row({r.field, std::to_string(r.n), std::to_string(r.j), format_double(r.lp_norm),
                         format_double(r.weighted)});
    }
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw Error("cannot create directory for '" + path.string() + "': " + ec.message());
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot open '" + path.string() + "' for writing");
    os << text;
    os.flush();
    if (!os) throw Error("write to '" + path.string() + "' failed");
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
    auto num = [](double v) -> nlohmann::json {
        if (std::isinf(v)) return "inf";
        return v;
    };
    return {
        {"grid", {{"L", cfg.grid.half_length()}, {"L_over_12pi", cfg.grid.period_multiple()},
                  {"N", cfg.grid.size()}, {"nyquist", cfg.grid.nyquist()}}},
        {"index", {{"s", cfg.idx.s}, {"p", num(cfg.idx.p)}, {"r", num(cfg.idx.r)}}},
        {"variant", to_string(v_form(cfg.variant))},
        {"dt", cfg.dt},
        {"dealias", cfg.dealias},
        {"blowup_ceiling", cfg.blowup_ceiling},
        {"t_max", cfg.t_max},
        {"bump", {{"inner_radius", cfg.bump.inner_radius}, {"outer_radius", cfg.bump.outer_radius},
                  {"transition", cfg.bump.transition}}},
    };
}

nlohmann::json to_json(const FitResult& fit) {
    return {{"exponent", fit.exponent}, {"intercept", fit.intercept}, {"residual", fit.residual},
            {"x_min", fit.x_min},       {"x_max", fit.x_max},         {"points", fit.points}};
}

nlohmann::json to_json(const NonuniformSummary& s) {
    nlohmann::json rates = nlohmann::json::array();
    for (const auto& r : s.rates) {
        rates.push_back({{"n", r.n}, {"linear", r.fit.linear}, {"quadratic", r.fit.quadratic},
                         {"corrected_rate", r.corrected_rate}});
    }
    return {{"variant", to_string(s.variant)},
            {"init_decay", to_json(s.init_decay)},
            {"init_constant", s.init_constant},
            {"rates", rates},
            {"c0", s.c0},
            {"target_stated", s.targets.stated},
            {"target_leading_order", s.targets.leading_order},
            {"all_cells_ok", s.all_cells_ok},
            {"holds", s.holds},
            {"verdict", s.verdict}};
}

unsigned thread_budget(unsigned requested, std::size_t tasks) {
    unsigned n = requested;
    if (const char* env = std::getenv("BESOVLAB_THREADS"); env && *env) {
        unsigned cap = 0;
        const auto [ptr, ec] = std::from_chars(env, env + std::char_traits<char>::length(env), cap);
        if (ec != std::errc() || *ptr != '\0' || cap == 0) {
            throw ConfigError(std::string("BESOVLAB_THREADS must be a positive integer, got '") + env + "'");
        }
        n = n == 0 ? cap : std::min(n, cap);
    }
    if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
    const auto t = static_cast<unsigned>(std::min<std::size_t>(tasks, 1u << 16));
    return std::max(1u, std::min(n, t));
}

std::string library_version() { return kVersion; }
std::string fft_backend_version() { return detail::backend_version(); }

} // namespace besovlab
