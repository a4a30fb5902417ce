#include "besovlab/cli.hpp"

#include "besovlab/counterexamples.hpp"
#include "besovlab/equations.hpp"
#include "besovlab/error.hpp"
#include "besovlab/experiments.hpp"
#include "besovlab/multiplier.hpp"
#include "besovlab/validation.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace besovlab {

namespace {

using Clock = std::chrono::steady_clock;
namespace fs = std::filesystem;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string short_fmt(double v, int digits = 6) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

std::vector<std::string> tokens(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
            if (!cur.empty()) out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

double parse_real(const std::string& s, const std::string& key) {
    std::string low;
    for (char c : s) low += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (low == "inf" || low == "infinity") return kInfinity;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw ConfigError(key + ": '" + s + "' is not a number");
    }
    return v;
}

long long parse_integer(const std::string& s, const std::string& key) {
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw ConfigError(key + ": '" + s + "' is not an integer");
    return v;
}

std::vector<int> parse_int_list(const std::string& s, const std::string& key) {
    std::vector<int> out;
    for (const auto& tok : tokens(s)) {
        if (const auto dots = tok.find(".."); dots != std::string::npos) {
            const long long a = parse_integer(tok.substr(0, dots), key);
            const long long b = parse_integer(tok.substr(dots + 2), key);
            if (b < a) throw ConfigError(key + ": empty range '" + tok + "'");
            for (long long i = a; i <= b; ++i) out.push_back(static_cast<int>(i));
        } else {
            out.push_back(static_cast<int>(parse_integer(tok, key)));
        }
    }
    if (out.empty()) throw ConfigError(key + ": list is empty");
    return out;
}

std::vector<double> parse_real_list(const std::string& s, const std::string& key) {
    std::vector<double> out;
    for (const auto& tok : tokens(s)) out.push_back(parse_real(tok, key));
    if (out.empty()) throw ConfigError(key + ": list is empty");
    return out;
}

bool parse_bool(const std::string& s, const std::string& key) {
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw ConfigError(key + ": '" + s + "' is not a boolean");
}

struct Setting {
    const char* key;
    const char* section;
    std::function<void(RunConfig&, const std::string&)> apply;
};

const std::vector<Setting>& settings() {
    static const std::vector<Setting> table = {
        {"grid_L", "spectral_grid", [](RunConfig& c, const std::string& v) { c.grid_L = parse_real(v, "grid_L"); }},
        {"grid_N", "spectral_grid",
         [](RunConfig& c, const std::string& v) {
             const long long n = parse_integer(v, "grid_N");
             if (n <= 0) throw ConfigError("grid_N must be positive");
             c.grid_N = static_cast<std::size_t>(n);
         }},
        {"s", "littlewood_paley", [](RunConfig& c, const std::string& v) { c.idx.s = parse_real(v, "s"); }},
        {"p", "littlewood_paley",
         [](RunConfig& c, const std::string& v) {
             c.idx.p = parse_real(v, "p");
             c.p_given = true;
         }},
        {"r", "littlewood_paley", [](RunConfig& c, const std::string& v) { c.idx.r = parse_real(v, "r"); }},
        {"dt", "equations", [](RunConfig& c, const std::string& v) { c.dt = parse_real(v, "dt"); }},
        {"variant", "equations",
         [](RunConfig& c, const std::string& v) {
             if (v != "forq" && v != "novikov") throw ConfigError("variant must be forq or novikov, got '" + v + "'");
             c.variant = v;
         }},
        {"dealias", "equations", [](RunConfig& c, const std::string& v) { c.dealias = parse_bool(v, "dealias"); }},
        {"blowup_ceiling", "equations",
         [](RunConfig& c, const std::string& v) { c.blowup_ceiling = parse_real(v, "blowup_ceiling"); }},
        {"n_list", "experiments", [](RunConfig& c, const std::string& v) { c.n_list = parse_int_list(v, "n_list"); }},
        {"t_list", "experiments",
         [](RunConfig& c, const std::string& v) {
             c.t_list = parse_real_list(v, "t_list");
             c.t_list_given = true;
         }},
        {"drift_t_list", "experiments",
         [](RunConfig& c, const std::string& v) { c.drift_t_list = parse_real_list(v, "drift_t_list"); }},
        {"t_max", "experiments", [](RunConfig& c, const std::string& v) { c.t_max = parse_real(v, "t_max"); }},
        {"threads", "experiments",
         [](RunConfig& c, const std::string& v) {
             const long long n = parse_integer(v, "threads");
             if (n < 0) throw ConfigError("threads must be >= 0");
             c.threads = static_cast<unsigned>(n);
         }},
        {"out", "cli", [](RunConfig& c, const std::string& v) { c.out = v; }},
        {"seed", "cli",
         [](RunConfig& c, const std::string& v) {
             const long long n = parse_integer(v, "seed");
             if (n < 0) throw ConfigError("seed must be >= 0");
             c.seed = static_cast<std::uint64_t>(n);
         }},
        {"suite", "cli",
         [](RunConfig& c, const std::string& v) {
             c.suites = tokens(v);
         }},
    };
    return table;
}

Grid grid_of(const RunConfig& cfg) { return make_grid(cfg.grid_L, cfg.grid_N); }

ExperimentConfig experiment_config(const RunConfig& cfg) {
    ExperimentConfig e;
    e.grid = grid_of(cfg);
    e.idx = cfg.idx;
    e.variant = cfg.variant == "novikov" ? EquationVariant::NovikovV : EquationVariant::ForqV;
    e.dt = cfg.dt;
    e.dealias = cfg.dealias;
    e.blowup_ceiling = cfg.blowup_ceiling;
    e.t_max = cfg.t_max;
    e.threads = cfg.threads;
    e.validate();
    return e;
}

SpectralField make_field(const std::string& spec, const Grid& grid, const BesovIndex& idx) {
    const auto colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
    auto need_arg = [&] {
        if (arg.empty()) throw ConfigError("field '" + head + "' needs an argument, e.g. " + head + ":6");
    };
    if (head == "phi" && arg.empty()) return make_phi(grid);
    if (head == "fn") {
        need_arg();
        return make_fn(static_cast<int>(parse_integer(arg, "fn")), idx, make_phi(grid));
    }
    if (head == "gn") {
        need_arg();
        return make_gn(static_cast<int>(parse_integer(arg, "gn")), make_phi(grid));
    }
    if (head == "const") {
        need_arg();
        return SpectralField::constant(grid, parse_real(arg, "const"));
    }
    if (head == "coskx") {
        need_arg();
        const double xi = parse_real(arg, "coskx");
        std::int64_t k = 0;
        if (!grid.lattice_index(xi, k)) {
            throw ConfigError("coskx: frequency " + arg + " is not on the lattice of spacing " +
                              short_fmt(grid.spacing()));
        }
        if (std::abs(k) >= static_cast<std::int64_t>(grid.size() / 2)) throw ConfigError("coskx: frequency above Nyquist");
        return SpectralField::from_values(grid, lattice_wave(grid, k, Wave::Cos));
    }
    throw ConfigError("unknown field '" + spec + "'; expected phi, fn:n, gn:n, const:c or coskx:k");
}

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

nlohmann::json base_manifest(const RunConfig& cfg, const std::string& command) {
    return {{"tool", "besovlab"},
            {"version", library_version()},
            {"fft_backend", fft_backend_version()},
            {"compiler", __VERSION__},
            {"command", command},
            {"started_at", utc_timestamp()},
            {"seed", cfg.seed}};
}

// ---- validate ------------------------------------------------------------

int cmd_validate(const RunConfig& cfg, const std::string& inject, std::ostream& out) {
    ValidationOptions opt;
    opt.suites = cfg.suites;
    opt.seed = cfg.seed;
    if (!inject.empty()) {
        if (inject != "broken-phi") throw ConfigError("--inject accepts only broken-phi");
        opt.inject_broken_phi = true;
    }
    const ValidationReport rep = run_validation(opt);

    char line[256];
    std::snprintf(line, sizeof line, "%-16s %-42s %-6s %s\n", "suite", "check", "result", "worst_ratio");
    out << line;
    std::map<std::string, std::pair<bool, double>> per_suite;
    std::vector<std::string> order;
    for (const auto& c : rep.checks) {
        std::snprintf(line, sizeof line, "%-16s %-42s %-6s %s\n", c.suite.c_str(), c.name.c_str(),
                      c.passed ? "PASS" : "FAIL", short_fmt(c.worst_ratio, 3).c_str());
        out << line;
        if (!c.passed) out << "    " << c.detail << '\n';
        if (!per_suite.count(c.suite)) {
            order.push_back(c.suite);
            per_suite[c.suite] = {true, 0.0};
        }
        auto& [ok, worst] = per_suite[c.suite];
        ok = ok && c.passed;
        worst = std::max(worst, c.worst_ratio);
    }
    out << '\n';
    for (const auto& s : order) {
        const auto& [ok, worst] = per_suite[s];
        std::snprintf(line, sizeof line, "%-16s %-6s worst_ratio %s\n", s.c_str(), ok ? "PASS" : "FAIL",
                      short_fmt(worst, 3).c_str());
        out << line;
    }
    std::size_t failed = 0;
    for (const auto& c : rep.checks) failed += c.passed ? 0 : 1;
    if (failed == 0) {
        out << "validation: all " << rep.checks.size() << " checks passed\n";
        return kExitOk;
    }
    out << "validation: " << failed << " of " << rep.checks.size() << " checks failed:";
    for (const auto& c : rep.checks) {
        if (!c.passed) out << ' ' << c.suite << '/' << '"' << c.name << '"';
    }
    out << '\n';
    return kExitPropertyFailure;
}

// ---- besov ---------------------------------------------------------------

int cmd_besov(const RunConfig& cfg, const std::string& spec, std::ostream& out) {
    cfg.idx.validate();
    const Grid grid = grid_of(cfg);
    const DyadicPartition part = build_partition(grid);
    const SpectralField f = make_field(spec, grid, cfg.idx);
    const double norm = besov_norm(f, cfg.idx, part);
    out << "field " << spec << '\n'
        << "index " << cfg.idx.to_string() << '\n'
        << "besov_norm " << fmt(norm) << '\n'
        << format_blocks_csv(block_rows(spec, 0, f, cfg.idx, part));
    return kExitOk;
}

// ---- evolve --------------------------------------------------------------

int cmd_evolve(const RunConfig& cfg, const std::string& spec, bool self_check, const std::string& command,
               std::ostream& out) {
    const Grid grid = grid_of(cfg);
    cfg.idx.validate();
    EvolutionConfig ec;
    ec.grid = grid;
    ec.dt = cfg.dt;
    ec.t_end = cfg.t_max;
    ec.variant = cfg.variant == "novikov" ? EquationVariant::NovikovU : EquationVariant::ForqU;
    ec.dealias = cfg.dealias;
    ec.blowup_ceiling = cfg.blowup_ceiling;
    std::set<double> times{0.0, cfg.t_max};
    if (cfg.t_list_given) times.insert(cfg.t_list.begin(), cfg.t_list.end());
    ec.snapshot_times.assign(times.begin(), times.end());
    ec.validate();

    const SpectralField u0 = make_field(spec, grid, cfg.idx);
    const auto t0 = Clock::now();
    const auto snaps = evolve(u0, ec);
    const double runtime = seconds_since(t0);

    std::string csv = "x";
    for (const auto& s : snaps) csv += ",t=" + short_fmt(s.t, 10);
    csv += '\n';
    for (std::size_t i = 0; i < grid.size(); ++i) {
        csv += fmt(grid.x(i));
        for (const auto& s : snaps) csv += ',' + fmt(s.field.values()[i]);
        csv += '\n';
    }
    const fs::path dir(cfg.out);
    write_text(dir / "evolve.csv", csv);

    nlohmann::json side = base_manifest(cfg, command);
    side["field"] = spec;
    side["grid"] = {{"L", grid.half_length()}, {"N", grid.size()}};
    side["variant"] = to_string(ec.variant);
    side["dt"] = ec.dt;
    side["t_end"] = ec.t_end;
    side["dealias"] = ec.dealias;
    side["blowup_ceiling"] = ec.blowup_ceiling;
    side["cfl_number"] = cfl_number(u0, ec);
    side["runtime_seconds"] = runtime;
    nlohmann::json snap_info = nlohmann::json::array();
    for (const auto& s : snaps) snap_info.push_back({{"t", s.t}, {"sup_norm", s.field.sup_norm()}});
    side["snapshots"] = snap_info;
    out << "evolved " << spec << " under " << to_string(ec.variant) << " to t = " << short_fmt(ec.t_end)
        << " (dt = " << short_fmt(ec.dt) << ", CFL " << short_fmt(side["cfl_number"].get<double>(), 3) << ")\n";
    if (self_check) {
        const SelfConvergence sc = self_convergence(u0, ec);
        side["self_convergence"] = {{"dt", sc.dt},
                                    {"coarse_difference", sc.coarse_difference},
                                    {"fine_difference", sc.fine_difference},
                                    {"ratio", sc.ratio},
                                    {"observed_order", sc.observed_order}};
        out << "self-convergence ratio " << short_fmt(sc.ratio, 4) << " (order " << short_fmt(sc.observed_order, 3)
            << ")\n";
    }
    write_text(dir / "evolve.json", side.dump(2) + "\n");
    out << "wrote " << (dir / "evolve.csv").string() << " and " << (dir / "evolve.json").string() << '\n';
    return kExitOk;
}

// ---- counterexample ------------------------------------------------------

int cmd_counterexample(const RunConfig& cfg, bool dump_fields, std::ostream& out) {
    cfg.idx.validate();
    const Grid grid = grid_of(cfg);
    const DyadicPartition part = build_partition(grid);
    const SpectralField phi = make_phi(grid);
    const BesovIndex idx_v = cfg.idx.shifted(-1.0);
    const SeparationTargets targets = separation_targets(phi, cfg.idx.p);
    const fs::path dir(cfg.out);

    std::vector<BlockRow> rows;
    bool ok = true;
    char line[256];
    std::snprintf(line, sizeof line, "%4s %12s %14s %14s %18s %12s\n", "n", "carrier", "identity_resid",
                  "localization", "||T_n||_{B^{s-1}}", "/leading");
    out << line;
    SpectralField psi;
    for (int n : cfg.n_list) {
        const KeyTerm kt = key_term(n, cfg.idx, phi);
        psi = kt.psi;
        const BlockProfile prof = block_profile(kt.t_n, idx_v, part);
        if (n > part.j_max()) throw ConfigError("n = " + std::to_string(n) + " exceeds the largest block index");
        double off = 0.0;
        for (int j = -1; j <= part.j_max(); ++j) {
            if (j != n) off += prof.lp_norms[static_cast<std::size_t>(j + 1)];
        }
        const double loc = off / prof.lp_norms[static_cast<std::size_t>(n + 1)];
        ok = ok && loc < 1e-10 && kt.identity_residual < 1e-10;
        std::snprintf(line, sizeof line, "%4d %12.6g %14.3e %14.3e %18.10g %12.6f\n", n, carrier_frequency(n),
                      kt.identity_residual, loc, prof.norm, prof.norm / targets.leading_order);
        out << line;

        const SpectralField f = make_fn(n, cfg.idx, phi);
        const SpectralField g = make_gn(n, phi);
        for (auto&& [name, field] : {std::pair{"f_n", &f}, {"g_n", &g}, {"T_n", &kt.t_n}}) {
            auto r = block_rows(name, n, *field, idx_v, part);
            rows.insert(rows.end(), r.begin(), r.end());
        }
        if (dump_fields) {
            std::string csv = "x,f_n,g_n,T_n,psi\n";
            for (std::size_t i = 0; i < grid.size(); ++i) {
                csv += fmt(grid.x(i)) + ',' + fmt(f.values()[i]) + ',' + fmt(g.values()[i]) + ',' +
                       fmt(kt.t_n.values()[i]) + ',' + fmt(kt.psi.values()[i]) + '\n';
            }
            write_text(dir / ("counterexample_n" + std::to_string(n) + ".csv"), csv);
        }
    }
    if (cfg.n_list.empty()) psi = make_psi(phi);
    auto r = block_rows("psi", 0, psi, idx_v, part);
    rows.insert(rows.end(), r.begin(), r.end());
    write_text(dir / "counterexample_blocks.csv", format_blocks_csv(rows));
    out << "separation targets: stated " << fmt(targets.stated) << ", leading order " << fmt(targets.leading_order)
        << '\n';
    out << "wrote " << (dir / "counterexample_blocks.csv").string() << (dump_fields ? " and per-n field dumps" : "")
        << '\n';
    return ok ? kExitOk : kExitPropertyFailure;
}

// ---- riemann -------------------------------------------------------------

int cmd_riemann(const RunConfig& cfg, std::ostream& out) {
    const Grid grid = grid_of(cfg);
    const SpectralField psi = make_psi(make_phi(grid));
    std::vector<double> ps = {1.0, 2.0, 4.0};
    if (cfg.p_given) ps = {cfg.idx.p};
    std::vector<double> lambdas;
    for (int n : cfg.n_list) lambdas.push_back(carrier_frequency(n));
    bool ok = true;
    char line[256];
    std::snprintf(line, sizeof line, "%5s %12s %22s %22s %12s\n", "p", "lambda", "||psi sin||_p", "target", "rel_error");
    out << line;
    for (double p : ps) {
        const RiemannReport rep = riemann_limit(p, lambdas, psi);
        for (const auto& s : rep.samples) {
            std::snprintf(line, sizeof line, "%5g %12.6g %22.15g %22.15g %12.3e\n", p, s.lambda, s.norm, rep.target,
                          s.relative_error);
            out << line;
        }
        if (!rep.samples.empty()) ok = ok && rep.samples.back().relative_error < 1e-2;
        out << "p = " << short_fmt(p) << ": mean |sin|^p factor " << fmt(rep.factor) << '\n';
    }
    return ok ? kExitOk : kExitPropertyFailure;
}

// ---- reproduce -----------------------------------------------------------

nlohmann::json drift_fits(const std::vector<ExperimentRecord>& records, const std::string& label) {
    std::vector<double> ts;
    std::map<std::string, std::vector<double>> cols;
    for (const auto& r : records) {
        if (r.data != label || r.t <= 0.0 || r.status != "ok") continue;
        ts.push_back(r.t);
        cols["drift_sm2"].push_back(r.drift_sm2);
        cols["drift_sm1"].push_back(r.drift_sm1);
        cols["drift_s"].push_back(r.drift_s);
        cols["approx_remainder"].push_back(r.approx_remainder);
    }
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [name, ys] : cols) {
        try {
            j[name] = to_json(fit_power_law(ts, ys));
        } catch (const ConfigError& e) {
            j[name] = {{"error", e.what()}};
        }
    }
    return j;
}

int cmd_reproduce(const RunConfig& cfg, const std::string& command, std::ostream& out) {
    const auto start = Clock::now();
    const ExperimentConfig ec = experiment_config(cfg);
    const SpectralField phi = make_phi(ec.grid, ec.bump);
    const DyadicPartition part = build_partition(ec.grid);
    const fs::path dir(cfg.out);
    nlohmann::json manifest = base_manifest(cfg, command);
    manifest["config"] = to_json(ec);
    manifest["threads"] = thread_budget(ec.threads, cfg.n_list.size());
    manifest["n_list"] = cfg.n_list;
    manifest["t_list"] = cfg.t_list;
    manifest["drift_t_list"] = cfg.drift_t_list;

    out << "reproducing on L = " << short_fmt(ec.grid.half_length()) << ", N = " << ec.grid.size() << ", index "
        << ec.idx.to_string() << ", variant " << to_string(v_form(ec.variant)) << '\n';

    auto t0 = Clock::now();
    const auto nonuniform = run_nonuniform(cfg.n_list, cfg.t_list, ec);
    const double t_nonuniform = seconds_since(t0);
    const NonuniformSummary summary = summarize_nonuniform(nonuniform, phi);

    t0 = Clock::now();
    const SampledMultiplier one_minus_dx(multipliers::one_minus_dx(), ec.grid);
    const int pair_n = 6;
    const std::vector<std::pair<std::string, std::pair<SpectralField, int>>> drift_data = {
        {"one_minus_dx_phi", {one_minus_dx.apply(phi), 0}},
        {"pair_v1", {make_pair(pair_n, ec.idx, phi).v1, pair_n}},
    };
    std::vector<ExperimentRecord> prop2, prop3;
    for (const auto& [label, data] : drift_data) {
        auto a = run_prop2(data.first, label, data.second, cfg.drift_t_list, ec);
        auto b = run_prop3(data.first, label, data.second, cfg.drift_t_list, ec);
        prop2.insert(prop2.end(), a.begin(), a.end());
        prop3.insert(prop3.end(), b.begin(), b.end());
    }
    const double t_drift = seconds_since(t0);

    t0 = Clock::now();
    std::vector<BlockRow> blocks;
    const BesovIndex idx_v = ec.idx.shifted(-1.0);
    for (int n : cfg.n_list) {
        const KeyTerm kt = key_term(n, ec.idx, phi);
        for (auto&& [name, field] :
             {std::pair{"f_n", make_fn(n, ec.idx, phi)}, {"g_n", make_gn(n, phi)}, {"T_n", kt.t_n}}) {
            auto r = block_rows(name, n, field, idx_v, part);
            blocks.insert(blocks.end(), r.begin(), r.end());
        }
    }
    {
        auto r = block_rows("psi", 0, make_psi(phi), idx_v, part);
        blocks.insert(blocks.end(), r.begin(), r.end());
    }
    const double t_blocks = seconds_since(t0);

    emit_csv(nonuniform, dir / "nonuniform.csv");
    emit_csv(prop2, dir / "prop2.csv");
    emit_csv(prop3, dir / "prop3.csv");
    write_text(dir / "blocks.csv", format_blocks_csv(blocks));

    nlohmann::json fits = nlohmann::json::object();
    for (const auto& [label, data] : drift_data) {
        fits[label] = {{"prop2", drift_fits(prop2, label)}, {"prop3", drift_fits(prop3, label)}};
    }
    manifest["summary"] = to_json(summary);
    manifest["fits"] = fits;
    manifest["runtime_seconds"] = {{"nonuniform", t_nonuniform},
                                   {"drift", t_drift},
                                   {"blocks", t_blocks},
                                   {"total", seconds_since(start)}};
    manifest["outputs"] = {"nonuniform.csv", "prop2.csv", "prop3.csv", "blocks.csv"};
    write_text(dir / "manifest.json", manifest.dump(2) + "\n");

    out << "initial distance log2 slope " << short_fmt(summary.init_decay.exponent, 6) << " (residual "
        << short_fmt(summary.init_decay.residual, 3) << ")\n";
    for (const auto& r : summary.rates) {
        out << "  n = " << r.n << ": separation rate " << short_fmt(r.corrected_rate, 8) << " (fit " << short_fmt(r.fit.linear, 8)
            << " t + " << short_fmt(r.fit.quadratic, 4) << " t^2)\n";
    }
    out << "c0 = " << short_fmt(summary.c0, 8) << "; leading-order target " << short_fmt(summary.targets.leading_order, 8)
        << ", stated target " << short_fmt(summary.targets.stated, 8) << '\n';
    for (const auto& [label, data] : drift_data) {
        const auto& f = fits[label];
        auto exp_of = [](const nlohmann::json& j) {
            return j.contains("exponent") ? short_fmt(j["exponent"].get<double>(), 5) : std::string("n/a");
        };
        out << "  " << label << ": drift exponents B^{s-2} " << exp_of(f["prop2"]["drift_sm2"]) << ", B^{s-1} "
            << exp_of(f["prop2"]["drift_sm1"]) << ", B^s " << exp_of(f["prop2"]["drift_s"]) << "; remainder exponent "
            << exp_of(f["prop3"]["approx_remainder"]) << '\n';
    }
    out << "wrote nonuniform.csv, prop2.csv, prop3.csv, blocks.csv, manifest.json to " << dir.string() << '\n';
    out << "verdict: separation of scales " << summary.verdict << '\n';

    bool blew_up = !summary.all_cells_ok;
    for (const auto* rs : {&prop2, &prop3}) {
        for (const auto& r : *rs) blew_up = blew_up || r.status != "ok";
    }
    if (blew_up) return kExitBlowUp;
    return summary.holds ? kExitOk : kExitPropertyFailure;
}

} // namespace

void apply_setting(RunConfig& cfg, const std::string& section, const std::string& key, const std::string& value) {
    std::string k = key;
    std::replace(k.begin(), k.end(), '-', '_');
    for (const auto& s : settings()) {
        if (k != s.key) continue;
        if (!section.empty() && section != s.section) {
            throw ConfigError("setting '" + key + "' belongs in section [" + s.section + "], not [" + section + "]");
        }
        s.apply(cfg, value);
        return;
    }
    throw ConfigError("unknown setting '" + key + "'");
}

void load_config_file(RunConfig& cfg, const std::string& path) {
    std::vector<CLI::ConfigItem> items;
    try {
        items = CLI::ConfigINI().from_file(path);
    } catch (const CLI::Error& e) {
        throw ConfigError("cannot read config file '" + path + "': " + e.what());
    }
    for (const auto& item : items) {
        if (item.name == "++" || item.name == "--") continue;
        if (item.parents.size() > 1) throw ConfigError("nested section in '" + path + "': " + item.fullname());
        std::string value;
        for (const auto& in : item.inputs) value += (value.empty() ? "" : ",") + in;
        try {
            apply_setting(cfg, item.parents.empty() ? "" : item.parents.front(), item.name, value);
        } catch (const ConfigError& e) {
            throw ConfigError(path + ": " + e.what());
        }
    }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"besovlab: Littlewood-Paley analysis and FORQ / Novikov non-uniform dependence experiments"};
    app.require_subcommand(1);
    app.fallthrough();

    std::map<std::string, std::string> raw;
    std::vector<std::pair<std::string, CLI::Option*>> flags;
    auto flag = [&](const std::string& name, const std::string& key, const std::string& help) {
        flags.emplace_back(key, app.add_option(name, raw[key], help));
    };
    flag("--grid-L", "grid_L", "Half length L of the box [-L, L); a multiple of 12 pi");
    flag("--grid-N", "grid_N", "Number of grid points; a power of two");
    flag("--s", "s", "Besov regularity s");
    flag("--p", "p", "Besov integrability p (inf allowed)");
    flag("--r", "r", "Besov summability r (inf allowed)");
    flag("--n-list", "n_list", "Frequency scales n, e.g. 5,6,7 or 5..10");
    flag("--t-list", "t_list", "Sample times");
    flag("--drift-t-list", "drift_t_list", "Sample times of the drift and remainder experiments");
    flag("--t-max", "t_max", "Largest admissible time; end time of evolve");
    flag("--dt", "dt", "RK4 time step");
    flag("--variant", "variant", "forq or novikov");
    flag("--out", "out", "Output directory");
    flag("--seed", "seed", "Seed of the randomized property corpora");
    flag("--suite", "suite", "Validation suites to run (grid, lp, equations, counterexamples)");
    flag("--threads", "threads", "Worker cap for independent cells (0 = automatic)");
    flag("--dealias", "dealias", "Apply the 1/2-rule dealiasing (true/false)");
    flag("--blowup-ceiling", "blowup_ceiling", "Sup-norm at which an evolution is declared blown up");
    std::string config_path;
    app.add_option("--config", config_path, "INI file with [spectral_grid], [littlewood_paley], [equations], "
                                            "[experiments] and [cli] sections; flags override it");

    auto* validate = app.add_subcommand("validate", "Run the property suites");
    std::string inject;
    validate->add_option("--inject", inject, "Fault injection for negative controls (broken-phi)");

    auto* besov = app.add_subcommand("besov", "Besov norm and block table of a built-in field");
    std::string besov_field;
    besov->add_option("field", besov_field, "phi, fn:n, gn:n, const:c or coskx:k")->required();

    auto* evolve_cmd = app.add_subcommand("evolve", "Evolve a built-in field in the u-form and dump snapshots");
    std::string evolve_field;
    bool self_check = false;
    evolve_cmd->add_option("field", evolve_field, "phi, fn:n, gn:n, const:c or coskx:k")->required();
    evolve_cmd->add_flag("--self-convergence", self_check, "Also run dt, dt/2, dt/4 and report the error ratio");

    auto* counter = app.add_subcommand("counterexample", "Build the data pairs and the key product term");
    bool dump_fields = false;
    counter->add_flag("--dump-fields", dump_fields, "Write f_n, g_n, T_n and psi samples for every n");

    auto* reproduce = app.add_subcommand("reproduce", "Full reproduction run with CSV and manifest output");
    auto* riemann = app.add_subcommand("riemann", "Oscillatory averaging of psi sin(lambda x)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    std::string command;
    for (int i = 0; i < argc; ++i) command += (i ? " " : "") + std::string(argv[i]);

    try {
        RunConfig cfg;
        if (!config_path.empty()) load_config_file(cfg, config_path);
        for (const auto& [key, opt] : flags) {
            if (opt->count() > 0) apply_setting(cfg, "", key, raw[key]);
        }
        if (*validate) return cmd_validate(cfg, inject, out);
        if (*besov) return cmd_besov(cfg, besov_field, out);
        if (*evolve_cmd) return cmd_evolve(cfg, evolve_field, self_check, command, out);
        if (*counter) return cmd_counterexample(cfg, dump_fields, out);
        if (*reproduce) return cmd_reproduce(cfg, command, out);
        if (*riemann) return cmd_riemann(cfg, out);
    } catch (const ConfigError& e) {
        err << "besovlab: configuration error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const BlowUpError& e) {
        err << "besovlab: numerical blow-up at t = " << e.time() << ": " << e.what() << '\n';
        return kExitBlowUp;
    } catch (const Error& e) {
        err << "besovlab: " << e.what() << '\n';
        return kExitConfigError;
    }
    return kExitConfigError;
}

} // namespace besovlab
