#include <algorithm>
#include <atomic>
#include <chrono>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <set>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "relhartree/analysis.hpp"
#include "relhartree/harness.hpp"

namespace relhartree::harness {

namespace fs = std::filesystem;

namespace {

std::string fmt_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string now_iso8601() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&tt, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open '" + path.string() + "' for writing");
    out << text;
}

void emit(const CommonOpts& opts, const std::string& line) {
    if (!opts.quiet) std::cout << "[relhartree] " << line << "\n";
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void finalize_record(RunRecord& rec, const fs::path& dir, const Timer& timer,
                     const std::string& started) {
    rec.started_at = started;
    rec.finished_at = now_iso8601();
    rec.elapsed_seconds = timer.seconds();
    write_text(dir / "summary.json", to_summary_json(rec));
    write_text(dir / "meta.json", to_meta_json(rec));
}

Verdict window_verdict(const std::string& name, double measured, double lo, double hi) {
    Verdict v;
    v.name = name;
    v.measured = measured;
    v.lo = lo;
    v.hi = hi;
    v.pass = measured >= lo && measured <= hi;
    return v;
}

/// Geometric snapshot schedule on the step grid, with exact doubling pairs:
/// base indices k_j ~ K 2^(-j/8) plus their doubles, so every snapshot
/// t <= t_end/2 has its partner at exactly 2t (doubling a step time is
/// exact in binary floating point).
std::vector<double> scattering_snapshot_times(double t_end, double dt) {
    const long steps = std::lround(t_end / dt);
    std::set<long> ks{steps};
    for (int j = 0; j <= 40; ++j) {
        const long k = std::lround(double(steps) * std::pow(2.0, -0.125 * j));
        if (k < 1) break;
        ks.insert(k);
        if (2 * k <= steps) ks.insert(2 * k);
    }
    std::vector<double> times;
    for (long k : ks) times.push_back(double(k) * dt);
    return times;
}

/// Monotone-decrease verdict: measured = max consecutive ratio y_{i+1}/y_i
/// over the window.
Verdict monotone_verdict(const std::string& name, const TimeSeries& ts,
                         const std::string& channel, double t_lo, double t_hi) {
    const auto& y = ts.channel(channel);
    double worst = 0.0;
    int used = 0;
    for (std::size_t i = 0; i + 1 < ts.times.size(); ++i) {
        if (ts.times[i] < t_lo || ts.times[i + 1] > t_hi) continue;
        if (y[i] > 0.0) worst = std::max(worst, y[i + 1] / y[i]);
        ++used;
    }
    Verdict v;
    v.name = name;
    v.measured = worst;
    v.hi = 1.0;
    v.pass = used > 0 && worst <= 1.0 + 1e-9;
    return v;
}

struct SimArtifacts {
    RunRecord record;
    fs::path dir;
};

/// Shared body of simulate / linear-decay / scattering / sweep cells.
SimArtifacts run_sim_command(const ConfigMap& cfg, const std::string& command,
                             const fs::path& dir, const CommonOpts& opts,
                             bool scattering_mode) {
    const Timer timer;
    const std::string started = now_iso8601();
    const SimConfig sim = build_sim_config(cfg);

    std::vector<Probe> probes;
    for (const auto& name : probe_names(cfg)) probes.push_back(make_probe(name, sim));

    std::vector<double> snapshot_times;
    const bool want_snapshots =
        scattering_mode || (cfg.count("run.snapshots") && cfg.at("run.snapshots") == "scattering");
    if (want_snapshots) snapshot_times = scattering_snapshot_times(sim.t_end, sim.dt);

    Engine engine(sim);
    const RunResult result = engine.run(probes, snapshot_times);

    TimeSeries series = result.series;
    series.metadata = cfg;

    fs::create_directories(dir);
    write_csv((dir / "series.csv").string(), series);

    RunRecord rec;
    rec.command = command;
    rec.config = cfg;
    rec.config_hash = config_hash(cfg);
    rec.seed = opts.seed;
    rec.channels = series.channel_names;
    rec.csv_file = "series.csv";

    const auto [fit_lo, fit_hi] = fit_window(cfg, sim);
    for (const auto& channel : fit_channels(cfg)) {
        NamedFit nf;
        nf.channel = channel;
        nf.fit = fit_decay(series, channel, fit_lo, fit_hi);
        rec.fits.push_back(nf);
    }

    std::optional<TimeSeries> diag_opt;
    if (want_snapshots) {
        diag_opt = scattering_diagnostics(result.profile_snapshots, result.final_state.t);
        const TimeSeries& diag = *diag_opt;
        write_csv((dir / "scattering.csv").string(), diag);
        rec.extra["scattering_csv"] = "scattering.csv";
        // per-channel fits over [5, t_end/2]
        for (const auto& channel : diag.channel_names) {
            NamedFit nf;
            nf.channel = channel;
            nf.fit = fit_decay(diag, channel, 5.0 * (1.0 - 1e-9), 0.5 * sim.t_end * (1.0 + 1e-9));
            rec.fits.push_back(nf);
        }
        if (scattering_mode) {
            const double gm = sim.potential.gamma;
            for (const auto& f : rec.fits) {
                if (f.channel == "wkinf7")
                    rec.verdicts.push_back(
                        window_verdict("wkinf7_exponent", f.fit.exponent, -1.15, -0.85));
                if (f.channel.rfind("cauchy_h", 0) == 0 &&
                    f.channel.find("weighted") == std::string::npos)
                    rec.verdicts.push_back(window_verdict(
                        "cauchy_exponent", f.fit.exponent,
                        -std::numeric_limits<double>::infinity(), -(gm - 1.0) + 0.15));
                if (f.channel.rfind("cauchy_weighted", 0) == 0)
                    rec.verdicts.push_back(window_verdict(
                        "cauchy_weighted_exponent", f.fit.exponent,
                        -std::numeric_limits<double>::infinity(), -(gm - 1.0) / 3.0 + 0.1));
            }
            rec.verdicts.push_back(
                monotone_verdict("cauchy_decreasing", diag, diag.channel_names[1], 5.0,
                                 0.5 * sim.t_end));
            rec.verdicts.push_back(monotone_verdict("cauchy_weighted_decreasing", diag,
                                                    diag.channel_names[2], 5.0, 0.5 * sim.t_end));
        }
    }

    for (const auto& f : rec.fits) {
        const bool from_diag =
            f.channel.rfind("cauchy", 0) == 0 || f.channel.rfind("to_final", 0) == 0;
        const TimeSeries& src = from_diag ? *diag_opt : series;
        write_text(dir / (f.channel + ".svg"),
                   plot_svg(src.times, src.channel(f.channel), f.channel, &f.fit));
    }

    finalize_record(rec, dir, timer, started);
    return {std::move(rec), dir};
}

fs::path command_dir(const CommonOpts& opts, const std::string& command, const ConfigMap& cfg) {
    return fs::path(resolve_out_root(opts)) / (command + "-" + config_hash(cfg));
}

int record_exit(const RunRecord& rec) {
    return rec.all_verdicts_pass() ? exit_ok : exit_verdict;
}

} // namespace

std::string resolve_out_root(const CommonOpts& opts) {
    if (!opts.out_root.empty()) return opts.out_root;
    if (const char* env = std::getenv("RELHARTREE_OUT"); env && *env) return env;
    return "runs";
}

int cli_simulate(const std::string& config_path, const CommonOpts& opts, std::string* out_dir) {
    const ConfigMap cfg = load_config(config_path);
    const fs::path dir = command_dir(opts, "simulate", cfg);
    const SimArtifacts art = run_sim_command(cfg, "simulate", dir, opts, false);
    if (out_dir) *out_dir = art.dir.string();
    emit(opts, "simulate -> " + art.dir.string());
    return record_exit(art.record);
}

int cli_linear_decay(const std::string& config_path, const std::vector<double>& gammas_in,
                     const CommonOpts& opts, std::string* out_dir) {
    ConfigMap cfg = load_config(config_path);
    validate_known_keys(cfg);
    cfg["potential.lambda"] = "0"; // linear flow

    std::vector<double> gammas = gammas_in;
    if (gammas.empty()) {
        if (cfg.count("linear_decay.gammas")) {
            std::stringstream ss(cfg.at("linear_decay.gammas"));
            std::string item;
            while (std::getline(ss, item, ',')) gammas.push_back(std::stod(item));
        } else {
            gammas.push_back(std::stod(cfg.at("potential.gamma")));
        }
    }

    // assemble probes: sup_norm + per-gamma Hartree-term norms + any extras
    std::vector<std::string> probes = probe_names(cfg);
    auto ensure = [&](const std::string& p) {
        if (std::find(probes.begin(), probes.end(), p) == probes.end()) probes.push_back(p);
    };
    ensure("mass");
    ensure("sup_norm");
    std::vector<std::string> nlterm_channels;
    for (double gm : gammas) {
        const std::string name = "nlterm_l2_" + fmt_double(gm);
        ensure(name);
        nlterm_channels.push_back(name);
    }
    std::string probe_list;
    for (const auto& p : probes) probe_list += (probe_list.empty() ? "" : ",") + p;
    cfg["run.probes"] = probe_list;

    std::string fit_list = "sup_norm";
    for (const auto& ch : nlterm_channels) fit_list += "," + ch;
    for (const auto& p : probes)
        if (p.rfind("lp_l2_", 0) == 0) fit_list += "," + p;
    cfg["fit.channels"] = fit_list;

    const fs::path dir = command_dir(opts, "linear-decay", cfg);
    SimArtifacts art = run_sim_command(cfg, "linear-decay", dir, opts, false);

    // verdicts against the dispersive and Hartree-term decay targets
    for (const auto& f : art.record.fits) {
        if (f.channel == "sup_norm") {
            art.record.verdicts.push_back(
                window_verdict("sup_norm_exponent", f.fit.exponent, -1.1, -0.9));
        } else if (f.channel.rfind("nlterm_l2_", 0) == 0) {
            const double gm = std::stod(f.channel.substr(10));
            art.record.verdicts.push_back(window_verdict("nlterm_exponent_gamma=" + fmt_double(gm),
                                                         f.fit.exponent, -gm - 0.15, -gm + 0.15));
        } else if (f.channel.rfind("lp_l2_", 0) == 0) {
            art.record.verdicts.push_back(
                window_verdict("space_resonance_" + f.channel, f.fit.exponent,
                               -std::numeric_limits<double>::infinity(), -2.5));
        }
    }
    write_text(art.dir / "summary.json", to_summary_json(art.record));
    if (out_dir) *out_dir = art.dir.string();
    emit(opts, "linear-decay -> " + art.dir.string());
    return record_exit(art.record);
}

int cli_scattering(const std::string& config_path, const CommonOpts& opts, std::string* out_dir) {
    ConfigMap cfg = load_config(config_path);
    validate_known_keys(cfg);
    std::vector<std::string> probes = probe_names(cfg);
    if (std::find(probes.begin(), probes.end(), "wkinf7") == probes.end())
        probes.push_back("wkinf7");
    std::string probe_list;
    for (const auto& p : probes) probe_list += (probe_list.empty() ? "" : ",") + p;
    cfg["run.probes"] = probe_list;
    std::string fits = cfg.count("fit.channels") ? cfg.at("fit.channels") : "";
    if (fits.find("wkinf7") == std::string::npos)
        fits = fits.empty() ? "wkinf7" : fits + ",wkinf7";
    cfg["fit.channels"] = fits;

    const fs::path dir = command_dir(opts, "scattering", cfg);
    const SimArtifacts art = run_sim_command(cfg, "scattering", dir, opts, true);
    if (out_dir) *out_dir = art.dir.string();
    emit(opts, "scattering -> " + art.dir.string());
    return record_exit(art.record);
}

int cli_plot(const std::string& record_csv, const std::string& channel, const std::string& out_svg,
             std::optional<double> t_min, std::optional<double> t_max) {
    const TimeSeries ts = read_csv(record_csv);
    const auto& y = ts.channel(channel);
    const DecayFit* fit_ptr = nullptr;
    DecayFit fit;
    if (t_min && t_max) {
        fit = fit_decay(ts, channel, *t_min, *t_max);
        fit_ptr = &fit;
    }
    write_text(out_svg, plot_svg(ts.times, y, channel, fit_ptr));
    return exit_ok;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

int cli_verify(const VerifyOpts& vopts, const CommonOpts& opts, std::string* out_dir) {
    using namespace relhartree::analysis;
    const Timer timer;
    const std::string started = now_iso8601();

    std::vector<std::string> suites = vopts.suites;
    if (suites.empty()) suites = {"null", "mderiv", "hls", "dispersive", "cm"};

    ConfigMap echo;
    echo["verify.samples"] = std::to_string(vopts.samples);
    echo["verify.gamma"] = fmt_double(vopts.gamma);
    echo["verify.seed"] = std::to_string(opts.seed);
    {
        std::string s;
        for (const auto& name : suites) s += (s.empty() ? "" : ",") + name;
        echo["verify.suites"] = s;
    }

    RunRecord rec;
    rec.command = "verify";
    rec.config = echo;
    rec.config_hash = config_hash(echo);
    rec.seed = opts.seed;

    auto has = [&](const char* name) {
        return std::find(suites.begin(), suites.end(), name) != suites.end();
    };
    auto push_stats = [&](const std::string& prefix, const SampleStats& st) {
        rec.extra[prefix + ".n_samples"] = std::to_string(st.n_samples);
        rec.extra[prefix + ".violations"] = std::to_string(st.violations);
        rec.extra[prefix + ".worst_ratio"] = fmt_double(st.worst_ratio);
        rec.extra[prefix + ".c_lower"] = fmt_double(st.c_lower);
        rec.extra[prefix + ".c_upper"] = fmt_double(st.c_upper);
    };
    auto stability = [&](const std::string& name, double a, double b) {
        return window_verdict(name + "_stability", std::abs(b - a) / std::abs(a), 0.0, 0.2);
    };

    SamplerSpec spec;
    spec.seed = opts.seed;

    if (has("null")) {
        const SampleStats a = verify_null_structure(spec, vopts.samples);
        const SampleStats b = verify_null_structure(spec, 2 * vopts.samples);
        push_stats("null", a);
        rec.verdicts.push_back(window_verdict("null_violations", double(a.violations), 0.0, 0.0));
        rec.verdicts.push_back(window_verdict("null_c_lower_positive", a.c_lower, 1e-12,
                                              std::numeric_limits<double>::infinity()));
        rec.verdicts.push_back(stability("null_c_lower", a.c_lower, b.c_lower));
        rec.verdicts.push_back(stability("null_c_upper", a.c_upper, b.c_upper));
        emit(opts, "verify null: violations=" + std::to_string(a.violations) +
                       " c=[" + fmt_double(a.c_lower) + ", " + fmt_double(a.c_upper) + "]");
    }
    if (has("mderiv")) {
        const SampleStats a = verify_m_derivatives(2, spec, vopts.samples);
        const SampleStats b = verify_m_derivatives(2, spec, 2 * vopts.samples);
        push_stats("mderiv", a);
        rec.verdicts.push_back(window_verdict("mderiv_violations", double(a.violations), 0.0, 0.0));
        rec.verdicts.push_back(stability("mderiv_c_upper", a.c_upper, b.c_upper));
        emit(opts, "verify mderiv: violations=" + std::to_string(a.violations) +
                       " c_upper=" + fmt_double(a.c_upper));
    }
    if (has("hls")) {
        const SampleStats a = verify_hls(vopts.gamma, vopts.samples, opts.seed, 64, 24.0);
        const SampleStats b = verify_hls(vopts.gamma, 2 * vopts.samples, opts.seed, 64, 24.0);
        push_stats("hls", a);
        rec.verdicts.push_back(window_verdict("hls_violations", double(a.violations), 0.0, 0.0));
        rec.verdicts.push_back(stability("hls_worst_ratio", a.worst_ratio, b.worst_ratio));
        emit(opts, "verify hls: violations=" + std::to_string(a.violations) +
                       " worst_ratio=" + fmt_double(a.worst_ratio));
    }
    if (has("dispersive")) {
        const DispersiveReport rep = verify_dispersive_default();
        push_stats("dispersive", rep.stats);
        rec.verdicts.push_back(window_verdict("dispersive_sup_ratio_finite",
                                              std::isfinite(rep.stats.worst_ratio) ? 1.0 : 0.0,
                                              1.0, 1.0));
        for (const auto& [nb, e] : rep.exponents) {
            rec.extra["dispersive.exponent_N" + fmt_double(nb)] = fmt_double(e);
            rec.verdicts.push_back(
                window_verdict("dispersive_exponent_N" + fmt_double(nb), e, -1.15, -0.85));
        }
        emit(opts, "verify dispersive: sup_ratio=" + fmt_double(rep.stats.worst_ratio));
    }
    if (has("cm")) {
        // separable factorization cross-check
        auto ga = [](Vec2 xi) { return cplx(std::exp(-norm2(xi)), 0.0); };
        auto gb = [](Vec2 eta) { return cplx(std::exp(-0.5 * norm2(eta)), 0.1 * eta.x); };
        CmGrid grid;
        grid.n_a = grid.n_b = 24;
        grid.half_a = grid.half_b = 4.0;
        const double c4 =
            estimate_cm_norm([&](Vec2 xi, Vec2 eta) { return ga(xi) * gb(eta); }, grid);
        const double prod = estimate_l1_inverse_2d(ga, 24, 4.0) * estimate_l1_inverse_2d(gb, 24, 4.0);
        rec.extra["cm.separable_rel_err"] = fmt_double(std::abs(c4 - prod) / prod);
        rec.verdicts.push_back(
            window_verdict("cm_separable", std::abs(c4 - prod) / prod, 0.0, 0.01));

        auto cm_at = [](double L) {
            CmGrid g;
            g.n_a = g.n_b = 16;
            g.half_a = 2.0 * L;
            g.half_b = 2.0;
            return estimate_cm_norm(
                [L](Vec2 eta, Vec2 sigma) { return m1_dyadic_symbol(eta, sigma, L, 1.0, 1.0); }, g);
        };
        const double ratio = cm_at(0.5) / cm_at(1.0);
        rec.extra["cm.dyadic_ratio"] = fmt_double(ratio);
        rec.verdicts.push_back(window_verdict("cm_dyadic_scaling", ratio, 1.0, 16.0));
        emit(opts, "verify cm: dyadic_ratio=" + fmt_double(ratio));
    }

    const fs::path dir = fs::path(resolve_out_root(opts)) / ("verify-" + rec.config_hash);
    fs::create_directories(dir);
    finalize_record(rec, dir, timer, started);
    if (out_dir) *out_dir = dir.string();
    emit(opts, "verify -> " + dir.string());
    return record_exit(rec);
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

int cli_sweep(const std::string& manifest_path, const CommonOpts& opts, std::string* out_dir) {
    const ConfigMap manifest = load_config(manifest_path);
    validate_known_keys(manifest, /*sweep_manifest=*/true);

    ConfigMap base;
    std::vector<std::pair<std::string, std::vector<std::string>>> axes;
    for (const auto& [key, value] : manifest) {
        if (key.rfind("base.", 0) == 0) {
            base[key.substr(5)] = value;
        } else {
            std::vector<std::string> vals;
            std::stringstream ss(value);
            std::string item;
            while (std::getline(ss, item, ',')) {
                const auto a = item.find_first_not_of(" \t");
                const auto b = item.find_last_not_of(" \t");
                if (a != std::string::npos) vals.push_back(item.substr(a, b - a + 1));
            }
            if (vals.empty()) throw ConfigError("manifest: empty sweep list for '" + key + "'");
            axes.emplace_back(key.substr(6), vals);
        }
    }
    if (base.empty()) throw ConfigError("manifest: no base.* keys");

    std::vector<ConfigMap> cells;
    if (axes.empty()) {
        cells.push_back(base);
    } else {
        std::vector<std::size_t> idx(axes.size(), 0);
        bool done = false;
        while (!done) {
            ConfigMap cell = base;
            for (std::size_t a = 0; a < axes.size(); ++a)
                cell[axes[a].first] = axes[a].second[idx[a]];
            cells.push_back(cell);
            std::size_t a = axes.size() - 1;
            while (true) {
                if (++idx[a] < axes[a].second.size()) break;
                idx[a] = 0;
                if (a == 0) {
                    done = true;
                    break;
                }
                --a;
            }
        }
    }

    const fs::path sweep_dir =
        fs::path(resolve_out_root(opts)) / ("sweep-" + config_hash(manifest));
    fs::create_directories(sweep_dir);

    struct CellResult {
        RunRecord record;
        std::string dir;
        std::string error;
        int error_code = 0;
    };
    std::vector<CellResult> results(cells.size());

    const int jobs = opts.jobs > 0 ? opts.jobs
                                   : std::max(1u, std::thread::hardware_concurrency());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            const fs::path cell_dir = sweep_dir / ("cell-" + config_hash(cells[i]));
            try {
                SimArtifacts art = run_sim_command(cells[i], "simulate", cell_dir, opts, false);
                results[i] = {std::move(art.record), cell_dir.string(), "", 0};
            } catch (const ConfigError& e) {
                results[i] = {{}, cell_dir.string(), e.what(), exit_config};
            } catch (const NumericError& e) {
                results[i] = {{}, cell_dir.string(), e.what(), exit_numeric};
            }
        }
    };
    {
        const std::size_t nthreads = std::min(std::size_t(jobs), cells.size());
        std::vector<std::thread> pool;
        for (std::size_t j = 0; j < nthreads; ++j) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    // aggregate report: swept keys then fitted exponents, one row per cell
    std::string report = "cell";
    for (const auto& [key, vals] : axes) report += "," + key;
    std::vector<std::string> fit_names;
    for (const auto& r : results)
        for (const auto& f : r.record.fits)
            if (std::find(fit_names.begin(), fit_names.end(), f.channel) == fit_names.end())
                fit_names.push_back(f.channel);
    for (const auto& name : fit_names) report += ",exp_" + name + ",r2_" + name;
    report += ",status\n";
    for (std::size_t i = 0; i < cells.size(); ++i) {
        report += fs::path(results[i].dir).filename().string();
        for (const auto& [key, vals] : axes) report += "," + cells[i].at(key);
        for (const auto& name : fit_names) {
            const auto it = std::find_if(results[i].record.fits.begin(),
                                         results[i].record.fits.end(),
                                         [&](const NamedFit& f) { return f.channel == name; });
            if (it == results[i].record.fits.end()) {
                report += ",,";
            } else {
                report += "," + fmt_double(it->fit.exponent) + "," + fmt_double(it->fit.r_squared);
            }
        }
        report += results[i].error.empty() ? ",ok" : ",error";
        report += '\n';
    }
    write_text(sweep_dir / "sweep_report.csv", report);

    int code = exit_ok;
    for (const auto& r : results) {
        if (r.error_code != 0) {
            std::cerr << "[relhartree] sweep cell failed: " << r.error << "\n";
            code = std::max(code, r.error_code);
        } else if (!r.record.all_verdicts_pass()) {
            code = std::max(code, int(exit_verdict));
        }
    }
    if (out_dir) *out_dir = sweep_dir.string();
    emit(opts, "sweep -> " + sweep_dir.string() + " (" + std::to_string(cells.size()) + " cells)");
    return code;
}

} // namespace relhartree::harness
