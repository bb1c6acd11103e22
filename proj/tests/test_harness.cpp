#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "relhartree/harness.hpp"
#include "relhartree/rng.hpp"

using namespace relhartree;
using namespace relhartree::harness;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("relhartree_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

const char* kSmallConfig = R"(
# smoke config
grid.n = 64
grid.extent = 16
potential.gamma = 1.5
potential.lambda = 1
initial.kind = gaussian
initial.width = 1.0
initial.amplitude = 0.3
initial.radius = 3.5
time.dt = 0.05
time.t_end = 1
time.sample_every = 2
time.allow_wrap = true
)";

std::string write_config(const TempDir& dir, const std::string& text, const char* name = "c.cfg") {
    const fs::path p = dir.path / name;
    std::ofstream(p) << text;
    return p.string();
}

} // namespace

TEST_CASE("config parsing: comments, errors, canonical hash") {
    const ConfigMap cfg = parse_config_text("a.b = 1 # comment\n\n c.d= x\n");
    CHECK(cfg.at("a.b") == "1");
    CHECK(cfg.at("c.d") == "x");

    CHECK_THROWS_AS(parse_config_text("novalue\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("k = 1\nk = 2\n"), ConfigError);

    CHECK(canonical_text(cfg) == "a.b=1\nc.d=x\n");
    CHECK(config_hash(cfg).size() == 12);
    CHECK(config_hash(cfg) == config_hash(parse_config_text("c.d = x\na.b = 1\n")));
    CHECK(config_hash(cfg) != config_hash(parse_config_text("c.d = x\na.b = 2\n")));
}

TEST_CASE("config validation: unknown keys, required keys, bad values") {
    CHECK_THROWS_AS(build_sim_config(parse_config_text("grid.n = 64\nbogus.key = 1\n")),
                    ConfigError);
    ConfigMap cfg = parse_config_text(kSmallConfig);
    CHECK_NOTHROW(build_sim_config(cfg));

    ConfigMap missing = cfg;
    missing.erase("time.dt");
    CHECK_THROWS_AS(build_sim_config(missing), ConfigError);

    ConfigMap bad = cfg;
    bad["grid.n"] = "sixty-four";
    CHECK_THROWS_AS(build_sim_config(bad), ConfigError);
    bad = cfg;
    bad["time.allow_wrap"] = "maybe";
    CHECK_THROWS_AS(build_sim_config(bad), ConfigError);
    bad = cfg;
    bad["run.probes"] = "mass, not_a_probe";
    CHECK_THROWS_AS(build_sim_config(bad), ConfigError);
    bad = cfg;
    bad["run.probes"] = "lp_l2_64"; // outside resolvable band
    CHECK_THROWS_AS(build_sim_config(bad), ConfigError);

    // zero-mode policies
    ConfigMap zm = cfg;
    zm["potential.zero_mode"] = "r2_consistent";
    CHECK(build_sim_config(zm).potential.zero_mode.kind == ZeroModePolicy::Kind::value);
    zm["potential.zero_mode"] = "value";
    CHECK_THROWS_AS(build_sim_config(zm), ConfigError); // needs zero_mode_value
    zm["potential.zero_mode_value"] = "0.25";
    CHECK(build_sim_config(zm).potential.zero_mode.c == 0.25);

    // integrator / dealias tags
    ConfigMap ik = cfg;
    ik["run.integrator"] = "rk4_interaction";
    CHECK(build_sim_config(ik).integrator == IntegratorKind::rk4_interaction);
    ik["run.integrator"] = "leapfrog";
    CHECK_THROWS_AS(build_sim_config(ik), ConfigError);
    ik = cfg;
    ik["run.dealias"] = "two_thirds";
    CHECK(build_sim_config(ik).dealias == DealiasMode::two_thirds);
}

TEST_CASE("CSV round trip preserves doubles exactly") {
    TimeSeries ts;
    ts.channel_names = {"a", "b"};
    Rng rng(99);
    double t = 0.0;
    for (int i = 0; i < 50; ++i) {
        t += rng.uniform(1e-6, 2.0);
        ts.push_sample(t, {rng.normal() * std::pow(10.0, rng.uniform(-300.0, 300.0)),
                           rng.normal()});
    }
    TempDir dir;
    const std::string path = (dir.path / "ts.csv").string();
    write_csv(path, ts);
    const TimeSeries back = read_csv(path);
    CHECK(back.times == ts.times);
    CHECK(back.channel_names == ts.channel_names);
    CHECK(back.channels == ts.channels);

    std::ofstream(dir.path / "bad.csv") << "x,a\n1,2\n";
    CHECK_THROWS_AS(read_csv((dir.path / "bad.csv").string()), ConfigError);
    std::ofstream(dir.path / "bad2.csv") << "t,a\n1,notanumber\n";
    CHECK_THROWS_AS(read_csv((dir.path / "bad2.csv").string()), ConfigError);
    std::ofstream(dir.path / "bad3.csv") << "t,a\n1,2,3\n";
    CHECK_THROWS_AS(read_csv((dir.path / "bad3.csv").string()), ConfigError);
}

TEST_CASE("RunRecord round-trips losslessly through JSON") {
    RunRecord r;
    r.command = "simulate";
    r.config = parse_config_text(kSmallConfig);
    r.config_hash = config_hash(r.config);
    r.seed = 424242;
    r.channels = {"mass", "sup_norm"};
    r.csv_file = "series.csv";
    r.fits.push_back({"sup_norm", DecayFit{-1.000000000003, 0.123456789123456789, 0.9999,
                                           10.0, 44.5, 70}});
    r.verdicts.push_back({"sup_norm_exponent", true, -1.000000000003, -1.1, -0.9});
    r.warnings.push_back("boundary mass fraction 2e-06");
    r.extra["note"] = "x";
    r.started_at = "2026-08-08T00:00:00Z";
    r.finished_at = "2026-08-08T00:00:09Z";
    r.elapsed_seconds = 9.25;

    const RunRecord back = from_json(to_summary_json(r), to_meta_json(r));
    CHECK(back.command == r.command);
    CHECK(back.config == r.config);
    CHECK(back.config_hash == r.config_hash);
    CHECK(back.seed == r.seed);
    CHECK(back.channels == r.channels);
    CHECK(back.fits.size() == 1);
    CHECK(back.fits[0].fit.exponent == r.fits[0].fit.exponent);
    CHECK(back.fits[0].fit.log_amplitude == r.fits[0].fit.log_amplitude);
    CHECK(back.verdicts.size() == 1);
    CHECK(back.verdicts[0].pass == true);
    CHECK(back.verdicts[0].measured == r.verdicts[0].measured);
    CHECK(back.warnings == r.warnings);
    CHECK(back.extra == r.extra);
    CHECK(back.elapsed_seconds == r.elapsed_seconds);
    // serialization is stable
    CHECK(to_summary_json(back) == to_summary_json(r));
}

TEST_CASE("simulate: deterministic bytes given identical config and seed") {
    TempDir dir;
    const std::string cfg = write_config(dir, kSmallConfig);
    CommonOpts opts;
    opts.quiet = true;
    opts.out_root = (dir.path / "a").string();
    std::string dir_a, dir_b;
    CHECK(cli_simulate(cfg, opts, &dir_a) == exit_ok);
    opts.out_root = (dir.path / "b").string();
    CHECK(cli_simulate(cfg, opts, &dir_b) == exit_ok);

    CHECK(slurp(fs::path(dir_a) / "series.csv") == slurp(fs::path(dir_b) / "series.csv"));
    CHECK(slurp(fs::path(dir_a) / "summary.json") == slurp(fs::path(dir_b) / "summary.json"));
}

TEST_CASE("sweep with one cell reproduces the simulate artifacts byte for byte") {
    TempDir dir;
    const std::string cfg_path = write_config(dir, kSmallConfig);
    std::string manifest = "sweep.potential.lambda = 1\n";
    for (const auto& [k, v] : parse_config_text(kSmallConfig))
        if (k != "potential.lambda") manifest += "base." + k + " = " + v + "\n";
    manifest += "base.potential.lambda = 0\n"; // overridden by the sweep axis
    const std::string manifest_path = write_config(dir, manifest, "m.cfg");

    CommonOpts opts;
    opts.quiet = true;
    opts.out_root = (dir.path / "sim").string();
    std::string sim_dir;
    CHECK(cli_simulate(cfg_path, opts, &sim_dir) == exit_ok);

    opts.out_root = (dir.path / "sweep").string();
    std::string sweep_dir;
    CHECK(cli_sweep(manifest_path, opts, &sweep_dir) == exit_ok);

    // exactly one cell, with the same config hash as the simulate run
    const std::string cell = "cell-" + config_hash(parse_config_text(kSmallConfig));
    const fs::path cell_dir = fs::path(sweep_dir) / cell;
    REQUIRE(fs::exists(cell_dir));
    CHECK(slurp(cell_dir / "series.csv") == slurp(fs::path(sim_dir) / "series.csv"));
    CHECK(slurp(cell_dir / "summary.json") == slurp(fs::path(sim_dir) / "summary.json"));
    CHECK(fs::exists(fs::path(sweep_dir) / "sweep_report.csv"));
}

TEST_CASE("sweep runs a cartesian grid in parallel") {
    TempDir dir;
    std::string manifest;
    for (const auto& [k, v] : parse_config_text(kSmallConfig))
        manifest += "base." + k + " = " + v + "\n";
    manifest += "sweep.potential.gamma = 1.3, 1.7\n";
    manifest += "sweep.initial.amplitude = 0.1, 0.2, 0.3\n";
    const std::string manifest_path = write_config(dir, manifest, "m.cfg");
    CommonOpts opts;
    opts.quiet = true;
    opts.jobs = 3;
    opts.out_root = (dir.path / "sweep").string();
    std::string sweep_dir;
    CHECK(cli_sweep(manifest_path, opts, &sweep_dir) == exit_ok);
    int cells = 0;
    for (const auto& e : fs::directory_iterator(sweep_dir))
        if (e.is_directory()) ++cells;
    CHECK(cells == 6);
    const std::string report = slurp(fs::path(sweep_dir) / "sweep_report.csv");
    CHECK(report.find("potential.gamma") != std::string::npos);
    CHECK(report.find("1.7") != std::string::npos);
    // manifest with unknown prefix is rejected
    const std::string bad = write_config(dir, "grid.n = 64\n", "bad.cfg");
    CHECK_THROWS_AS(cli_sweep(bad, opts, nullptr), ConfigError);
}

TEST_CASE("plot emits deterministic svg with fit overlay") {
    TempDir dir;
    TimeSeries ts;
    ts.channel_names = {"y"};
    for (int i = 1; i <= 40; ++i)
        ts.push_sample(double(i), {std::pow(double(i), -2.0)});
    const std::string csv = (dir.path / "s.csv").string();
    write_csv(csv, ts);
    const std::string svg1 = (dir.path / "p1.svg").string();
    const std::string svg2 = (dir.path / "p2.svg").string();
    CHECK(cli_plot(csv, "y", svg1, 2.0, 39.0) == exit_ok);
    CHECK(cli_plot(csv, "y", svg2, 2.0, 39.0) == exit_ok);
    const std::string body = slurp(svg1);
    CHECK(body == slurp(svg2));
    CHECK(body.find("polyline") != std::string::npos);
    CHECK(body.find("slope -2") != std::string::npos);
    CHECK_THROWS_AS(cli_plot(csv, "missing", svg1), UsageError);
}

TEST_CASE("verdict failures surface as exit code 1") {
    TempDir dir;
    // early-time window where the free sup norm has not started decaying at
    // the dispersive rate: the sup_norm verdict must fail
    std::string text = kSmallConfig;
    text += "fit.t_min = 0.05\nfit.t_max = 1.0\n";
    ConfigMap cfg = parse_config_text(text);
    cfg["potential.lambda"] = "0";
    cfg["time.t_end"] = "1";
    const std::string path = write_config(dir, canonical_text(cfg));
    CommonOpts opts;
    opts.quiet = true;
    opts.out_root = (dir.path / "out").string();
    std::string out_dir;
    const int code = cli_linear_decay(path, {1.5}, opts, &out_dir);
    CHECK(code == exit_verdict);
    const RunRecord rec = from_json(slurp(fs::path(out_dir) / "summary.json"), "");
    CHECK_FALSE(rec.all_verdicts_pass());
}

TEST_CASE("output root resolution: flag beats environment beats default") {
    CommonOpts opts;
    opts.out_root = "/tmp/explicit";
    CHECK(resolve_out_root(opts) == "/tmp/explicit");
    opts.out_root.clear();
    setenv("RELHARTREE_OUT", "/tmp/fromenv", 1);
    CHECK(resolve_out_root(opts) == "/tmp/fromenv");
    unsetenv("RELHARTREE_OUT");
    CHECK(resolve_out_root(opts) == "runs");
}

TEST_CASE("verify command records stats and verdicts deterministically") {
    TempDir dir;
    CommonOpts opts;
    opts.quiet = true;
    opts.seed = 31337;
    VerifyOpts vopts;
    vopts.samples = 20000;
    vopts.suites = {"null", "cm"};
    opts.out_root = (dir.path / "v1").string();
    std::string d1, d2;
    CHECK(cli_verify(vopts, opts, &d1) == exit_ok);
    opts.out_root = (dir.path / "v2").string();
    CHECK(cli_verify(vopts, opts, &d2) == exit_ok);
    CHECK(slurp(fs::path(d1) / "summary.json") == slurp(fs::path(d2) / "summary.json"));
    const RunRecord rec = from_json(slurp(fs::path(d1) / "summary.json"), "");
    CHECK(rec.all_verdicts_pass());
    CHECK(rec.extra.count("null.c_lower") == 1);
    CHECK(rec.extra.count("cm.dyadic_ratio") == 1);
}
