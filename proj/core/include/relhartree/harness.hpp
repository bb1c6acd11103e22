#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "relhartree/dynamics.hpp"
#include "relhartree/observables.hpp"

namespace relhartree::harness {

/// Flat dotted-key configuration, canonically ordered.
using ConfigMap = std::map<std::string, std::string>;

/// Parse "key = value" lines ('#' comments). Unknown keys are hard errors
/// when a registry is supplied.
ConfigMap parse_config_text(const std::string& text);
ConfigMap load_config(const std::string& path);

/// Keys accepted by simulation-style configs; unknown keys raise ConfigError.
void validate_known_keys(const ConfigMap& cfg, bool sweep_manifest = false);

/// Build a SimConfig from a validated map (missing required keys raise
/// ConfigError naming the key).
SimConfig build_sim_config(const ConfigMap& cfg);

/// Probe names requested by run.probes (default: mass,energy,sup_norm).
std::vector<std::string> probe_names(const ConfigMap& cfg);

/// Channels to fit (fit.channels; may be empty).
std::vector<std::string> fit_channels(const ConfigMap& cfg);

/// Fit window: [fit.t_min (default 10), fit.t_max (default T_safe)].
std::pair<double, double> fit_window(const ConfigMap& cfg, const SimConfig& sim);

std::string canonical_text(const ConfigMap& cfg);
std::string config_hash(const ConfigMap& cfg); // fnv1a-64, 12 hex chars

// ---------------------------------------------------------------------------

struct Verdict {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
};

struct NamedFit {
    std::string channel;
    DecayFit fit;
};

/// Everything a command produces. summary.json + the CSVs + SVGs are
/// bit-identical given identical config + seed; wall-clock timestamps live
/// in the meta.json sidecar only.
struct RunRecord {
    std::string command;
    ConfigMap config;
    std::string config_hash;
    std::uint64_t seed = 0;
    std::vector<std::string> channels;
    std::string csv_file; // relative to the record directory
    std::vector<NamedFit> fits;
    std::vector<Verdict> verdicts;
    std::vector<std::string> warnings;
    std::map<std::string, std::string> extra; // command-specific scalars
    // meta.json side
    std::string started_at;
    std::string finished_at;
    double elapsed_seconds = 0.0;

    bool all_verdicts_pass() const;
};

std::string to_summary_json(const RunRecord& r);
std::string to_meta_json(const RunRecord& r);
RunRecord from_json(const std::string& summary_json, const std::string& meta_json);

// ---------------------------------------------------------------------------

/// CSV: first column t, then channels in declaration order; header row;
/// shortest-round-trip doubles.
std::string to_csv(const TimeSeries& ts);
void write_csv(const std::string& path, const TimeSeries& ts);
TimeSeries read_csv(const std::string& path);

/// Deterministic log-log SVG, with fitted-slope overlay when a fit is given.
std::string plot_svg(const std::vector<double>& t, const std::vector<double>& y,
                     const std::string& channel, const DecayFit* fit);

// ---------------------------------------------------------------------------

struct CommonOpts {
    std::string out_root;  // empty: $RELHARTREE_OUT or ./runs
    std::uint64_t seed = 12345;
    int jobs = 0;          // 0: hardware concurrency
    bool quiet = false;
};

struct VerifyOpts {
    long samples = 100000;
    double gamma = 1.5;
    std::vector<std::string> suites; // empty: all of null,mderiv,hls,dispersive,cm
};

/// Exit codes: 0 success, 1 verdict failure, 2 configuration error,
/// 3 numeric/blow-up error.
enum ExitCode : int { exit_ok = 0, exit_verdict = 1, exit_config = 2, exit_numeric = 3 };

std::string resolve_out_root(const CommonOpts& opts);

/// The six commands. Each returns an exit code and (except plot) writes an
/// output directory named <command>-<confighash> (or cell-<hash> for sweep
/// cells) under the output root.
int cli_simulate(const std::string& config_path, const CommonOpts& opts,
                 std::string* out_dir = nullptr);
int cli_linear_decay(const std::string& config_path, const std::vector<double>& gammas,
                     const CommonOpts& opts, std::string* out_dir = nullptr);
int cli_scattering(const std::string& config_path, const CommonOpts& opts,
                   std::string* out_dir = nullptr);
int cli_verify(const VerifyOpts& vopts, const CommonOpts& opts, std::string* out_dir = nullptr);
int cli_sweep(const std::string& manifest_path, const CommonOpts& opts,
              std::string* out_dir = nullptr);
int cli_plot(const std::string& record_csv, const std::string& channel,
             const std::string& out_svg, std::optional<double> t_min = {},
             std::optional<double> t_max = {});

} // namespace relhartree::harness
