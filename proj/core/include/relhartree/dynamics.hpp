#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "relhartree/field.hpp"
#include "relhartree/observables.hpp"
#include "relhartree/potential.hpp"

namespace relhartree {

struct InitialData {
    enum class Kind { gaussian, modulated_gaussian, custom };
    Kind kind = Kind::gaussian;
    double width = 1.0;
    Vec2 carrier{0.0, 0.0};    // modulated_gaussian only
    double amplitude = 0.01;   // epsilon
    double declared_radius = 4.0;
    std::string file;          // custom only

    /// Throws ConfigError on invalid parameters; for gaussian kinds checks
    /// that 99.99% of the mass sits inside declared_radius.
    void validate() const;
};

enum class IntegratorKind { strang, rk4_interaction };
enum class DealiasMode { none, two_thirds };

struct SimConfig {
    int n = 256;
    double extent = 64.0;
    PotentialParams potential{1.5};
    InitialData initial;
    double dt = 0.05;
    double t_end = 10.0;
    int sample_every = 1;
    IntegratorKind integrator = IntegratorKind::strang;
    DealiasMode dealias = DealiasMode::none;
    /// Permit t_end past the finite-speed horizon (conservation-only runs);
    /// decay fits on such runs are wrap-around-polluted.
    bool allow_wrap = false;
    double blowup_factor = 1e6;

    double margin() const { return extent / 8.0; }
    /// Horizon before wrap-around can pollute observables:
    /// extent/2 - R0 - margin (group speed |xi|/<xi> < 1).
    double t_safe() const { return 0.5 * extent - initial.declared_radius - margin(); }
    void validate() const;
};

struct SimState {
    double t = 0.0;
    Field u;
    long step_count = 0;
};

/// Named scalar observable sampled during a run.
struct Probe {
    std::string name;
    std::function<double(const SimState&)> eval;
};

/// Standard probes: mass, energy, sup_norm, h1/h5/h10, wkinf7,
/// lp_l2_<L> / lp_linf_<L>, sn_linf_<N>, nlterm_l2_<gamma>.
/// Unknown names raise ConfigError.
Probe make_probe(const std::string& name, const SimConfig& cfg);

struct RunResult {
    TimeSeries series;
    SimState final_state;
    /// Interaction-picture profiles f(t) = e^{it<D>} u(t) at requested times.
    std::map<double, Field> profile_snapshots;
};

/// Blow-up carrying whatever was already sampled.
struct BlowUpWithSeries : BlowUpError {
    BlowUpWithSeries(const std::string& msg, double t, std::vector<double> hist, TimeSeries partial)
        : BlowUpError(msg, t, std::move(hist)), partial_series(std::move(partial)) {}
    TimeSeries partial_series;
};

/// Caches the grid and multiplier tables for one configuration.
class Engine {
public:
    explicit Engine(const SimConfig& cfg);

    const SimConfig& config() const { return cfg_; }
    const std::shared_ptr<const Grid>& grid() const { return grid_; }

    SimState initial_state() const;
    SimState step(const SimState& s) const; // dispatches on cfg.integrator
    SimState strang_step(const SimState& s) const;
    SimState rk4_interaction_step(const SimState& s) const;

    /// Integrate to t_end, sampling every sample_every steps (including
    /// t = 0 and the final time). Profile snapshots are taken at the given
    /// times, each rounded to the nearest step. Deterministic given cfg.
    RunResult run(const std::vector<Probe>& probes,
                  const std::vector<double>& snapshot_times = {}) const;

private:
    SimConfig cfg_;
    std::shared_ptr<const Grid> grid_;
    std::vector<cplx> half_step_table_; // e^{-i dt/2 <xi>}
    std::vector<double> riesz_table_;
    Field apply_half_wave_free(const Field& u) const;
    void check_state(const SimState& s, double initial_sup,
                     std::vector<double>& sup_history) const;
};

/// Convenience wrappers matching the operation-level contracts (each builds
/// a transient Engine; use Engine directly in loops).
Field make_initial_field(const SimConfig& cfg, const std::shared_ptr<const Grid>& grid);
SimState strang_step(const SimState& s, const SimConfig& cfg);
SimState rk4_interaction_step(const SimState& s, const SimConfig& cfg);
RunResult run(const SimConfig& cfg, const std::vector<Probe>& probes,
              const std::vector<double>& snapshot_times = {});

/// f(t) = e^{it<D>} u(t).
Field interaction_profile(const SimState& s);

/// Runs cfg twice, with zero-mode policy {zero} and {value(c_r2)}; the two
/// flows must agree in modulus pointwise and in all norms (the DC piece is
/// a pure gauge). Returns the measured discrepancies.
struct GaugeReport {
    double max_abs_modulus_diff = 0.0;
    double mass_diff = 0.0;
    double sup_diff = 0.0;
    double h1_diff = 0.0;
    bool pass = false;
};
GaugeReport gauge_invariance_check(const SimConfig& cfg, double tol = 1e-8);

} // namespace relhartree
