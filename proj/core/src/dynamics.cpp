#include "relhartree/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "relhartree/field_io.hpp"
#include "relhartree/lp.hpp"
#include "relhartree/propagator.hpp"
#include "relhartree/spectral.hpp"

namespace relhartree {

void InitialData::validate() const {
    if (!(amplitude > 0.0)) throw ConfigError("initial: amplitude must be positive");
    if (!(declared_radius > 0.0)) throw ConfigError("initial: declared_radius must be positive");
    if (kind == Kind::custom) {
        if (file.empty()) throw ConfigError("initial: custom kind requires a file");
        return;
    }
    if (!(width > 0.0)) throw ConfigError("initial: width must be positive");
    // |u|^2 = eps^2 exp(-|x|^2/width^2): mass fraction outside R is exp(-R^2/width^2)
    const double outside = std::exp(-declared_radius * declared_radius / (width * width));
    if (outside > 1e-4) {
        std::ostringstream os;
        os << "initial: declared_radius " << declared_radius << " holds only "
           << 100.0 * (1.0 - outside) << "% of the mass (need 99.99%); increase to >= "
           << width * std::sqrt(std::log(1e4));
        throw ConfigError(os.str());
    }
}

void SimConfig::validate() const {
    initial.validate();
    if (dt == 0.0 || !std::isfinite(dt)) throw ConfigError("time: dt must be nonzero");
    if (std::abs(dt) > 0.5)
        throw ConfigError("time: |dt| must be <= 0.5, got " + std::to_string(dt));
    if (!(t_end > 0.0)) throw ConfigError("time: t_end must be positive");
    if (sample_every < 1) throw ConfigError("time: sample_every must be >= 1");
    if (!allow_wrap && 0.5 * extent < initial.declared_radius + t_end + margin()) {
        std::ostringstream os;
        os << "finite-speed safety violated: extent/2 = " << 0.5 * extent
           << " < R0 + t_end + margin = " << initial.declared_radius + t_end + margin()
           << " (T_safe = " << t_safe() << "); shrink t_end, enlarge extent, or set allow_wrap";
        throw ConfigError(os.str());
    }
}

Field make_initial_field(const SimConfig& cfg, const std::shared_ptr<const Grid>& grid) {
    const InitialData& id = cfg.initial;
    if (id.kind == InitialData::Kind::custom) {
        Field f = load_field(id.file);
        if (f.grid().n() != cfg.n || f.grid().extent() != cfg.extent)
            throw ConfigError("initial: custom field grid does not match config grid");
        if (f.space() != Space::physical) f = to_physical(f);
        Field out(grid, Space::physical, f.values());
        for (auto& v : out.values()) v *= id.amplitude;
        return out;
    }
    Field out(grid, Space::physical);
    const double inv2w2 = 1.0 / (2.0 * id.width * id.width);
    const bool carrier = id.kind == InitialData::Kind::modulated_gaussian;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const Vec2 x = grid->coord_at(i);
        double re = id.amplitude * std::exp(-norm2(x) * inv2w2), im = 0.0;
        if (carrier) {
            const double ph = dot(x, id.carrier);
            im = re * std::sin(ph);
            re *= std::cos(ph);
        }
        out[i] = cplx(re, im);
    }
    return out;
}

Engine::Engine(const SimConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
    grid_ = make_grid(cfg_.n, cfg_.extent);
    half_step_table_ = half_wave_table(*grid_, -0.5 * cfg_.dt);
    riesz_table_ = riesz_symbol_table(*grid_, cfg_.potential);
}

SimState Engine::initial_state() const {
    return SimState{0.0, make_initial_field(cfg_, grid_), 0};
}

Field Engine::apply_half_wave_free(const Field& u) const {
    return apply_multiplier_table(u, half_step_table_);
}

namespace {

void require_finite(const Field& u, double t) {
    if (!all_finite(u)) {
        std::ostringstream os;
        os << "blow-up: non-finite values at t = " << t;
        throw BlowUpError(os.str(), t, {});
    }
}

} // namespace

SimState Engine::strang_step(const SimState& s) const {
    if (s.u.grid().n() != cfg_.n || s.u.grid().extent() != cfg_.extent)
        throw UsageError("strang_step: state grid does not match config");
    require_finite(s.u, s.t);
    Field u = apply_half_wave_free(s.u);
    if (cfg_.potential.lambda != 0.0) {
        Field q = modulus_squared(u);
        if (cfg_.dealias == DealiasMode::two_thirds) q = dealias_two_thirds(q);
        const Field v = riesz_convolve_with_table(q, riesz_table_, cfg_.potential);
        // V is real and |u| is invariant under the phase rotation, so this
        // substep is exact; using Re(V) keeps it exactly unitary.
        const double a = cfg_.potential.lambda * cfg_.dt;
        for (std::size_t i = 0; i < u.size(); ++i) {
            const double ph = a * v[i].real();
            u[i] *= cplx(std::cos(ph), std::sin(ph));
        }
    }
    u = apply_half_wave_free(u);
    const double t_next = s.t + cfg_.dt;
    require_finite(u, t_next);
    return SimState{t_next, std::move(u), s.step_count + 1};
}

SimState Engine::rk4_interaction_step(const SimState& s) const {
    if (s.u.grid().n() != cfg_.n || s.u.grid().extent() != cfg_.extent)
        throw UsageError("rk4_interaction_step: state grid does not match config");
    require_finite(s.u, s.t);
    const double t = s.t, dt = cfg_.dt;
    const cplx ilam(0.0, cfg_.potential.lambda);

    // d f/dt = i lambda e^{it<D>} N(u,u,u),  u = e^{-it<D>} f
    auto deriv = [&](double tau, const Field& f) {
        const Field u = half_wave(f, -tau);
        Field q = modulus_squared(u);
        if (cfg_.dealias == DealiasMode::two_thirds) q = dealias_two_thirds(q);
        const Field nl = pointwise_multiply(riesz_convolve_with_table(q, riesz_table_, cfg_.potential), u);
        return ilam * half_wave(nl, tau);
    };

    const Field f0 = half_wave(s.u, t);
    const Field k1 = deriv(t, f0);
    const Field k2 = deriv(t + 0.5 * dt, f0 + cplx(0.5 * dt) * k1);
    const Field k3 = deriv(t + 0.5 * dt, f0 + cplx(0.5 * dt) * k2);
    const Field k4 = deriv(t + dt, f0 + cplx(dt) * k3);
    Field f1 = f0 + cplx(dt / 6.0) * (k1 + cplx(2.0) * k2 + cplx(2.0) * k3 + k4);

    const double t_next = s.t + dt;
    Field u1 = half_wave(f1, -t_next);
    require_finite(u1, t_next);
    return SimState{t_next, std::move(u1), s.step_count + 1};
}

SimState Engine::step(const SimState& s) const {
    return cfg_.integrator == IntegratorKind::strang ? strang_step(s) : rk4_interaction_step(s);
}

RunResult Engine::run(const std::vector<Probe>& probes,
                      const std::vector<double>& snapshot_times) const {
    if (!(cfg_.dt > 0.0)) throw ConfigError("run: dt must be positive");
    const long n_steps = std::lround(cfg_.t_end / cfg_.dt);
    if (n_steps < 1) throw ConfigError("run: t_end shorter than one step");

    std::set<long> snap_steps;
    for (double ts : snapshot_times) {
        const long k = std::clamp(std::lround(ts / cfg_.dt), 0L, n_steps);
        snap_steps.insert(k);
    }

    RunResult out{TimeSeries{}, initial_state(), {}};
    for (const auto& p : probes) out.series.channel_names.push_back(p.name);

    const double initial_sup = sup_norm(out.final_state.u);
    std::vector<double> sup_history;

    auto sample = [&](const SimState& st) {
        std::vector<double> row;
        row.reserve(probes.size());
        for (const auto& p : probes) row.push_back(p.eval(st));
        out.series.push_sample(st.t, row);
    };
    auto snapshot = [&](const SimState& st) {
        if (snap_steps.count(st.step_count))
            out.profile_snapshots.emplace(st.t, interaction_profile(st));
    };

    sample(out.final_state);
    snapshot(out.final_state);

    for (long k = 1; k <= n_steps; ++k) {
        SimState next = [&] {
            try {
                return step(out.final_state);
            } catch (const BlowUpError& e) {
                throw BlowUpWithSeries(e.what(), e.t, sup_history, out.series);
            }
        }();
        next.t = double(k) * cfg_.dt; // nominal step grid, no accumulation drift
        out.final_state = std::move(next);

        const double sup = sup_norm(out.final_state.u);
        sup_history.push_back(sup);
        if (!(sup <= cfg_.blowup_factor * initial_sup)) {
            std::ostringstream os;
            os << "blow-up: sup norm " << sup << " exceeds " << cfg_.blowup_factor
               << " x initial (" << initial_sup << ") at t = " << out.final_state.t;
            throw BlowUpWithSeries(os.str(), out.final_state.t, sup_history, out.series);
        }

        if (k % cfg_.sample_every == 0 || k == n_steps) sample(out.final_state);
        snapshot(out.final_state);
    }
    out.series.validate();
    return out;
}

SimState strang_step(const SimState& s, const SimConfig& cfg) {
    return Engine(cfg).strang_step(s);
}

SimState rk4_interaction_step(const SimState& s, const SimConfig& cfg) {
    return Engine(cfg).rk4_interaction_step(s);
}

RunResult run(const SimConfig& cfg, const std::vector<Probe>& probes,
              const std::vector<double>& snapshot_times) {
    return Engine(cfg).run(probes, snapshot_times);
}

Field interaction_profile(const SimState& s) { return half_wave(s.u, s.t); }

namespace {

bool parse_suffix(const std::string& name, const std::string& prefix, double& value) {
    if (name.rfind(prefix, 0) != 0) return false;
    try {
        std::size_t pos = 0;
        value = std::stod(name.substr(prefix.size()), &pos);
        return pos == name.size() - prefix.size();
    } catch (...) {
        return false;
    }
}

} // namespace

Probe make_probe(const std::string& name, const SimConfig& cfg) {
    if (name == "mass") return {name, [](const SimState& s) { return mass(s.u); }};
    if (name == "energy") {
        const PotentialParams p = cfg.potential;
        return {name, [p](const SimState& s) { return energy(s.u, p); }};
    }
    if (name == "sup_norm") return {name, [](const SimState& s) { return sup_norm(s.u); }};
    if (name == "h1") return {name, [](const SimState& s) { return sobolev_norm(s.u, 1.0); }};
    if (name == "h5") return {name, [](const SimState& s) { return sobolev_norm(s.u, 5.0); }};
    if (name == "h10") return {name, [](const SimState& s) { return sobolev_norm(s.u, 10.0); }};
    if (name == "wkinf7") return {name, [](const SimState& s) { return wkinf_norm(s.u, 7); }};

    double v = 0.0;
    if (parse_suffix(name, "lp_l2_", v))
        return {name, [v](const SimState& s) { return lp_quadratic_norms(s.u, {v}).p_l2.at(v); }};
    if (parse_suffix(name, "lp_linf_", v))
        return {name, [v](const SimState& s) { return lp_quadratic_norms(s.u, {v}).p_linf.at(v); }};
    if (parse_suffix(name, "sn_linf_", v))
        return {name, [v](const SimState& s) { return lp_quadratic_norms(s.u, {}, {v}).s_linf.at(v); }};
    if (parse_suffix(name, "nlterm_l2_", v)) {
        // R^2-faithful Hartree-term norm; lambda excluded.
        const PotentialParams p(v, 1.0, 1.0,
                                ZeroModePolicy::value(riesz_dc_r2_consistent(v, cfg.extent)));
        return {name, [p](const SimState& s) {
                    return mass(hartree_term(s.u, s.u, s.u, p));
                }};
    }
    throw ConfigError("unknown probe '" + name + "'");
}

GaugeReport gauge_invariance_check(const SimConfig& cfg, double tol) {
    SimConfig a = cfg;
    a.potential = PotentialParams(cfg.potential.gamma, cfg.potential.lambda, cfg.potential.mass,
                                  ZeroModePolicy::zero());
    SimConfig b = cfg;
    b.potential = PotentialParams(
        cfg.potential.gamma, cfg.potential.lambda, cfg.potential.mass,
        ZeroModePolicy::value(riesz_dc_r2_consistent(cfg.potential.gamma, cfg.extent)));

    const RunResult ra = run(a, {});
    const RunResult rb = run(b, {});
    const Field& ua = ra.final_state.u;
    const Field& ub = rb.final_state.u;

    GaugeReport rep;
    for (std::size_t i = 0; i < ua.size(); ++i)
        rep.max_abs_modulus_diff =
            std::max(rep.max_abs_modulus_diff, std::abs(std::abs(ua[i]) - std::abs(ub[i])));
    rep.mass_diff = std::abs(mass(ua) - mass(ub));
    rep.sup_diff = std::abs(sup_norm(ua) - sup_norm(ub));
    rep.h1_diff = std::abs(sobolev_norm(ua, 1.0) - sobolev_norm(ub, 1.0));
    rep.pass = rep.max_abs_modulus_diff < tol && rep.mass_diff < tol && rep.sup_diff < tol &&
               rep.h1_diff < tol;
    return rep;
}

} // namespace relhartree
