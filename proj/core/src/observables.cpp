#include "relhartree/observables.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>

#include "relhartree/lp.hpp"
#include "relhartree/propagator.hpp"
#include "relhartree/spectral.hpp"

namespace relhartree {

namespace {

double l2_physical(const Field& u) {
    double s = 0.0;
    for (const auto& v : u.values()) s += std::norm(v);
    return u.grid().dx() * std::sqrt(s);
}

double l2_spectral(const Field& u) {
    double s = 0.0;
    for (const auto& v : u.values()) s += std::norm(v);
    return u.grid().dxi() * std::sqrt(s) / (2.0 * M_PI);
}

} // namespace

double mass(const Field& u) {
    return u.space() == Space::physical ? l2_physical(u) : l2_spectral(u);
}

double energy(const Field& u, const PotentialParams& p) {
    const Field phys = u.space() == Space::physical ? u : to_physical(u);
    const Field hat = to_spectral(phys);
    const Grid& g = u.grid();
    double kinetic = 0.0;
    for (std::size_t i = 0; i < hat.size(); ++i)
        kinetic += std::sqrt(1.0 + norm2(g.freq_at(i))) * std::norm(hat[i]);
    kinetic *= 0.5 * g.dxi() * g.dxi() / (4.0 * M_PI * M_PI);

    // interaction term with the sign conserved by the evolution form
    // du/dt = -i<D>u + i lambda (K*|u|^2) u
    const Field density = modulus_squared(phys);
    const Field v = riesz_convolve(density, p);
    double potential = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) potential += v[i].real() * density[i].real();
    potential *= 0.25 * p.lambda * g.dx() * g.dx();
    return kinetic - potential;
}

double sobolev_norm(const Field& u, double s) {
    const Field hat = u.space() == Space::spectral ? u : to_spectral(u);
    const Grid& g = u.grid();
    double acc = 0.0;
    for (std::size_t i = 0; i < hat.size(); ++i)
        acc += std::pow(1.0 + norm2(g.freq_at(i)), s) * std::norm(hat[i]);
    return g.dxi() * std::sqrt(acc) / (2.0 * M_PI);
}

double sup_norm(const Field& u) {
    const Field phys = u.space() == Space::physical ? u : to_physical(u);
    double m = 0.0;
    for (const auto& v : phys.values()) m = std::max(m, std::abs(v));
    return m;
}

double l1_norm(const Field& u) {
    const Field phys = u.space() == Space::physical ? u : to_physical(u);
    double s = 0.0;
    for (const auto& v : phys.values()) s += std::abs(v);
    return s * phys.grid().dx() * phys.grid().dx();
}

double wkinf_norm(const Field& u, int k) {
    if (k == 0) return sup_norm(u);
    return sup_norm(bessel_power(u, double(k)));
}

double boundary_mass_fraction(const Field& f) {
    const Field phys = f.space() == Space::physical ? f : to_physical(f);
    const Grid& g = phys.grid();
    const double r = 0.25 * g.extent();
    double outside = 0.0, total = 0.0;
    for (std::size_t i = 0; i < phys.size(); ++i) {
        const double m2 = std::norm(phys[i]);
        total += m2;
        const Vec2 x = g.coord_at(i);
        if (std::abs(x.x) > r || std::abs(x.y) > r) outside += m2;
    }
    return total > 0.0 ? outside / total : 0.0;
}

double weighted_profile_norm(const Field& f, int weight_power, double s, bool* contaminated) {
    if (weight_power != 1 && weight_power != 2)
        throw UsageError("weighted_profile_norm: weight_power must be 1 or 2");
    const Field phys = f.space() == Space::physical ? f : to_physical(f);
    const double fraction = boundary_mass_fraction(phys);
    const bool bad = fraction > 1e-6;
    if (contaminated) *contaminated = bad;
    if (bad)
        std::cerr << "[relhartree] warning: weighted norm with boundary mass fraction " << fraction
                  << "\n";
    const Grid& g = phys.grid();
    Field weighted(phys.grid_ptr(), Space::physical);
    for (std::size_t i = 0; i < phys.size(); ++i) {
        const double w = std::pow(1.0 + norm2(g.coord_at(i)), 0.5 * weight_power);
        weighted[i] = w * phys[i];
    }
    return sobolev_norm(weighted, s);
}

LpQuadraticNorms lp_quadratic_norms(const Field& u, const std::vector<double>& scales,
                                    const std::vector<double>& blocks) {
    const Field phys = u.space() == Space::physical ? u : to_physical(u);
    const Field q = modulus_squared(phys);
    const Field qhat = to_spectral(q);
    LpQuadraticNorms out;
    for (double L : scales) {
        Field proj = lp_project(qhat, L);
        out.p_l2[L] = mass(proj); // spectral-side L^2 via Parseval
        out.p_linf[L] = sup_norm(to_physical(proj));
    }
    for (double N : blocks) out.s_linf[N] = sup_norm(to_physical(lp_project_inhom(qhat, N)));
    return out;
}

std::size_t TimeSeries::channel_index(const std::string& name) const {
    for (std::size_t i = 0; i < channel_names.size(); ++i)
        if (channel_names[i] == name) return i;
    throw UsageError("TimeSeries: no channel named '" + name + "'");
}

const std::vector<double>& TimeSeries::channel(const std::string& name) const {
    return channels[channel_index(name)];
}

void TimeSeries::push_sample(double t, const std::vector<double>& values) {
    if (values.size() != channel_names.size())
        throw UsageError("TimeSeries: sample width does not match channel count");
    if (!times.empty() && t <= times.back())
        throw UsageError("TimeSeries: times must be strictly increasing");
    times.push_back(t);
    if (channels.size() != channel_names.size()) channels.resize(channel_names.size());
    for (std::size_t i = 0; i < values.size(); ++i) channels[i].push_back(values[i]);
}

void TimeSeries::validate() const {
    if (channels.size() != channel_names.size())
        throw UsageError("TimeSeries: channel/ name count mismatch");
    for (const auto& c : channels)
        if (c.size() != times.size()) throw UsageError("TimeSeries: channel length mismatch");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1])) throw UsageError("TimeSeries: times not increasing");
}

DecayFit fit_decay(const std::vector<double>& t, const std::vector<double>& y, double t_min,
                   double t_max) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!(t[i] > t_min && t[i] < t_max)) continue;
        if (!(y[i] > 0.0)) {
            std::ostringstream os;
            os << "fit_decay: non-positive value " << y[i] << " at t = " << t[i];
            throw FitError(os.str());
        }
        lx.push_back(std::log(t[i]));
        ly.push_back(std::log(y[i]));
    }
    const int n = int(lx.size());
    if (n < 8) {
        std::ostringstream os;
        os << "fit_decay: need >= 8 samples strictly inside (" << t_min << ", " << t_max
           << "), have " << n;
        throw FitError(os.str());
    }
    double sx = 0, sy = 0;
    for (int i = 0; i < n; ++i) {
        sx += lx[std::size_t(i)];
        sy += ly[std::size_t(i)];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (int i = 0; i < n; ++i) {
        const double dxi = lx[std::size_t(i)] - mx;
        const double dyi = ly[std::size_t(i)] - my;
        sxx += dxi * dxi;
        sxy += dxi * dyi;
        syy += dyi * dyi;
    }
    DecayFit fit;
    fit.exponent = sxy / sxx;
    fit.log_amplitude = my - fit.exponent * mx;
    fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    fit.t_min = t_min;
    fit.t_max = t_max;
    fit.n_samples = n;
    return fit;
}

DecayFit fit_decay(const TimeSeries& ts, const std::string& channel, double t_min, double t_max) {
    return fit_decay(ts.times, ts.channel(channel), t_min, t_max);
}

TimeSeries scattering_diagnostics(const std::map<double, Field>& snaps, double t_end,
                                  const ScatteringParams& params) {
    auto it_end = snaps.find(t_end);
    if (it_end == snaps.end())
        throw UsageError("scattering_diagnostics: snapshots must include t_end");
    const Field& f_end = it_end->second;

    auto tag = [](double s) {
        std::ostringstream os;
        os << (s == std::floor(s) ? int(s) : s);
        return os.str();
    };
    TimeSeries out;
    out.channel_names = {"to_final_h" + tag(params.s), "cauchy_h" + tag(params.s),
                         "cauchy_weighted_h" + tag(params.weighted_s)};

    const double step_tol = 1e-9;
    for (const auto& [t, f] : snaps) {
        if (t <= 0.0 || t > 0.5 * t_end + step_tol) continue;
        // the Cauchy channels need a snapshot at 2t
        auto it2 = snaps.lower_bound(2.0 * t - step_tol * (1.0 + 2.0 * t));
        if (it2 == snaps.end() || std::abs(it2->first - 2.0 * t) > step_tol * (1.0 + 2.0 * t))
            continue;
        const Field diff_final = f - f_end;
        const Field diff_pair = it2->second - f;
        out.push_sample(t, {sobolev_norm(diff_final, params.s), sobolev_norm(diff_pair, params.s),
                            weighted_profile_norm(diff_pair, 2, params.weighted_s)});
    }
    return out;
}

} // namespace relhartree
