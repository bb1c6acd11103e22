#pragma once

#include <map>
#include <string>
#include <vector>

#include "relhartree/field.hpp"
#include "relhartree/potential.hpp"

namespace relhartree {

/// M(u) = ||u||_{L^2}, dx-weighted. Accepts either space (Parseval).
double mass(const Field& u);

/// Conserved energy of the flow du/dt = -i<D>u + i lambda (|x|^-gamma * |u|^2) u:
/// E(u) = 1/2 int conj(u) <D> u dx - (lambda/4) int (|x|^-gamma * |u|^2) |u|^2 dx.
double energy(const Field& u, const PotentialParams& p);

/// ||<xi>^s u_hat||_2 * (2pi)^-1 (equals the physical L^2 norm at s = 0).
double sobolev_norm(const Field& u, double s);

double sup_norm(const Field& u);

/// dx-weighted L^1 norm.
double l1_norm(const Field& u);

/// W^{k,inf} proxy: ||<D>^k u||_inf.
double wkinf_norm(const Field& u, int k);

/// H^s norm of <x>^weight_power * f with x the centered torus coordinate.
/// weight_power in {1,2}. If more than boundary_tol of the squared mass sits
/// outside |x| <= extent/4 a contamination warning is recorded via
/// `contaminated` (when non-null) and stderr.
double weighted_profile_norm(const Field& f, int weight_power, double s,
                             bool* contaminated = nullptr);

/// Fraction of the squared mass outside |x| <= extent/4.
double boundary_mass_fraction(const Field& f);

/// Localized norms of the quadratic density |u|^2.
struct LpQuadraticNorms {
    std::map<double, double> p_l2;   // L -> ||P_L(|u|^2)||_2
    std::map<double, double> p_linf; // L -> ||P_L(|u|^2)||_inf
    std::map<double, double> s_linf; // N -> ||S_N(|u|^2)||_inf
};
LpQuadraticNorms lp_quadratic_norms(const Field& u, const std::vector<double>& scales,
                                    const std::vector<double>& blocks = {});

/// Sampled observables over time. Channels share the times axis.
struct TimeSeries {
    std::vector<double> times;
    std::vector<std::string> channel_names;
    std::vector<std::vector<double>> channels;
    std::map<std::string, std::string> metadata; // config echo

    std::size_t channel_index(const std::string& name) const;
    const std::vector<double>& channel(const std::string& name) const;
    void push_sample(double t, const std::vector<double>& values);
    void validate() const; // lengths match, times strictly increasing
};

/// Fitted power law y ~ C t^p over a window, by least squares on
/// (log t, log y).
struct DecayFit {
    double exponent = 0.0;
    double log_amplitude = 0.0;
    double r_squared = 0.0;
    double t_min = 0.0;
    double t_max = 0.0;
    int n_samples = 0;
};

/// Fit a channel over (t_min, t_max), samples strictly inside the window.
/// Requires >= 8 samples and positive values; otherwise FitError naming the
/// first offending sample.
DecayFit fit_decay(const TimeSeries& ts, const std::string& channel, double t_min, double t_max);
DecayFit fit_decay(const std::vector<double>& t, const std::vector<double>& y, double t_min,
                   double t_max);

/// Scattering diagnostics from interaction-profile snapshots f(t) (keyed by
/// time, must include t_end). Produces, for snapshot times t <= t_end/2:
///   to_final_h<s>        = ||f(t) - f(t_end)||_{H^s}
///   cauchy_h<s>          = ||f(2t) - f(t)||_{H^s}      (when 2t is a snapshot)
///   cauchy_weighted_h<ws> = ||<x>^2 (f(2t) - f(t))||_{H^ws}
struct ScatteringParams {
    double s = 1.0;         // plain Sobolev index
    double weighted_s = 5.0; // weighted-channel Sobolev index (H^10 desk proxy)
};
TimeSeries scattering_diagnostics(const std::map<double, Field>& profile_snapshots, double t_end,
                                  const ScatteringParams& params = {});

} // namespace relhartree
