#include "relhartree/potential.hpp"

#include <cmath>

#include "relhartree/spectral.hpp"

namespace relhartree {

PotentialParams::PotentialParams(double gamma_, double lambda_, double mass_,
                                 ZeroModePolicy policy)
    : gamma(gamma_), lambda(lambda_), mass(mass_), zero_mode(policy) {
    if (!(gamma > 1.0 && gamma < 2.0))
        throw ConfigError("PotentialParams: gamma must lie in (1,2), got " + std::to_string(gamma));
    if (mass != 1.0)
        throw ConfigError("PotentialParams: mass is normalized to 1");
    riesz_constant_ =
        std::pow(2.0, 2.0 - gamma) * M_PI * std::tgamma(0.5 * (2.0 - gamma)) / std::tgamma(0.5 * gamma);
    if (!(riesz_constant_ > 0.0) || !std::isfinite(riesz_constant_))
        throw NumericError("PotentialParams: invalid Riesz constant");
}

double riesz_dc_r2_consistent(double gamma, double extent) {
    const double r = 0.5 * extent;
    return 2.0 * M_PI * std::pow(r, 2.0 - gamma) / ((2.0 - gamma) * extent * extent);
}

std::vector<double> riesz_symbol_table(const Grid& grid, const PotentialParams& p) {
    std::vector<double> table(grid.size());
    const double c = p.riesz_constant();
    const double e = 0.5 * (p.gamma - 2.0);
    for (std::size_t i = 0; i < table.size(); ++i) {
        const double r2 = norm2(grid.freq_at(i));
        table[i] = r2 > 0.0 ? c * std::pow(r2, e) : 0.0;
    }
    return table;
}

Field riesz_convolve_with_table(const Field& g, const std::vector<double>& table,
                                const PotentialParams& p) {
    detail::require_space(g, Space::physical, "riesz_convolve");
    if (!all_finite(g)) throw NumericError("riesz_convolve: non-finite input");

    Field hat(g.grid_ptr(), Space::spectral);
    g.grid().forward(g.values().data(), hat.values().data());
    const cplx dc = hat[0]; // g_hat(0) = dx^2 sum g
    for (std::size_t i = 0; i < hat.size(); ++i) hat[i] *= table[i];
    Field out(g.grid_ptr(), Space::physical);
    g.grid().backward(hat.values().data(), out.values().data());

    if (p.zero_mode.kind == ZeroModePolicy::Kind::value) {
        const cplx shift = p.zero_mode.c * dc;
        for (auto& v : out.values()) v += shift;
    }
    return out;
}

Field riesz_convolve(const Field& g, const PotentialParams& p) {
    return riesz_convolve_with_table(g, riesz_symbol_table(g.grid(), p), p);
}

Field hartree_term(const Field& u, const Field& v, const Field& w, const PotentialParams& p) {
    detail::require_same_grid(u, v, "hartree_term");
    detail::require_same_grid(u, w, "hartree_term");
    detail::require_space(u, Space::physical, "hartree_term");
    Field density = pointwise_multiply(u, conjugate(v));
    return pointwise_multiply(riesz_convolve(density, p), w);
}

} // namespace relhartree
