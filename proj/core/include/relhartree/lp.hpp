#pragma once

#include "relhartree/field.hpp"

namespace relhartree {

/// Smooth radial bump chi with chi = 1 on |xi| <= 1 and chi = 0 on
/// |xi| >= 2, realized as psi(r) = h(2-r) / (h(2-r) + h(r-1)),
/// h(s) = exp(-1/s) for s > 0 and 0 otherwise.
namespace lp_bump {

double h(double s);
/// psi(|xi|): 1 on [0,1], smooth monotone transition on [1,2], 0 on [2,inf).
double psi(double r);
inline double chi(Vec2 xi) { return psi(norm(xi)); }
/// chi_L(xi) = chi(xi/L) - chi(2 xi/L); supported on L/2 <= |xi| <= 2L.
double chi_band(Vec2 xi, double scale);
/// rho_N: rho_1 = chi, rho_N = chi_N for N >= 2.
double rho(Vec2 xi, double block);

} // namespace lp_bump

/// Resolvable dyadic band for projections on this grid:
/// [4*pi/extent, nyquist/2].
struct DyadicBand {
    double lo;
    double hi;
    bool contains(double s) const { return s >= lo && s <= hi; }
};
DyadicBand resolvable_band(const Grid& grid);

/// True if s is an exact power of two (2^k, k in Z).
bool is_dyadic(double s);

/// Homogeneous Littlewood-Paley projection P_L: multiply the spectrum by
/// chi_L. L must be dyadic and inside the resolvable band; otherwise a
/// BandRangeError naming the band is raised.
Field lp_project(const Field& f, double scale);

/// Inhomogeneous projection S_N (N in 2^{0,1,2,...}, N <= nyquist/2):
/// S_1 collects everything below frequency ~2, S_N = P_N for N >= 2.
Field lp_project_inhom(const Field& f, double block);

/// Dyadic scales of the resolvable band, ascending.
std::vector<double> resolvable_scales(const Grid& grid);
/// Inhomogeneous blocks {1, 2, 4, ...} up to nyquist/2.
std::vector<double> inhom_blocks(const Grid& grid);

} // namespace relhartree
