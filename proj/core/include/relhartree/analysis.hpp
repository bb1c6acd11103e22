#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "relhartree/field.hpp"

namespace relhartree::analysis {

struct PhasePoint {
    Vec2 xi{};
    Vec2 eta{};
    Vec2 sigma{};
};

/// phi(xi, eta) = <xi> - <xi - eta>.
double phase(const PhasePoint& p);

/// grad_xi phi = xi/<xi> - (xi-eta)/<xi-eta>; vanishes at eta = 0
/// (the null structure).
Vec2 grad_xi_phase(const PhasePoint& p);

/// m(eta, sigma) = d / |d|^2 with d = grad_sigma(<sigma+eta> - <sigma>).
/// eta = 0 raises NumericError (the denominator vanishes only there).
Vec2 resonance_multiplier(const PhasePoint& p);
/// The gradient d itself.
Vec2 sigma_gradient(const PhasePoint& p);

/// Outcome of a sampling-based inequality check. Constants are fitted as
/// the extreme quotients over the sample set, so violations counts samples
/// failing at those fitted constants (zero by construction when both
/// constants come from the same sweep; nonzero signals non-finite samples).
struct SampleStats {
    long n_samples = 0;
    long violations = 0;
    double worst_ratio = 0.0;
    double c_lower = 0.0;
    double c_upper = 0.0;
};

/// Magnitudes log-uniform in [mag_lo, mag_hi], directions uniform.
struct SamplerSpec {
    double mag_lo = 1e-3;
    double mag_hi = 1e3;
    std::uint64_t seed = 1;
};

/// Two-sided bound on |d| = |(eta+sigma)/<eta+sigma> - sigma/<sigma>|:
///   |eta| / (max<.> min<.>^2)  <~  |d|  <~  |eta| / max<.>
/// c_lower = min |d| / lower_shape, c_upper = max |d| / upper_shape.
SampleStats verify_null_structure(const SamplerSpec& spec, long n);

/// |d^alpha_sigma m| <~ |eta|^-1 max<.> min<.>^(2+|alpha|), central finite
/// differences with step h = 1e-5 (1+|sigma|), orders 0..max_order (<= 2).
/// c_upper = max quotient across samples and orders.
SampleStats verify_m_derivatives(int max_order, const SamplerSpec& spec, long n);

/// ||x|^-gamma * |u|^2|_inf <= (2pi/(2-gamma) + 1) ||u||_2^(2-gamma) ||u||_inf^gamma
/// over seeded random smooth localized fields, with the convolution
/// evaluated R^2-consistently. violations counted against the explicit
/// constant; worst_ratio = max LHS/RHS.
SampleStats verify_hls(double gamma, long n_fields, std::uint64_t seed, int grid_n = 128,
                       double extent = 32.0);

/// Frequency-localized dispersive check
///   ||e^{it<D>} S_N phi||_inf <= C <t>^-1 N^2 ||phi||_1.
struct DispersiveReport {
    SampleStats stats;                       // worst_ratio = sup ratio; c_lower/c_upper = exponent range
    std::map<double, std::vector<double>> ratios;    // N -> ratio per t
    std::map<double, double> exponents;              // N -> fitted large-t decay exponent
    std::vector<double> times;
};
DispersiveReport verify_dispersive(const std::vector<double>& blocks,
                                   const std::vector<double>& times, const Field& datum,
                                   double fit_t_min = 8.0);

/// Default criterion-scale dispersive run: Gaussian datum (width 0.5) on
/// n = 1024, extent = 192; N in {1,2,4,8}, t in {1..64}.
DispersiveReport verify_dispersive_default();

/// Discrete estimate of C(m) = || iint m(a,b) e^{ix.a} e^{iy.b} da db ||_{L^1_{x,y}}:
/// the symbol is sampled on [-half_a, half_a]^2 x [-half_b, half_b]^2 with
/// n_a^2 x n_b^2 points (capped at 2^24 total), transformed by nested
/// centered DFTs, and the L^1 norm is taken over the conjugate periods.
/// An estimate only: no convergence guarantee is claimed.
struct CmGrid {
    int n_a = 16;
    int n_b = 16;
    double half_a = 2.0;
    double half_b = 2.0;
};
using Symbol4 = std::function<cplx(Vec2, Vec2)>;
double estimate_cm_norm(const Symbol4& symbol, const CmGrid& grid);

/// 2D building block: || int a(xi) e^{ix.xi} dxi ||_{L^1_x} on the same
/// lattice convention (independent path used by the separability oracle).
double estimate_l1_inverse_2d(const std::function<cplx(Vec2)>& symbol, int n, double half);

/// Dyadically localized second-order resonance symbol
///   div_sigma( m(eta, sigma) * div_sigma m(eta, sigma) )
///     * chi_L(eta) * rho_N1(eta+sigma) * rho_N2(sigma)
/// (the multiplier produced by integrating the quadratic density by parts
/// twice); derivatives by central differences. Its C(.) norm scales like
/// L^-2 across the dyadic family.
cplx m1_dyadic_symbol(Vec2 eta, Vec2 sigma, double L, double n1, double n2);

} // namespace relhartree::analysis
