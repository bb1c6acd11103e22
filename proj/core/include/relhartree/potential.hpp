#pragma once

#include "relhartree/field.hpp"

namespace relhartree {

/// How the singular zero frequency of the |x|^-gamma symbol is handled:
///   zero     : DC multiplier is 0 (output has zero torus mean; the
///              omitted piece only induces a global gauge phase in the flow)
///   value(c) : the kernel is offset by the constant c, i.e. the output is
///              the zero policy's plus c * (dx^2 sum g).
struct ZeroModePolicy {
    enum class Kind { zero, value };
    Kind kind = Kind::zero;
    double c = 0.0;

    static ZeroModePolicy zero() { return {}; }
    static ZeroModePolicy value(double c) { return {Kind::value, c}; }
};

/// Equation parameters: potential |x|^-gamma with 1 < gamma < 2, coupling
/// lambda, mass m (normalized to 1), and the classical Riesz symbol constant
/// c_{2,gamma} = 2^(2-gamma) * pi * Gamma((2-gamma)/2) / Gamma(gamma/2), so
/// that (|x|^-gamma)^ (xi) = c_{2,gamma} |xi|^(gamma-2).
struct PotentialParams {
    double gamma;
    double lambda = 1.0;
    double mass = 1.0;
    ZeroModePolicy zero_mode = ZeroModePolicy::zero();

    PotentialParams(double gamma_, double lambda_ = 1.0, double mass_ = 1.0,
                    ZeroModePolicy policy = ZeroModePolicy::zero());

    double riesz_constant() const { return riesz_constant_; }

private:
    double riesz_constant_;
};

/// The zero-mode constant that makes riesz_convolve match the R^2
/// convolution for data supported well inside the torus: the mean of the
/// kernel truncated to a centered ball of radius extent/2,
/// (1/extent^2) * 2*pi*(extent/2)^(2-gamma)/(2-gamma).
double riesz_dc_r2_consistent(double gamma, double extent);

/// Riesz potential: |x|^-gamma * g, computed spectrally as multiplication
/// by c_{2,gamma} |xi|^(gamma-2) with the zero mode handled per policy.
/// Input must be physical-space; output is physical-space (real up to
/// roundoff when g is real).
Field riesz_convolve(const Field& g, const PotentialParams& p);

/// Precomputed Riesz symbol table for repeated application on one grid.
/// The DC entry is 0; the value(c) offset is applied separately.
std::vector<double> riesz_symbol_table(const Grid& grid, const PotentialParams& p);
Field riesz_convolve_with_table(const Field& g, const std::vector<double>& table,
                                const PotentialParams& p);

/// Hartree trilinear term N_gamma(u,v,w) = (|x|^-gamma * (u conj(v))) w.
/// All arguments physical-space on the same grid. The coupling lambda is
/// not included.
Field hartree_term(const Field& u, const Field& v, const Field& w, const PotentialParams& p);

} // namespace relhartree
