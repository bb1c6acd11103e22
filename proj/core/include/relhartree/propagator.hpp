#pragma once

#include "relhartree/field.hpp"

namespace relhartree {

/// <D>^s: multiply the spectrum by (1 + |xi|^2)^(s/2). Either space.
Field bessel_power(const Field& f, double s);

/// e^{it<D>}: multiply the spectrum by e^{it<xi>}. Unitary on the discrete
/// L^2 norm; half_wave(f, -t) is the free propagator of the equation.
Field half_wave(const Field& f, double t);

/// Phase table e^{it<xi>} for repeated half-wave application at a fixed t.
std::vector<cplx> half_wave_table(const Grid& grid, double t);

/// Two-thirds dealiasing mask: zero all modes with per-axis index
/// |k| > n/3.
Field dealias_two_thirds(const Field& f);

} // namespace relhartree
