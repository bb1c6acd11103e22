#pragma once

#include <functional>

#include "relhartree/field.hpp"

namespace relhartree {

/// Symbol evaluated at a true signed lattice frequency.
using Symbol = std::function<cplx(Vec2)>;

/// Forward transform: u_hat(xi_k) = dx^2 sum_j e^{-i x_j.xi_k} u(x_j).
/// Input must be physical.
Field to_spectral(const Field& f);

/// Inverse of to_spectral. Input must be spectral.
Field to_physical(const Field& f);

/// Apply a Fourier multiplier m(D): multiply the spectrum pointwise by
/// symbol(xi). Accepts either space and returns a field in the same space
/// as the input. A symbol producing a non-finite value at any lattice point
/// raises NumericError naming the offending xi.
Field apply_multiplier(const Field& f, const Symbol& symbol);

/// Same, with the symbol given as a precomputed table over the flattened
/// lattice (natural order). No finiteness check; hot path for integrators.
Field apply_multiplier_table(const Field& f, const std::vector<cplx>& table);
Field apply_multiplier_table(const Field& f, const std::vector<double>& table);

/// Evaluate a symbol over the whole lattice into a table (with the
/// finiteness check of apply_multiplier).
std::vector<cplx> tabulate_symbol(const Grid& grid, const Symbol& symbol);

} // namespace relhartree
