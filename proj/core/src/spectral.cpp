#include "relhartree/spectral.hpp"

#include <cmath>
#include <sstream>

namespace relhartree {

Field to_spectral(const Field& f) {
    detail::require_space(f, Space::physical, "to_spectral");
    Field out(f.grid_ptr(), Space::spectral);
    f.grid().forward(f.values().data(), out.values().data());
    return out;
}

Field to_physical(const Field& f) {
    detail::require_space(f, Space::spectral, "to_physical");
    Field out(f.grid_ptr(), Space::physical);
    f.grid().backward(f.values().data(), out.values().data());
    return out;
}

std::vector<cplx> tabulate_symbol(const Grid& grid, const Symbol& symbol) {
    std::vector<cplx> table(grid.size());
    for (std::size_t i = 0; i < table.size(); ++i) {
        const Vec2 xi = grid.freq_at(i);
        const cplx v = symbol(xi);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            std::ostringstream os;
            os << "apply_multiplier: symbol non-finite at xi = (" << xi.x << ", " << xi.y << ")";
            throw NumericError(os.str());
        }
        table[i] = v;
    }
    return table;
}

namespace {

template <typename T>
Field multiply_spectrum(const Field& f, const std::vector<T>& table) {
    if (table.size() != f.size())
        throw UsageError("apply_multiplier_table: table length does not match grid");
    if (f.space() == Space::spectral) {
        Field out(f.grid_ptr(), Space::spectral);
        for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i] * table[i];
        return out;
    }
    Field hat(f.grid_ptr(), Space::spectral);
    f.grid().forward(f.values().data(), hat.values().data());
    for (std::size_t i = 0; i < f.size(); ++i) hat[i] *= table[i];
    Field out(f.grid_ptr(), Space::physical);
    f.grid().backward(hat.values().data(), out.values().data());
    return out;
}

} // namespace

Field apply_multiplier(const Field& f, const Symbol& symbol) {
    return multiply_spectrum(f, tabulate_symbol(f.grid(), symbol));
}

Field apply_multiplier_table(const Field& f, const std::vector<cplx>& table) {
    return multiply_spectrum(f, table);
}

Field apply_multiplier_table(const Field& f, const std::vector<double>& table) {
    return multiply_spectrum(f, table);
}

} // namespace relhartree
