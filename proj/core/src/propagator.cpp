#include "relhartree/propagator.hpp"

#include <cmath>

#include "relhartree/spectral.hpp"

namespace relhartree {

Field bessel_power(const Field& f, double s) {
    if (s == 0.0) return f;
    std::vector<double> table(f.size());
    const Grid& g = f.grid();
    for (std::size_t i = 0; i < table.size(); ++i) {
        const double v = std::pow(1.0 + norm2(g.freq_at(i)), 0.5 * s);
        if (!std::isfinite(v)) throw NumericError("bessel_power: overflow in (1+|xi|^2)^(s/2)");
        table[i] = v;
    }
    return apply_multiplier_table(f, table);
}

std::vector<cplx> half_wave_table(const Grid& grid, double t) {
    std::vector<cplx> table(grid.size());
    for (std::size_t i = 0; i < table.size(); ++i) {
        const double phase = t * std::sqrt(1.0 + norm2(grid.freq_at(i)));
        table[i] = cplx(std::cos(phase), std::sin(phase));
    }
    return table;
}

Field half_wave(const Field& f, double t) {
    if (t == 0.0) return f;
    return apply_multiplier_table(f, half_wave_table(f.grid(), t));
}

Field dealias_two_thirds(const Field& f) {
    const int n = f.grid().n();
    const int cut = n / 3;
    std::vector<double> mask(f.size());
    for (std::size_t i = 0; i < mask.size(); ++i) {
        const int ix = int(i % std::size_t(n));
        const int iy = int(i / std::size_t(n));
        const int kx = ix < n / 2 ? ix : ix - n;
        const int ky = iy < n / 2 ? iy : iy - n;
        mask[i] = (std::abs(kx) > cut || std::abs(ky) > cut) ? 0.0 : 1.0;
    }
    return apply_multiplier_table(f, mask);
}

} // namespace relhartree
