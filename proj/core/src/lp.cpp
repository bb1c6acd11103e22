#include "relhartree/lp.hpp"

#include <cmath>
#include <sstream>

#include "relhartree/spectral.hpp"

namespace relhartree {

namespace lp_bump {

double h(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

double psi(double r) {
    if (r <= 1.0) return 1.0;
    if (r >= 2.0) return 0.0;
    const double a = h(2.0 - r);
    const double b = h(r - 1.0);
    return a / (a + b);
}

double chi_band(Vec2 xi, double scale) {
    const double r = norm(xi) / scale;
    return psi(r) - psi(2.0 * r);
}

double rho(Vec2 xi, double block) {
    return block <= 1.0 ? chi(xi) : chi_band(xi, block);
}

} // namespace lp_bump

DyadicBand resolvable_band(const Grid& grid) {
    return {4.0 * M_PI / grid.extent(), 0.5 * grid.nyquist()};
}

bool is_dyadic(double s) {
    if (!(s > 0.0) || !std::isfinite(s)) return false;
    int exp = 0;
    return std::frexp(s, &exp) == 0.5;
}

namespace {

void require_in_band(const Grid& grid, double s, const char* who) {
    const DyadicBand band = resolvable_band(grid);
    if (!is_dyadic(s) || !band.contains(s)) {
        std::ostringstream os;
        os << who << ": scale " << s << " outside resolvable dyadic band [" << band.lo << ", "
           << band.hi << "]";
        throw BandRangeError(os.str());
    }
}

} // namespace

Field lp_project(const Field& f, double scale) {
    require_in_band(f.grid(), scale, "lp_project");
    return apply_multiplier(f, [scale](Vec2 xi) { return cplx(lp_bump::chi_band(xi, scale), 0.0); });
}

Field lp_project_inhom(const Field& f, double block) {
    if (block != 1.0) {
        if (!is_dyadic(block) || block < 1.0 || block > 0.5 * f.grid().nyquist()) {
            std::ostringstream os;
            os << "lp_project_inhom: block " << block << " outside [1, " << 0.5 * f.grid().nyquist()
               << "]";
            throw BandRangeError(os.str());
        }
    }
    return apply_multiplier(f, [block](Vec2 xi) { return cplx(lp_bump::rho(xi, block), 0.0); });
}

std::vector<double> resolvable_scales(const Grid& grid) {
    const DyadicBand band = resolvable_band(grid);
    std::vector<double> out;
    double s = std::ldexp(1.0, int(std::ceil(std::log2(band.lo))));
    for (; s <= band.hi; s *= 2.0) out.push_back(s);
    return out;
}

std::vector<double> inhom_blocks(const Grid& grid) {
    std::vector<double> out;
    for (double b = 1.0; b <= 0.5 * grid.nyquist(); b *= 2.0) out.push_back(b);
    return out;
}

} // namespace relhartree
