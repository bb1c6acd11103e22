#include "relhartree/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

#include "relhartree/errors.hpp"

namespace relhartree {

namespace {
// FFTW planning is not thread-safe; execution of existing plans is.
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }
} // namespace

Grid::Grid(int n, double extent)
    : n_(n),
      extent_(extent),
      dx_(extent / double(n)),
      dxi_(2.0 * M_PI / extent),
      nyquist_(M_PI * double(n) / extent) {
    freq_.resize(std::size_t(n_));
    for (int i = 0; i < n_; ++i) {
        const int k = (i < n_ / 2) ? i : i - n_;
        freq_[std::size_t(i)] = dxi_ * double(k);
    }

    std::lock_guard<std::mutex> lock(plan_mutex());
    // Planned once over scratch buffers; executed on caller arrays via the
    // new-array interface. FFTW_UNALIGNED keeps the plan valid for any
    // allocation; FFTW_ESTIMATE keeps plan selection deterministic.
    std::vector<std::complex<double>> a(size()), b(size());
    auto* ap = reinterpret_cast<fftw_complex*>(a.data());
    auto* bp = reinterpret_cast<fftw_complex*>(b.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    plan_fwd_ = fftw_plan_dft_2d(n_, n_, ap, bp, FFTW_FORWARD, flags);
    plan_bwd_ = fftw_plan_dft_2d(n_, n_, ap, bp, FFTW_BACKWARD, flags);
    if (!plan_fwd_ || !plan_bwd_) throw NumericError("Grid: FFTW planning failed");
}

Grid::~Grid() {
    std::lock_guard<std::mutex> lock(plan_mutex());
    if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    if (plan_bwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
}

void Grid::forward(const std::complex<double>* in, std::complex<double>* out) const {
    auto* ip = reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in));
    auto* op = reinterpret_cast<fftw_complex*>(out);
    fftw_execute_dft(static_cast<fftw_plan>(plan_fwd_), ip, op);
    // u_hat(xi_k) = dx^2 (-1)^(k1+k2) DFT_k  (centered origin x_0 = -extent/2)
    const double scale = dx_ * dx_;
    const std::size_t n = std::size_t(n_);
    for (std::size_t iy = 0; iy < n; ++iy) {
        const double sy = (iy & 1) ? -scale : scale;
        std::complex<double>* row = out + iy * n;
        for (std::size_t ix = 0; ix < n; ++ix) row[ix] *= (ix & 1) ? -sy : sy;
    }
}

void Grid::backward(const std::complex<double>* in, std::complex<double>* out) const {
    const std::size_t n = std::size_t(n_);
    std::vector<std::complex<double>> tmp(size());
    const double scale = 1.0 / (extent_ * extent_);
    for (std::size_t iy = 0; iy < n; ++iy) {
        const double sy = (iy & 1) ? -scale : scale;
        const std::complex<double>* row = in + iy * n;
        std::complex<double>* trow = tmp.data() + iy * n;
        for (std::size_t ix = 0; ix < n; ++ix) trow[ix] = row[ix] * ((ix & 1) ? -sy : sy);
    }
    auto* ip = reinterpret_cast<fftw_complex*>(tmp.data());
    auto* op = reinterpret_cast<fftw_complex*>(out);
    fftw_execute_dft(static_cast<fftw_plan>(plan_bwd_), ip, op);
}

std::shared_ptr<const Grid> make_grid(int n_per_dim, double extent) {
    if (!is_pow2(n_per_dim) || n_per_dim < 8)
        throw ConfigError("make_grid: n_per_dim must be a power of two >= 8, got " +
                          std::to_string(n_per_dim));
    if (!(extent > 0.0) || !std::isfinite(extent))
        throw ConfigError("make_grid: extent must be positive, got " + std::to_string(extent));
    return std::shared_ptr<const Grid>(new Grid(n_per_dim, extent));
}

} // namespace relhartree
