#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "relhartree/vec2.hpp"

namespace relhartree {

/// Periodic torus discretization of R^2: n x n points on
/// [-extent/2, extent/2)^2 with the frequency lattice xi_k = 2*pi*k/extent,
/// k in {-n/2, ..., n/2-1}.
///
/// Transform convention (continuum-consistent, matching
/// F g(xi) = int e^{-i x.xi} g(x) dx and its (2pi)^-2 inverse):
///   forward  : u_hat(xi_k) = dx^2 * sum_j e^{-i x_j.xi_k} u(x_j)
///   backward : u(x_j) = extent^-2 * sum_k e^{+i x_j.xi_k} u_hat(xi_k)
/// Frequencies are stored in natural transform order (no fftshift); the
/// centered physical origin is absorbed into (-1)^(k1+k2) phase factors.
///
/// Grids are immutable after construction and safe to share across threads;
/// transform plans are created once at construction.
class Grid : public std::enable_shared_from_this<Grid> {
public:
    ~Grid();
    Grid(const Grid&) = delete;
    Grid& operator=(const Grid&) = delete;

    int n() const { return n_; }
    double extent() const { return extent_; }
    double dx() const { return dx_; }
    double dxi() const { return dxi_; }
    /// pi * n / extent
    double nyquist() const { return nyquist_; }
    std::size_t size() const { return std::size_t(n_) * std::size_t(n_); }

    /// Per-axis signed frequency for storage index i in [0, n).
    double freq(int i) const { return freq_[std::size_t(i)]; }
    const std::vector<double>& freq_lattice() const { return freq_; }

    /// Per-axis centered coordinate for storage index j in [0, n).
    double coord(int j) const { return -0.5 * extent_ + dx_ * double(j); }

    /// Signed (xi_x, xi_y) for a flattened index (row-major, idx = iy*n + ix).
    Vec2 freq_at(std::size_t idx) const {
        return {freq_[idx % std::size_t(n_)], freq_[idx / std::size_t(n_)]};
    }
    Vec2 coord_at(std::size_t idx) const {
        return {coord(int(idx % std::size_t(n_))), coord(int(idx / std::size_t(n_)))};
    }

    /// Unnormalized transforms between the physical samples and the
    /// convention above (scaling and centered-origin phases included).
    /// Out-of-place; input is preserved.
    void forward(const std::complex<double>* in, std::complex<double>* out) const;
    void backward(const std::complex<double>* in, std::complex<double>* out) const;

private:
    Grid(int n, double extent);
    friend std::shared_ptr<const Grid> make_grid(int, double);

    int n_;
    double extent_;
    double dx_;
    double dxi_;
    double nyquist_;
    std::vector<double> freq_;
    void* plan_fwd_ = nullptr; // fftw_plan
    void* plan_bwd_ = nullptr;
};

/// Build a grid. n_per_dim must be a power of two >= 8; extent > 0.
std::shared_ptr<const Grid> make_grid(int n_per_dim, double extent);

} // namespace relhartree
