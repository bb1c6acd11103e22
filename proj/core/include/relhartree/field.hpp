#pragma once

#include <complex>
#include <memory>
#include <utility>
#include <vector>

#include "relhartree/errors.hpp"
#include "relhartree/grid.hpp"

namespace relhartree {

enum class Space { physical, spectral };

using cplx = std::complex<double>;

/// Complex state u on a grid, in physical or frequency representation.
/// Value-semantic; the grid is shared and immutable.
class Field {
public:
    Field(std::shared_ptr<const Grid> grid, Space space)
        : grid_(std::move(grid)), space_(space), values_(grid_->size()) {}
    Field(std::shared_ptr<const Grid> grid, Space space, std::vector<cplx> values)
        : grid_(std::move(grid)), space_(space), values_(std::move(values)) {
        if (values_.size() != grid_->size())
            throw UsageError("Field: values length does not match grid size");
    }

    const Grid& grid() const { return *grid_; }
    const std::shared_ptr<const Grid>& grid_ptr() const { return grid_; }
    Space space() const { return space_; }
    std::size_t size() const { return values_.size(); }

    std::vector<cplx>& values() { return values_; }
    const std::vector<cplx>& values() const { return values_; }
    cplx& operator[](std::size_t i) { return values_[i]; }
    const cplx& operator[](std::size_t i) const { return values_[i]; }

    bool same_grid(const Field& other) const { return grid_.get() == other.grid_.get(); }

private:
    std::shared_ptr<const Grid> grid_;
    Space space_;
    std::vector<cplx> values_;
};

/// Elementwise helpers; operands must share grid and space.
Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(cplx s, const Field& a);
Field pointwise_multiply(const Field& a, const Field& b);
Field conjugate(const Field& a);
/// |a|^2 as a real-valued (zero imaginary part) field.
Field modulus_squared(const Field& a);

bool all_finite(const Field& a);

namespace detail {
void require_same_grid(const Field& a, const Field& b, const char* who);
void require_space(const Field& a, Space s, const char* who);
} // namespace detail

} // namespace relhartree
