#include "relhartree/field.hpp"

#include <cmath>

namespace relhartree {

namespace detail {

void require_same_grid(const Field& a, const Field& b, const char* who) {
    if (!a.same_grid(b)) throw UsageError(std::string(who) + ": grid mismatch");
    if (a.space() != b.space()) throw UsageError(std::string(who) + ": space mismatch");
}

void require_space(const Field& a, Space s, const char* who) {
    if (a.space() != s)
        throw UsageError(std::string(who) + ": expected " +
                         (s == Space::physical ? "physical" : "spectral") + "-space input");
}

} // namespace detail

Field operator+(const Field& a, const Field& b) {
    detail::require_same_grid(a, b, "operator+");
    Field out(a.grid_ptr(), a.space());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

Field operator-(const Field& a, const Field& b) {
    detail::require_same_grid(a, b, "operator-");
    Field out(a.grid_ptr(), a.space());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

Field operator*(cplx s, const Field& a) {
    Field out(a.grid_ptr(), a.space());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = s * a[i];
    return out;
}

Field pointwise_multiply(const Field& a, const Field& b) {
    detail::require_same_grid(a, b, "pointwise_multiply");
    Field out(a.grid_ptr(), a.space());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
    return out;
}

Field conjugate(const Field& a) {
    Field out(a.grid_ptr(), a.space());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::conj(a[i]);
    return out;
}

Field modulus_squared(const Field& a) {
    Field out(a.grid_ptr(), a.space());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::norm(a[i]);
    return out;
}

bool all_finite(const Field& a) {
    for (const auto& v : a.values())
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

} // namespace relhartree
