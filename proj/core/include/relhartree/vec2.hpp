#pragma once

#include <cmath>

namespace relhartree {

/// Plain 2-vector for positions and frequencies.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
    friend Vec2 operator-(Vec2 v) { return {-v.x, -v.y}; }
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm2(Vec2 v) { return dot(v, v); }
inline double norm(Vec2 v) { return std::sqrt(norm2(v)); }

/// Japanese bracket <v> = sqrt(1 + |v|^2).
inline double bracket(Vec2 v) { return std::sqrt(1.0 + norm2(v)); }
inline double bracket(double r) { return std::sqrt(1.0 + r * r); }

} // namespace relhartree
