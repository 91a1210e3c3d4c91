#ifndef STARFLOW_VEC2_HPP
#define STARFLOW_VEC2_HPP

#include <cmath>

namespace starflow {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
    Vec2& operator*=(double a) { x *= a; y *= a; return *this; }
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double a, Vec2 v) { return {a * v.x, a * v.y}; }
inline Vec2 operator*(Vec2 v, double a) { return {a * v.x, a * v.y}; }
inline Vec2 operator/(Vec2 v, double a) { return {v.x / a, v.y / a}; }
inline Vec2 operator-(Vec2 v) { return {-v.x, -v.y}; }

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline double norm2(Vec2 v) { return v.x * v.x + v.y * v.y; }

/// v rotated by 90 degrees clockwise: (x, y) -> (y, -x).
inline Vec2 rotate_cw(Vec2 v) { return {v.y, -v.x}; }

} // namespace starflow

#endif
