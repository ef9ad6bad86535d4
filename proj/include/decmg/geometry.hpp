#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace decmg {

/// 3-D point/vector with the handful of operations the mesh code needs.
struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3() = default;
    Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm2() const { return dot(*this); }
    double norm() const { return std::sqrt(norm2()); }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline Vec3 midpoint(const Vec3& a, const Vec3& b) { return (a + b) * 0.5; }

/// Circumcenter of the triangle (p0, p1, p2), in its supporting plane.
/// Throws on (near-)collinear input.
Vec3 circumcenter(const Vec3& p0, const Vec3& p1, const Vec3& p2);

/// Unsigned area of a 3-D triangle.
inline double triangle_area(const Vec3& p0, const Vec3& p1, const Vec3& p2) {
    return 0.5 * (p1 - p0).cross(p2 - p0).norm();
}

} // namespace decmg
