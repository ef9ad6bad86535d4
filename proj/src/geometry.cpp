#include "decmg/geometry.hpp"

namespace decmg {

Vec3 circumcenter(const Vec3& p0, const Vec3& p1, const Vec3& p2) {
    const Vec3 a = p1 - p0;
    const Vec3 b = p2 - p0;
    const Vec3 n = a.cross(b);
    const double n2 = n.norm2();
    // |n| = |a||b| sin(angle); treat near-collinear input as degenerate.
    if (n2 <= 1e-28 * a.norm2() * b.norm2()) {
        throw std::runtime_error("circumcenter: degenerate triangle");
    }
    const Vec3 num = a.norm2() * b.cross(n) + b.norm2() * n.cross(a);
    return p0 + num / (2.0 * n2);
}

} // namespace decmg
