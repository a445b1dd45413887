#pragma once

#include <array>
#include <cmath>
#include <ostream>

namespace billiards {

// Cartesian vector. 2-D geometry keeps z == 0 throughout, so norms and dot
// products are dimension-agnostic; the owning Domain knows its dimension.
struct Vec {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec() = default;
    constexpr Vec(double x_, double y_) : x(x_), y(y_) {}
    constexpr Vec(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    constexpr Vec operator+(const Vec& o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec operator-(const Vec& o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr Vec operator/(double s) const { return {x / s, y / s, z / s}; }
    constexpr Vec operator-() const { return {-x, -y, -z}; }
    Vec& operator+=(const Vec& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec& operator-=(const Vec& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }

    constexpr double dot(const Vec& o) const { return x * o.x + y * o.y + z * o.z; }
    constexpr Vec cross(const Vec& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(dot(*this)); }
    constexpr double norm2() const { return dot(*this); }
    Vec normalized() const { return *this / norm(); }
};

constexpr Vec operator*(double s, const Vec& v) { return v * s; }

inline double distance(const Vec& a, const Vec& b) { return (a - b).norm(); }

// 2-D perpendicular (rotation by +pi/2 in the xy-plane).
constexpr Vec perp(const Vec& v) { return {-v.y, v.x, 0.0}; }

inline std::ostream& operator<<(std::ostream& os, const Vec& v) {
    return os << "(" << v.x << ", " << v.y << ", " << v.z << ")";
}

// Column-major 3x3 rotation; col(0) is the reference axis image.
struct Mat3 {
    std::array<Vec, 3> col{};

    Vec operator*(const Vec& v) const {
        return col[0] * v.x + col[1] * v.y + col[2] * v.z;
    }
    // Transpose application; inverse for orthonormal columns.
    Vec apply_transpose(const Vec& v) const {
        return {col[0].dot(v), col[1].dot(v), col[2].dot(v)};
    }
};

}  // namespace billiards
