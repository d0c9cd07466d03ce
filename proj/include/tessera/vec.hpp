#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace tessera {

/// Fixed-dimension Euclidean vector. Used for points, directions and normals.
template <int D>
struct Vec {
    static_assert(D == 2 || D == 3, "only planar and spatial geometry is supported");
    std::array<double, D> c{};

    constexpr double& operator[](std::size_t i) { return c[i]; }
    constexpr double operator[](std::size_t i) const { return c[i]; }

    constexpr Vec& operator+=(const Vec& o) {
        for (int i = 0; i < D; ++i) c[i] += o.c[i];
        return *this;
    }
    constexpr Vec& operator-=(const Vec& o) {
        for (int i = 0; i < D; ++i) c[i] -= o.c[i];
        return *this;
    }
    constexpr Vec& operator*=(double s) {
        for (int i = 0; i < D; ++i) c[i] *= s;
        return *this;
    }
    friend constexpr Vec operator+(Vec a, const Vec& b) { return a += b; }
    friend constexpr Vec operator-(Vec a, const Vec& b) { return a -= b; }
    friend constexpr Vec operator*(Vec a, double s) { return a *= s; }
    friend constexpr Vec operator*(double s, Vec a) { return a *= s; }
    friend constexpr Vec operator/(Vec a, double s) { return a *= (1.0 / s); }
    friend constexpr Vec operator-(Vec a) { return a *= -1.0; }
    friend constexpr bool operator==(const Vec&, const Vec&) = default;
};

using Vec2 = Vec<2>;
using Vec3 = Vec<3>;

template <int D>
constexpr double dot(const Vec<D>& a, const Vec<D>& b) {
    double s = 0.0;
    for (int i = 0; i < D; ++i) s += a[i] * b[i];
    return s;
}

template <int D>
inline double norm(const Vec<D>& a) { return std::sqrt(dot(a, a)); }

template <int D>
constexpr double norm2(const Vec<D>& a) { return dot(a, a); }

template <int D>
inline double distance(const Vec<D>& a, const Vec<D>& b) { return norm(a - b); }

template <int D>
inline Vec<D> normalized(const Vec<D>& a) { return a / norm(a); }

template <int D>
inline bool all_finite(const Vec<D>& a) {
    for (int i = 0; i < D; ++i)
        if (!std::isfinite(a[i])) return false;
    return true;
}

constexpr double cross(const Vec2& a, const Vec2& b) { return a[0] * b[1] - a[1] * b[0]; }

constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
    return {{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]}};
}

/// Counterclockwise perpendicular.
constexpr Vec2 perp(const Vec2& a) { return {{-a[1], a[0]}}; }

inline Vec2 unit_from_angle(double angle) { return {{std::cos(angle), std::sin(angle)}}; }

}  // namespace tessera
