#pragma once

#include <cmath>
#include <complex>

namespace layerr {

using cplx = std::complex<double>;

template <class T>
struct Vec3T {
    T x{}, y{}, z{};

    constexpr Vec3T operator+(const Vec3T& o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3T operator-(const Vec3T& o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3T operator*(T s) const { return {x * s, y * s, z * s}; }
    constexpr Vec3T& operator+=(const Vec3T& o)
    {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
    constexpr bool operator==(const Vec3T&) const = default;
};

using Vec3 = Vec3T<double>;
using CVec3 = Vec3T<cplx>;

// Bilinear dot product (no conjugation): the analytic continuation of x.y.
template <class T>
constexpr T dot(const Vec3T<T>& a, const Vec3T<T>& b)
{
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

template <class T>
constexpr Vec3T<T> cross(const Vec3T<T>& a, const Vec3T<T>& b)
{
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

inline CVec3 to_complex(const Vec3& v) { return {v.x, v.y, v.z}; }
inline Vec3 real_part(const CVec3& v) { return {v.x.real(), v.y.real(), v.z.real()}; }
inline CVec3 conj(const CVec3& v) { return {std::conj(v.x), std::conj(v.y), std::conj(v.z)}; }

// Squared distance sum_i (g_i - x_i)^2, kept as a complex sum for complex g.
inline cplx squared_distance(const CVec3& g, const Vec3& x)
{
    const CVec3 r = g - to_complex(x);
    return dot(r, r);
}

} // namespace layerr
