#pragma once
// Shared scalar/vector types for the spectral solver. All fields live on the
// unit torus T^3 with Fourier basis e^{2*pi*i k.x}, k integer.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>

namespace emhd {

using complexd = std::complex<double>;

inline constexpr double two_pi = 6.283185307179586476925286766559;

// Integer wavevector.
struct Mode {
    int x = 0, y = 0, z = 0;

    friend bool operator==(const Mode&, const Mode&) = default;
    int operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

inline long norm2(const Mode& k) {
    return static_cast<long>(k.x) * k.x + static_cast<long>(k.y) * k.y +
           static_cast<long>(k.z) * k.z;
}
inline double norm(const Mode& k) { return std::sqrt(static_cast<double>(norm2(k))); }
inline Mode operator-(const Mode& k) { return {-k.x, -k.y, -k.z}; }
inline Mode operator+(const Mode& a, const Mode& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }

// Lexicographic order on (x, y, z); used for canonical mode enumeration.
inline bool lex_less(const Mode& a, const Mode& b) {
    if (a.x != b.x) return a.x < b.x;
    if (a.y != b.y) return a.y < b.y;
    return a.z < b.z;
}

// Canonical representative of a Hermitian pair {k, -k}: the zero mode, or the
// member whose first nonzero component is positive.
inline bool is_canonical(const Mode& k) {
    if (k.x != 0) return k.x > 0;
    if (k.y != 0) return k.y > 0;
    return k.z >= 0;
}

using Vec3 = std::array<double, 3>;
using CVec3 = std::array<complexd, 3>;

inline CVec3 operator+(const CVec3& a, const CVec3& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
inline CVec3 operator-(const CVec3& a, const CVec3& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
inline CVec3 operator*(const complexd& s, const CVec3& a) {
    return {s * a[0], s * a[1], s * a[2]};
}
inline CVec3 cross(const CVec3& a, const CVec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline complexd dot(const CVec3& a, const CVec3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline double abs2(const CVec3& a) {
    return std::norm(a[0]) + std::norm(a[1]) + std::norm(a[2]);
}
inline CVec3 conj(const CVec3& a) {
    return {std::conj(a[0]), std::conj(a[1]), std::conj(a[2])};
}

}  // namespace emhd
