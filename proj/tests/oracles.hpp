#pragma once
// Brute-force reference implementations for the spectral fast paths. All are
// direct sums over the mode lattice (O(modes^2) or worse) with no FFT, no
// padding, and no shared code with src/: slow, obviously correct, and usable
// only at small truncation.

#include <complex>
#include <vector>

#include "emhd/field.hpp"

namespace oracles {

using emhd::complexd;
using emhd::CVec3;
using emhd::Mode;
using emhd::SpectralField;

constexpr double two_pi_o = 6.283185307179586476925286766559;

// Direct evaluation of one component at x = (ix, iy, iz)/M.
inline double eval_component(const SpectralField& f, int c, int ix, int iy, int iz, int M) {
    std::complex<double> acc = 0.0;
    const int n = f.n();
    for (int kx = -n; kx <= n; ++kx)
        for (int ky = -n; ky <= n; ++ky)
            for (int kz = -n; kz <= n; ++kz) {
                double phase = two_pi_o *
                               (static_cast<double>(kx) * ix + static_cast<double>(ky) * iy +
                                static_cast<double>(kz) * iz) /
                               M;
                acc += f.at(c, kx, ky, kz) * std::complex<double>(std::cos(phase), std::sin(phase));
            }
    return acc.real();
}

// Direct forward DFT of one grid component: (1/M^3) sum_x g(x) e^{-2 pi i k.x}.
inline complexd dft_coefficient(const emhd::GridField& g, int c, const Mode& k) {
    std::complex<double> acc = 0.0;
    const int M = g.M();
    for (int ix = 0; ix < M; ++ix)
        for (int iy = 0; iy < M; ++iy)
            for (int iz = 0; iz < M; ++iz) {
                double phase = -two_pi_o *
                               (static_cast<double>(k.x) * ix + static_cast<double>(k.y) * iy +
                                static_cast<double>(k.z) * iz) /
                               M;
                acc += g.at(c, ix, iy, iz) *
                       std::complex<double>(std::cos(phase), std::sin(phase));
            }
    return acc / static_cast<double>(M * M * M);
}

inline CVec3 cross_c(const CVec3& a, const CVec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

// Exact convolution product h(k) = sum_{k1+k2=k} op(f(k1), g(k2)), |k| <= n_out.
enum class Op { cross, dot, scale };

inline SpectralField convolve(const SpectralField& f, const SpectralField& g, Op op, int n_out) {
    SpectralField h(n_out);
    const int nf = f.n(), ng = g.n();
    for (int ax = -nf; ax <= nf; ++ax)
        for (int ay = -nf; ay <= nf; ++ay)
            for (int az = -nf; az <= nf; ++az) {
                CVec3 fa = f.vec({ax, ay, az});
                for (int bx = -ng; bx <= ng; ++bx)
                    for (int by = -ng; by <= ng; ++by)
                        for (int bz = -ng; bz <= ng; ++bz) {
                            int kx = ax + bx, ky = ay + by, kz = az + bz;
                            if (kx < -n_out || kx > n_out || ky < -n_out || ky > n_out ||
                                kz < -n_out || kz > n_out)
                                continue;
                            CVec3 gb = g.vec({bx, by, bz});
                            if (op == Op::cross) {
                                CVec3 v = cross_c(fa, gb);
                                h.at(0, kx, ky, kz) += v[0];
                                h.at(1, kx, ky, kz) += v[1];
                                h.at(2, kx, ky, kz) += v[2];
                            } else if (op == Op::dot) {
                                h.at(0, kx, ky, kz) +=
                                    fa[0] * gb[0] + fa[1] * gb[1] + fa[2] * gb[2];
                            } else {
                                h.at(0, kx, ky, kz) += fa[0] * gb[0];
                                h.at(1, kx, ky, kz) += fa[1] * gb[0];
                                h.at(2, kx, ky, kz) += fa[2] * gb[0];
                            }
                        }
            }
    return h;
}

// (c.grad)B by direct convolution: sum_{k1+k2=k} (c(k1) . 2 pi i k2) B(k2).
inline SpectralField transport_convolve(const SpectralField& c, const SpectralField& B,
                                        int n_out) {
    SpectralField h(n_out);
    const int nc = c.n(), nb = B.n();
    for (int ax = -nc; ax <= nc; ++ax)
        for (int ay = -nc; ay <= nc; ++ay)
            for (int az = -nc; az <= nc; ++az) {
                CVec3 ca = c.vec({ax, ay, az});
                for (int bx = -nb; bx <= nb; ++bx)
                    for (int by = -nb; by <= nb; ++by)
                        for (int bz = -nb; bz <= nb; ++bz) {
                            int kx = ax + bx, ky = ay + by, kz = az + bz;
                            if (kx < -n_out || kx > n_out || ky < -n_out || ky > n_out ||
                                kz < -n_out || kz > n_out)
                                continue;
                            complexd fac = complexd(0.0, two_pi_o) *
                                           (ca[0] * static_cast<double>(bx) +
                                            ca[1] * static_cast<double>(by) +
                                            ca[2] * static_cast<double>(bz));
                            CVec3 bb = B.vec({bx, by, bz});
                            h.at(0, kx, ky, kz) += fac * bb[0];
                            h.at(1, kx, ky, kz) += fac * bb[1];
                            h.at(2, kx, ky, kz) += fac * bb[2];
                        }
            }
    return h;
}

// [Lambda^s, c.grad] u by direct convolution: the multiplier difference
// |k|^s - |m|^s rides on each transfer m -> k = m + (c-mode).
inline SpectralField commutator_convolve(const SpectralField& c, const SpectralField& u, double s,
                                         int n_out) {
    SpectralField h(n_out);
    const int nc = c.n(), nu = u.n();
    for (int ax = -nc; ax <= nc; ++ax)
        for (int ay = -nc; ay <= nc; ++ay)
            for (int az = -nc; az <= nc; ++az) {
                CVec3 ca = c.vec({ax, ay, az});
                for (int bx = -nu; bx <= nu; ++bx)
                    for (int by = -nu; by <= nu; ++by)
                        for (int bz = -nu; bz <= nu; ++bz) {
                            int kx = ax + bx, ky = ay + by, kz = az + bz;
                            if (kx < -n_out || kx > n_out || ky < -n_out || ky > n_out ||
                                kz < -n_out || kz > n_out)
                                continue;
                            double m2 = static_cast<double>(bx) * bx +
                                        static_cast<double>(by) * by +
                                        static_cast<double>(bz) * bz;
                            double k2 = static_cast<double>(kx) * kx +
                                        static_cast<double>(ky) * ky +
                                        static_cast<double>(kz) * kz;
                            double mult = std::pow(k2, 0.5 * s) - std::pow(m2, 0.5 * s);
                            complexd fac = complexd(0.0, two_pi_o) *
                                           (ca[0] * static_cast<double>(bx) +
                                            ca[1] * static_cast<double>(by) +
                                            ca[2] * static_cast<double>(bz)) *
                                           mult;
                            CVec3 bb = u.vec({bx, by, bz});
                            h.at(0, kx, ky, kz) += fac * bb[0];
                            h.at(1, kx, ky, kz) += fac * bb[1];
                            h.at(2, kx, ky, kz) += fac * bb[2];
                        }
            }
    return h;
}

// Multiplier |k|^s applied in place on the full cube (mean dropped).
inline SpectralField lambda_brute(const SpectralField& f, double s) {
    SpectralField h = f;
    const int n = f.n();
    for (int kx = -n; kx <= n; ++kx)
        for (int ky = -n; ky <= n; ++ky)
            for (int kz = -n; kz <= n; ++kz) {
                double k2 = static_cast<double>(kx) * kx + static_cast<double>(ky) * ky +
                            static_cast<double>(kz) * kz;
                double mult = k2 == 0.0 ? 0.0 : std::pow(k2, 0.5 * s);
                for (int c = 0; c < 3; ++c) h.at(c, kx, ky, kz) *= mult;
            }
    return h;
}

inline double max_coeff_diff(const SpectralField& a, const SpectralField& b) {
    double worst = 0.0;
    const int n = a.n();
    for (int c = 0; c < 3; ++c)
        for (int kx = -n; kx <= n; ++kx)
            for (int ky = -n; ky <= n; ++ky)
                for (int kz = -n; kz <= n; ++kz)
                    worst = std::max(worst, std::abs(a.at(c, kx, ky, kz) - b.at(c, kx, ky, kz)));
    return worst;
}

}  // namespace oracles
