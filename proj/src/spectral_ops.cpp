#include "emhd/spectral_ops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace emhd {

SpectralField differentiate(const SpectralField& f, int axis) {
    if (axis < 1 || axis > 3) throw std::invalid_argument("differentiate: axis must be 1..3");
    SpectralField out(f.n());
    const int n = f.n();
    for (int c = 0; c < 3; ++c)
        for (int kx = -n; kx <= n; ++kx)
            for (int ky = -n; ky <= n; ++ky)
                for (int kz = -n; kz <= n; ++kz) {
                    int ka = axis == 1 ? kx : (axis == 2 ? ky : kz);
                    complexd m(0.0, two_pi * ka);
                    out.at(c, kx, ky, kz) = m * f.at(c, kx, ky, kz);
                }
    return out;
}

SpectralField curl(const SpectralField& f) {
    SpectralField out(f.n());
    f.for_each_mode([&](const Mode& k) {
        CVec3 v = f.vec(k);
        CVec3 ik = {complexd(0.0, two_pi * k.x), complexd(0.0, two_pi * k.y),
                    complexd(0.0, two_pi * k.z)};
        out.set_vec(k, cross(ik, v));
    });
    return out;
}

SpectralField leray_project(const SpectralField& f) {
    SpectralField out(f.n());
    f.for_each_mode([&](const Mode& k) {
        CVec3 v = f.vec(k);
        long k2 = norm2(k);
        if (k2 != 0) {
            complexd kv = static_cast<double>(k.x) * v[0] + static_cast<double>(k.y) * v[1] +
                          static_cast<double>(k.z) * v[2];
            complexd s = kv / static_cast<double>(k2);
            v[0] -= s * static_cast<double>(k.x);
            v[1] -= s * static_cast<double>(k.y);
            v[2] -= s * static_cast<double>(k.z);
        }
        out.set_vec(k, v);
    });
    return out;
}

SpectralField truncate(const SpectralField& f, int n) {
    if (n < 0) throw std::invalid_argument("truncate: n must be >= 0");
    const int m = std::min(f.n(), n);
    SpectralField out(m);
    const long nn = static_cast<long>(n) * n;
    for (int c = 0; c < 3; ++c)
        for (int kx = -m; kx <= m; ++kx)
            for (int ky = -m; ky <= m; ++ky)
                for (int kz = -m; kz <= m; ++kz)
                    if (norm2(Mode{kx, ky, kz}) <= nn)
                        out.at(c, kx, ky, kz) = f.at(c, kx, ky, kz);
    return out;
}

SpectralField embed(const SpectralField& f, int n) {
    if (n < f.n()) throw std::invalid_argument("embed: target radius smaller than source");
    SpectralField out(n);
    const int m = f.n();
    for (int c = 0; c < 3; ++c)
        for (int kx = -m; kx <= m; ++kx)
            for (int ky = -m; ky <= m; ++ky)
                for (int kz = -m; kz <= m; ++kz) out.at(c, kx, ky, kz) = f.at(c, kx, ky, kz);
    return out;
}

SpectralField lambda_power(const SpectralField& f, double t) {
    SpectralField out(f.n());
    f.for_each_mode([&](const Mode& k) {
        long k2 = norm2(k);
        if (k2 == 0) return;  // zero mode -> 0
        double mult = std::pow(static_cast<double>(k2), 0.5 * t);
        out.set_vec(k, complexd(mult, 0.0) * f.vec(k));
    });
    return out;
}

SpectralField apply_fractional_laplacian(const SpectralField& f, double alpha) {
    if (!(alpha > 0.0))
        throw std::invalid_argument("apply_fractional_laplacian: alpha must be > 0");
    return lambda_power(f, alpha);
}

double l2_norm(const SpectralField& f) {
    double s = 0.0;
    const complexd* a = f.data();
    const std::size_t total = 3 * f.modes();
    for (std::size_t i = 0; i < total; ++i) s += std::norm(a[i]);
    return std::sqrt(s);
}

double inner_l2(const SpectralField& f, const SpectralField& g) {
    if (!f.same_shape(g)) throw std::invalid_argument("inner_l2: shape mismatch");
    double s = 0.0;
    const complexd* a = f.data();
    const complexd* b = g.data();
    const std::size_t total = 3 * f.modes();
    for (std::size_t i = 0; i < total; ++i)
        s += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    return s;
}

namespace {
// |k|^{2s} with the zero mode sent to the s = 0 limit convention: weight 1 at
// s = 0 (so H^0 doubles L^2 uniformly), 0 for s != 0.
inline double mode_weight_hom(long k2, double s) {
    if (k2 == 0) return s == 0.0 ? 1.0 : 0.0;
    return std::pow(static_cast<double>(k2), s);
}
}  // namespace

double sobolev_norm(const SpectralField& f, double s, bool homogeneous) {
    double acc = 0.0;
    const int n = f.n();
    for (int kx = -n; kx <= n; ++kx)
        for (int ky = -n; ky <= n; ++ky)
            for (int kz = -n; kz <= n; ++kz) {
                Mode k{kx, ky, kz};
                long k2 = norm2(k);
                double w = homogeneous ? (k2 == 0 ? 0.0 : mode_weight_hom(k2, s))
                                       : 1.0 + mode_weight_hom(k2, s);
                acc += w * abs2(f.vec(k));
            }
    return std::sqrt(acc);
}

double w1inf_norm(const SpectralField& f, int M) {
    GridField b = inverse_transform(f, M);
    double max_b2 = 0.0;
    const std::size_t pts = b.points();
    for (std::size_t i = 0; i < pts; ++i) {
        double m2 = b.data()[i] * b.data()[i] + b.data()[pts + i] * b.data()[pts + i] +
                    b.data()[2 * pts + i] * b.data()[2 * pts + i];
        max_b2 = std::max(max_b2, m2);
    }
    double max_g2 = 0.0;
    std::vector<double> acc(pts, 0.0);
    for (int axis = 1; axis <= 3; ++axis) {
        GridField d = inverse_transform(differentiate(f, axis), M);
        for (std::size_t i = 0; i < pts; ++i)
            acc[i] += d.data()[i] * d.data()[i] + d.data()[pts + i] * d.data()[pts + i] +
                      d.data()[2 * pts + i] * d.data()[2 * pts + i];
    }
    for (std::size_t i = 0; i < pts; ++i) max_g2 = std::max(max_g2, acc[i]);
    return std::sqrt(std::max(max_b2, max_g2));
}

double divergence_residual(const SpectralField& f) {
    double worst = 0.0;
    f.for_each_mode([&](const Mode& k) {
        CVec3 v = f.vec(k);
        complexd kv = static_cast<double>(k.x) * v[0] + static_cast<double>(k.y) * v[1] +
                      static_cast<double>(k.z) * v[2];
        worst = std::max(worst, std::abs(kv));
    });
    double scale = l2_norm(f);
    return worst / std::max(scale, 1e-300);
}

bool is_mean_free(const SpectralField& f, double tol) {
    return std::sqrt(abs2(f.vec(Mode{0, 0, 0}))) <= tol;
}

int product_pad_size(int n) {
    int M = 3 * n;
    if (M % 2 != 0) ++M;
    return std::max(M, 4);
}

SpectralField component_as_scalar(const SpectralField& f, int c) {
    SpectralField out(f.n());
    const std::size_t m = f.modes();
    std::copy(f.component(c), f.component(c) + m, out.component(0));
    return out;
}

namespace detail {

CVec3 coeff_cross(const CVec3& a, const Mode&, const CVec3& b, const Mode&) {
    return cross(a, b);
}
CVec3 coeff_dot(const CVec3& a, const Mode&, const CVec3& b, const Mode&) {
    return {dot(a, b), complexd{}, complexd{}};
}
CVec3 coeff_scale(const CVec3& a, const Mode&, const CVec3& b, const Mode&) {
    return {a[0] * b[0], a[1] * b[0], a[2] * b[0]};
}
CVec3 coeff_transport(const CVec3& a, const Mode&, const CVec3& b, const Mode& k2) {
    complexd adk = a[0] * complexd(0.0, two_pi * k2.x) + a[1] * complexd(0.0, two_pi * k2.y) +
                   a[2] * complexd(0.0, two_pi * k2.z);
    return adk * b;
}
CVec3 coeff_graddot(const CVec3& a, const Mode&, const CVec3& b, const Mode& k2) {
    complexd ab = dot(a, b);
    return {complexd(0.0, two_pi * k2.x) * ab, complexd(0.0, two_pi * k2.y) * ab,
            complexd(0.0, two_pi * k2.z) * ab};
}

void corner_alias_fix(SpectralField& out, const SpectralField& f, const SpectralField& g,
                      CoeffOp op, int M) {
    const int n = out.n();
    if (M != 3 * n || n == 0) return;  // padded grid already alias-free
    // computed(+-n e_i) picked up the true convolution mode at -+2n e_i; remove
    // it by direct summation over the (2n+1)^2 contributing pairs.
    for (int axis = 0; axis < 3; ++axis) {
        for (int sign = -1; sign <= 1; sign += 2) {
            int edge = sign * n;  // k1_axis = k2_axis = -edge sums to source -+2n
            CVec3 contrib{};
            for (int a = -n; a <= n; ++a) {
                for (int b = -n; b <= n; ++b) {
                    Mode k1, k2;
                    if (axis == 0) {
                        k1 = {-edge, a, b};
                        k2 = {-edge, -a, -b};
                    } else if (axis == 1) {
                        k1 = {a, -edge, b};
                        k2 = {-a, -edge, -b};
                    } else {
                        k1 = {a, b, -edge};
                        k2 = {-a, -b, -edge};
                    }
                    contrib = contrib + op(f.vec(k1), k1, g.vec(k2), k2);
                }
            }
            Mode target = axis == 0 ? Mode{edge, 0, 0}
                                    : (axis == 1 ? Mode{0, edge, 0} : Mode{0, 0, edge});
            out.set_vec(target, out.vec(target) - contrib);
        }
    }
}

}  // namespace detail

SpectralField dealiased_product(const SpectralField& f, const SpectralField& g, ProductOp op) {
    if (!f.same_shape(g)) throw std::invalid_argument("dealiased_product: truncation mismatch");
    const int n = f.n();
    const int M = product_pad_size(n);
    GridField fg = inverse_transform(f, M);
    GridField gg = inverse_transform(g, M);
    GridField prod(M);
    const std::size_t pts = prod.points();
    const double* fx = fg.component(0);
    const double* fy = fg.component(1);
    const double* fz = fg.component(2);
    const double* gx = gg.component(0);
    const double* gy = gg.component(1);
    const double* gz = gg.component(2);
    double* px = prod.component(0);
    double* py = prod.component(1);
    double* pz = prod.component(2);
    switch (op) {
        case ProductOp::cross:
            for (std::size_t i = 0; i < pts; ++i) {
                px[i] = fy[i] * gz[i] - fz[i] * gy[i];
                py[i] = fz[i] * gx[i] - fx[i] * gz[i];
                pz[i] = fx[i] * gy[i] - fy[i] * gx[i];
            }
            break;
        case ProductOp::dot:
            for (std::size_t i = 0; i < pts; ++i)
                px[i] = fx[i] * gx[i] + fy[i] * gy[i] + fz[i] * gz[i];
            break;
        case ProductOp::scale:
            for (std::size_t i = 0; i < pts; ++i) {
                px[i] = fx[i] * gx[i];
                py[i] = fy[i] * gx[i];
                pz[i] = fz[i] * gx[i];
            }
            break;
    }
    SpectralField out = truncate(forward_transform(prod, n), n);
    detail::CoeffOp cop = op == ProductOp::cross
                              ? detail::coeff_cross
                              : (op == ProductOp::dot ? detail::coeff_dot : detail::coeff_scale);
    detail::corner_alias_fix(out, f, g, cop, M);
    return out;
}

}  // namespace emhd
