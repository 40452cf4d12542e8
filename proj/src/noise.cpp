#include "emhd/noise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace emhd {

double NoiseBasis::regularity_budget(double s1) const {
    double acc = 0.0;
    for (const auto& f : fields) {
        double m2 = static_cast<double>(norm2(f.m));
        acc += f.theta * f.theta * (1.0 + std::pow(m2, s1)) * 0.5;
    }
    return acc;
}

// Orthonormal frame transverse to m: a is the axis of least |m| component
// (scanning z, y, x), eps1 = normalize(a x m_hat), eps2 = m_hat x eps1.
void polarization_frame(const Mode& m, Vec3& eps1, Vec3& eps2) {
    double mm = norm(m);
    Vec3 mh = {m.x / mm, m.y / mm, m.z / mm};
    int best = 2;
    double best_abs = std::abs(mh[2]);
    for (int j = 1; j >= 0; --j)
        if (std::abs(mh[j]) < best_abs) {
            best = j;
            best_abs = std::abs(mh[j]);
        }
    Vec3 a = {0.0, 0.0, 0.0};
    a[best] = 1.0;
    Vec3 e1 = {a[1] * mh[2] - a[2] * mh[1], a[2] * mh[0] - a[0] * mh[2],
               a[0] * mh[1] - a[1] * mh[0]};
    double e1n = std::sqrt(e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]);
    eps1 = {e1[0] / e1n, e1[1] / e1n, e1[2] / e1n};
    eps2 = {mh[1] * eps1[2] - mh[2] * eps1[1], mh[2] * eps1[0] - mh[0] * eps1[2],
            mh[0] * eps1[1] - mh[1] * eps1[0]};
}

SpectralField noise_field_spectral(const NoiseField& f, int n_out) {
    SpectralField out(n_out);
    if (norm2(f.m) > static_cast<long>(n_out) * n_out) return out;  // not representable
    CVec3 plus;
    if (f.is_sine) {
        // sin(2 pi m.x) = (e^{i..} - e^{-i..}) / (2i): coeff(m) = -i/2 eps.
        for (int c = 0; c < 3; ++c) plus[c] = complexd(0.0, -0.5 * f.theta * f.pol[c]);
    } else {
        for (int c = 0; c < 3; ++c) plus[c] = complexd(0.5 * f.theta * f.pol[c], 0.0);
    }
    out.set_vec(f.m, plus);
    out.set_vec(-f.m, conj(plus));
    return out;
}

NoiseBasis build_noise_basis(int K, double gamma, double s, int n, std::uint64_t seed) {
    if (K < 1) throw std::invalid_argument("build_noise_basis: K must be >= 1");
    if (!(gamma > s + 1.0 + 1.5))
        throw std::invalid_argument(
            "build_noise_basis: gamma must exceed s + 5/2 for a summable H^{s+1} budget");
    std::vector<Mode> canon;
    for (int kx = -n; kx <= n; ++kx)
        for (int ky = -n; ky <= n; ++ky)
            for (int kz = -n; kz <= n; ++kz) {
                Mode m{kx, ky, kz};
                long m2 = norm2(m);
                if (m2 == 0 || m2 > static_cast<long>(n) * n) continue;
                if (is_canonical(m)) canon.push_back(m);
            }
    std::sort(canon.begin(), canon.end(), [](const Mode& a, const Mode& b) {
        long na = norm2(a), nb = norm2(b);
        if (na != nb) return na < nb;
        return lex_less(b, a);  // descending lexicographic within a shell
    });
    if (K > 2 * static_cast<int>(canon.size()))
        throw std::invalid_argument("build_noise_basis: K exceeds available modes at truncation");

    NoiseBasis basis;
    basis.gamma = gamma;
    basis.s = s;
    basis.n = n;
    basis.seed = seed;
    for (int j = 0; j < K; ++j) {
        const Mode& m = canon[j / 2];
        Vec3 e1, e2;
        polarization_frame(m, e1, e2);
        NoiseField f;
        f.m = m;
        f.is_sine = (j % 2 == 1);
        f.pol = f.is_sine ? e2 : e1;
        f.theta = std::pow(norm(m), -gamma);
        basis.fields.push_back(f);
        basis.coeff_fields.push_back(noise_field_spectral(f, n));
    }
    return basis;
}

SpectralField transport_apply(const SpectralField& c, const SpectralField& B) {
    if (!c.same_shape(B)) throw std::invalid_argument("transport_apply: truncation mismatch");
    const int n = B.n();
    const int M = product_pad_size(n);
    GridField cg = inverse_transform(c, M);
    GridField d1 = inverse_transform(differentiate(B, 1), M);
    GridField d2 = inverse_transform(differentiate(B, 2), M);
    GridField d3 = inverse_transform(differentiate(B, 3), M);
    GridField prod(M);
    const std::size_t pts = prod.points();
    const double* cx = cg.component(0);
    const double* cy = cg.component(1);
    const double* cz = cg.component(2);
    for (int i = 0; i < 3; ++i) {
        const double* a1 = d1.component(i);
        const double* a2 = d2.component(i);
        const double* a3 = d3.component(i);
        double* out = prod.component(i);
        for (std::size_t p = 0; p < pts; ++p)
            out[p] = cx[p] * a1[p] + cy[p] * a2[p] + cz[p] * a3[p];
    }
    SpectralField out = truncate(forward_transform(prod, n), n);
    detail::corner_alias_fix(out, c, B, detail::coeff_transport, M);
    return out;
}

SpectralField ito_correction(const NoiseBasis& basis, const SpectralField& B,
                             bool project_intermediate) {
    SpectralField acc(B.n());
    for (int k = 0; k < basis.K(); ++k) {
        SpectralField c = basis.n == B.n() ? basis.coeff_fields[k]
                                           : noise_field_spectral(basis.fields[k], B.n());
        SpectralField u = transport_apply(c, B);
        if (project_intermediate) u = leray_project(u);
        acc += transport_apply(c, u);
    }
    acc *= 0.5;
    return acc;
}

WienerIncrement sample_increments(double dt, int K, const RngStream& stream, std::uint32_t step) {
    if (!(dt > 0.0)) throw std::invalid_argument("sample_increments: dt must be > 0");
    WienerIncrement w;
    w.dt = dt;
    w.dW.resize(K);
    double sd = std::sqrt(dt);
    for (int k = 0; k < K; ++k) w.dW[k] = sd * stream.normal(step, static_cast<std::uint32_t>(k));
    return w;
}

}  // namespace emhd
