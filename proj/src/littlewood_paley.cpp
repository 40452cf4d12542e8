#include "emhd/littlewood_paley.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "emhd/rng.hpp"

namespace emhd {

namespace {
// exp(-1/t) bump ramp: psi == 1 for t <= 0, 0 for t >= 1, strictly monotone
// between, psi(1/2) = 1/2.
double psi(double t) {
    if (t <= 0.0) return 1.0;
    if (t >= 1.0) return 0.0;
    double fa = std::exp(-1.0 / (1.0 - t));
    double fb = std::exp(-1.0 / t);
    return fa / (fa + fb);
}
}  // namespace

DyadicProfile DyadicProfile::perturbed(double edge) {
    DyadicProfile p;
    p.edge_ = edge;
    return p;
}

double DyadicProfile::chi(double xi) const { return psi((std::abs(xi) - edge_) * 4.0); }

double DyadicProfile::phi(double xi) const {
    // The telescoping family is anchored to the standard edge; a perturbed
    // chi (negative control) then genuinely breaks the partition of unity on
    // (0.75, edge + 0.25) instead of shifting the whole family consistently.
    auto chi_std = [](double x) { return psi((std::abs(x) - 0.75) * 4.0); };
    return chi_std(xi / 2.0) - chi_std(xi);
}

double DyadicProfile::phi_q(int q, double xi) const {
    if (q < -1) return 0.0;
    if (q == -1) return chi(xi);
    return phi(std::ldexp(xi, -q));
}

int DyadicProfile::qmax(int n) {
    if (n <= 1) return 1;
    return static_cast<int>(std::ceil(std::log2(static_cast<double>(n)))) + 1;
}

SpectralField dyadic_block(const SpectralField& f, int q, const DyadicProfile& profile) {
    if (q < -1) throw std::invalid_argument("dyadic_block: q must be >= -1");
    SpectralField out(f.n());
    f.for_each_mode([&](const Mode& k) {
        double w = profile.phi_q(q, norm(k));
        if (w != 0.0) out.set_vec(k, complexd(w, 0.0) * f.vec(k));
    });
    return out;
}

SpectralField low_pass(const SpectralField& f, int q, const DyadicProfile& profile) {
    if (q < -1) throw std::invalid_argument("low_pass: q must be >= -1");
    SpectralField out(f.n());
    double inv = std::ldexp(1.0, -q - 1);
    f.for_each_mode([&](const Mode& k) {
        double w = profile.chi(norm(k) * inv);
        if (w != 0.0) out.set_vec(k, complexd(w, 0.0) * f.vec(k));
    });
    return out;
}

double lp_sobolev_norm(const SpectralField& f, double s, const DyadicProfile& profile) {
    int Q = DyadicProfile::qmax(f.n());
    double acc = 0.0;
    for (int q = -1; q <= Q; ++q) {
        SpectralField blk = dyadic_block(f, q, profile);
        double l2 = l2_norm(blk);
        acc += std::pow(DyadicProfile::lambda(q), 2.0 * s) * l2 * l2;
    }
    return std::sqrt(acc);
}

BonyParts bony_decompose(const SpectralField& u, const SpectralField& v,
                         const DyadicProfile& profile) {
    if (!u.same_shape(v)) throw std::invalid_argument("bony_decompose: truncation mismatch");
    const int n = u.n();
    const int Q = DyadicProfile::qmax(n);

    std::vector<SpectralField> du, dv;  // Delta_l for l = -1..Q, index l+1
    du.reserve(Q + 2);
    dv.reserve(Q + 2);
    for (int l = -1; l <= Q; ++l) {
        du.push_back(dyadic_block(u, l, profile));
        dv.push_back(dyadic_block(v, l, profile));
    }
    auto block = [&](const std::vector<SpectralField>& d, int l) -> const SpectralField& {
        static const SpectralField* zero = nullptr;
        (void)zero;
        return d[l + 1];
    };
    auto sum_low = [&](const std::vector<SpectralField>& d, int q) {
        // S_q = sum_{j=-1}^{q} Delta_j; empty sum for q < -1.
        SpectralField acc(n);
        for (int j = -1; j <= q && j <= Q; ++j) acc += block(d, j);
        return acc;
    };

    BonyParts parts{SpectralField(n), SpectralField(n), SpectralField(n)};
    for (int l = -1; l <= Q; ++l) {
        SpectralField slu = sum_low(du, l - 2);
        SpectralField slv = sum_low(dv, l - 2);
        parts.low_high += dealiased_product(slu, block(dv, l), ProductOp::dot);
        parts.high_low += dealiased_product(block(du, l), slv, ProductOp::dot);
        SpectralField tilde(n);
        for (int j = l - 1; j <= l + 1; ++j)
            if (j >= -1 && j <= Q) tilde += block(dv, j);
        parts.resonant += dealiased_product(block(du, l), tilde, ProductOp::dot);
    }
    return parts;
}

namespace {
// L^p norm of the pointwise magnitudes by grid quadrature; p = infinity -> max.
double lp_quadrature(const std::vector<double>& mag2, double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (double x : mag2) m = std::max(m, x);
        return std::sqrt(m);
    }
    double acc = 0.0;
    for (double x : mag2) acc += std::pow(x, 0.5 * p);
    return std::pow(acc / static_cast<double>(mag2.size()), 1.0 / p);
}

// Pointwise squared magnitude of the full deriv_order-th gradient tensor.
std::vector<double> gradient_mag2(const SpectralField& f, int order, int M) {
    std::vector<SpectralField> tensor{f};
    for (int d = 0; d < order; ++d) {
        std::vector<SpectralField> next;
        next.reserve(tensor.size() * 3);
        for (const auto& g : tensor)
            for (int axis = 1; axis <= 3; ++axis) next.push_back(differentiate(g, axis));
        tensor = std::move(next);
    }
    std::size_t pts = static_cast<std::size_t>(M) * M * M;
    std::vector<double> mag2(pts, 0.0);
    for (const auto& g : tensor) {
        GridField gg = inverse_transform(g, M);
        for (std::size_t i = 0; i < pts; ++i) {
            double a = gg.data()[i], b = gg.data()[pts + i], c = gg.data()[2 * pts + i];
            mag2[i] += a * a + b * b + c * c;
        }
    }
    return mag2;
}
}  // namespace

BernsteinSummary bernstein_ratio(int q, int deriv_order, double p_low, double p_high, int trials,
                                 std::uint64_t rng_seed, const DyadicProfile& profile) {
    if (q < 0 || q > 5) throw std::invalid_argument("bernstein_ratio: q out of supported range");
    if (deriv_order < 0 || deriv_order > 2)
        throw std::invalid_argument("bernstein_ratio: deriv_order must be 0..2");
    if (!(p_low >= 1.0) || !(p_high >= p_low))
        throw std::invalid_argument("bernstein_ratio: need 1 <= p_low <= p_high");
    if (trials < 1) throw std::invalid_argument("bernstein_ratio: trials must be >= 1");

    const int n = 1 << (q + 1);
    // Block support must be nonempty at this truncation.
    {
        bool any = false;
        for (int kx = -n; kx <= n && !any; ++kx)
            for (int ky = -n; ky <= n && !any; ++ky)
                for (int kz = -n; kz <= n && !any; ++kz)
                    if (profile.phi_q(q, norm(Mode{kx, ky, kz})) > 0.0) any = true;
        if (!any) throw std::invalid_argument("bernstein_ratio: empty block support");
    }
    const int M = 4 * n;
    const double lam = DyadicProfile::lambda(q);
    const double inv_s = std::isinf(p_low) ? 0.0 : 1.0 / p_low;
    const double inv_r = std::isinf(p_high) ? 0.0 : 1.0 / p_high;
    const double shift = std::pow(lam, deriv_order + 3.0 * (inv_s - inv_r));

    RngStream rng(rng_seed, 0, RngDomain::test_fields);
    BernsteinSummary out{std::numeric_limits<double>::infinity(), 0.0,
                         std::numeric_limits<double>::infinity(), 0.0};
    for (int t = 0; t < trials; ++t) {
        SpectralField u(n);
        std::uint32_t idx = 0;
        u.for_each_mode([&](const Mode& k) {
            ++idx;
            if (!is_canonical(k)) return;
            double w = profile.phi_q(q, norm(k));
            if (w == 0.0) return;
            for (int c = 0; c < 3; ++c) {
                std::uint32_t a = static_cast<std::uint32_t>(t) * 8 + static_cast<std::uint32_t>(c);
                complexd z(rng.normal(a, 2 * idx), rng.normal(a, 2 * idx + 1));
                u.at(c, k.x, k.y, k.z) = w * z;
            }
        });
        u.symmetrize();
        double base_r = lp_quadrature(gradient_mag2(u, 0, M), p_high);
        double base_s = lp_quadrature(gradient_mag2(u, 0, M), p_low);
        double grad_r = lp_quadrature(gradient_mag2(u, deriv_order, M), p_high);
        if (base_r <= 0.0 || grad_r <= 0.0) continue;
        double ra = grad_r / (std::pow(lam, deriv_order) * base_r);
        double rb = shift * base_s / grad_r;
        out.a_min = std::min(out.a_min, ra);
        out.a_max = std::max(out.a_max, ra);
        out.b_min = std::min(out.b_min, rb);
        out.b_max = std::max(out.b_max, rb);
    }
    return out;
}

}  // namespace emhd
